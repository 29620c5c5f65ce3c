#include <gtest/gtest.h>

#include <deque>
#include <random>

#include "graph_oracle.hpp"
#include "support.hpp"
#include "vetbench/defense.hpp"
#include "vetbench/error.hpp"
#include "vetbench/iotguard.hpp"
#include "vetbench/testbed.hpp"

using namespace vetbench;
using namespace vetbench::iotguard;
using vbtest::build;
using vbtest::random_graph;

namespace {

NodeKey ev(const std::string& d, const char* v) { return {d, Value(v), NodeKind::Event}; }
NodeKey act(const std::string& d, const char* v) { return {d, Value(v), NodeKind::Action}; }

PdpRequest req(const std::string& app, const std::string& trig, const char* tv,
               std::vector<ContemplatedAction> actions) {
  PdpRequest r;
  r.app_id = app;
  r.trigger_device = trig;
  r.trigger_value = tv;
  r.actions = std::move(actions);
  return r;
}

Server make_server(ServerPolicyStore store) {
  std::map<std::string, DeviceTags> tags;
  for (auto d : {"M", "L", "H", "F"}) tags[d] = DeviceTags::physical();
  tags["Mode"] = DeviceTags::virtual_item();
  return Server(std::move(store), std::move(tags));
}

}  // namespace

TEST(IotguardProperty, ReachabilityMatchesBfsOracle) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto g = random_graph(rng);
    const auto m = build(g);
    std::vector<bool> src(g.nodes.size()), dst(g.nodes.size());
    std::set<NodeKey> sources, targets;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      src[i] = rng() % 3 == 0;
      dst[i] = rng() % 3 == 0;
      if (src[i]) sources.insert(g.nodes[i]);
      if (dst[i]) targets.insert(g.nodes[i]);
    }
    ASSERT_EQ(m.reachable(sources, targets), vbtest::bfs_reachable(g, src, dst)) << "trial " << trial;
  }
}

TEST(IotguardProperty, CycleDetectionMatchesKahn) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto g = random_graph(rng);
    ASSERT_EQ(build(g).has_cycle(), vbtest::kahn_cyclic(g)) << "trial " << trial;
  }
}

TEST(IotguardProperty, RollbackRestoresThePriorModel) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 500; ++trial) {
    auto g = random_graph(rng);
    auto m = build(g);
    const auto before = m;
    // Random additions touching old and new nodes.
    for (int k = 0, n = 1 + static_cast<int>(rng() % 5); k < n; ++k) {
      NodeKey fresh{"New" + std::to_string(rng() % 4), Value(static_cast<int>(rng() % 3)),
                    NodeKind::Event};
      m.add_node(fresh, DeviceTags::virtual_item());
      const auto& old = g.nodes[rng() % g.nodes.size()];
      if (rng() % 2) m.add_edge(old, fresh, "x");
      else m.add_edge(fresh, old, "x");
      m.add_edge(old, g.nodes[rng() % g.nodes.size()], "y");
    }
    m.rollback();
    ASSERT_TRUE(m.same_graph(before));
    ASSERT_TRUE(m.recent_nodes().empty());
    for (const auto& n : g.nodes) {
      ASSERT_EQ(m.successors(n), before.successors(n));
    }
  }
}

TEST(Server, IngestBuildsLabelledAndMergeEdges) {
  auto s = make_server({});
  s.handle(req("light-on", "M", "ON", {{"L", "On", "ON"}}));
  PdpRequest heat = req("heat-on", "L", "ON", {{"H", "On", "ON"}});
  heat.condition = parse_condition("M = ON");
  s.handle(heat);
  const auto& edges = s.model().edges();
  EXPECT_EQ(edges.at({ev("M", "ON"), act("L", "ON")}), "true");
  EXPECT_EQ(edges.at({act("L", "ON"), ev("L", "ON")}), "merge");
  EXPECT_EQ(edges.at({ev("L", "ON"), act("H", "ON")}), "M = ON");
  EXPECT_EQ(s.requests_handled(), 2u);
}

TEST(Server, DeniesImplicationPathsAndRollsBack) {
  ServerPolicyStore store;
  store.implications.emplace_back(
      "IMP1", Implication{{parse_atom("M = ON")}, {parse_atom("H = ON")}, ImplicationMode::Restrict});
  auto s = make_server(store);
  EXPECT_TRUE(s.handle(req("light-on", "M", "ON", {{"L", "On", "ON"}})).allowed());
  const auto committed = s.model();
  auto r = s.handle(req("heat-on", "L", "ON", {{"H", "On", "ON"}}));
  EXPECT_FALSE(r.allowed());
  EXPECT_EQ(r.violated, std::vector<std::string>{"IMP1"});
  EXPECT_TRUE(s.model().same_graph(committed));
  // An unrelated app is still admitted afterwards.
  EXPECT_TRUE(s.handle(req("fan", "F", "ON", {{"L", "Off", "OFF"}})).allowed());
}

TEST(Server, FlowAndCyclePolicies) {
  ServerPolicyStore store;
  store.flows = {"FLOW1"};
  store.generals = {"GEN1"};
  auto s = make_server(store);
  auto r = s.handle(req("away", "Mode", "OFF", {{"L", "Off", "OFF"}}));
  EXPECT_EQ(r.violated, std::vector<std::string>{"FLOW1"});
  EXPECT_TRUE(s.model().nodes().empty());

  EXPECT_TRUE(s.handle(req("a", "L", "ON", {{"F", "On", "ON"}})).allowed());
  r = s.handle(req("b", "F", "ON", {{"L", "On", "ON"}}));
  EXPECT_EQ(r.violated, std::vector<std::string>{"GEN1"});
  s.reset();
  EXPECT_TRUE(s.model().nodes().empty());
  EXPECT_EQ(s.requests_handled(), 0u);
}

TEST(Server, NodeMatchingIsTyped) {
  EXPECT_TRUE(node_matches({"T", Value(80), NodeKind::Event}, parse_atom("T > 70")));
  EXPECT_FALSE(node_matches({"T", Value(60), NodeKind::Event}, parse_atom("T > 70")));
  EXPECT_FALSE(node_matches({"U", Value(80), NodeKind::Event}, parse_atom("T > 70")));
  EXPECT_FALSE(node_matches({"T", Value("ON"), NodeKind::Event}, parse_atom("T > 70")));
}

TEST(Wire, RequestAndResponseRoundTrip) {
  PdpRequest r = req("cool-down", "Temp", "OFF", {{"AC", "On", "ON"}});
  r.trigger_value = Value(90);
  r.condition = parse_condition("W = OPEN AND NOT (AC = ON)");
  const auto back = decode_request(encode_request(r));
  EXPECT_EQ(back.app_id, r.app_id);
  EXPECT_EQ(back.trigger_value, Value(90));
  EXPECT_EQ(back.condition->to_string(), r.condition->to_string());
  EXPECT_EQ(back.actions, r.actions);
  EXPECT_EQ(back.state.size(), 0u);

  const auto deny = decode_response(encode_response(PdpResponse::deny({"A", "B"})));
  EXPECT_FALSE(deny.allowed());
  EXPECT_EQ(deny.violated, (std::vector<std::string>{"A", "B"}));
  EXPECT_THROW(decode_response("{\"decision\":\"maybe\"}"), Error);
  EXPECT_THROW(decode_request("{}"), Error);
}

TEST(Wire, ServerAnswersMalformedMessagesWithErrors) {
  auto s = make_server({});
  EXPECT_NE(s.handle_message("garbage").find("error"), std::string::npos);
  EXPECT_NE(s.handle_message("{\"type\":\"explode\"}").find("error"), std::string::npos);
  EXPECT_EQ(s.handle_message("{\"type\":\"reset\"}"), "{\"ok\":true}");
  EXPECT_THROW(decode_response(s.handle_message("garbage")), Error);
}

TEST(IotguardProperty, EventsWithoutAppsNeverReachTheServer) {
  TestbedConfig c;
  c.name = "gap";
  for (auto id : {"Smoke", "Leak", "Valve", "Home"}) c.devices.push_back(vbtest::binary(id));
  c.apps.push_back({"shutoff", "Leak = ON", "", {"Valve.Off"}});
  c.policies = {"PI1: guard allow-only-if action Valve.Off when Smoke = OFF"};
  auto pair = instantiate(c, DefenseKind::Iotguard);
  std::mt19937_64 rng(4);
  const char* devs[] = {"Smoke", "Leak", "Valve", "Home"};
  for (int trial = 0; trial < 300; ++trial) {
    pair.reset();
    std::size_t app_runs = 0;
    for (int i = 0; i < 10; ++i) {
      auto r = pair.defended().process_event(
          Event::update(devs[rng() % 4], rng() % 2 ? "ON" : "OFF"));
      app_runs += r.actions.size();
    }
    ASSERT_EQ(pair.server()->requests_handled(), app_runs);
    for (const auto& [node, tags] : pair.server()->model().nodes()) {
      ASSERT_NE(node.device, "Smoke");
      ASSERT_NE(node.device, "Home");
    }
  }
}
