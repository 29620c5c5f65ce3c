// Acceptance suite: one PASS/FAIL line per criterion, each with a pinned
// wall-clock limit.

#include <json.hpp>

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "graph_oracle.hpp"
#include "vetbench/config.hpp"
#include "vetbench/harness.hpp"
#include "vetbench/testbed.hpp"

using namespace vetbench;

namespace {

const std::vector<DefenseKind> kDefenses{DefenseKind::Expat, DefenseKind::Patriot,
                                         DefenseKind::Iotguard};

struct Result {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (cond) return;
    if (ok) detail = what;
    ok = false;
  }
};

struct Criterion {
  int id;
  std::string name;
  double limit_seconds;
  std::function<Result()> run;
};

std::string fixture(const std::string& rel) { return std::string(VETBENCH_FIXTURES_DIR) + "/" + rel; }

bool blocked(const Verdict& v, const std::string& action) {
  return std::any_of(v.blocked_actions.begin(), v.blocked_actions.end(), [&](const std::string& b) {
    return b.size() >= action.size() && b.compare(b.size() - action.size(), action.size(), action) == 0;
  });
}

Verdict run_case(const TestbedConfig& config, DefenseKind d, const std::string& events_path) {
  auto pair = instantiate(config, d);
  return run_testcase(pair, load_sequence(events_path, config.registry()));
}

std::string name(DefenseKind d) { return std::string(to_string(d)); }

Result front_door_scenario() {
  Result r;
  const auto config = load_config(fixture("expat/testbed.cfg"));
  r.require(config.devices.size() == 4, "fixture should have four devices");
  const std::map<DefenseKind, Outcome> expected{{DefenseKind::Expat, Outcome::Violation},
                                                {DefenseKind::Patriot, Outcome::Violation},
                                                {DefenseKind::Iotguard, Outcome::NoViolation}};
  for (const auto& [d, want] : expected) {
    const auto v = run_case(config, d, fixture("expat/cases/motion-while-away.events"));
    r.require(v.outcome == want, name(d) + " gave " + std::string(to_string(v.outcome)));
    r.require(blocked(v, "FrontDoor.Open") == (d != DefenseKind::Iotguard),
              name(d) + " blocking of FrontDoor.Open");
  }
  return r;
}

Result cross_defense_matrix() {
  Result r;
  const auto config = load_config(fixture("shared/testbed.cfg"));
  struct Row {
    std::string label, events, action;
    std::map<DefenseKind, bool> denies;
  };
  const std::vector<Row> rows{
      {"leak-during-fire", "shared/cases/leak-during-fire.events", "WaterValve.Off",
       {{DefenseKind::Expat, true}, {DefenseKind::Patriot, true}, {DefenseKind::Iotguard, false}}},
      {"sleep-after-cooling", "shared/cases/sleep-after-cooling.events", "TV.Off",
       {{DefenseKind::Expat, true}, {DefenseKind::Patriot, false}, {DefenseKind::Iotguard, false}}},
      {"heat-wave", "shared/cases/heat-wave.events", "AC.On",
       {{DefenseKind::Expat, true}, {DefenseKind::Patriot, true}, {DefenseKind::Iotguard, false}}},
  };
  int cells = 0;
  for (const auto& row : rows) {
    for (const auto& [d, denies] : row.denies) {
      const auto v = run_case(config, d, fixture(row.events));
      const bool ok = blocked(v, row.action) == denies &&
                      v.outcome == (denies ? Outcome::Violation : Outcome::NoViolation);
      r.require(ok, row.label + "/" + name(d) + " gave " + std::string(to_string(v.outcome)));
      cells += ok ? 1 : 0;
    }
  }
  r.detail = r.ok ? std::to_string(cells) + "/9 cells" : r.detail;
  return r;
}

// Independent transcription of the comparison over per-device values.
Outcome oracle(const std::array<int, 4>& s0, const std::array<int, 4>& base,
               const std::array<int, 4>& fin) {
  bool violation = false, unsure = false;
  for (int i = 0; i < 4; ++i) {
    if (base[i] == fin[i]) continue;
    (fin[i] == s0[i] ? violation : unsure) = true;
  }
  return unsure ? Outcome::Indeterminate : violation ? Outcome::Violation : Outcome::NoViolation;
}

Result comparator_equivalence() {
  Result r;
  const char* devices[] = {"A", "B", "C", "D"};
  auto bits = [](int mask) {
    return std::array<int, 4>{mask & 1, mask >> 1 & 1, mask >> 2 & 1, mask >> 3 & 1};
  };
  auto state = [&](const std::array<int, 4>& v) {
    SystemState s;
    for (int i = 0; i < 4; ++i) s.set(devices[i], Value(v[i] ? "ON" : "OFF"));
    return s;
  };
  int mismatches = 0, triples = 0;
  for (int a = 0; a < 16; ++a) {
    for (int b = 0; b < 16; ++b) {
      for (int c = 0; c < 16; ++c) {
        ++triples;
        if (label(compare(state(bits(a)), state(bits(b)), state(bits(c)))) !=
            oracle(bits(a), bits(b), bits(c))) {
          ++mismatches;
        }
      }
    }
  }
  r.require(triples == 4096 && mismatches == 0, std::to_string(mismatches) + " mismatches");
  if (r.ok) r.detail = "4096 triples, 0 mismatches";
  return r;
}

Result transparency() {
  Result r;
  auto config = load_config(fixture("shared/testbed.cfg"));
  config.policies.clear();
  const auto suite = gen_random_suite(config, 100, kDefaultMaxEvents, 20240601);
  for (auto d : kDefenses) {
    auto pair = instantiate(config, d);
    for (const auto& seq : suite.sequences) {
      const auto v = run_testcase(pair, seq);
      r.require(v.outcome == Outcome::NoViolation, name(d) + "/" + seq.name + " gave " +
                                                       std::string(to_string(v.outcome)));
      r.require(v.defended_final == v.baseline, name(d) + "/" + seq.name + " diverged");
    }
  }
  if (r.ok) r.detail = "100 testcases x 3 defenses";
  return r;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Result determinism() {
  Result r;
  const auto dir = std::filesystem::temp_directory_path() / "vetbench-acceptance";
  std::filesystem::create_directories(dir);
  std::vector<std::string> prints;
  for (int run = 0; run < 2; ++run) {
    const auto out = dir / ("report-" + std::to_string(run) + ".json");
    const std::string cmd = std::string("\"") + VETBENCH_CLI + "\" stress --config \"" +
                            fixture("shared/testbed.cfg") +
                            "\" --count 50 --max-events 15 --seed 42 --out \"" + out.string() +
                            "\" > \"" + (dir / "stdout.txt").string() + "\"";
    const int status = std::system(cmd.c_str());
    r.require(status == 0, "cli exited with status " + std::to_string(status));
    if (!r.ok) return r;
    prints.push_back(report_fingerprint(read_file(out)));
  }
  std::filesystem::remove_all(dir);
  r.require(prints[0] == prints[1], "reports differ outside provenance");
  r.require(nlohmann::json::parse(prints[0]).at("suites").size() == 3, "expected one suite per defense");
  if (r.ok) r.detail = std::to_string(prints[0].size()) + " bytes identical";
  return r;
}

Result differential_direction() {
  Result r;
  const auto config = load_config(fixture("shared/testbed.cfg"));
  CampaignOptions o;
  o.mode = Mode::Differential;
  o.defenses = kDefenses;
  o.suites.push_back(load_sequences(fixture("shared/manifest.txt"), config));
  const auto report = run_campaign(config, o);
  const auto e = report.totals(DefenseKind::Expat).violation;
  const auto p = report.totals(DefenseKind::Patriot).violation;
  const auto i = report.totals(DefenseKind::Iotguard).violation;
  r.require(i < e && i < p, "violations expat=" + std::to_string(e) + " patriot=" +
                                std::to_string(p) + " iotguard=" + std::to_string(i));
  if (r.ok) {
    r.detail = "expat=" + std::to_string(e) + " patriot=" + std::to_string(p) +
               " iotguard=" + std::to_string(i);
  }
  return r;
}

Result suite_shape() {
  Result r;
  const auto config = load_config(fixture("shared/testbed.cfg"));
  CampaignOptions o;
  o.mode = Mode::Stress;
  o.defenses = kDefenses;
  o.debug = true;
  o.random = CampaignOptions::Random{
      {std::begin(kCampaignSuiteSizes), std::end(kCampaignSuiteSizes)}, 15, 7};
  const auto report = run_campaign(config, o);
  const std::vector<std::size_t> want{5, 10, 15, 25, 35, 50};
  for (auto d : kDefenses) {
    std::vector<std::size_t> sizes;
    for (const auto& s : report.suites) {
      if (s.defense != d) continue;
      sizes.push_back(s.size);
      r.require(s.verdicts.size() == s.size, s.suite + " incomplete");
      for (const auto& v : s.verdicts) {
        const auto len = v.debug_trace ? v.debug_trace->size() : 0;
        r.require(len >= 1 && len <= 15, s.suite + "/" + v.testcase_id + " has length " +
                                             std::to_string(len));
      }
    }
    r.require(sizes == want, name(d) + " suite sizes differ");
  }
  if (r.ok) r.detail = "6 suites per defense, lengths in [1,15]";
  return r;
}

Result server_properties() {
  Result r;
  using namespace vetbench::iotguard;
  std::mt19937_64 rng(1000);
  for (int trial = 0; trial < 1000 && r.ok; ++trial) {
    const auto g = vbtest::random_graph(rng);
    const auto m = vbtest::build(g);
    std::vector<bool> src(g.nodes.size()), dst(g.nodes.size());
    std::set<NodeKey> sources, targets;
    for (std::size_t k = 0; k < g.nodes.size(); ++k) {
      src[k] = rng() % 3 == 0;
      dst[k] = rng() % 3 == 0;
      if (src[k]) sources.insert(g.nodes[k]);
      if (dst[k]) targets.insert(g.nodes[k]);
    }
    r.require(g.nodes.size() <= 20, "graph too large");
    r.require(m.reachable(sources, targets) == vbtest::bfs_reachable(g, src, dst),
              "reachability differs on graph " + std::to_string(trial));

    auto grown = m;
    NodeKey fresh{"Fresh", Value(trial), NodeKind::Action};
    grown.add_node(fresh, DeviceTags::virtual_item());
    grown.add_edge(g.nodes[rng() % g.nodes.size()], fresh, "x");
    grown.add_edge(fresh, g.nodes[rng() % g.nodes.size()], "y");
    grown.rollback();
    r.require(grown.same_graph(m), "rollback differs on graph " + std::to_string(trial));
  }

  TestbedConfig c;
  c.name = "gap";
  for (auto id : {"Smoke", "Leak", "Valve"}) {
    DeviceSpec d;
    d.id = id;
    d.domain = Domain::symbols({"OFF", "ON"});
    d.initial = Value("OFF");
    d.tags = DeviceTags::physical();
    c.devices.push_back(d);
  }
  c.devices[2].initial = Value("ON");
  c.apps.push_back({"shutoff", "Leak = ON", "", {"Valve.Off"}});
  c.policies = {"PI1: guard allow-only-if action Valve.Off when Smoke = OFF"};
  auto pair = instantiate(c, DefenseKind::Iotguard);
  pair.defended().process_event(Event::update("Smoke", Value("ON")));
  r.require(pair.server()->requests_handled() == 0 && pair.server()->model().nodes().empty(),
            "an event that triggered no app reached the server");
  pair.defended().process_event(Event::update("Leak", Value("ON")));
  r.require(pair.server()->requests_handled() == 1, "app block not exported");
  for (const auto& [node, tags] : pair.server()->model().nodes()) {
    r.require(node.device != "Smoke", "server learned about Smoke");
  }
  if (r.ok) r.detail = "1000 graphs, rollback exact, knowledge gap holds";
  return r;
}

Result loop_handling() {
  Result r;
  const auto config = load_config(fixture("loop/testbed.cfg"));
  for (auto d : kDefenses) {
    const auto v = run_case(config, d, fixture("loop/cases/ping-pong.events"));
    r.require(v.loop_detected, name(d) + " did not detect the loop");
    r.require(v.outcome == Outcome::Indeterminate, name(d) + " gave " + std::string(to_string(v.outcome)));
  }
  return r;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "front door scenario verdicts", 1, front_door_scenario},
      {2, "cross-defense decision matrix", 5, cross_defense_matrix},
      {3, "comparator matches oracle on 4096 triples", 1, comparator_equivalence},
      {4, "transparency with an empty policy set", 30, transparency},
      {5, "stress report determinism", 120, determinism},
      {6, "differential direction", 60, differential_direction},
      {7, "stress suite shape", 10, suite_shape},
      {8, "policy server graph properties", 30, server_properties},
      {9, "loop handling", 5, loop_handling},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Result r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r.ok = false;
      r.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (r.ok && secs > c.limit_seconds) {
      r.ok = false;
      r.detail = "over the time limit";
    }
    failed += r.ok ? 0 : 1;
    std::printf("%s %d %s (%.3f s, limit %.0f s)%s%s\n", r.ok ? "PASS" : "FAIL", c.id, c.name.c_str(),
                secs, c.limit_seconds, r.detail.empty() ? "" : ": ", r.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
