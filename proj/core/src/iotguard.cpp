#include "vetbench/iotguard.hpp"

#include <json.hpp>

#include "vetbench/error.hpp"

namespace vetbench::iotguard {

using nlohmann::json;

std::string NodeKey::to_string() const {
  return std::string(kind == NodeKind::Event ? "event:" : "action:") + device + "=" +
         value.to_string();
}

bool node_matches(const NodeKey& node, const Atom& atom) {
  if (node.device != atom.device) return false;
  // Ill-typed comparisons (an ordering operator on a symbol) never match.
  if (atom.op != RelOp::Eq && atom.op != RelOp::Ne &&
      (!node.value.is_integer() || !atom.constant.is_integer())) {
    return false;
  }
  return atom.holds(node.value);
}

void DynamicModel::add_node(const NodeKey& n, DeviceTags tags) {
  if (nodes_.emplace(n, tags).second) {
    adjacency_[n];
    recent_nodes_.insert(n);
  }
}

void DynamicModel::add_edge(const NodeKey& from, const NodeKey& to, const std::string& label) {
  if (!nodes_.count(from) || !nodes_.count(to)) {
    throw Error("edge endpoints must be nodes of the model");
  }
  if (edges_.emplace(EdgeKey{from, to}, label).second) {
    adjacency_[from].insert(to);
    recent_edges_.insert(EdgeKey{from, to});
  }
}

void DynamicModel::ingest(const Attribute& trigger, const std::vector<Attribute>& actions,
                          const std::string& condition, const TagLookup& tags_of) {
  const NodeKey event{trigger.first, trigger.second, NodeKind::Event};
  add_node(event, tags_of(event.device));
  const NodeKey producer{trigger.first, trigger.second, NodeKind::Action};
  if (nodes_.count(producer)) add_edge(producer, event, "merge");

  for (const auto& [device, value] : actions) {
    const NodeKey act{device, value, NodeKind::Action};
    add_node(act, tags_of(device));
    add_edge(event, act, condition);
    const NodeKey consumer{device, value, NodeKind::Event};
    if (nodes_.count(consumer)) add_edge(act, consumer, "merge");
  }
}

void DynamicModel::rollback() {
  for (const auto& e : recent_edges_) {
    edges_.erase(e);
    auto it = adjacency_.find(e.first);
    if (it != adjacency_.end()) it->second.erase(e.second);
  }
  for (const auto& n : recent_nodes_) {
    nodes_.erase(n);
    adjacency_.erase(n);
  }
  commit();
}

void DynamicModel::clear() {
  nodes_.clear();
  edges_.clear();
  adjacency_.clear();
  commit();
}

std::vector<NodeKey> DynamicModel::successors(const NodeKey& n) const {
  auto it = adjacency_.find(n);
  if (it == adjacency_.end()) return {};
  return {it->second.begin(), it->second.end()};
}

bool DynamicModel::reachable(const std::set<NodeKey>& sources,
                             const std::set<NodeKey>& targets) const {
  if (sources.empty() || targets.empty()) return false;
  std::set<NodeKey> seen;
  std::vector<NodeKey> stack;
  for (const auto& s : sources) {
    auto it = adjacency_.find(s);
    if (it == adjacency_.end()) continue;
    for (const auto& next : it->second) {
      if (seen.insert(next).second) stack.push_back(next);
    }
  }
  while (!stack.empty()) {
    NodeKey n = std::move(stack.back());
    stack.pop_back();
    if (targets.count(n)) return true;
    for (const auto& next : adjacency_.at(n)) {
      if (seen.insert(next).second) stack.push_back(next);
    }
  }
  return false;
}

bool DynamicModel::has_cycle() const {
  enum class Mark { White, Grey, Black };
  std::map<NodeKey, Mark> mark;
  for (const auto& [n, _] : nodes_) mark[n] = Mark::White;

  for (const auto& [root, _] : nodes_) {
    if (mark[root] != Mark::White) continue;
    // Frames of (node, index of the next successor to visit).
    std::vector<std::pair<NodeKey, std::vector<NodeKey>>> stack;
    mark[root] = Mark::Grey;
    stack.emplace_back(root, successors(root));
    while (!stack.empty()) {
      auto& [node, pending] = stack.back();
      if (pending.empty()) {
        mark[node] = Mark::Black;
        stack.pop_back();
        continue;
      }
      NodeKey next = std::move(pending.back());
      pending.pop_back();
      if (mark[next] == Mark::Grey) return true;
      if (mark[next] == Mark::White) {
        mark[next] = Mark::Grey;
        auto succ = successors(next);
        stack.emplace_back(std::move(next), std::move(succ));
      }
    }
  }
  return false;
}

std::set<NodeKey> DynamicModel::nodes_where(
    const std::function<bool(const NodeKey&, const DeviceTags&)>& pred) const {
  std::set<NodeKey> out;
  for (const auto& [n, tags] : nodes_) {
    if (pred(n, tags)) out.insert(n);
  }
  return out;
}

Server::Server(ServerPolicyStore store, std::map<std::string, DeviceTags> device_tags)
    : store_(std::move(store)), device_tags_(std::move(device_tags)) {}

DeviceTags Server::tags_of(const std::string& device) const {
  auto it = device_tags_.find(device);
  return it == device_tags_.end() ? DeviceTags{} : it->second;
}

void Server::ingest(const PdpRequest& req) {
  std::vector<DynamicModel::Attribute> actions;
  actions.reserve(req.actions.size());
  for (const auto& a : req.actions) actions.emplace_back(a.device, a.target);
  model_.ingest({req.trigger_device, req.trigger_value}, actions,
                req.condition ? req.condition->to_string() : "true",
                [this](const std::string& d) { return tags_of(d); });
}

PdpResponse Server::enforce() {
  std::vector<std::string> violated;
  for (const auto& [id, imp] : store_.implications) {
    auto matching = [&](const std::vector<Atom>& atoms) {
      return model_.nodes_where([&](const NodeKey& n, const DeviceTags&) {
        for (const auto& a : atoms) {
          if (node_matches(n, a)) return true;
        }
        return false;
      });
    };
    if (model_.reachable(matching(imp.premise), matching(imp.conclusion))) {
      violated.push_back(id);
    }
  }
  if (!store_.flows.empty()) {
    auto sources =
        model_.nodes_where([](const NodeKey&, const DeviceTags& t) { return t.is_flow_source(); });
    auto sinks =
        model_.nodes_where([](const NodeKey&, const DeviceTags& t) { return t.is_flow_sink(); });
    if (model_.reachable(sources, sinks)) {
      violated.insert(violated.end(), store_.flows.begin(), store_.flows.end());
    }
  }
  if (!store_.generals.empty() && model_.has_cycle()) {
    violated.insert(violated.end(), store_.generals.begin(), store_.generals.end());
  }

  if (violated.empty()) {
    model_.commit();
    return PdpResponse::allow();
  }
  model_.rollback();
  return PdpResponse::deny(std::move(violated));
}

PdpResponse Server::handle(const PdpRequest& req) {
  ++requests_;
  ingest(req);
  return enforce();
}

std::string Server::handle_message(std::string_view request) {
  try {
    auto j = json::parse(request);
    const auto type = j.at("type").get<std::string>();
    if (type == "reset") {
      reset();
      return json{{"ok", true}}.dump();
    }
    if (type == "enforce") return encode_response(handle(decode_request(request)));
    return json{{"error", "unknown request type " + type}}.dump();
  } catch (const std::exception& e) {
    return json{{"error", e.what()}}.dump();
  }
}

namespace {

json value_to_json(const Value& v) {
  if (v.is_integer()) return v.as_integer();
  return v.as_symbol();
}

Value value_from_json(const json& j) {
  if (j.is_number_integer()) return Value(j.get<std::int64_t>());
  if (j.is_string()) return Value(j.get<std::string>());
  throw ParseError("value must be an integer or a string", 0, 0);
}

}  // namespace

std::string encode_request(const PdpRequest& req) {
  json actions = json::array();
  for (const auto& a : req.actions) {
    actions.push_back(
        {{"device", a.device}, {"command", a.command}, {"target", value_to_json(a.target)}});
  }
  json j{{"type", "enforce"},
         {"app", req.app_id},
         {"trigger", {{"device", req.trigger_device}, {"value", value_to_json(req.trigger_value)}}},
         {"condition", req.condition ? json(req.condition->to_string()) : json(nullptr)},
         {"actions", std::move(actions)}};
  return j.dump();
}

PdpRequest decode_request(std::string_view text) {
  try {
    auto j = json::parse(text);
    PdpRequest req;
    req.app_id = j.at("app").get<std::string>();
    req.trigger_device = j.at("trigger").at("device").get<std::string>();
    req.trigger_value = value_from_json(j.at("trigger").at("value"));
    if (j.contains("condition") && !j.at("condition").is_null()) {
      req.condition = parse_condition(j.at("condition").get<std::string>());
    }
    for (const auto& a : j.at("actions")) {
      req.actions.push_back({a.at("device").get<std::string>(), a.at("command").get<std::string>(),
                             value_from_json(a.at("target"))});
    }
    return req;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed request: ") + e.what(), 0, 0);
  }
}

std::string encode_response(const PdpResponse& resp) {
  return json{{"decision", resp.allowed() ? "allow" : "deny"}, {"violated", resp.violated}}.dump();
}

PdpResponse decode_response(std::string_view text) {
  try {
    auto j = json::parse(text);
    if (j.contains("error")) throw Error("server error: " + j.at("error").get<std::string>());
    const auto decision = j.at("decision").get<std::string>();
    auto violated = j.value("violated", std::vector<std::string>{});
    if (decision == "allow") return PdpResponse{Decision::Allow, std::move(violated)};
    if (decision == "deny") return PdpResponse::deny(std::move(violated));
    throw ParseError("unknown decision " + decision, 0, 0);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed response: ") + e.what(), 0, 0);
  }
}

}  // namespace vetbench::iotguard
