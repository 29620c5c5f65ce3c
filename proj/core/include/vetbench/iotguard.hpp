#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vetbench/device.hpp"
#include "vetbench/expr.hpp"
#include "vetbench/pdp.hpp"
#include "vetbench/policy.hpp"

namespace vetbench::iotguard {

enum class NodeKind { Event, Action };

/// Identity of an attribute-state node.
struct NodeKey {
  std::string device;
  Value value;
  NodeKind kind = NodeKind::Event;

  std::string to_string() const;
  friend bool operator==(const NodeKey&, const NodeKey&) = default;
  friend bool operator<(const NodeKey& a, const NodeKey& b) {
    if (a.device != b.device) return a.device < b.device;
    if (!(a.value == b.value)) return a.value < b.value;
    return a.kind < b.kind;
  }
};

using EdgeKey = std::pair<NodeKey, NodeKey>;

/// True iff substituting the node's value into the atom yields true. Atoms
/// over another device never match.
bool node_matches(const NodeKey& node, const Atom& atom);

/// Directed graph of attribute states built from exported app data. Edges
/// carry the exporting app's condition as text ("true" when absent, "merge"
/// for the action-to-event links joining two apps' models).
class DynamicModel {
 public:
  using Attribute = std::pair<std::string, Value>;
  using TagLookup = std::function<DeviceTags(const std::string&)>;

  /// Adds the trigger event node, one action node per action and the
  /// labelled trigger->action edges, plus merge edges between equal
  /// action/event attribute states. New nodes and edges become `recent`.
  void ingest(const Attribute& trigger, const std::vector<Attribute>& actions,
              const std::string& condition, const TagLookup& tags_of);

  void add_node(const NodeKey& n, DeviceTags tags);
  void add_edge(const NodeKey& from, const NodeKey& to, const std::string& label);

  /// Removes recent nodes and edges.
  void rollback();
  /// Makes recent additions permanent.
  void commit() { recent_nodes_.clear(); recent_edges_.clear(); }
  void clear();

  /// Path of at least one edge from any source to any target.
  bool reachable(const std::set<NodeKey>& sources, const std::set<NodeKey>& targets) const;
  bool has_cycle() const;

  std::set<NodeKey> nodes_where(const std::function<bool(const NodeKey&, const DeviceTags&)>& pred) const;

  const std::map<NodeKey, DeviceTags>& nodes() const { return nodes_; }
  const std::map<EdgeKey, std::string>& edges() const { return edges_; }
  const std::set<NodeKey>& recent_nodes() const { return recent_nodes_; }
  const std::set<EdgeKey>& recent_edges() const { return recent_edges_; }
  std::vector<NodeKey> successors(const NodeKey& n) const;

  /// Structural equality over nodes, tags and edges (recent marks ignored).
  bool same_graph(const DynamicModel& other) const {
    return nodes_ == other.nodes_ && edges_ == other.edges_;
  }

 private:
  std::map<NodeKey, DeviceTags> nodes_;
  std::map<EdgeKey, std::string> edges_;
  std::map<NodeKey, std::set<NodeKey>> adjacency_;
  std::set<NodeKey> recent_nodes_;
  std::set<EdgeKey> recent_edges_;
};

/// Policies the server enforces; fixed once the server is created.
struct ServerPolicyStore {
  std::vector<std::pair<std::string, Implication>> implications;
  std::vector<std::string> flows;
  std::vector<std::string> generals;

  std::size_t size() const { return implications.size() + flows.size() + generals.size(); }
};

/// Data collector plus security service. A single server serves one
/// testbed; each request runs ingest and enforce as one step.
class Server {
 public:
  Server(ServerPolicyStore store, std::map<std::string, DeviceTags> device_tags);

  void ingest(const PdpRequest& req);
  /// Checks restrict implications, trigger-action flows and no-cycle
  /// policies on the current model. Deny rolls back the recent additions.
  PdpResponse enforce();
  /// ingest followed by enforce.
  PdpResponse handle(const PdpRequest& req);

  /// Wire entry point: a JSON request record in, a JSON response out.
  /// Request types: "enforce" and "reset". See docs/formats.md.
  std::string handle_message(std::string_view request);

  void reset() { model_.clear(); requests_ = 0; }
  const DynamicModel& model() const { return model_; }
  const ServerPolicyStore& store() const { return store_; }
  std::size_t requests_handled() const { return requests_; }

 private:
  DeviceTags tags_of(const std::string& device) const;

  ServerPolicyStore store_;
  std::map<std::string, DeviceTags> device_tags_;
  DynamicModel model_;
  std::size_t requests_ = 0;
};

/// Request/response records of the message boundary between the enforcement
/// point and the server.
std::string encode_request(const PdpRequest& req);
PdpRequest decode_request(std::string_view text);
std::string encode_response(const PdpResponse& resp);
PdpResponse decode_response(std::string_view text);

}  // namespace vetbench::iotguard
