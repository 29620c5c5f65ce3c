#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vetbench/expr.hpp"
#include "vetbench/state.hpp"
#include "vetbench/value.hpp"

namespace vetbench {

/// An app action with its command already resolved to the target value.
struct ContemplatedAction {
  std::string device;
  std::string command;
  Value target;

  std::string to_string() const;
  friend bool operator==(const ContemplatedAction&, const ContemplatedAction&) = default;
};

/// Everything an instrumented app exports when it reaches its enforcement
/// point: one request covers the whole action block.
struct PdpRequest {
  std::string app_id;
  std::string trigger_device;
  Value trigger_value;
  std::optional<CondExpr> condition;
  std::vector<ContemplatedAction> actions;
  SystemState state;
};

enum class Decision { Allow, Deny };

struct PdpResponse {
  Decision decision = Decision::Allow;
  std::vector<std::string> violated;

  bool allowed() const { return decision == Decision::Allow; }
  static PdpResponse allow() { return {}; }
  static PdpResponse deny(std::vector<std::string> ids) {
    return {Decision::Deny, std::move(ids)};
  }
};

using DefenseHook = std::function<PdpResponse(const PdpRequest&)>;

/// Applies `actions` in list order to a copy of `s`.
SystemState apply_actions(SystemState s, const std::vector<ContemplatedAction>& actions);

}  // namespace vetbench
