#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vetbench/device.hpp"
#include "vetbench/event.hpp"
#include "vetbench/expr.hpp"

namespace vetbench {

enum class DefenseKind { None, Expat, Patriot, Iotguard };

std::string_view to_string(DefenseKind kind);
std::optional<DefenseKind> parse_defense_kind(std::string_view text);

/// Fires when `device` takes a new value satisfying `predicate` (any new
/// value when absent).
struct Trigger {
  std::string device;
  std::optional<Atom> predicate;

  bool matches(std::string_view changed_device, const Value& new_value) const;
  std::string to_string() const;
  /// `Device` or an atom over one device.
  static Trigger parse(std::string_view text);

  friend bool operator==(const Trigger&, const Trigger&) = default;
};

/// Trigger-condition-action automation rule.
struct App {
  std::string id;
  Trigger trigger;
  std::optional<CondExpr> condition;
  std::vector<ActionCommand> actions;
  /// Set by instrumentation: the action block is gated by one enforcement
  /// hook call of this defense kind.
  DefenseKind gated_by = DefenseKind::None;

  bool instrumented() const { return gated_by != DefenseKind::None; }

  friend bool operator==(const App&, const App&) = default;
};

/// Throws ValidationError for dangling references, env-device actions or
/// unresolvable commands.
void check_app(const App& app, const DeviceRegistry& devices);

}  // namespace vetbench
