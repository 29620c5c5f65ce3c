#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "vetbench/expr.hpp"

namespace vetbench {

class DeviceRegistry;

enum class Dialect { Invariant, Guard, Implication, Flow, General };

std::string_view to_string(Dialect d);
std::optional<Dialect> parse_dialect(std::string_view text);

/// A condition every reachable state must satisfy.
struct StateInvariant {
  CondExpr expr;
  friend bool operator==(const StateInvariant&, const StateInvariant&) = default;
};

enum class GuardMode { DenyIf, AllowOnlyIf };

/// Constrains one device command by a condition over the system state.
struct ActionGuard {
  std::string device;
  std::string command;
  CondExpr guard;
  GuardMode mode = GuardMode::DenyIf;
  friend bool operator==(const ActionGuard&, const ActionGuard&) = default;
};

enum class ImplicationMode { Restrict, Allow };

/// Premise and conclusion are atom sets matched against graph nodes.
struct Implication {
  std::vector<Atom> premise;
  std::vector<Atom> conclusion;
  ImplicationMode mode = ImplicationMode::Restrict;
  friend bool operator==(const Implication&, const Implication&) = default;
};

/// Forbids a path from untrusted/insecure sources to trusted/secure sinks.
struct TriggerActionFlow {
  friend bool operator==(const TriggerActionFlow&, const TriggerActionFlow&) = default;
};

enum class GeneralCheck { NoCycle };

struct GeneralPolicy {
  GeneralCheck check = GeneralCheck::NoCycle;
  friend bool operator==(const GeneralPolicy&, const GeneralPolicy&) = default;
};

struct PolicySpec {
  std::string id;
  std::variant<StateInvariant, ActionGuard, Implication, TriggerActionFlow, GeneralPolicy> form;

  Dialect dialect() const;
  /// `id: <dialect> <body>`; parses back to an equal PolicySpec.
  std::string to_string() const;

  friend bool operator==(const PolicySpec&, const PolicySpec&) = default;
};

/// Parses `id: [dialect-keyword] body` where the body follows `dialect`.
/// Throws ParseError with the column of the first bad token.
PolicySpec parse_policy(std::string_view text, Dialect dialect);
/// Parses `id: <dialect-keyword> <body>`.
PolicySpec parse_policy_line(std::string_view text);
/// One policy per line; `#` starts a comment; blank lines ignored. Errors
/// carry the line number.
std::vector<PolicySpec> parse_policy_file(std::string_view text);

/// Unknown devices, unresolvable commands and ill-typed constants raise
/// ValidationError naming the policy.
void check_policy(const PolicySpec& p, const DeviceRegistry& devices);

/// How state invariants are selected for an action.
enum class Selection {
  All,        // every invariant applies to every action
  Mentioned,  // only invariants mentioning the action's device
};

/// True iff `policy` constrains commands to `device`: the guarded action of
/// an ActionGuard, a conclusion atom of an Implication, or (per `selection`)
/// any device of a StateInvariant. Flow and general policies are structural
/// and relevant to everything.
bool relevant(const PolicySpec& policy, std::string_view device,
              Selection selection = Selection::Mentioned);

}  // namespace vetbench
