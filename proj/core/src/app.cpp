#include "vetbench/app.hpp"

#include "grammar.hpp"
#include "vetbench/error.hpp"
#include "vetbench/pdp.hpp"

namespace vetbench {

std::string_view to_string(DefenseKind kind) {
  switch (kind) {
    case DefenseKind::None: return "none";
    case DefenseKind::Expat: return "expat";
    case DefenseKind::Patriot: return "patriot";
    case DefenseKind::Iotguard: return "iotguard";
  }
  return "none";
}

std::optional<DefenseKind> parse_defense_kind(std::string_view text) {
  for (auto k : {DefenseKind::None, DefenseKind::Expat, DefenseKind::Patriot,
                 DefenseKind::Iotguard}) {
    if (text == to_string(k)) return k;
  }
  return std::nullopt;
}

bool Trigger::matches(std::string_view changed_device, const Value& new_value) const {
  if (changed_device != device) return false;
  return !predicate || predicate->holds(new_value);
}

std::string Trigger::to_string() const { return predicate ? predicate->to_string() : device; }

Trigger Trigger::parse(std::string_view text) {
  detail::TokenStream ts(detail::tokenize(text));
  if (ts.peek().kind == detail::Tok::Ident && ts.peek(1).kind == detail::Tok::End) {
    return Trigger{ts.next().text, std::nullopt};
  }
  auto atom = detail::parse_atom_tokens(ts);
  if (!ts.at_end()) ts.fail("unexpected trailing input");
  auto device = atom.device;
  return Trigger{std::move(device), std::move(atom)};
}

void check_app(const App& app, const DeviceRegistry& devices) {
  try {
    if (app.id.empty()) throw ValidationError("empty app id");
    devices.at(app.trigger.device);
    if (app.trigger.predicate) check_atom(*app.trigger.predicate, devices);
    if (app.condition) check_condition(*app.condition, devices);
    if (app.actions.empty()) throw ValidationError("no actions");
    for (const auto& a : app.actions) {
      const auto& spec = devices.at(a.device);
      if (!spec.accepts_commands()) {
        throw ValidationError("device " + a.device + " accepts no commands");
      }
      if (!spec.resolve_command(a.command)) {
        throw ValidationError("device " + a.device + " has no command " + a.command);
      }
    }
  } catch (const ValidationError& e) {
    throw ValidationError("app " + app.id + ": " + e.what());
  }
}

std::string ContemplatedAction::to_string() const {
  return device + "." + command + " -> " + target.to_string();
}

SystemState apply_actions(SystemState s, const std::vector<ContemplatedAction>& actions) {
  for (const auto& a : actions) s.set(a.device, a.target);
  return s;
}

}  // namespace vetbench
