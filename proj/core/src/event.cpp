#include "vetbench/event.hpp"

#include "vetbench/device.hpp"
#include "vetbench/error.hpp"
#include "text.hpp"

namespace vetbench {

const std::string& Event::device() const {
  return std::visit([](const auto& b) -> const std::string& { return b.device; }, body);
}

std::string Event::to_string() const {
  if (const auto* u = std::get_if<StatusUpdate>(&body)) {
    return u->device + " = " + u->value.to_string();
  }
  const auto& c = std::get<ActionCommand>(body);
  return c.device + "." + c.command;
}

Event Event::parse(std::string_view text) {
  const auto line = detail::trim(text);
  if (line.empty()) throw ParseError("empty event", 0, 1);
  if (auto eq = line.find('='); eq != std::string_view::npos) {
    auto device = detail::trim(line.substr(0, eq));
    auto value = detail::trim(line.substr(eq + 1));
    if (!detail::is_identifier(device)) throw ParseError("bad device name", 0, 1);
    auto v = Value::parse(value);
    if (!v) throw ParseError("bad value '" + std::string(value) + "'", 0, eq + 2);
    return Event::update(std::string(device), *v);
  }
  if (auto dot = line.find('.'); dot != std::string_view::npos) {
    auto device = detail::trim(line.substr(0, dot));
    auto command = detail::trim(line.substr(dot + 1));
    if (command.ends_with("()")) command = detail::trim(command.substr(0, command.size() - 2));
    if (!detail::is_identifier(device)) throw ParseError("bad device name", 0, 1);
    if (!detail::is_identifier(command)) throw ParseError("bad command name", 0, dot + 2);
    return Event::command(std::string(device), std::string(command));
  }
  throw ParseError("expected 'Device = VALUE' or 'Device.Command'", 0, 1);
}

Value resolve_event(const Event& e, const DeviceRegistry& devices) {
  const auto& spec = devices.at(e.device());
  if (const auto* u = std::get_if<StatusUpdate>(&e.body)) {
    if (!spec.domain.contains(u->value)) {
      throw ValidationError("value " + u->value.to_string() + " not in domain of " + spec.id);
    }
    return u->value;
  }
  const auto& c = std::get<ActionCommand>(e.body);
  if (!spec.accepts_commands()) {
    throw ValidationError("device " + spec.id + " accepts no commands");
  }
  auto target = spec.resolve_command(c.command);
  if (!target) throw ValidationError("device " + spec.id + " has no command " + c.command);
  return *target;
}

}  // namespace vetbench
