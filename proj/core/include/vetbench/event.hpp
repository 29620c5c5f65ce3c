#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "vetbench/value.hpp"

namespace vetbench {

class DeviceRegistry;

/// A device reporting a new value (physical interaction or sensor reading).
struct StatusUpdate {
  std::string device;
  Value value;
  friend bool operator==(const StatusUpdate&, const StatusUpdate&) = default;
};

/// A command sent to a device (UI interaction or app action).
struct ActionCommand {
  std::string device;
  std::string command;
  friend bool operator==(const ActionCommand&, const ActionCommand&) = default;
};

/// A triggering event. `source_app` is empty for external events and names
/// the emitting app for events derived from app actions.
struct Event {
  std::variant<StatusUpdate, ActionCommand> body;
  std::optional<std::string> source_app;

  static Event update(std::string device, Value value) {
    return Event{StatusUpdate{std::move(device), std::move(value)}, std::nullopt};
  }
  static Event command(std::string device, std::string command) {
    return Event{ActionCommand{std::move(device), std::move(command)}, std::nullopt};
  }

  bool is_external() const { return !source_app.has_value(); }
  bool is_command() const { return std::holds_alternative<ActionCommand>(body); }
  const std::string& device() const;

  /// `Device = VALUE` or `Device.Command`.
  std::string to_string() const;
  /// Inverse of to_string; throws ParseError.
  static Event parse(std::string_view text);

  friend bool operator==(const Event&, const Event&) = default;
};

/// Checks that the event targets an installed device with an in-domain value
/// or a resolvable command, and returns the value the device would take.
/// Throws ValidationError.
Value resolve_event(const Event& e, const DeviceRegistry& devices);

}  // namespace vetbench
