#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vetbench/value.hpp"

namespace vetbench {

enum class DeviceKind { Actuator, Sensor, Env };

std::string_view to_string(DeviceKind kind);
std::optional<DeviceKind> parse_device_kind(std::string_view text);

/// Trust/security annotation used by trigger-action flow policies.
struct DeviceTags {
  bool trusted = false;
  bool untrusted = false;
  bool secure = false;
  bool insecure = false;

  bool is_flow_source() const { return untrusted || insecure; }
  bool is_flow_sink() const { return trusted || secure; }
  bool empty() const { return !trusted && !untrusted && !secure && !insecure; }

  static DeviceTags physical() { return {true, false, true, false}; }
  static DeviceTags virtual_item() { return {false, true, false, true}; }

  std::vector<std::string> names() const;
  friend bool operator==(const DeviceTags&, const DeviceTags&) = default;
};

struct DeviceSpec {
  std::string id;
  DeviceKind kind = DeviceKind::Actuator;
  Domain domain;
  Value initial;
  DeviceTags tags;
  /// Explicit command name -> target value. Symbols also accept a command of
  /// the same name, compared case-insensitively (Open -> OPEN).
  std::map<std::string, Value> commands;

  /// Throws ValidationError when an invariant does not hold.
  void validate() const;

  std::optional<Value> resolve_command(std::string_view command) const;
  /// Every command name this device accepts, explicit ones first.
  std::vector<std::string> command_names() const;
  bool accepts_commands() const { return kind != DeviceKind::Env; }

  friend bool operator==(const DeviceSpec&, const DeviceSpec&) = default;
};

/// Installed devices, in install order, with lookup by id.
class DeviceRegistry {
 public:
  void add(DeviceSpec spec);
  const DeviceSpec* find(std::string_view id) const;
  const DeviceSpec& at(std::string_view id) const;
  bool contains(std::string_view id) const { return find(id) != nullptr; }
  const std::vector<DeviceSpec>& devices() const { return devices_; }
  std::size_t size() const { return devices_.size(); }

 private:
  std::vector<DeviceSpec> devices_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

}  // namespace vetbench
