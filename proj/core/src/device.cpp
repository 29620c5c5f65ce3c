#include "vetbench/device.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "vetbench/error.hpp"

namespace vetbench {

namespace {

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](unsigned char x, unsigned char y) {
           return std::tolower(x) == std::tolower(y);
         });
}

// "OPEN" -> "Open"
std::string title_case(const std::string& s) {
  std::string out = s;
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto c = static_cast<unsigned char>(out[i]);
    out[i] = static_cast<char>(i == 0 ? std::toupper(c) : std::tolower(c));
  }
  return out;
}

}  // namespace

std::string_view to_string(DeviceKind kind) {
  switch (kind) {
    case DeviceKind::Actuator: return "actuator";
    case DeviceKind::Sensor: return "sensor";
    case DeviceKind::Env: return "env";
  }
  return "actuator";
}

std::optional<DeviceKind> parse_device_kind(std::string_view text) {
  if (text == "actuator") return DeviceKind::Actuator;
  if (text == "sensor") return DeviceKind::Sensor;
  if (text == "env") return DeviceKind::Env;
  return std::nullopt;
}

std::vector<std::string> DeviceTags::names() const {
  std::vector<std::string> out;
  if (trusted) out.emplace_back("trusted");
  if (untrusted) out.emplace_back("untrusted");
  if (secure) out.emplace_back("secure");
  if (insecure) out.emplace_back("insecure");
  return out;
}

void DeviceSpec::validate() const {
  if (id.empty()) throw ValidationError("device with empty id");
  if (domain.empty()) throw ValidationError("device " + id + ": empty domain");
  if (!domain.contains(initial)) {
    throw ValidationError("device " + id + ": initial value " + initial.to_string() +
                          " not in domain");
  }
  if (tags.trusted && tags.untrusted) {
    throw ValidationError("device " + id + ": tagged both trusted and untrusted");
  }
  if (tags.secure && tags.insecure) {
    throw ValidationError("device " + id + ": tagged both secure and insecure");
  }
  if (kind == DeviceKind::Env && !commands.empty()) {
    throw ValidationError("device " + id + ": env devices accept no commands");
  }
  for (const auto& [name, target] : commands) {
    if (!domain.contains(target)) {
      throw ValidationError("device " + id + ": command " + name + " targets " +
                            target.to_string() + " outside the domain");
    }
  }
}

std::optional<Value> DeviceSpec::resolve_command(std::string_view command) const {
  if (!accepts_commands()) return std::nullopt;
  if (auto it = commands.find(std::string(command)); it != commands.end()) return it->second;
  if (!domain.is_integer()) {
    for (const auto& s : domain.symbol_names()) {
      if (iequals(s, command)) return Value(s);
    }
  }
  return std::nullopt;
}

std::vector<std::string> DeviceSpec::command_names() const {
  std::vector<std::string> out;
  if (!accepts_commands()) return out;
  std::set<std::string> seen;
  for (const auto& [name, target] : commands) {
    out.push_back(name);
    seen.insert(name);
  }
  if (!domain.is_integer()) {
    for (const auto& s : domain.symbol_names()) {
      auto name = title_case(s);
      bool shadowed = false;
      for (const auto& n : seen) shadowed = shadowed || iequals(n, name);
      if (!shadowed) out.push_back(std::move(name));
    }
  }
  return out;
}

void DeviceRegistry::add(DeviceSpec spec) {
  spec.validate();
  if (contains(spec.id)) throw ValidationError("duplicate device id " + spec.id);
  index_.emplace(spec.id, devices_.size());
  devices_.push_back(std::move(spec));
}

const DeviceSpec* DeviceRegistry::find(std::string_view id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &devices_[it->second];
}

const DeviceSpec& DeviceRegistry::at(std::string_view id) const {
  const auto* d = find(id);
  if (d == nullptr) throw ValidationError("unknown device " + std::string(id));
  return *d;
}

}  // namespace vetbench
