#include "vetbench/state.hpp"

#include "vetbench/error.hpp"

namespace vetbench {

const Value& SystemState::at(std::string_view device) const {
  auto it = values_.find(device);
  if (it == values_.end()) throw ValidationError("unknown device " + std::string(device));
  return it->second;
}

bool SystemState::same_devices(const SystemState& other) const {
  if (values_.size() != other.values_.size()) return false;
  auto a = values_.begin();
  auto b = other.values_.begin();
  for (; a != values_.end(); ++a, ++b) {
    if (a->first != b->first) return false;
  }
  return true;
}

std::vector<std::string> SystemState::diff(const SystemState& other) const {
  std::vector<std::string> out;
  for (const auto& [device, value] : values_) {
    auto it = other.values_.find(device);
    if (it == other.values_.end() || !(it->second == value)) out.push_back(device);
  }
  for (const auto& [device, value] : other.values_) {
    if (!contains(device)) out.push_back(device);
  }
  return out;
}

std::string SystemState::to_string() const {
  std::string out = "{";
  bool first = true;
  for (const auto& [device, value] : values_) {
    if (!first) out += ", ";
    first = false;
    out += device + ":" + value.to_string();
  }
  return out + "}";
}

}  // namespace vetbench
