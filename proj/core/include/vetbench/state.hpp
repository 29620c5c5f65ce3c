#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "vetbench/value.hpp"

namespace vetbench {

/// One value per installed device. Iteration order is the canonical device
/// order (lexicographic by id), which is also the order used for equality
/// and for serialization.
class SystemState {
 public:
  using Map = std::map<std::string, Value, std::less<>>;

  SystemState() = default;
  explicit SystemState(Map values) : values_(std::move(values)) {}

  bool contains(std::string_view device) const {
    return values_.find(device) != values_.end();
  }
  /// Throws ValidationError for an unknown device.
  const Value& at(std::string_view device) const;
  void set(const std::string& device, Value v) { values_[device] = std::move(v); }

  std::size_t size() const { return values_.size(); }
  const Map& values() const { return values_; }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  bool same_devices(const SystemState& other) const;
  /// Devices whose value differs between the two states.
  std::vector<std::string> diff(const SystemState& other) const;
  std::string to_string() const;

  friend bool operator==(const SystemState&, const SystemState&) = default;

 private:
  Map values_;
};

}  // namespace vetbench
