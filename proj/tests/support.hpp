#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "vetbench/config.hpp"
#include "vetbench/device.hpp"
#include "vetbench/state.hpp"

namespace vbtest {

inline vetbench::DeviceSpec binary(const std::string& id, const std::string& initial = "OFF",
                                   vetbench::DeviceKind kind = vetbench::DeviceKind::Actuator) {
  vetbench::DeviceSpec d;
  d.id = id;
  d.kind = kind;
  d.domain = vetbench::Domain::symbols({"OFF", "ON"});
  d.initial = initial;
  d.tags = vetbench::DeviceTags::physical();
  return d;
}

inline vetbench::DeviceSpec ranged(const std::string& id, std::int64_t lo, std::int64_t hi,
                                   std::int64_t initial) {
  vetbench::DeviceSpec d;
  d.id = id;
  d.kind = vetbench::DeviceKind::Env;
  d.domain = vetbench::Domain::range(lo, hi);
  d.initial = initial;
  d.tags = vetbench::DeviceTags::physical();
  return d;
}

/// Every assignment of OFF/ON to `devices`, enumerated by bitmask.
inline std::vector<vetbench::SystemState> all_binary_states(const std::vector<std::string>& devices) {
  std::vector<vetbench::SystemState> out;
  for (unsigned mask = 0; mask < (1u << devices.size()); ++mask) {
    vetbench::SystemState s;
    for (std::size_t i = 0; i < devices.size(); ++i) {
      s.set(devices[i], (mask >> i) & 1u ? "ON" : "OFF");
    }
    out.push_back(std::move(s));
  }
  return out;
}

inline std::string fixture_path(const std::string& rel) {
  return std::string(VETBENCH_FIXTURES_DIR) + "/" + rel;
}

}  // namespace vbtest
