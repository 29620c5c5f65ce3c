#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "vetbench/config.hpp"
#include "vetbench/event.hpp"

namespace vetbench {

inline constexpr std::size_t kDefaultMaxEvents = 15;
/// Suite sizes of the standard stress campaign.
inline constexpr std::size_t kCampaignSuiteSizes[] = {5, 10, 15, 25, 35, 50};

struct EventSequence {
  std::string name;
  std::vector<Event> events;
  /// "file:<path>" or "random:<seed>:<index>".
  std::string origin;
};

struct TestSuite {
  std::string name;
  std::string config_name;
  std::vector<EventSequence> sequences;
};

/// Seeded source of uniform draws. Built on std::mt19937_64, whose output
/// sequence the standard fixes; bounded draws use rejection sampling so the
/// results do not depend on the standard library's distributions.
class SeededRandom {
 public:
  explicit SeededRandom(std::uint64_t seed) : engine_(seed) {}
  /// Uniform in [0, bound). `bound` must be positive.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

/// Every external event a testbed accepts for one device: a status update
/// per domain value, plus one command per command name for non-env devices.
std::vector<Event> event_choices(const DeviceSpec& device);

/// `count` sequences of uniform length in [1, max_events]. Each event picks
/// a device uniformly, then one of that device's event choices uniformly.
TestSuite gen_random_suite(const TestbedConfig& config, std::size_t count,
                           std::size_t max_events, std::uint64_t seed);

/// Seed of suite `index` in a campaign seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// One event per line, `Device = VALUE` or `Device.Command`; `#` comments.
/// Throws ParseError/ValidationError with the line number.
EventSequence parse_sequence(std::string_view text, const DeviceRegistry& devices,
                             std::string name = {});
EventSequence load_sequence(const std::filesystem::path& path, const DeviceRegistry& devices);
/// A manifest lists sequence files, one per line, relative to itself.
TestSuite load_sequences(const std::filesystem::path& manifest, const TestbedConfig& config);

std::string format_sequence(const EventSequence& seq);

}  // namespace vetbench
