#include "vetbench/eventgen.hpp"

#include <fstream>
#include <limits>
#include <sstream>

#include "text.hpp"
#include "vetbench/error.hpp"

namespace vetbench {

std::uint64_t SeededRandom::below(std::uint64_t bound) {
  if (bound == 0) throw Error("bound must be positive");
  // Largest multiple of `bound` representable, so every residue is equally likely.
  const std::uint64_t reject_from = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % bound;
  for (;;) {
    const std::uint64_t x = engine_();
    if (x < reject_from) return x % bound;
  }
}

std::vector<Event> event_choices(const DeviceSpec& device) {
  std::vector<Event> out;
  for (const auto& v : device.domain.values()) out.push_back(Event::update(device.id, v));
  if (device.accepts_commands()) {
    for (const auto& c : device.command_names()) out.push_back(Event::command(device.id, c));
  }
  return out;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer over the combined input.
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

TestSuite gen_random_suite(const TestbedConfig& config, std::size_t count,
                           std::size_t max_events, std::uint64_t seed) {
  if (max_events == 0) throw Error("max_events must be positive");
  std::vector<std::vector<Event>> choices;
  for (const auto& d : config.devices) {
    auto c = event_choices(d);
    if (!c.empty()) choices.push_back(std::move(c));
  }
  if (choices.empty()) throw Error("testbed " + config.name + " accepts no external events");

  TestSuite suite;
  suite.name = "random-" + std::to_string(count);
  suite.config_name = config.name;
  SeededRandom rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    EventSequence seq;
    seq.name = "r" + std::to_string(seed % 100000) + "-" + std::to_string(i);
    seq.origin = "random:" + std::to_string(seed) + ":" + std::to_string(i);
    const std::size_t length = 1 + rng.below(max_events);
    for (std::size_t k = 0; k < length; ++k) {
      const auto& device = choices[rng.below(choices.size())];
      seq.events.push_back(device[rng.below(device.size())]);
    }
    suite.sequences.push_back(std::move(seq));
  }
  return suite;
}

EventSequence parse_sequence(std::string_view text, const DeviceRegistry& devices,
                             std::string name) {
  EventSequence seq;
  seq.name = std::move(name);
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    auto nl = text.find('\n');
    auto line = detail::trim(detail::strip_comment(text.substr(0, nl)));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (line.empty()) continue;
    try {
      auto e = Event::parse(line);
      resolve_event(e, devices);
      seq.events.push_back(std::move(e));
    } catch (const ParseError& e) {
      throw ParseError(e.message(), line_no, e.column());
    } catch (const ValidationError& e) {
      throw ValidationError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return seq;
}

namespace {

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

EventSequence load_sequence(const std::filesystem::path& path, const DeviceRegistry& devices) {
  try {
    auto seq = parse_sequence(read_text(path), devices, path.stem().string());
    seq.origin = "file:" + path.generic_string();
    return seq;
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.message(), e.line(), e.column());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

TestSuite load_sequences(const std::filesystem::path& manifest, const TestbedConfig& config) {
  const auto registry = config.registry();
  TestSuite suite;
  suite.name = manifest.parent_path().filename().string();
  if (suite.name.empty()) suite.name = manifest.stem().string();
  suite.config_name = config.name;
  std::istringstream lines(read_text(manifest));
  std::string line;
  while (std::getline(lines, line)) {
    auto entry = detail::trim(detail::strip_comment(line));
    if (entry.empty()) continue;
    suite.sequences.push_back(load_sequence(manifest.parent_path() / std::string(entry), registry));
  }
  return suite;
}

std::string format_sequence(const EventSequence& seq) {
  std::string out;
  for (const auto& e : seq.events) out += e.to_string() + "\n";
  return out;
}

}  // namespace vetbench
