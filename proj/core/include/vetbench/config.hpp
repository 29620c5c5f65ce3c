#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vetbench/app.hpp"
#include "vetbench/device.hpp"
#include "vetbench/policy.hpp"

namespace vetbench {

/// An app as written in a config file.
struct AppSource {
  std::string id;
  std::string trigger;
  std::string condition;  // empty: always true
  std::vector<std::string> actions;  // "Device.Command"

  friend bool operator==(const AppSource&, const AppSource&) = default;
};

/// Declarative description of a testbed. See docs/formats.md.
struct TestbedConfig {
  std::string name;
  DefenseKind defense = DefenseKind::None;
  std::size_t chain_limit = 25;
  std::optional<std::uint64_t> seed;
  bool fail_closed = false;
  std::vector<DeviceSpec> devices;
  std::vector<AppSource> apps;
  /// Policy lines, `id: <dialect> <body>`.
  std::vector<std::string> policies;

  DeviceRegistry registry() const;
  /// Compiled apps in config order; throws ValidationError naming the app.
  std::vector<App> compiled_apps() const;
  std::vector<PolicySpec> compiled_policies() const;

  /// Referential integrity of devices, apps and policies. Throws
  /// ConfigError naming the offending id.
  void validate() const;

  friend bool operator==(const TestbedConfig&, const TestbedConfig&) = default;
};

/// Parses and validates. A `policy_file` key is resolved against
/// `base_dir` and its lines appended to the inline policies.
TestbedConfig parse_config(std::string_view text,
                           const std::filesystem::path& base_dir = {});
TestbedConfig load_config(const std::filesystem::path& path);

/// Writes every policy inline, so the output is self-contained.
std::string serialize_config(const TestbedConfig& config);
void save_config(const TestbedConfig& config, const std::filesystem::path& path);

}  // namespace vetbench
