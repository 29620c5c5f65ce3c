#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "vetbench/app.hpp"
#include "vetbench/config.hpp"
#include "vetbench/eventgen.hpp"
#include "vetbench/harness.hpp"

namespace vetbench {

/// A testbed, one event sequence and the outcome each defense must produce.
///
/// Expectations live in the sequence file as directive comments:
///
///     #@ about: motion sensor opens the door while nobody is home
///     #@ expect: expat=violation patriot=violation iotguard=no-violation
struct ScenarioFixture {
  std::filesystem::path config_path;
  std::filesystem::path sequence_path;
  std::string about;
  std::map<DefenseKind, Outcome> expected;
};

struct FixtureResult {
  bool pass = true;
  std::map<DefenseKind, Verdict> verdicts;
  /// One line per mismatching cell.
  std::vector<std::string> mismatches;
};

/// Reads directives from `sequence_path`; the testbed is `testbed.cfg` in
/// the parent of the sequence's directory (fixtures/<name>/cases/x.events).
ScenarioFixture load_fixture(const std::filesystem::path& sequence_path);
/// Every `cases/*.events` under `root`, sorted by path.
std::vector<ScenarioFixture> discover_fixtures(const std::filesystem::path& root);

/// Runs the scenario once per expected defense, with debug traces on.
FixtureResult verify_fixture(const ScenarioFixture& fixture);

}  // namespace vetbench
