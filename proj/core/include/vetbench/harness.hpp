#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vetbench/config.hpp"
#include "vetbench/eventgen.hpp"
#include "vetbench/state.hpp"
#include "vetbench/testbed.hpp"

namespace vetbench {

struct Comparison {
  bool policy_violation = false;
  bool indeterminate = false;
  friend bool operator==(const Comparison&, const Comparison&) = default;
};

/// For every device whose baseline value differs from the defended final
/// value: if the defended final equals the initial value the defense
/// prevented the change, otherwise the outcome is unsure. Throws
/// ValidationError when the three states cover different devices.
Comparison compare(const SystemState& initial, const SystemState& baseline,
                   const SystemState& defended_final);

enum class Outcome { Violation, Indeterminate, NoViolation, Errored };

std::string_view to_string(Outcome o);
std::optional<Outcome> parse_outcome(std::string_view text);

/// Indeterminate takes precedence over violation.
Outcome label(const Comparison& c);

/// Values of one device at one step of a debug trace.
struct StepDiff {
  std::string device;
  Value vanilla;
  Value defended;
};

struct TraceStep {
  std::size_t index = 0;
  std::string event;
  std::vector<StepDiff> diffs;
};

struct Verdict {
  std::string testcase_id;
  Outcome outcome = Outcome::NoViolation;
  Comparison comparison;
  bool loop_detected = false;
  std::vector<std::string> blocked_actions;
  std::vector<std::string> violated_policies;
  std::optional<std::vector<TraceStep>> debug_trace;
  /// Why the outcome was chosen: "loop-detected", "baseline-differs",
  /// "prevented", "match" or "error".
  std::string reason;
  std::string error;
  SystemState initial;
  SystemState baseline;
  SystemState defended_final;
};

/// Runs `seq` on the vanilla member (baseline) and then on the defended
/// member, compares, and resets the pair. Loop detection in either run
/// forces Indeterminate. Platform errors yield Outcome::Errored.
Verdict run_testcase(TestbedPair& pair, const EventSequence& seq, bool debug = false);

enum class Mode { Fidelity, Stress, Differential };

std::string_view to_string(Mode m);
std::optional<Mode> parse_mode(std::string_view text);

struct OutcomeCounts {
  std::size_t violation = 0;
  std::size_t indeterminate = 0;
  std::size_t no_violation = 0;
  std::size_t errored = 0;

  void add(Outcome o);
  std::size_t total() const { return violation + indeterminate + no_violation + errored; }
  friend bool operator==(const OutcomeCounts&, const OutcomeCounts&) = default;
};

struct SuiteResult {
  std::string suite;
  DefenseKind defense = DefenseKind::None;
  std::size_t size = 0;
  OutcomeCounts counts;
  std::vector<Verdict> verdicts;
};

struct Provenance {
  std::string config_name;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  double wall_seconds = 0;
  long peak_rss_kb = 0;
  std::string started_at;
  std::string host;
};

struct CampaignReport {
  Mode mode = Mode::Stress;
  std::vector<DefenseKind> defenses;
  std::vector<SuiteResult> suites;
  /// Set when the time budget expired before every testcase ran.
  bool partial = false;
  Provenance provenance;

  std::size_t errored() const;
  const SuiteResult* find(const std::string& suite, DefenseKind defense) const;
  OutcomeCounts totals(DefenseKind defense) const;
};

/// Per-testcase wall-clock ceiling, in seconds.
inline constexpr double kDefaultTestcaseCeiling = 10.0;

struct CampaignOptions {
  Mode mode = Mode::Stress;
  std::vector<DefenseKind> defenses;
  /// Fidelity and differential: the suites to run. Stress ignores these
  /// when `random` is set.
  std::vector<TestSuite> suites;
  /// Random generation: when set, suites are generated instead of given.
  struct Random {
    std::vector<std::size_t> sizes;
    std::size_t max_events = kDefaultMaxEvents;
    std::uint64_t seed = 0;
  };
  std::optional<Random> random;
  bool debug = false;
  std::optional<std::chrono::duration<double>> budget;
  /// A testcase running longer than this is recorded as errored.
  std::chrono::duration<double> testcase_ceiling{kDefaultTestcaseCeiling};
  std::size_t jobs = 1;
  std::string config_path;
};

/// Fidelity runs the given suites for each defense; stress generates suites
/// per defense (different seeds per defense); differential runs one shared
/// suite set against every defense. Stops between testcases once the budget
/// is spent and marks the report partial. Testcases are synchronous, so the
/// ceiling is checked when each one returns.
CampaignReport run_campaign(const TestbedConfig& config, const CampaignOptions& options);

/// JSON report. The "provenance" member holds everything that varies between
/// identical runs.
std::string report_to_json(const CampaignReport& report, bool pretty = true);
/// The report without its provenance member, for determinism checks.
std::string report_fingerprint(const std::string& report_json);

inline constexpr int kReportSchemaVersion = 1;

}  // namespace vetbench
