#include "vetbench/harness.hpp"

#include <sys/resource.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <ctime>
#include <map>
#include <mutex>
#include <json.hpp>
#include <set>
#include <thread>

#include "vetbench/error.hpp"

namespace vetbench {

using nlohmann::json;

Comparison compare(const SystemState& initial, const SystemState& baseline,
                   const SystemState& defended_final) {
  if (!initial.same_devices(baseline) || !initial.same_devices(defended_final)) {
    throw ValidationError("states cover different devices");
  }
  Comparison c;
  for (const auto& [device, value] : baseline) {
    const auto& defended = defended_final.at(device);
    if (value == defended) continue;
    if (defended == initial.at(device)) c.policy_violation = true;
    else c.indeterminate = true;
  }
  return c;
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::Violation: return "violation";
    case Outcome::Indeterminate: return "indeterminate";
    case Outcome::NoViolation: return "no-violation";
    case Outcome::Errored: return "errored";
  }
  return "errored";
}

std::optional<Outcome> parse_outcome(std::string_view text) {
  for (auto o : {Outcome::Violation, Outcome::Indeterminate, Outcome::NoViolation,
                 Outcome::Errored}) {
    if (text == to_string(o)) return o;
  }
  return std::nullopt;
}

Outcome label(const Comparison& c) {
  if (c.indeterminate) return Outcome::Indeterminate;
  if (c.policy_violation) return Outcome::Violation;
  return Outcome::NoViolation;
}

Verdict run_testcase(TestbedPair& pair, const EventSequence& seq, bool debug) {
  Verdict v;
  v.testcase_id = seq.name;
  pair.reset();
  try {
    auto& vanilla = pair.vanilla();
    auto& defended = pair.defended();
    v.initial = vanilla.snapshot();

    std::vector<SystemState> vanilla_steps;
    for (const auto& e : seq.events) {
      vanilla.process_event(e);
      if (debug) vanilla_steps.push_back(vanilla.snapshot());
    }
    v.baseline = vanilla.snapshot();

    if (debug) v.debug_trace.emplace();
    for (std::size_t i = 0; i < seq.events.size(); ++i) {
      defended.process_event(seq.events[i]);
      if (debug) {
        TraceStep step{i, seq.events[i].to_string(), {}};
        const auto now = defended.snapshot();
        for (const auto& device : vanilla_steps[i].diff(now)) {
          step.diffs.push_back({device, vanilla_steps[i].at(device), now.at(device)});
        }
        v.debug_trace->push_back(std::move(step));
      }
    }
    v.defended_final = defended.snapshot();

    std::set<std::string> violated;
    for (const auto& rec : defended.action_record()) {
      if (rec.allowed) continue;
      v.blocked_actions.push_back(rec.app_id + ":" + rec.action.device + "." + rec.action.command);
      violated.insert(rec.violated.begin(), rec.violated.end());
    }
    v.violated_policies.assign(violated.begin(), violated.end());

    v.loop_detected = vanilla.loop_detected() || defended.loop_detected();
    v.comparison = compare(v.initial, v.baseline, v.defended_final);
    v.outcome = v.loop_detected ? Outcome::Indeterminate : label(v.comparison);
    if (v.loop_detected) v.reason = "loop-detected";
    else if (v.outcome == Outcome::Indeterminate) v.reason = "baseline-differs";
    else if (v.outcome == Outcome::Violation) v.reason = "prevented";
    else v.reason = "match";
  } catch (const std::exception& e) {
    v.outcome = Outcome::Errored;
    v.reason = "error";
    v.error = e.what();
  }
  pair.reset();
  return v;
}

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::Fidelity: return "fidelity";
    case Mode::Stress: return "stress";
    case Mode::Differential: return "diff";
  }
  return "stress";
}

std::optional<Mode> parse_mode(std::string_view text) {
  for (auto m : {Mode::Fidelity, Mode::Stress, Mode::Differential}) {
    if (text == to_string(m)) return m;
  }
  return std::nullopt;
}

void OutcomeCounts::add(Outcome o) {
  switch (o) {
    case Outcome::Violation: ++violation; break;
    case Outcome::Indeterminate: ++indeterminate; break;
    case Outcome::NoViolation: ++no_violation; break;
    case Outcome::Errored: ++errored; break;
  }
}

std::size_t CampaignReport::errored() const {
  std::size_t n = 0;
  for (const auto& s : suites) n += s.counts.errored;
  return n;
}

const SuiteResult* CampaignReport::find(const std::string& suite, DefenseKind defense) const {
  for (const auto& s : suites) {
    if (s.suite == suite && s.defense == defense) return &s;
  }
  return nullptr;
}

OutcomeCounts CampaignReport::totals(DefenseKind defense) const {
  OutcomeCounts out;
  for (const auto& s : suites) {
    if (s.defense != defense) continue;
    out.violation += s.counts.violation;
    out.indeterminate += s.counts.indeterminate;
    out.no_violation += s.counts.no_violation;
    out.errored += s.counts.errored;
  }
  return out;
}

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string host_name() {
  char buf[256] = {};
  if (gethostname(buf, sizeof buf - 1) != 0) return "unknown";
  return buf;
}

long peak_rss_kb() {
  rusage usage{};
  if (getrusage(RUSAGE_SELF, &usage) != 0) return 0;
  return usage.ru_maxrss;
}

std::vector<TestSuite> random_suites(const TestbedConfig& config,
                                     const CampaignOptions::Random& r, std::uint64_t salt) {
  std::vector<TestSuite> out;
  for (std::size_t i = 0; i < r.sizes.size(); ++i) {
    auto suite = gen_random_suite(config, r.sizes[i], r.max_events,
                                  derive_seed(r.seed, salt * 1000 + i));
    suite.name = "suite-" + std::to_string(i) + "-n" + std::to_string(r.sizes[i]);
    out.push_back(std::move(suite));
  }
  return out;
}

}  // namespace

CampaignReport run_campaign(const TestbedConfig& config, const CampaignOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  CampaignReport report;
  report.mode = options.mode;
  report.defenses = options.defenses;
  report.provenance.config_name = config.name;
  report.provenance.config_path = options.config_path;
  report.provenance.started_at = utc_timestamp();
  report.provenance.host = host_name();
  if (options.random) report.provenance.seed = options.random->seed;

  // One task per (suite, defense) cell, in report order.
  struct Task {
    const TestSuite* suite;
    DefenseKind defense;
  };
  std::vector<std::vector<TestSuite>> owned;
  std::vector<Task> tasks;
  if (options.random && options.mode == Mode::Stress) {
    for (auto d : options.defenses) {
      owned.push_back(random_suites(config, *options.random, static_cast<std::uint64_t>(d) + 1));
    }
    for (std::size_t di = 0; di < options.defenses.size(); ++di) {
      for (const auto& s : owned[di]) tasks.push_back({&s, options.defenses[di]});
    }
  } else {
    const std::vector<TestSuite>* shared = &options.suites;
    if (options.random) {
      owned.push_back(random_suites(config, *options.random, 0));
      shared = &owned.back();
    }
    for (const auto& s : *shared) {
      for (auto d : options.defenses) tasks.push_back({&s, d});
    }
  }

  report.suites.resize(tasks.size());
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    report.suites[i].suite = tasks[i].suite->name;
    report.suites[i].defense = tasks[i].defense;
    report.suites[i].size = tasks[i].suite->sequences.size();
  }

  std::atomic<std::size_t> next{0};
  std::atomic<bool> expired{false};
  std::mutex error_mutex;
  std::string setup_error;

  auto out_of_time = [&] {
    if (!options.budget) return false;
    if (std::chrono::steady_clock::now() - started >= *options.budget) expired = true;
    return expired.load();
  };

  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      auto& result = report.suites[i];
      if (out_of_time()) continue;
      try {
        auto pair = instantiate(config, tasks[i].defense);
        for (const auto& seq : tasks[i].suite->sequences) {
          if (out_of_time()) break;
          const auto t0 = std::chrono::steady_clock::now();
          auto verdict = run_testcase(pair, seq, options.debug);
          if (std::chrono::steady_clock::now() - t0 > options.testcase_ceiling) {
            verdict.outcome = Outcome::Errored;
            verdict.reason = "error";
            verdict.error = "testcase exceeded the per-testcase ceiling";
          }
          result.counts.add(verdict.outcome);
          result.verdicts.push_back(std::move(verdict));
        }
      } catch (const std::exception& e) {
        std::lock_guard lock(error_mutex);
        if (setup_error.empty()) setup_error = e.what();
      }
    }
  };

  const std::size_t jobs = std::max<std::size_t>(1, std::min(options.jobs, tasks.size()));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (std::size_t j = 0; j < jobs; ++j) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  if (!setup_error.empty()) throw ValidationError(setup_error);

  for (const auto& s : report.suites) {
    if (s.verdicts.size() != s.size) report.partial = true;
  }
  report.provenance.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  report.provenance.peak_rss_kb = peak_rss_kb();
  return report;
}

namespace {

json counts_json(const OutcomeCounts& c) {
  return {{"violation", c.violation},
          {"indeterminate", c.indeterminate},
          {"no_violation", c.no_violation},
          {"errored", c.errored}};
}

json state_json(const SystemState& s) {
  json out = json::object();
  for (const auto& [device, value] : s) {
    if (value.is_integer()) out[device] = value.as_integer();
    else out[device] = value.as_symbol();
  }
  return out;
}

json verdict_json(const Verdict& v) {
  json j{{"id", v.testcase_id},
         {"outcome", to_string(v.outcome)},
         {"reason", v.reason},
         {"policy_violation", v.comparison.policy_violation},
         {"indeterminate", v.comparison.indeterminate},
         {"loop_detected", v.loop_detected},
         {"blocked_actions", v.blocked_actions},
         {"violated_policies", v.violated_policies}};
  if (!v.error.empty()) j["error"] = v.error;
  if (v.debug_trace) {
    json trace = json::array();
    for (const auto& step : *v.debug_trace) {
      json diffs = json::array();
      for (const auto& d : step.diffs) {
        diffs.push_back({{"device", d.device},
                         {"vanilla", d.vanilla.to_string()},
                         {"defended", d.defended.to_string()}});
      }
      trace.push_back({{"index", step.index}, {"event", step.event}, {"diffs", std::move(diffs)}});
    }
    j["debug_trace"] = std::move(trace);
    j["initial"] = state_json(v.initial);
    j["baseline"] = state_json(v.baseline);
    j["defended_final"] = state_json(v.defended_final);
  }
  return j;
}

}  // namespace

std::string report_to_json(const CampaignReport& report, bool pretty) {
  json defenses = json::array();
  json totals = json::object();
  for (auto d : report.defenses) {
    defenses.push_back(to_string(d));
    totals[std::string(to_string(d))] = counts_json(report.totals(d));
  }
  json suites = json::array();
  for (const auto& s : report.suites) {
    json verdicts = json::array();
    for (const auto& v : s.verdicts) verdicts.push_back(verdict_json(v));
    suites.push_back({{"suite", s.suite},
                      {"defense", to_string(s.defense)},
                      {"size", s.size},
                      {"counts", counts_json(s.counts)},
                      {"verdicts", std::move(verdicts)}});
  }
  const auto& p = report.provenance;
  json matrix = json::array();
  if (report.mode == Mode::Differential) {
    // Rows keyed by (suite, testcase), in first-seen order.
    std::map<std::pair<std::string, std::string>, std::size_t> row_of;
    for (const auto& s : report.suites) {
      for (const auto& v : s.verdicts) {
        auto key = std::make_pair(s.suite, v.testcase_id);
        auto [it, fresh] = row_of.emplace(key, matrix.size());
        if (fresh) {
          matrix.push_back(
              {{"suite", s.suite}, {"testcase", v.testcase_id}, {"outcomes", json::object()}});
        }
        matrix[it->second]["outcomes"][std::string(to_string(s.defense))] = to_string(v.outcome);
      }
    }
  }
  json provenance{{"config_path", p.config_path},
                  {"wall_seconds", p.wall_seconds},
                  {"peak_rss_kb", p.peak_rss_kb},
                  {"started_at", p.started_at},
                  {"host", p.host}};
  json j{{"schema_version", kReportSchemaVersion},
         {"mode", to_string(report.mode)},
         {"config", p.config_name},
         {"seed", p.seed ? json(*p.seed) : json(nullptr)},
         {"defenses", std::move(defenses)},
         {"partial", report.partial},
         {"errored", report.errored()},
         {"totals", std::move(totals)},
         {"suites", std::move(suites)},
         {"provenance", std::move(provenance)}};
  if (report.mode == Mode::Differential) j["decision_matrix"] = std::move(matrix);
  return pretty ? j.dump(2) : j.dump();
}

std::string report_fingerprint(const std::string& report_json) {
  auto j = json::parse(report_json);
  j.erase("provenance");
  return j.dump();
}

}  // namespace vetbench
