#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "vetbench/config.hpp"
#include "vetbench/error.hpp"
#include "vetbench/eventgen.hpp"
#include "vetbench/fixtures.hpp"
#include "vetbench/harness.hpp"

namespace {

using namespace vetbench;

struct CampaignArgs {
  std::string config;
  std::vector<std::string> suites;
  std::vector<std::size_t> counts;
  std::size_t max_events = kDefaultMaxEvents;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::vector<std::string> defenses;
  bool debug = false;
  double budget = 0;
  std::size_t jobs = 1;
  std::string out;
};

void add_campaign_options(CLI::App& cmd, CampaignArgs& a, bool random_allowed) {
  cmd.add_option("--config", a.config, "Testbed config file")->required()->check(CLI::ExistingFile);
  cmd.add_option("--suite", a.suites, "Manifest of event sequence files (repeatable)")
      ->check(CLI::ExistingFile);
  if (random_allowed) {
    cmd.add_option("--count", a.counts, "Random suite size (repeatable)");
    cmd.add_option("--max-events", a.max_events, "Longest random sequence")
        ->check(CLI::PositiveNumber);
    cmd.add_option_function<std::uint64_t>(
        "--seed", [&a](std::uint64_t s) { a.seed = s, a.seed_given = true; }, "Random seed");
  }
  cmd.add_option("--defense", a.defenses, "expat, patriot or iotguard (repeatable)")
      ->check(CLI::IsMember({"expat", "patriot", "iotguard"}));
  cmd.add_flag("--debug", a.debug, "Record per-step traces");
  cmd.add_option("--budget", a.budget, "Wall-clock budget in seconds")->check(CLI::NonNegativeNumber);
  cmd.add_option("--jobs", a.jobs, "Worker threads")->check(CLI::PositiveNumber);
  cmd.add_option("--out", a.out, "Report path (JSON)")->required();
}

void print_summary(const CampaignReport& report) {
  std::printf("%-24s %-9s %5s %9s %13s %12s %7s\n", "suite", "defense", "size", "violation",
              "indeterminate", "no-violation", "errored");
  for (const auto& s : report.suites) {
    std::printf("%-24s %-9s %5zu %9zu %13zu %12zu %7zu\n", s.suite.c_str(),
                std::string(to_string(s.defense)).c_str(), s.size, s.counts.violation,
                s.counts.indeterminate, s.counts.no_violation, s.counts.errored);
  }
  if (report.mode == Mode::Differential) {
    std::printf("\n%-32s", "testcase");
    for (auto d : report.defenses) std::printf(" %-14s", std::string(to_string(d)).c_str());
    std::printf("\n");
    std::map<std::string, std::map<DefenseKind, Outcome>> rows;
    std::vector<std::string> order;
    for (const auto& s : report.suites) {
      for (const auto& v : s.verdicts) {
        const auto key = s.suite + "/" + v.testcase_id;
        if (!rows.count(key)) order.push_back(key);
        rows[key][s.defense] = v.outcome;
      }
    }
    for (const auto& key : order) {
      std::printf("%-32s", key.c_str());
      for (auto d : report.defenses) {
        auto it = rows[key].find(d);
        std::printf(" %-14s",
                    it == rows[key].end() ? "-" : std::string(to_string(it->second)).c_str());
      }
      std::printf("\n");
    }
  }
  if (report.partial) std::printf("budget exhausted: report is partial\n");
}

int run(Mode mode, const CampaignArgs& a) {
  const auto config = load_config(a.config);

  CampaignOptions opt;
  opt.mode = mode;
  opt.debug = a.debug;
  opt.jobs = a.jobs;
  opt.config_path = a.config;
  if (a.budget > 0) opt.budget = std::chrono::duration<double>(a.budget);

  for (const auto& d : a.defenses) opt.defenses.push_back(*parse_defense_kind(d));
  if (opt.defenses.empty()) {
    if (mode != Mode::Differential && config.defense != DefenseKind::None) {
      opt.defenses.push_back(config.defense);
    } else {
      opt.defenses = {DefenseKind::Expat, DefenseKind::Patriot, DefenseKind::Iotguard};
    }
  }

  for (const auto& manifest : a.suites) opt.suites.push_back(load_sequences(manifest, config));
  if (opt.suites.empty() || !a.counts.empty()) {
    if (mode == Mode::Fidelity) throw ConfigError("fidelity runs need --suite");
    CampaignOptions::Random r;
    r.sizes = a.counts;
    if (r.sizes.empty()) r.sizes.assign(std::begin(kCampaignSuiteSizes), std::end(kCampaignSuiteSizes));
    r.max_events = a.max_events;
    r.seed = a.seed_given ? a.seed : config.seed.value_or(0);
    opt.random = r;
  }

  const auto report = run_campaign(config, opt);
  std::ofstream out(a.out, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + a.out);
  out << report_to_json(report) << "\n";
  out.close();

  print_summary(report);
  if (report.errored() != 0) {
    std::fprintf(stderr, "%zu testcase(s) errored\n", report.errored());
    return 2;
  }
  return report.partial ? 3 : 0;
}

int verify(const std::string& root) {
  int failures = 0;
  for (const auto& f : discover_fixtures(root)) {
    const auto result = verify_fixture(f);
    std::printf("%s %s\n", result.pass ? "PASS" : "FAIL", f.sequence_path.string().c_str());
    for (const auto& m : result.mismatches) std::printf("  %s\n", m.c_str());
    failures += result.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vetting harness for runtime policy enforcement defenses"};
  app.require_subcommand(1);

  CampaignArgs fidelity_args, stress_args, diff_args;
  auto* fidelity = app.add_subcommand("fidelity", "Run scripted scenarios against defenses");
  add_campaign_options(*fidelity, fidelity_args, false);
  auto* stress = app.add_subcommand("stress", "Run randomly generated suites per defense");
  add_campaign_options(*stress, stress_args, true);
  auto* diff = app.add_subcommand("diff", "Run one shared suite set against several defenses");
  add_campaign_options(*diff, diff_args, true);

  std::string fixtures_root = "fixtures";
  auto* check = app.add_subcommand("verify", "Check scenario fixtures against their expectations");
  check->add_option("--fixtures", fixtures_root, "Fixture directory")->check(CLI::ExistingDirectory);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*fidelity) return run(Mode::Fidelity, fidelity_args);
    if (*stress) return run(Mode::Stress, stress_args);
    if (*diff) return run(Mode::Differential, diff_args);
    return verify(fixtures_root);
  } catch (const vetbench::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
