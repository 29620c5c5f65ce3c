#include "vetbench/fixtures.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "text.hpp"
#include "vetbench/error.hpp"

namespace vetbench {

ScenarioFixture load_fixture(const std::filesystem::path& sequence_path) {
  std::ifstream in(sequence_path);
  if (!in) throw Error("cannot read " + sequence_path.string());

  ScenarioFixture f;
  f.sequence_path = sequence_path;
  f.config_path = sequence_path.parent_path().parent_path() / "testbed.cfg";

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto text = detail::trim(line);
    if (text.substr(0, 2) != "#@") continue;
    text = detail::trim(text.substr(2));
    const auto colon = text.find(':');
    const auto key = detail::trim(text.substr(0, colon));
    const auto rest = colon == std::string_view::npos ? std::string_view{}
                                                      : detail::trim(text.substr(colon + 1));
    auto fail = [&](const std::string& msg) {
      throw ParseError(sequence_path.string() + ": " + msg, line_no, 0);
    };
    if (key == "about") {
      f.about = std::string(rest);
    } else if (key == "expect") {
      std::istringstream cells{std::string(rest)};
      std::string cell;
      while (cells >> cell) {
        const auto eq = cell.find('=');
        if (eq == std::string::npos) fail("expected defense=outcome, got '" + cell + "'");
        auto kind = parse_defense_kind(cell.substr(0, eq));
        auto outcome = parse_outcome(cell.substr(eq + 1));
        if (!kind || *kind == DefenseKind::None || !outcome) fail("bad cell '" + cell + "'");
        f.expected[*kind] = *outcome;
      }
    } else {
      fail("unknown directive '" + std::string(key) + "'");
    }
  }
  if (f.expected.empty()) throw Error(sequence_path.string() + ": no expect directive");
  return f;
}

std::vector<ScenarioFixture> discover_fixtures(const std::filesystem::path& root) {
  std::vector<std::filesystem::path> paths;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(root)) {
    const auto& p = entry.path();
    if (entry.is_regular_file() && p.extension() == ".events" &&
        p.parent_path().filename() == "cases") {
      paths.push_back(p);
    }
  }
  std::sort(paths.begin(), paths.end());
  std::vector<ScenarioFixture> out;
  for (const auto& p : paths) out.push_back(load_fixture(p));
  return out;
}

FixtureResult verify_fixture(const ScenarioFixture& fixture) {
  FixtureResult result;
  const auto config = load_config(fixture.config_path);
  const auto seq = load_sequence(fixture.sequence_path, config.registry());
  for (const auto& [kind, expected] : fixture.expected) {
    auto pair = instantiate(config, kind);
    auto verdict = run_testcase(pair, seq, true);
    if (verdict.outcome != expected) {
      result.pass = false;
      std::string msg = seq.name + " under " + std::string(to_string(kind)) + ": expected " +
                        std::string(to_string(expected)) + ", got " +
                        std::string(to_string(verdict.outcome));
      if (!verdict.error.empty()) msg += " (" + verdict.error + ")";
      result.mismatches.push_back(std::move(msg));
    }
    result.verdicts.emplace(kind, std::move(verdict));
  }
  return result;
}

}  // namespace vetbench
