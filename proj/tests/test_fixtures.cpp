#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "support.hpp"
#include "vetbench/error.hpp"
#include "vetbench/fixtures.hpp"

using namespace vetbench;

TEST(Fixtures, EveryShippedScenarioPasses) {
  const auto all = discover_fixtures(VETBENCH_FIXTURES_DIR);
  ASSERT_GE(all.size(), 13u);
  for (const auto& f : all) {
    const auto r = verify_fixture(f);
    EXPECT_TRUE(r.pass) << f.sequence_path << "\n"
                        << (r.mismatches.empty() ? "" : r.mismatches.front());
    EXPECT_EQ(r.verdicts.size(), f.expected.size());
  }
}

TEST(Fixtures, DirectivesAreParsed) {
  const auto f = load_fixture(vbtest::fixture_path("expat/cases/motion-while-away.events"));
  EXPECT_FALSE(f.about.empty());
  EXPECT_EQ(f.expected.at(DefenseKind::Expat), Outcome::Violation);
  EXPECT_EQ(f.expected.at(DefenseKind::Iotguard), Outcome::NoViolation);
  EXPECT_EQ(f.config_path.filename(), "testbed.cfg");
}

class ScratchFixture : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = std::filesystem::temp_directory_path() /
            (std::string("vetbench-fixture-") +
             ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::remove_all(root_);
    std::filesystem::create_directories(root_ / "case" / "cases");
    for (auto f : {"testbed.cfg", "policies.txt"}) {
      std::filesystem::copy_file(vbtest::fixture_path(std::string("expat/") + f), root_ / "case" / f);
    }
  }
  void TearDown() override { std::filesystem::remove_all(root_); }

  std::filesystem::path write(const std::string& body) {
    const auto path = root_ / "case" / "cases" / "x.events";
    std::ofstream(path) << body;
    return path;
  }

  std::filesystem::path root_;
};

TEST_F(ScratchFixture, WrongExpectationIsReported) {
  const auto path = write("#@ expect: expat=no-violation\nHomeMode = OFF\nIndoorMotionSensor = ON\n");
  const auto r = verify_fixture(load_fixture(path));
  EXPECT_FALSE(r.pass);
  ASSERT_EQ(r.mismatches.size(), 1u);
  EXPECT_NE(r.mismatches[0].find("expat"), std::string::npos);
  EXPECT_EQ(discover_fixtures(root_).size(), 1u);
}

TEST_F(ScratchFixture, MalformedDirectivesRaise) {
  EXPECT_THROW(load_fixture(write("#@ expect: expat=perhaps\nHomeMode = OFF\n")), Error);
  EXPECT_THROW(load_fixture(write("#@ expect: wizard=violation\nHomeMode = OFF\n")), Error);
  EXPECT_THROW(load_fixture(write("HomeMode = OFF\n")), Error);
}
