#include <gtest/gtest.h>

#include "support.hpp"
#include "vetbench/error.hpp"
#include "vetbench/policy.hpp"

using namespace vetbench;

namespace {

DeviceRegistry home() {
  DeviceRegistry r;
  auto door = vbtest::binary("FrontDoor");
  door.domain = Domain::symbols({"CLOSED", "OPEN"});
  door.initial = "CLOSED";
  r.add(door);
  r.add(vbtest::binary("HomeMode", "ON"));
  r.add(vbtest::ranged("Temp", 0, 120, 65));
  return r;
}

}  // namespace

TEST(Policy, ParsesEachDialect) {
  auto inv = parse_policy_line("PI8: invariant NOT (W = OPEN) OR (H = OFF AND AC = OFF)");
  EXPECT_EQ(inv.dialect(), Dialect::Invariant);
  EXPECT_EQ(inv.id, "PI8");

  auto g = parse_policy_line("P1: guard deny-if action FrontDoor.Open() when HomeMode = OFF");
  const auto& guard = std::get<ActionGuard>(g.form);
  EXPECT_EQ(guard.device, "FrontDoor");
  EXPECT_EQ(guard.command, "Open");
  EXPECT_EQ(guard.mode, GuardMode::DenyIf);

  auto a = parse_policy_line("PI1: guard allow-only-if action WaterValve.Off when Smoke = OFF");
  EXPECT_EQ(std::get<ActionGuard>(a.form).mode, GuardMode::AllowOnlyIf);

  auto imp = parse_policy_line("I1: implication restrict if M = ON, L = ON then H = ON");
  const auto& im = std::get<Implication>(imp.form);
  EXPECT_EQ(im.premise.size(), 2u);
  EXPECT_EQ(im.conclusion.size(), 1u);

  EXPECT_EQ(parse_policy_line("F: flow untrusted-to-trusted").dialect(), Dialect::Flow);
  EXPECT_EQ(parse_policy_line("G: general no-cycle").dialect(), Dialect::General);
}

TEST(Policy, DialectKeywordOptionalWhenGiven) {
  auto p = parse_policy("X: NOT (A = ON)", Dialect::Invariant);
  EXPECT_EQ(p.dialect(), Dialect::Invariant);
  EXPECT_THROW(parse_policy("X: guard deny-if action A.On when B = ON", Dialect::Invariant),
               ParseError);
}

TEST(Policy, ToStringRoundTrips) {
  for (const char* text : {
           "P1: guard deny-if action FrontDoor.Open when HomeMode = OFF",
           "PI8: invariant NOT (W = OPEN) OR (H = OFF AND AC = OFF)",
           "I1: implication allow if M = ON AND L = ON then H = ON",
           "F: flow untrusted-to-trusted",
           "G: general no-cycle",
       }) {
    const auto p = parse_policy_line(text);
    EXPECT_EQ(parse_policy_line(p.to_string()), p) << text;
  }
}

TEST(Policy, FileErrorsCarryLineNumbers) {
  const std::string text = "# header\nP1: invariant A = ON\n\nP2: invariant A = \n";
  try {
    parse_policy_file(text);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4u);
  }
  EXPECT_THROW(parse_policy_file("P1: invariant A = ON\nP1: invariant A = OFF\n"), ParseError);
  EXPECT_EQ(parse_policy_file("P1: invariant A = ON # note\n").size(), 1u);
}

TEST(Policy, RejectsUnknownDialectAndMode) {
  EXPECT_THROW(parse_policy_line("X: rule A = ON"), ParseError);
  EXPECT_THROW(parse_policy_line("X: guard maybe action A.On when B = ON"), ParseError);
  EXPECT_THROW(parse_policy_line("X: general no-loop"), ParseError);
  EXPECT_THROW(parse_policy_line("invariant A = ON"), ParseError);
}

TEST(Policy, CheckNamesThePolicy) {
  const auto r = home();
  EXPECT_NO_THROW(check_policy(
      parse_policy_line("P1: guard deny-if action FrontDoor.Open when HomeMode = OFF"), r));
  try {
    check_policy(parse_policy_line("P9: guard deny-if action FrontDoor.Lock when HomeMode = OFF"),
                 r);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("P9"), std::string::npos);
  }
  EXPECT_THROW(check_policy(parse_policy_line("P2: invariant Temp = HOT"), r), ValidationError);
  EXPECT_THROW(check_policy(parse_policy_line("P3: invariant Window = OPEN"), r), ValidationError);
}

TEST(Policy, Relevance) {
  const auto inv = parse_policy_line("PI8: invariant NOT (W = OPEN) OR (AC = OFF)");
  EXPECT_TRUE(relevant(inv, "AC"));
  EXPECT_FALSE(relevant(inv, "TV"));
  EXPECT_TRUE(relevant(inv, "TV", Selection::All));
  const auto g = parse_policy_line("P1: guard deny-if action D.Open when M = OFF");
  EXPECT_TRUE(relevant(g, "D"));
  EXPECT_FALSE(relevant(g, "M"));
  const auto imp = parse_policy_line("I: implication restrict if M = ON then H = ON");
  EXPECT_TRUE(relevant(imp, "H"));
  EXPECT_FALSE(relevant(imp, "M"));
}
