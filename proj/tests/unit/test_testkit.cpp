#include <gtest/gtest.h>

#include "evotest/actor.hpp"
#include "testkit.hpp"

namespace evotest::testkit {
namespace {

TEST(SimProgram, AddReturnsSumAndCoversBody) {
  auto p = single_add();
  std::vector<EdgeCase> cases = {{"add", {{"a", 1}, {"b", 2}}}};
  auto run = p.execute(cases);
  ASSERT_EQ(run.outcomes.size(), 1u);
  EXPECT_EQ(run.outcomes[0].status, OutcomeStatus::kReturned);
  EXPECT_EQ(run.outcomes[0].value_digest, value_digest(3));
  EXPECT_DOUBLE_EQ(run.coverage.line, 1.0);
}

TEST(SimProgram, MutantFlipsAdditionToSubtraction) {
  auto p = single_add();
  std::vector<EdgeCase> cases = {{"add", {{"a", 1}, {"b", 2}}}};
  auto run = p.execute(cases, "m01");
  EXPECT_EQ(run.outcomes[0].value_digest, value_digest(-1));
}

TEST(SimProgram, PythonTypeRules) {
  EXPECT_THROW(py::add(1, "x"), Raise);
  EXPECT_EQ(py::add("a", "b"), "ab");
  EXPECT_TRUE(py::eq(1, 1.0));
  EXPECT_TRUE(py::eq(true, 1));
  EXPECT_FALSE(py::eq(0, "0"));
  EXPECT_THROW(py::lt(nullptr, 0), Raise);
  try {
    py::truediv(1, 0);
    FAIL();
  } catch (const Raise& r) {
    EXPECT_EQ(r.type, "ZeroDivisionError");
  }
  EXPECT_EQ(py::len("\xC3\xBC"), 1);
}

TEST(SimProgram, Arith5HandCountedCoverage) {
  auto p = arith5();
  // One case hitting only the else path of sign.
  std::vector<EdgeCase> cases = {{"sign", {{"x", 0}}}};
  auto run = p.execute(cases);
  // 5 def lines + 22, 24, 26.
  EXPECT_EQ(run.coverage.totals.covered_lines, 8);
  EXPECT_EQ(run.coverage.totals.lines, 27);
  EXPECT_EQ(run.coverage.totals.covered_branches, 2);
  EXPECT_EQ(run.coverage.totals.branches, 16);
  EXPECT_EQ(run.coverage.totals.covered_functions, 1);
}

TEST(BracketCheck, Cases) {
  EXPECT_TRUE(bracket_check("def test_a():\n    assert f(1) == [1]\n").ok);
  EXPECT_FALSE(bracket_check("def test_a(:\n").ok);
  EXPECT_TRUE(bracket_check("x = '(' # )\n").ok);
  EXPECT_TRUE(bracket_check("x = \"\"\"(\n\"\"\"\n").ok);
  EXPECT_FALSE(bracket_check("").ok);
  EXPECT_FALSE(bracket_check("x = 'abc\n").ok);
}

TEST(KillFixtures, TwentyWellFormedFixtures) {
  const auto& fx = kill_fixtures();
  EXPECT_EQ(fx.size(), 20u);
  for (const auto& f : fx) {
    auto width = parse_row(f.baseline).size();
    for (const auto& row : f.mutants) EXPECT_EQ(parse_row(row).size(), width) << f.name;
  }
}

}  // namespace
}  // namespace evotest::testkit
