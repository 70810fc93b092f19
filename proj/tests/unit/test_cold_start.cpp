#include <gtest/gtest.h>

#include <set>

#include "evotest/actor.hpp"
#include "evotest/errors.hpp"
#include "testkit.hpp"

namespace evotest {
namespace {

std::vector<FunctionSignature> one_fn() { return {{"f", {"x"}, 1, 2}}; }

TEST(ColdStart, SingleFunctionIncludesZeroAndInt32Max) {
  auto b = cold_start(one_fn(), 5);
  ASSERT_EQ(b.cases.size(), 5u);
  std::set<std::string> dumps;
  for (const auto& c : b.cases) dumps.insert(c.arguments.dump());
  EXPECT_TRUE(dumps.count(R"({"x":0})"));
  EXPECT_TRUE(dumps.count(R"({"x":2147483647})"));
  EXPECT_EQ(b.stage, 1);
  EXPECT_EQ(b.origin, ProposalOrigin::kColdStart);
  EXPECT_FALSE(b.raw_response.has_value());
}

TEST(ColdStart, EmptySignaturesIsNoTargets) {
  try {
    cold_start({}, 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNoTargets);
  }
}

TEST(ColdStart, BudgetBelowFunctionCountIsRejected) {
  std::vector<FunctionSignature> sigs{{"f", {"x"}, 1, 1}, {"g", {"y"}, 2, 2}};
  EXPECT_THROW(cold_start(sigs, 1), Error);
}

TEST(ColdStart, DeterministicAndDuplicateFree) {
  auto sigs = testkit::arith5().signatures();
  auto a = cold_start(sigs, 40);
  auto b = cold_start(sigs, 40);
  ASSERT_EQ(a.cases.size(), b.cases.size());
  std::set<std::string> seen;
  for (std::size_t i = 0; i < a.cases.size(); ++i) {
    EXPECT_EQ(a.cases[i].canonical(), b.cases[i].canonical());
    EXPECT_TRUE(seen.insert(a.cases[i].canonical()).second);
  }
}

TEST(ColdStart, ArityAndJsonRoundTrip) {
  auto sigs = testkit::arith5().signatures();
  for (const auto& c : cold_start(sigs, 60).cases) {
    const auto* sig = find_signature(sigs, c.function);
    ASSERT_NE(sig, nullptr);
    EXPECT_TRUE(matches_signature(c, *sig));
    auto back = edge_case_from_json(Json::parse(to_json(c).dump()));
    EXPECT_EQ(back.canonical(), c.canonical());
  }
}

TEST(ColdStart, RoundRobinAcrossFunctions) {
  std::vector<FunctionSignature> sigs{{"f", {"x"}, 1, 1}, {"g", {"y"}, 2, 2}, {"h", {"z"}, 3, 3}};
  auto b = cold_start(sigs, 7);
  std::vector<std::string> order;
  for (const auto& c : b.cases) order.push_back(c.function);
  EXPECT_EQ(order, (std::vector<std::string>{"f", "g", "h", "f", "g", "h", "f"}));
}

TEST(ColdStart, DefaultBudget) {
  EXPECT_EQ(default_cold_start_budget(1), 5);
  EXPECT_EQ(default_cold_start_budget(5), 25);
  EXPECT_EQ(default_cold_start_budget(12), 60);
  EXPECT_EQ(default_cold_start_budget(80), 80);
  EXPECT_EQ(cold_start(one_fn()).cases.size(), 5u);
}

TEST(ColdStart, StreamExhaustsForTinyCatalogUse) {
  // A zero-parameter function has exactly one case.
  std::vector<FunctionSignature> sigs{{"now", {}, 1, 1}};
  auto b = cold_start(sigs, 10);
  ASSERT_EQ(b.cases.size(), 1u);
  EXPECT_TRUE(b.cases[0].arguments.empty());
}

TEST(SeedCatalog, CoversEveryCategoryAndRequiredValues) {
  const auto& cat = seed_catalog();
  std::set<SeedCategory> categories;
  std::set<std::string> values;
  for (const auto& s : cat) {
    categories.insert(s.category);
    EXPECT_TRUE(values.insert(s.value.dump()).second) << "duplicate " << s.value.dump();
  }
  EXPECT_EQ(categories.size(), 6u);
  for (const char* v : {"0", "-1", "1", "2147483647", "9223372036854775807", "\"NaN\"",
                        "\"Infinity\"", "\"-Infinity\"", "\"\"", "[]", "{}", "null"}) {
    EXPECT_TRUE(values.count(v)) << v;
  }
  EXPECT_EQ(cat[0].value, 0);
  EXPECT_EQ(cat[1].value, 2147483647);
}

}  // namespace
}  // namespace evotest
