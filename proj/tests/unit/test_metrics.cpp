#include <gtest/gtest.h>

#include <random>

#include "evotest/engine.hpp"
#include "evotest/errors.hpp"
#include "evotest/metrics.hpp"
#include "evotest/synthesis.hpp"
#include "testkit.hpp"

namespace evotest {
namespace {

using testkit::ulp_distance;

FlopsParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  FlopsParams p;
  p.n_actor = std::floor(1e9 + u(rng) * 1e11);
  p.n_ut = std::floor(1e9 + u(rng) * 1e11);
  p.l_src = std::floor(u(rng) * 20000);
  p.r = std::floor(1 + u(rng) * 50);
  p.r_ut = std::floor(1 + u(rng) * 50);
  p.m = std::floor(u(rng) * 30);
  p.t_others = std::floor(u(rng) * 8000);
  p.t_ec = std::floor(1 + u(rng) * 1000);
  p.t_ut_out = std::floor(u(rng) * 10000);
  p.f_exec = u(rng) * 1e7;
  p.f_mut = u(rng) * 1e4;
  p.f_critic = u(rng) * 1e3;
  p.f_other = u(rng) * 1e4;
  return p;
}

TEST(Flops, MatchesOracleWithinOneUlp) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    const auto p = random_params(rng);
    const auto o = testkit::flops_oracle(p);
    const auto b = flops_breakdown(p);
    EXPECT_LE(ulp_distance(b.actor, o.actor), 1u);
    EXPECT_LE(ulp_distance(b.exec_total, o.exec), 1u);
    EXPECT_LE(ulp_distance(b.mut_total, o.mut), 1u);
    EXPECT_LE(ulp_distance(b.critic_total, o.critic), 1u);
    EXPECT_LE(ulp_distance(b.other_total, o.other), 1u);
    EXPECT_LE(ulp_distance(b.iteration, o.iteration), 1u);
    EXPECT_LE(ulp_distance(b.synthesis, o.synthesis), 1u);
    EXPECT_EQ(flops_iteration(p), b.iteration);
    EXPECT_EQ(flops_actor(p), b.actor);
    EXPECT_EQ(flops_synthesis(p), b.synthesis);
  }
}

TEST(Flops, PublishedFigures) {
  const auto large = flops_breakdown(testkit::flops_reference_large());
  const auto small = flops_breakdown(testkit::flops_reference_small());
  EXPECT_EQ(large.actor / kTera, 3584.0);
  EXPECT_EQ(large.synthesis / kTera, 819.2);
  EXPECT_EQ(small.actor / kTera, 812.0);
  EXPECT_EQ(small.synthesis / kTera, 128.0);
  // The non-model terms are negligible next to the model terms.
  EXPECT_LT(large.iteration - large.actor, 1e-3 * kTera);
  EXPECT_NEAR(large.iteration / kTera, 3584.0, 1e-3);
}

TEST(Flops, MonotoneInEveryInput) {
  const auto base = testkit::flops_reference_large();
  double FlopsParams::*fields[] = {&FlopsParams::n_actor, &FlopsParams::l_src, &FlopsParams::r,
                                   &FlopsParams::m, &FlopsParams::t_others, &FlopsParams::t_ec,
                                   &FlopsParams::f_exec, &FlopsParams::f_mut,
                                   &FlopsParams::f_critic, &FlopsParams::f_other};
  for (auto f : fields) {
    auto p = base;
    p.*f *= 2;
    EXPECT_GT(flops_iteration(p), flops_iteration(base));
  }
}

TEST(Flops, TableAndValidation) {
  const auto table = flops_table({{"large", testkit::flops_reference_large()},
                                  {"small", testkit::flops_reference_small()}});
  EXPECT_NE(table.find("3584.0000"), std::string::npos);
  EXPECT_NE(table.find("819.2000"), std::string::npos);
  EXPECT_NE(table.find("812.0000"), std::string::npos);
  EXPECT_NE(table.find("128.0000"), std::string::npos);
  FlopsParams bad;
  bad.r = -1;
  EXPECT_THROW(bad.validate(), Error);
  EXPECT_THROW(flops_params_from_json({{"r", "ten"}}), Error);
  EXPECT_EQ(flops_params_from_json(to_json(testkit::flops_reference_large())),
            testkit::flops_reference_large());
  UsageStats u;
  u.prompt_tokens = 100;
  u.output_tokens = 28;
  EXPECT_EQ(flops_from_usage(u, 1e9), 2 * 1e9 * 128);
}

SearchOutcome outcome_with(StopReason reason, int stages) {
  SearchOutcome o;
  o.stop_reason = reason;
  for (int i = 0; i < stages; ++i) {
    o.state = update_state(std::move(o.state), StageBatch{i + 1, ProposalOrigin::kLlm, {}, {}, 0.0},
                           0.5, make_coverage({4, 2, 0, 0, 1, 1}, {}), {}, 0.4);
  }
  return o;
}

TEST(RunSummary, ResolutionRequiresConvergenceAndSyntax) {
  TestFileArtifact ok;
  ok.syntax_ok = true;
  ok.run_id = "r";
  TestFileArtifact broken;
  EXPECT_TRUE(summarize_run(outcome_with(StopReason::kPlateau, 3), &ok, {}, 5).resolution);
  EXPECT_TRUE(summarize_run(outcome_with(StopReason::kThreshold, 1), &ok, {}, 5).resolution);
  EXPECT_FALSE(summarize_run(outcome_with(StopReason::kMaxStages, 12), &ok, {}, 5).resolution);
  EXPECT_FALSE(summarize_run(outcome_with(StopReason::kPlateau, 3), &broken, {}, 5).resolution);
  EXPECT_FALSE(summarize_run(outcome_with(StopReason::kPlateau, 3), nullptr, {}, 5).resolution);
  const auto s = summarize_run(outcome_with(StopReason::kPlateau, 3), &ok, {}, 5);
  EXPECT_EQ(s.stages_used, 3);
  EXPECT_EQ(s.run_id, "r");
  ASSERT_TRUE(s.coverage_search);
  EXPECT_DOUBLE_EQ(s.coverage_search->line, 0.5);
  EXPECT_EQ(run_summary_from_json(to_json(s)), s);
}

TEST(ResolutionStats, HistogramTally) {
  std::vector<RunSummary> runs;
  auto add = [&](int stages, bool resolved, std::int64_t ms) {
    RunSummary r;
    r.stages_used = stages;
    r.resolution = resolved;
    r.wall_time_ms = ms;
    runs.push_back(r);
  };
  add(3, true, 10);
  add(3, false, 20);
  add(5, true, 40);
  add(1, true, 7);
  const auto stats = resolution_stats(runs);
  EXPECT_EQ(stats.runs, 4);
  EXPECT_EQ(stats.resolved, 3);
  EXPECT_DOUBLE_EQ(stats.rate(), 0.75);
  ASSERT_EQ(stats.by_stages.size(), 3u);
  EXPECT_EQ(stats.by_stages.at(3).runs, 2);
  EXPECT_EQ(stats.by_stages.at(3).resolved, 1);
  EXPECT_DOUBLE_EQ(stats.by_stages.at(3).mean_wall_time_ms, 15.0);
  int total = 0;
  for (const auto& [_, bin] : stats.by_stages) total += bin.runs;
  EXPECT_EQ(total, stats.runs);
  EXPECT_EQ(resolution_stats({}).rate(), 0.0);
}

}  // namespace
}  // namespace evotest
