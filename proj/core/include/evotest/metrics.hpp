#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evotest/executor.hpp"
#include "evotest/gateway.hpp"
#include "evotest/stopping.hpp"

namespace evotest {

struct SearchOutcome;
struct TestFileArtifact;

/// Inputs of the per-iteration compute model. Token quantities are counts,
/// f_* are FLOPs per primitive operation.
struct FlopsParams {
  double n_actor = 0;    // actor model parameters
  double n_ut = 0;       // test-writer model parameters
  double l_src = 0;      // source length in tokens
  double r = 0;          // edge cases per iteration
  double r_ut = 0;       // edge cases forwarded to test synthesis
  double m = 0;          // mutants executed per iteration
  double t_others = 0;   // system prompt and task description tokens
  double t_ec = 0;       // tokens per edge case
  double t_ut_out = 0;   // tokens of the generated test file
  double f_exec = 0;
  double f_mut = 0;
  double f_critic = 0;
  double f_other = 0;

  void validate() const;
  friend bool operator==(const FlopsParams&, const FlopsParams&) = default;
};

Json to_json(const FlopsParams& p);
FlopsParams flops_params_from_json(const Json& j);

/// Mutants generated per iteration before sampling.
inline constexpr double kMutantPoolAverage = 30.0;

struct FlopsBreakdown {
  double actor = 0;
  double exec_total = 0;
  double mut_total = 0;
  double critic_total = 0;
  double other_total = 0;
  double iteration = 0;  // sum of the five terms above
  double synthesis = 0;  // once per run
};

/// 2 * n_actor * ((l_src + r*t_ec + t_others) + r*t_ec).
double flops_actor(const FlopsParams& p);
/// Actor, execution, mutation, critic and other terms; the per-run test
/// synthesis term is excluded.
double flops_iteration(const FlopsParams& p);
/// 2 * n_ut * ((l_src + r_ut*t_ec + t_others) + t_ut_out).
double flops_synthesis(const FlopsParams& p);
FlopsBreakdown flops_breakdown(const FlopsParams& p);

/// 2 * n_params * tokens for the tokens recorded in a usage bucket.
double flops_from_usage(const UsageStats& usage, double n_params);

inline constexpr double kTera = 1e12;

/// Plain-text category table: LLM iteration, final test generation, other.
std::string flops_table(const std::vector<std::pair<std::string, FlopsParams>>& settings);

struct RunSummary {
  std::string run_id;
  std::string source;
  int stages_used = 0;
  std::optional<StopReason> stop_reason;
  std::string failure;
  bool resolution = false;
  std::int64_t wall_time_ms = 0;
  std::optional<CoverageReport> coverage_final;
  std::optional<CoverageReport> coverage_search;

  friend bool operator==(const RunSummary&, const RunSummary&) = default;
};

Json to_json(const RunSummary& summary);
RunSummary run_summary_from_json(const Json& j);

/// Resolution holds when the search stopped on threshold or plateau and
/// the artifact passed the syntax check.
RunSummary summarize_run(const SearchOutcome& outcome, const TestFileArtifact* artifact,
                         std::optional<CoverageReport> coverage_final,
                         std::int64_t wall_time_ms);

struct IterationBin {
  int runs = 0;
  int resolved = 0;
  double mean_wall_time_ms = 0;
};

struct ResolutionStats {
  int runs = 0;
  int resolved = 0;
  /// Keyed by stages used.
  std::map<int, IterationBin> by_stages;

  double rate() const noexcept { return runs ? static_cast<double>(resolved) / runs : 0.0; }
};

ResolutionStats resolution_stats(std::span<const RunSummary> runs);
Json to_json(const ResolutionStats& stats);

}  // namespace evotest
