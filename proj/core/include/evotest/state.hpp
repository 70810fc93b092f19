#pragma once

#include <set>
#include <string>
#include <vector>

#include "evotest/critic.hpp"
#include "evotest/edge_case.hpp"
#include "evotest/executor.hpp"

namespace evotest {

enum class ProposalOrigin { kColdStart, kLlm };

const char* to_string(ProposalOrigin origin) noexcept;

/// The cases one stage executed, with their baseline outcomes and the
/// normalized reward the stage earned.
struct StageBatch {
  int stage = 0;
  ProposalOrigin origin = ProposalOrigin::kColdStart;
  std::vector<EdgeCase> cases;
  std::vector<CaseOutcome> outcomes;
  double reward = 0.0;

  friend bool operator==(const StageBatch&, const StageBatch&) = default;
};

/// Persistent record carried across stages: edge-case batches, mutation
/// scores, coverage reports, exception signals and normalized rewards.
/// Histories are append-only and always share one length.
class SearchState {
 public:
  int stage_index() const noexcept { return static_cast<int>(rewards_.size()); }
  bool empty() const noexcept { return rewards_.empty(); }

  const std::vector<StageBatch>& edge_case_history() const noexcept { return batches_; }
  const std::vector<double>& mutation_history() const noexcept { return mutation_; }
  const std::vector<CoverageReport>& coverage_history() const noexcept { return coverage_; }
  const std::vector<ExceptionSignal>& exception_history() const noexcept { return exceptions_; }
  const std::vector<double>& reward_history() const noexcept { return rewards_; }

  /// Canonical forms of every case ever proposed.
  std::set<std::string> seen_canonical() const;

  Json to_json() const;

  friend bool operator==(const SearchState&, const SearchState&) = default;

  friend SearchState update_state(SearchState state, StageBatch batch, double mu,
                                  CoverageReport coverage, ExceptionSignal exceptions,
                                  double reward);

 private:
  std::vector<StageBatch> batches_;
  std::vector<double> mutation_;
  std::vector<CoverageReport> coverage_;
  std::vector<ExceptionSignal> exceptions_;
  std::vector<double> rewards_;
};

/// Appends one stage to every history. Throws kDomain when mu or reward
/// leaves [0, 1].
SearchState update_state(SearchState state, StageBatch batch, double mu,
                         CoverageReport coverage, ExceptionSignal exceptions, double reward);

Json to_json(const StageBatch& batch);

}  // namespace evotest
