#pragma once

#include <optional>
#include <string>
#include <vector>

#include "evotest/actor.hpp"
#include "evotest/adversary.hpp"
#include "evotest/archive.hpp"
#include "evotest/critic.hpp"
#include "evotest/errors.hpp"
#include "evotest/state.hpp"
#include "evotest/stopping.hpp"
#include "evotest/trace.hpp"

namespace evotest {

struct SearchConfig {
  CriticParams critic;
  StopConfig stop;
  AdversaryConfig adversary;
  std::size_t archive_capacity = 20;

  void validate() const;
};

/// Everything one stage produced, in the order the stage computed it.
struct StageRecord {
  int stage = 0;
  ProposalOrigin origin = ProposalOrigin::kColdStart;
  std::vector<EdgeCase> cases;
  std::optional<std::string> raw_response;
  BatchResult execution;
  MutationReport mutation;
  ExceptionSignal exceptions;
  RewardRecord reward;
  EliteArchive archive;
  /// Executor recoveries this stage needed (0 or 1).
  int executor_retries = 0;
};

Json to_json(const StageRecord& record);

struct SearchOutcome {
  std::vector<FunctionSignature> signatures;
  SearchState state;
  EliteArchive archive;
  std::vector<StageRecord> stages;
  StopReason stop_reason = StopReason::kAborted;
  /// Set when the loop ended on an error; state holds the completed stages.
  std::optional<ErrorKind> failure;
  std::string failure_detail;

  int stage_count() const noexcept { return state.stage_index(); }
  std::vector<RewardRecord> rewards() const;
  Json to_json() const;
};

/// Runs stages until a stopping condition fires, the stage cap is reached or
/// a stage fails. Each stage: proposals, baseline execution, mutation
/// analysis, exception signal, reward, archive update, state update. A
/// transport failure triggers one executor recovery and a re-run of the
/// stage's execution with the same proposals; a second failure ends the
/// run with failure kSessionLost.
SearchOutcome run_search(const SourceArtifact& source, Executor& executor,
                         ProposalSource& actor, const SearchConfig& cfg,
                         EventSink* sink = nullptr);

}  // namespace evotest
