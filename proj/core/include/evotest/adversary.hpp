#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "evotest/executor.hpp"

namespace evotest {

enum class Verdict { kKilled, kSurvived, kError, kTimeout };

const char* to_string(Verdict verdict) noexcept;

struct MutantResult {
  MutantDescriptor mutant;
  Verdict verdict = Verdict::kSurvived;
  std::string detail;
};

struct MutationReport {
  /// Pool size before sampling.
  int generated_count = 0;
  std::vector<MutantResult> executed;
  double mu = 0.0;
  /// No killed or survived mutant to score; mu is 0.
  bool degenerate = false;
  /// The worker could not mutate the source; mu is 0.
  bool unavailable = false;
  std::string note;

  int killed() const noexcept;
  int survived() const noexcept;
};

struct AdversaryConfig {
  int pool_target = 30;
  int sample_size = 10;
  std::uint64_t seed = 0;

  void validate() const;
  friend bool operator==(const AdversaryConfig&, const AdversaryConfig&) = default;
};

Json to_json(const AdversaryConfig& cfg);
AdversaryConfig adversary_config_from_json(const Json& j);
Json to_json(const MutationReport& report);

/// Seed used for the pool and sample of one stage.
std::uint64_t stage_seed(std::uint64_t run_seed, int stage) noexcept;

/// min(m, |pool|) distinct descriptors chosen uniformly with a seeded
/// mt19937_64, returned in pool order.
std::vector<MutantDescriptor> sample_mutants(std::span<const MutantDescriptor> pool, int m,
                                             std::uint64_t seed);

/// Compares a mutant's outcomes with the baseline, case by case. A case
/// kills the mutant when both runs returned or raised and the status, value
/// digest or exception type differ. Without a kill, a fresh timeout gives
/// kTimeout, a fresh crash or a misaligned result gives kError.
Verdict classify(std::span<const CaseOutcome> baseline, std::span<const CaseOutcome> mutant);

/// killed / (killed + survived); 0 with `degenerate` set when both are 0.
double mutation_score(int killed, int survived, bool* degenerate = nullptr) noexcept;

/// Generates the stage's pool, samples it and runs every case against every
/// sampled mutant. Tool-level failures become kError verdicts (or an
/// unavailable report when generation itself fails); transport failures
/// propagate.
MutationReport evaluate_robustness(Executor& executor, const SourceArtifact& source,
                                   std::span<const EdgeCase> cases,
                                   std::span<const CaseOutcome> baseline,
                                   const AdversaryConfig& cfg, int stage);

}  // namespace evotest
