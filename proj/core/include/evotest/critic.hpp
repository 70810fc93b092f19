#pragma once

#include <span>
#include <string>
#include <vector>

#include "evotest/executor.hpp"

namespace evotest {

/// Weights of the stage reward. theta is the coverage level above which the
/// coverage term earns a 50% bonus slope.
struct CriticParams {
  double alpha = 1.0;
  double beta = 2.0;
  double gamma = 1.0;
  double theta = 0.8;

  void validate() const;
  friend bool operator==(const CriticParams&, const CriticParams&) = default;
};

struct RewardInputs {
  double exception_signal = 0.0;  // c
  double coverage = 0.0;          // kappa (line coverage)
  double mutation_score = 0.0;    // mu

  friend bool operator==(const RewardInputs&, const RewardInputs&) = default;
};

struct RewardRecord {
  RewardInputs inputs;
  double unnormalized = 0.0;
  double normalized = 0.0;
  CriticParams params;

  friend bool operator==(const RewardRecord&, const RewardRecord&) = default;
};

/// Distinct exception types surfaced by one stage, and their density.
struct ExceptionSignal {
  double value = 0.0;
  std::vector<std::string> types;  // sorted, unique

  friend bool operator==(const ExceptionSignal&, const ExceptionSignal&) = default;
};

/// [alpha*c + beta*(kappa + max(0, (kappa - theta) * 0.5))] * gamma * mu.
/// Throws kDomain when an input leaves [0, 1].
double reward_unnormalized(const RewardInputs& in, const CriticParams& p);

/// Maximum of reward_unnormalized over the unit cube, reached at c = kappa = mu = 1.
double reward_upper_bound(const CriticParams& p);

/// Min-max scaling against the analytic bounds [0, reward_upper_bound], clamped.
double normalize(double unnormalized, const CriticParams& p);

RewardRecord score(const RewardInputs& in, const CriticParams& p);

/// Distinct raised exception types divided by the number of executed cases,
/// clamped to [0, 1]. Zero for an empty batch.
ExceptionSignal exception_signal(std::span<const CaseOutcome> outcomes);

Json to_json(const CriticParams& p);
CriticParams critic_params_from_json(const Json& j);
Json to_json(const RewardRecord& record);
RewardRecord reward_record_from_json(const Json& j);
Json to_json(const ExceptionSignal& signal);

}  // namespace evotest
