#include "evotest/critic.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "evotest/errors.hpp"

namespace evotest {

namespace {

void require_unit(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw Error(ErrorKind::kDomain,
                std::string(name) + " must lie in [0, 1], got " + std::to_string(value));
  }
}

}  // namespace

void CriticParams::validate() const {
  auto positive = [](double v, const char* field) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorKind::kConfig,
                  std::string(field) + " must be a positive finite number, got " +
                      std::to_string(v));
    }
  };
  positive(alpha, "critic.alpha");
  positive(beta, "critic.beta");
  positive(gamma, "critic.gamma");
  if (!(theta >= 0.0 && theta <= 1.0)) {
    throw Error(ErrorKind::kConfig,
                "critic.theta must lie in [0, 1], got " + std::to_string(theta));
  }
}

double reward_unnormalized(const RewardInputs& in, const CriticParams& p) {
  require_unit(in.exception_signal, "exception signal c");
  require_unit(in.coverage, "coverage kappa");
  require_unit(in.mutation_score, "mutation score mu");
  const double bonus = std::max(0.0, (in.coverage - p.theta) * 0.5);
  const double bracket = p.alpha * in.exception_signal + p.beta * (in.coverage + bonus);
  return bracket * p.gamma * in.mutation_score;
}

double reward_upper_bound(const CriticParams& p) {
  return (p.alpha + p.beta * (1.0 + (1.0 - p.theta) / 2.0)) * p.gamma;
}

double normalize(double unnormalized, const CriticParams& p) {
  const double upper = reward_upper_bound(p);
  if (!(upper > 0.0)) return 0.0;
  return std::clamp(unnormalized / upper, 0.0, 1.0);
}

RewardRecord score(const RewardInputs& in, const CriticParams& p) {
  RewardRecord out;
  out.inputs = in;
  out.params = p;
  out.unnormalized = reward_unnormalized(in, p);
  out.normalized = normalize(out.unnormalized, p);
  return out;
}

ExceptionSignal exception_signal(std::span<const CaseOutcome> outcomes) {
  ExceptionSignal out;
  if (outcomes.empty()) return out;
  std::set<std::string> types;
  for (const auto& o : outcomes) {
    if (o.status == OutcomeStatus::kRaised && o.exception_type) types.insert(*o.exception_type);
  }
  out.types.assign(types.begin(), types.end());
  out.value = std::clamp(
      static_cast<double>(types.size()) / static_cast<double>(outcomes.size()), 0.0, 1.0);
  return out;
}

Json to_json(const CriticParams& p) {
  return {{"alpha", p.alpha}, {"beta", p.beta}, {"gamma", p.gamma}, {"theta", p.theta}};
}

CriticParams critic_params_from_json(const Json& j) {
  CriticParams p;
  p.alpha = j.value("alpha", p.alpha);
  p.beta = j.value("beta", p.beta);
  p.gamma = j.value("gamma", p.gamma);
  p.theta = j.value("theta", p.theta);
  return p;
}

Json to_json(const RewardRecord& record) {
  return {{"c", record.inputs.exception_signal},
          {"kappa", record.inputs.coverage},
          {"mu", record.inputs.mutation_score},
          {"unnormalized", record.unnormalized},
          {"normalized", record.normalized},
          {"params", to_json(record.params)}};
}

RewardRecord reward_record_from_json(const Json& j) {
  RewardRecord r;
  r.inputs.exception_signal = j.at("c").get<double>();
  r.inputs.coverage = j.at("kappa").get<double>();
  r.inputs.mutation_score = j.at("mu").get<double>();
  r.unnormalized = j.at("unnormalized").get<double>();
  r.normalized = j.at("normalized").get<double>();
  r.params = critic_params_from_json(j.at("params"));
  return r;
}

Json to_json(const ExceptionSignal& signal) {
  return {{"c", signal.value}, {"types", signal.types}};
}

}  // namespace evotest
