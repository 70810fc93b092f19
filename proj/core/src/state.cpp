#include "evotest/state.hpp"

#include "evotest/errors.hpp"

namespace evotest {

const char* to_string(ProposalOrigin origin) noexcept {
  return origin == ProposalOrigin::kColdStart ? "cold_start" : "llm";
}

std::set<std::string> SearchState::seen_canonical() const {
  std::set<std::string> out;
  for (const auto& batch : batches_) {
    for (const auto& c : batch.cases) out.insert(c.canonical());
  }
  return out;
}

Json SearchState::to_json() const {
  Json j = {{"stage_index", stage_index()}};
  j["edge_cases"] = Json::array();
  for (const auto& b : batches_) j["edge_cases"].push_back(evotest::to_json(b));
  j["mu"] = mutation_;
  j["kappa"] = Json::array();
  for (const auto& c : coverage_) j["kappa"].push_back(evotest::to_json(c));
  j["c"] = Json::array();
  for (const auto& e : exceptions_) j["c"].push_back(evotest::to_json(e));
  j["R"] = rewards_;
  return j;
}

SearchState update_state(SearchState state, StageBatch batch, double mu,
                         CoverageReport coverage, ExceptionSignal exceptions, double reward) {
  if (!(mu >= 0.0 && mu <= 1.0)) {
    throw Error(ErrorKind::kDomain, "mutation score outside [0, 1]");
  }
  if (!(reward >= 0.0 && reward <= 1.0)) {
    throw Error(ErrorKind::kDomain, "normalized reward outside [0, 1]");
  }
  batch.stage = state.stage_index() + 1;
  batch.reward = reward;
  state.batches_.push_back(std::move(batch));
  state.mutation_.push_back(mu);
  state.coverage_.push_back(std::move(coverage));
  state.exceptions_.push_back(std::move(exceptions));
  state.rewards_.push_back(reward);
  return state;
}

Json to_json(const StageBatch& batch) {
  Json cases = Json::array();
  for (const auto& c : batch.cases) cases.push_back(to_json(c));
  Json outcomes = Json::array();
  for (const auto& o : batch.outcomes) outcomes.push_back(to_json(o));
  return {{"stage", batch.stage},
          {"origin", to_string(batch.origin)},
          {"cases", std::move(cases)},
          {"outcomes", std::move(outcomes)},
          {"reward", batch.reward}};
}

}  // namespace evotest
