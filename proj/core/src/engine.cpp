#include "evotest/engine.hpp"

#include "evotest/errors.hpp"

namespace evotest {

void SearchConfig::validate() const {
  critic.validate();
  stop.validate();
  adversary.validate();
  if (archive_capacity < 1) throw Error(ErrorKind::kConfig, "archive_capacity must be >= 1");
}

Json to_json(const StageRecord& r) {
  Json cases = Json::array();
  for (const auto& c : r.cases) cases.push_back(to_json(c));
  Json outcomes = Json::array();
  for (const auto& o : r.execution.outcomes) outcomes.push_back(to_json(o));
  Json j = {{"stage", r.stage},
            {"origin", to_string(r.origin)},
            {"cases", std::move(cases)},
            {"outcomes", std::move(outcomes)},
            {"coverage", to_json(r.execution.coverage)},
            {"budget_exceeded", r.execution.budget_exceeded},
            {"mutation", to_json(r.mutation)},
            {"exceptions", to_json(r.exceptions)},
            {"reward", to_json(r.reward)},
            {"archive", r.archive.to_json()},
            {"executor_retries", r.executor_retries}};
  if (r.raw_response) j["raw_response"] = *r.raw_response;
  return j;
}

std::vector<RewardRecord> SearchOutcome::rewards() const {
  std::vector<RewardRecord> out;
  for (const auto& s : stages) out.push_back(s.reward);
  return out;
}

Json SearchOutcome::to_json() const {
  Json sigs = Json::array();
  for (const auto& s : signatures) sigs.push_back(evotest::to_json(s));
  Json recs = Json::array();
  for (const auto& s : stages) recs.push_back(evotest::to_json(s));
  Json j = {{"signatures", std::move(sigs)},
            {"state", state.to_json()},
            {"archive", archive.to_json()},
            {"stages", std::move(recs)},
            {"stage_count", stage_count()},
            {"stop_reason", to_string(stop_reason)}};
  if (failure) {
    j["failure"] = to_string(*failure);
    j["failure_detail"] = failure_detail;
  }
  return j;
}

namespace {

struct Execution {
  BatchResult batch;
  MutationReport mutation;
  ExceptionSignal exceptions;
};

Execution execute_stage(Executor& executor, const SourceArtifact& source,
                        const std::vector<EdgeCase>& cases, const AdversaryConfig& adversary,
                        int stage) {
  Execution out;
  out.batch = executor.run_cases(source, cases);
  out.mutation =
      evaluate_robustness(executor, source, cases, out.batch.outcomes, adversary, stage);
  out.exceptions = exception_signal(out.batch.outcomes);
  return out;
}

}  // namespace

SearchOutcome run_search(const SourceArtifact& source, Executor& executor,
                         ProposalSource& actor, const SearchConfig& cfg, EventSink* sink) {
  cfg.validate();
  SearchOutcome out;
  out.archive = EliteArchive(cfg.archive_capacity);

  auto abort = [&](ErrorKind kind, std::string detail) {
    out.stop_reason = StopReason::kAborted;
    out.failure = kind;
    out.failure_detail = std::move(detail);
  };
  auto finish = [&] {
    if (!sink) return;
    Json end = {{"type", "search_end"},
                {"stop_reason", to_string(out.stop_reason)},
                {"stages", out.stage_count()},
                {"rewards", out.state.reward_history()}};
    if (out.failure) {
      end["failure"] = to_string(*out.failure);
      end["detail"] = out.failure_detail;
    }
    sink->emit(std::move(end));
  };

  try {
    out.signatures = executor.analyze(source);
  } catch (const Error& e) {
    abort(e.kind(), e.what());
    finish();
    return out;
  }
  if (sink) {
    Json sigs = Json::array();
    for (const auto& s : out.signatures) sigs.push_back(to_json(s));
    sink->emit({{"type", "run_start"}, {"source", source.path}, {"functions", sigs}});
  }
  if (out.signatures.empty()) {
    abort(ErrorKind::kNoTargets, "source defines no top-level functions");
    finish();
    return out;
  }

  for (int stage = 1;; ++stage) {
    ProposalBatch proposals;
    try {
      proposals = stage == 1 ? actor.cold_start(out.signatures)
                             : actor.propose(source, out.signatures, out.state);
    } catch (const Error& e) {
      abort(e.kind(), e.what());
      break;
    }
    if (proposals.cases.empty()) {
      abort(ErrorKind::kActorExhausted, "stage " + std::to_string(stage) + " has no cases");
      break;
    }

    StageRecord rec;
    rec.stage = stage;
    rec.origin = proposals.origin;
    rec.cases = std::move(proposals.cases);
    rec.raw_response = std::move(proposals.raw_response);

    std::optional<Execution> exec;
    std::string lost;
    for (int attempt = 0; attempt < 2 && !exec; ++attempt) {
      try {
        if (attempt > 0) {
          executor.recover();
          rec.executor_retries = attempt;
        }
        exec = execute_stage(executor, source, rec.cases, cfg.adversary, stage);
      } catch (const ExecutorError& e) {
        if (!e.is_transport()) {
          lost.clear();
          abort(e.kind(), e.what());
          break;
        }
        lost = e.what();
      }
    }
    if (!exec) {
      if (!out.failure) {
        abort(ErrorKind::kSessionLost,
              "executor unavailable at stage " + std::to_string(stage) + ": " + lost);
      }
      break;
    }

    rec.execution = std::move(exec->batch);
    rec.mutation = std::move(exec->mutation);
    rec.exceptions = std::move(exec->exceptions);
    rec.reward = score({rec.exceptions.value, rec.execution.coverage.line, rec.mutation.mu},
                       cfg.critic);

    std::vector<ScoredCase> scored;
    scored.reserve(rec.cases.size());
    for (std::size_t i = 0; i < rec.cases.size(); ++i) {
      ScoredCase sc{rec.cases[i], rec.reward.normalized, stage, std::nullopt};
      if (i < rec.execution.outcomes.size()) sc.observed = rec.execution.outcomes[i];
      scored.push_back(std::move(sc));
    }
    out.archive = update_archive(out.archive, scored);
    rec.archive = out.archive;

    StageBatch batch{stage, rec.origin, rec.cases, rec.execution.outcomes, 0.0};
    out.state = update_state(std::move(out.state), std::move(batch), rec.mutation.mu,
                             rec.execution.coverage, rec.exceptions, rec.reward.normalized);

    if (sink) {
      Json record = to_json(rec);
      record["type"] = "stage";
      sink->emit(std::move(record));
    }
    out.stages.push_back(std::move(rec));

    const auto& rewards = out.state.reward_history();
    if (auto reason = stop_condition(rewards, out.stage_count(), cfg.stop)) {
      out.stop_reason = *reason;
      break;
    }
    if (out.stage_count() >= cfg.stop.max_stages) {
      out.stop_reason = StopReason::kMaxStages;
      break;
    }
  }
  finish();
  return out;
}

}  // namespace evotest
