#include "evotest/metrics.hpp"

#include <cmath>
#include <cstdio>

#include "evotest/engine.hpp"
#include "evotest/errors.hpp"
#include "evotest/synthesis.hpp"

namespace evotest {

void FlopsParams::validate() const {
  const std::pair<const char*, double> fields[] = {
      {"n_actor", n_actor}, {"n_ut", n_ut},         {"l_src", l_src},       {"r", r},
      {"r_ut", r_ut},       {"m", m},               {"t_others", t_others}, {"t_ec", t_ec},
      {"t_ut_out", t_ut_out}, {"f_exec", f_exec},   {"f_mut", f_mut},       {"f_critic", f_critic},
      {"f_other", f_other}};
  for (const auto& [name, v] : fields) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(ErrorKind::kDomain, std::string("flops parameter ") + name +
                                          " must be finite and nonnegative");
    }
  }
}

Json to_json(const FlopsParams& p) {
  return {{"n_actor", p.n_actor}, {"n_ut", p.n_ut},         {"l_src", p.l_src},
          {"r", p.r},             {"r_ut", p.r_ut},         {"m", p.m},
          {"t_others", p.t_others}, {"t_ec", p.t_ec},       {"t_ut_out", p.t_ut_out},
          {"f_exec", p.f_exec},   {"f_mut", p.f_mut},       {"f_critic", p.f_critic},
          {"f_other", p.f_other}};
}

FlopsParams flops_params_from_json(const Json& j) {
  FlopsParams p;
  for (const auto& [k, v] : j.items()) {
    if (!v.is_number()) throw Error(ErrorKind::kConfig, "flops parameter " + k + " must be a number");
  }
  p.n_actor = j.value("n_actor", 0.0);
  p.n_ut = j.value("n_ut", 0.0);
  p.l_src = j.value("l_src", 0.0);
  p.r = j.value("r", 0.0);
  p.r_ut = j.value("r_ut", 0.0);
  p.m = j.value("m", 0.0);
  p.t_others = j.value("t_others", 0.0);
  p.t_ec = j.value("t_ec", 0.0);
  p.t_ut_out = j.value("t_ut_out", 0.0);
  p.f_exec = j.value("f_exec", 0.0);
  p.f_mut = j.value("f_mut", 0.0);
  p.f_critic = j.value("f_critic", 0.0);
  p.f_other = j.value("f_other", 0.0);
  return p;
}

double flops_actor(const FlopsParams& p) {
  const double t_in = p.l_src + (p.r * p.t_ec) + p.t_others;
  const double t_out = p.r * p.t_ec;
  const double t_actor = t_in + t_out;
  return 2 * p.n_actor * t_actor;
}

double flops_synthesis(const FlopsParams& p) {
  const double t_in = p.l_src + (p.r_ut * p.t_ec) + p.t_others;
  const double t_ut = t_in + p.t_ut_out;
  return 2 * p.n_ut * t_ut;
}

FlopsBreakdown flops_breakdown(const FlopsParams& p) {
  FlopsBreakdown b;
  b.actor = flops_actor(p);
  const double executions = (p.m + 1) * p.r;
  b.exec_total = executions * p.f_exec;
  b.mut_total = kMutantPoolAverage * p.f_mut;
  b.critic_total = p.r * p.f_critic;
  b.other_total = p.f_other;
  b.iteration = b.actor + b.exec_total + b.mut_total + b.critic_total + b.other_total;
  b.synthesis = flops_synthesis(p);
  return b;
}

double flops_iteration(const FlopsParams& p) { return flops_breakdown(p).iteration; }

double flops_from_usage(const UsageStats& usage, double n_params) {
  return 2 * n_params * static_cast<double>(usage.total_tokens());
}

std::string flops_table(const std::vector<std::pair<std::string, FlopsParams>>& settings) {
  auto cell = [](double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%16.4f", v / kTera);
    return std::string(buf);
  };
  std::string out = "Category                      ";
  for (const auto& [name, _] : settings) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%16s", (name + " (TFLOPs)").c_str());
    out += buf;
  }
  out += "\n";
  std::string iter = "LLM Iteration                 ";
  std::string synth = "Final Unit Test Generation    ";
  std::string other = "Rule-based / Other            ";
  for (const auto& [_, p] : settings) {
    const auto b = flops_breakdown(p);
    iter += cell(b.actor);
    synth += cell(b.synthesis);
    other += cell(b.exec_total + b.mut_total + b.critic_total + b.other_total);
  }
  return out + iter + "\n" + synth + "\n" + other + "\n";
}

Json to_json(const RunSummary& s) {
  Json j = {{"run_id", s.run_id},
            {"source", s.source},
            {"stages_used", s.stages_used},
            {"stop_reason", s.stop_reason ? Json(to_string(*s.stop_reason)) : Json()},
            {"resolution", s.resolution},
            {"wall_time_ms", s.wall_time_ms}};
  if (!s.failure.empty()) j["failure"] = s.failure;
  if (s.coverage_final) j["coverage_final"] = to_json(*s.coverage_final);
  if (s.coverage_search) j["coverage_search"] = to_json(*s.coverage_search);
  return j;
}

RunSummary run_summary_from_json(const Json& j) {
  RunSummary s;
  s.run_id = j.value("run_id", std::string{});
  s.source = j.value("source", std::string{});
  s.stages_used = j.at("stages_used").get<int>();
  if (j.contains("stop_reason") && j.at("stop_reason").is_string()) {
    s.stop_reason = stop_reason_from_string(j.at("stop_reason").get<std::string>());
  }
  s.failure = j.value("failure", std::string{});
  s.resolution = j.at("resolution").get<bool>();
  s.wall_time_ms = j.value("wall_time_ms", std::int64_t{0});
  if (j.contains("coverage_final")) s.coverage_final = coverage_from_json(j.at("coverage_final"));
  if (j.contains("coverage_search")) {
    s.coverage_search = coverage_from_json(j.at("coverage_search"));
  }
  return s;
}

RunSummary summarize_run(const SearchOutcome& outcome, const TestFileArtifact* artifact,
                         std::optional<CoverageReport> coverage_final,
                         std::int64_t wall_time_ms) {
  RunSummary s;
  s.stages_used = outcome.stage_count();
  s.stop_reason = outcome.stop_reason;
  if (outcome.failure) s.failure = to_string(*outcome.failure);
  const bool converged = outcome.stop_reason == StopReason::kThreshold ||
                         outcome.stop_reason == StopReason::kPlateau;
  s.resolution = converged && artifact != nullptr && artifact->syntax_ok;
  if (artifact) s.run_id = artifact->run_id;
  s.wall_time_ms = wall_time_ms;
  s.coverage_final = std::move(coverage_final);
  if (!outcome.state.coverage_history().empty()) {
    s.coverage_search = outcome.state.coverage_history().back();
  }
  return s;
}

ResolutionStats resolution_stats(std::span<const RunSummary> runs) {
  ResolutionStats out;
  std::map<int, std::int64_t> wall;
  for (const auto& r : runs) {
    ++out.runs;
    auto& bin = out.by_stages[r.stages_used];
    ++bin.runs;
    wall[r.stages_used] += r.wall_time_ms;
    if (r.resolution) {
      ++out.resolved;
      ++bin.resolved;
    }
  }
  for (auto& [stages, bin] : out.by_stages) bin.mean_wall_time_ms = static_cast<double>(wall[stages]) / bin.runs;
  return out;
}

Json to_json(const ResolutionStats& stats) {
  Json bins = Json::array();
  for (const auto& [stages, bin] : stats.by_stages) {
    bins.push_back({{"stages", stages},
                    {"runs", bin.runs},
                    {"resolved", bin.resolved},
                    {"mean_wall_time_ms", bin.mean_wall_time_ms}});
  }
  return {{"runs", stats.runs},
          {"resolved", stats.resolved},
          {"resolution_rate", stats.rate()},
          {"by_stages", std::move(bins)}};
}

}  // namespace evotest
