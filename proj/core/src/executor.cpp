#include "evotest/executor.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "evotest/errors.hpp"

namespace evotest {

SourceArtifact SourceArtifact::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::kPrecondition, "cannot read source file: " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return {path.string(), buffer.str()};
}

int SourceArtifact::line_count() const {
  if (text.empty()) return 0;
  auto n = static_cast<int>(std::count(text.begin(), text.end(), '\n'));
  return text.back() == '\n' ? n : n + 1;
}

std::string SourceArtifact::stem() const {
  auto s = std::filesystem::path(path).stem().string();
  return s.empty() ? "source" : s;
}

void ResourceLimits::validate() const {
  if (per_case_timeout.count() <= 0) {
    throw Error(ErrorKind::kConfig, "limits.per_case_timeout_ms must be positive");
  }
  if (per_mutant_timeout.count() <= 0) {
    throw Error(ErrorKind::kConfig, "limits.per_mutant_timeout_ms must be positive");
  }
  if (memory_cap == 0) {
    throw Error(ErrorKind::kConfig, "limits.memory_cap_bytes must be positive");
  }
  if (total_stage_budget.count() <= 0) {
    throw Error(ErrorKind::kConfig, "limits.stage_budget_ms must be positive");
  }
}

const char* to_string(OutcomeStatus status) noexcept {
  switch (status) {
    case OutcomeStatus::kReturned: return "returned";
    case OutcomeStatus::kRaised: return "raised";
    case OutcomeStatus::kTimeout: return "timeout";
    case OutcomeStatus::kCrashed: return "crashed";
  }
  return "crashed";
}

OutcomeStatus outcome_status_from_string(std::string_view text) {
  if (text == "returned") return OutcomeStatus::kReturned;
  if (text == "raised") return OutcomeStatus::kRaised;
  if (text == "timeout") return OutcomeStatus::kTimeout;
  if (text == "crashed") return OutcomeStatus::kCrashed;
  throw Error(ErrorKind::kDomain, "unknown outcome status: " + std::string(text));
}

CoverageReport make_coverage(const CoverageTotals& totals, std::vector<int> uncovered_lines) {
  CoverageReport out;
  out.totals = totals;
  auto fraction = [&](int covered, int total) {
    if (total <= 0) {
      out.degenerate = true;
      return 0.0;
    }
    return static_cast<double>(covered) / static_cast<double>(total);
  };
  out.line = fraction(totals.covered_lines, totals.lines);
  out.branch = fraction(totals.covered_branches, totals.branches);
  out.function = fraction(totals.covered_functions, totals.functions);
  std::sort(uncovered_lines.begin(), uncovered_lines.end());
  uncovered_lines.erase(std::unique(uncovered_lines.begin(), uncovered_lines.end()),
                        uncovered_lines.end());
  out.uncovered_lines = std::move(uncovered_lines);
  return out;
}

const char* to_string(MutationOperator op) noexcept {
  switch (op) {
    case MutationOperator::kArithOpReplace: return "arith-op-replace";
    case MutationOperator::kComparisonReplace: return "comparison-replace";
    case MutationOperator::kBooleanSwap: return "boolean-swap";
    case MutationOperator::kConstantPerturb: return "constant-perturb";
    case MutationOperator::kBoundaryOffByOne: return "boundary-off-by-one";
    case MutationOperator::kGuardedStatementDelete: return "guarded-statement-delete";
  }
  return "arith-op-replace";
}

MutationOperator mutation_operator_from_string(std::string_view text) {
  for (auto op : {MutationOperator::kArithOpReplace, MutationOperator::kComparisonReplace,
                  MutationOperator::kBooleanSwap, MutationOperator::kConstantPerturb,
                  MutationOperator::kBoundaryOffByOne,
                  MutationOperator::kGuardedStatementDelete}) {
    if (text == to_string(op)) return op;
  }
  throw Error(ErrorKind::kDomain, "unknown mutation operator: " + std::string(text));
}

Json to_json(const ResourceLimits& limits) {
  return {{"per_case_timeout_ms", limits.per_case_timeout.count()},
          {"per_mutant_timeout_ms", limits.per_mutant_timeout.count()},
          {"memory_cap_bytes", limits.memory_cap},
          {"stage_budget_ms", limits.total_stage_budget.count()}};
}

ResourceLimits limits_from_json(const Json& j) {
  ResourceLimits out;
  out.per_case_timeout = std::chrono::milliseconds(
      j.value("per_case_timeout_ms", out.per_case_timeout.count()));
  out.per_mutant_timeout = std::chrono::milliseconds(
      j.value("per_mutant_timeout_ms", out.per_mutant_timeout.count()));
  out.memory_cap = j.value("memory_cap_bytes", out.memory_cap);
  out.total_stage_budget = std::chrono::milliseconds(
      j.value("stage_budget_ms", out.total_stage_budget.count()));
  return out;
}

Json to_json(const CaseOutcome& outcome) {
  Json j = {{"case", outcome.case_ref},
            {"status", to_string(outcome.status)},
            {"value_digest", outcome.value_digest}};
  if (outcome.exception_type) j["exception_type"] = *outcome.exception_type;
  if (!outcome.stderr_excerpt.empty()) j["stderr"] = outcome.stderr_excerpt;
  return j;
}

CaseOutcome outcome_from_json(const Json& j, std::size_t case_ref) {
  CaseOutcome out;
  out.case_ref = j.value("case", case_ref);
  out.status = outcome_status_from_string(j.at("status").get<std::string>());
  out.value_digest = j.value("value_digest", std::string{});
  if (j.contains("exception_type") && j.at("exception_type").is_string()) {
    out.exception_type = j.at("exception_type").get<std::string>();
  }
  out.stderr_excerpt = j.value("stderr", std::string{});
  if ((out.status == OutcomeStatus::kRaised) != out.exception_type.has_value()) {
    throw Error(ErrorKind::kDomain,
                "exception_type must be present exactly when status is 'raised'");
  }
  return out;
}

Json to_json(const CoverageReport& coverage) {
  return {{"line", coverage.line},
          {"branch", coverage.branch},
          {"function", coverage.function},
          {"uncovered_lines", coverage.uncovered_lines},
          {"degenerate", coverage.degenerate},
          {"totals",
           {{"lines", coverage.totals.lines},
            {"covered_lines", coverage.totals.covered_lines},
            {"branches", coverage.totals.branches},
            {"covered_branches", coverage.totals.covered_branches},
            {"functions", coverage.totals.functions},
            {"covered_functions", coverage.totals.covered_functions}}}};
}

CoverageReport coverage_from_json(const Json& j) {
  auto uncovered = j.value("uncovered_lines", std::vector<int>{});
  if (j.contains("totals")) {
    const auto& t = j.at("totals");
    CoverageTotals totals;
    totals.lines = t.value("lines", 0);
    totals.covered_lines = t.value("covered_lines", 0);
    totals.branches = t.value("branches", 0);
    totals.covered_branches = t.value("covered_branches", 0);
    totals.functions = t.value("functions", 0);
    totals.covered_functions = t.value("covered_functions", 0);
    return make_coverage(totals, std::move(uncovered));
  }
  CoverageReport out;
  out.line = j.value("line", 0.0);
  out.branch = j.value("branch", 0.0);
  out.function = j.value("function", 0.0);
  out.degenerate = j.value("degenerate", false);
  out.uncovered_lines = std::move(uncovered);
  return out;
}

Json to_json(const MutantDescriptor& mutant) {
  return {{"id", mutant.id},
          {"operator", to_string(mutant.op)},
          {"location",
           {{"line", mutant.location.line},
            {"col", mutant.location.column},
            {"end_line", mutant.location.end_line},
            {"end_col", mutant.location.end_column}}},
          {"preview", mutant.preview}};
}

MutantDescriptor mutant_from_json(const Json& j) {
  MutantDescriptor out;
  out.id = j.at("id").get<std::string>();
  out.op = mutation_operator_from_string(j.at("operator").get<std::string>());
  if (j.contains("location")) {
    const auto& loc = j.at("location");
    out.location.line = loc.value("line", 0);
    out.location.column = loc.value("col", 0);
    out.location.end_line = loc.value("end_line", out.location.line);
    out.location.end_column = loc.value("end_col", out.location.column);
  }
  out.preview = j.value("preview", std::string{});
  return out;
}

Json to_json(const Diagnostic& diagnostic) {
  return {{"line", diagnostic.line}, {"col", diagnostic.column},
          {"message", diagnostic.message}};
}

Diagnostic diagnostic_from_json(const Json& j) {
  return {j.value("line", 0), j.value("col", 0), j.value("message", std::string{})};
}

std::string value_digest(const Json& value) {
  return value.dump(-1, ' ', false, Json::error_handler_t::replace);
}

}  // namespace evotest
