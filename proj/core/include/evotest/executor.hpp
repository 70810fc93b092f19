#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evotest/edge_case.hpp"

namespace evotest {

/// The single source file under test.
struct SourceArtifact {
  std::string path;
  std::string text;

  static SourceArtifact load(const std::filesystem::path& path);
  int line_count() const;
  std::string stem() const;
};

struct ResourceLimits {
  std::chrono::milliseconds per_case_timeout{2000};
  std::chrono::milliseconds per_mutant_timeout{5000};
  std::uint64_t memory_cap = 512ull * 1024 * 1024;
  std::chrono::milliseconds total_stage_budget{120000};

  void validate() const;
  friend bool operator==(const ResourceLimits&, const ResourceLimits&) = default;
};

enum class OutcomeStatus { kReturned, kRaised, kTimeout, kCrashed };

const char* to_string(OutcomeStatus status) noexcept;
OutcomeStatus outcome_status_from_string(std::string_view text);

/// Result of executing one case. exception_type is set iff status is kRaised.
struct CaseOutcome {
  std::size_t case_ref = 0;
  OutcomeStatus status = OutcomeStatus::kReturned;
  std::string value_digest;
  std::optional<std::string> exception_type;
  std::string stderr_excerpt;

  friend bool operator==(const CaseOutcome&, const CaseOutcome&) = default;
};

struct CoverageTotals {
  int lines = 0;
  int covered_lines = 0;
  int branches = 0;
  int covered_branches = 0;
  int functions = 0;
  int covered_functions = 0;

  friend bool operator==(const CoverageTotals&, const CoverageTotals&) = default;
};

struct CoverageReport {
  double line = 0.0;
  double branch = 0.0;
  double function = 0.0;
  std::vector<int> uncovered_lines;
  CoverageTotals totals;
  /// Set when any denominator is zero; the matching fraction is then 0.
  bool degenerate = false;

  friend bool operator==(const CoverageReport&, const CoverageReport&) = default;
};

/// Fractions derived from raw counts.
CoverageReport make_coverage(const CoverageTotals& totals, std::vector<int> uncovered_lines);

struct BatchResult {
  std::vector<CaseOutcome> outcomes;
  CoverageReport coverage;
  /// The worker ran out of stage budget; outcomes may be shorter than cases.
  bool budget_exceeded = false;
};

enum class MutationOperator {
  kArithOpReplace,
  kComparisonReplace,
  kBooleanSwap,
  kConstantPerturb,
  kBoundaryOffByOne,
  kGuardedStatementDelete,
};

const char* to_string(MutationOperator op) noexcept;
MutationOperator mutation_operator_from_string(std::string_view text);

struct SourceSpan {
  int line = 0;
  int column = 0;
  int end_line = 0;
  int end_column = 0;

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

struct MutantDescriptor {
  std::string id;
  MutationOperator op = MutationOperator::kArithOpReplace;
  SourceSpan location;
  std::string preview;

  friend bool operator==(const MutantDescriptor&, const MutantDescriptor&) = default;
};

struct Diagnostic {
  int line = 0;
  int column = 0;
  std::string message;
};

struct CompileResult {
  bool ok = false;
  std::vector<Diagnostic> diagnostics;
};

struct TestRunResult {
  CoverageReport coverage;
  int passed = 0;
  int failed = 0;
};

/// Engine-facing view of the sandboxed execution worker. WorkerSession is
/// the production implementation; tests substitute in-process doubles.
class Executor {
 public:
  virtual ~Executor() = default;

  virtual std::vector<FunctionSignature> analyze(const SourceArtifact& source) = 0;
  virtual BatchResult run_cases(const SourceArtifact& source,
                                std::span<const EdgeCase> cases) = 0;
  virtual std::vector<MutantDescriptor> generate_mutants(const SourceArtifact& source,
                                                         int pool_target,
                                                         std::uint64_t seed) = 0;
  virtual std::vector<CaseOutcome> run_mutant(const SourceArtifact& source,
                                              const std::string& mutant_id,
                                              std::span<const EdgeCase> cases) = 0;
  virtual CompileResult compile_check(std::string_view test_text) = 0;
  virtual TestRunResult run_tests(const SourceArtifact& source, std::string_view test_text) = 0;

  /// Re-establishes the transport after a session loss. The default is a
  /// no-op for executors without a transport.
  virtual void recover() {}
};

// JSON codecs shared by the wire protocol and the run trace.
Json to_json(const ResourceLimits& limits);
ResourceLimits limits_from_json(const Json& j);
Json to_json(const CaseOutcome& outcome);
CaseOutcome outcome_from_json(const Json& j, std::size_t case_ref);
Json to_json(const CoverageReport& coverage);
CoverageReport coverage_from_json(const Json& j);
Json to_json(const MutantDescriptor& mutant);
MutantDescriptor mutant_from_json(const Json& j);
Json to_json(const Diagnostic& diagnostic);
Diagnostic diagnostic_from_json(const Json& j);

/// Canonical JSON for JSON-representable values, used as value_digest.
std::string value_digest(const Json& value);

}  // namespace evotest
