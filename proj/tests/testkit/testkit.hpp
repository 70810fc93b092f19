#pragma once

#include <atomic>
#include <filesystem>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "evotest/errors.hpp"
#include "evotest/executor.hpp"
#include "evotest/metrics.hpp"
#include "evotest/trace.hpp"
#include "sim.hpp"

namespace evotest::testkit {

/// Balanced (), [] and {} outside string literals and comments, and a
/// non-empty text. Stands in for the worker's Python compile check.
CompileResult bracket_check(std::string_view text);

/// Executor backed by a SimProgram. Counts calls per tool and can be told
/// to fail upcoming calls.
class MockExecutor final : public Executor {
 public:
  explicit MockExecutor(SimProgram program);

  std::vector<FunctionSignature> analyze(const SourceArtifact& source) override;
  BatchResult run_cases(const SourceArtifact& source, std::span<const EdgeCase> cases) override;
  std::vector<MutantDescriptor> generate_mutants(const SourceArtifact& source, int pool_target,
                                                 std::uint64_t seed) override;
  std::vector<CaseOutcome> run_mutant(const SourceArtifact& source, const std::string& mutant_id,
                                      std::span<const EdgeCase> cases) override;
  CompileResult compile_check(std::string_view test_text) override;
  TestRunResult run_tests(const SourceArtifact& source, std::string_view test_text) override;
  void recover() override;

  /// The next `times` calls of `tool` throw ExecutorError(kind).
  void fail_next(const std::string& tool, ErrorKind kind, int times = 1);

  int calls(const std::string& tool) const;
  int recoveries() const { return recoveries_; }
  const SimProgram& program() const { return program_; }

 private:
  void maybe_fail(const std::string& tool);

  SimProgram program_;
  mutable std::mutex mu_;
  std::map<std::string, int> calls_;
  std::map<std::string, std::vector<ErrorKind>> faults_;
  std::vector<EdgeCase> executed_;
  int recoveries_ = 0;
};

/// Outcome row in compact notation: "r:<digest>" returned, "x:<Type>"
/// raised, "T" timeout, "C" crashed; space separated.
std::vector<CaseOutcome> parse_row(std::string_view row);

/// Hand-written baseline and per-mutant outcome rows. Mutants listed in
/// `tool_errors` make run_mutant fail with kToolError.
struct KillFixture {
  std::string name;
  std::string baseline;
  std::vector<std::string> mutants;
  std::set<int> tool_errors;
  /// Expected score as killed / (killed + survived), written by hand.
  int killed = 0;
  int survived = 0;
};

const std::vector<KillFixture>& kill_fixtures();

/// Executor that replays a KillFixture.
class TableExecutor final : public Executor {
 public:
  explicit TableExecutor(const KillFixture& fixture);

  std::vector<FunctionSignature> analyze(const SourceArtifact& source) override;
  BatchResult run_cases(const SourceArtifact& source, std::span<const EdgeCase> cases) override;
  std::vector<MutantDescriptor> generate_mutants(const SourceArtifact& source, int pool_target,
                                                 std::uint64_t seed) override;
  std::vector<CaseOutcome> run_mutant(const SourceArtifact& source, const std::string& mutant_id,
                                      std::span<const EdgeCase> cases) override;
  CompileResult compile_check(std::string_view test_text) override;
  TestRunResult run_tests(const SourceArtifact& source, std::string_view test_text) override;

  std::vector<CaseOutcome> baseline() const { return baseline_; }
  std::vector<CaseOutcome> row(const std::string& id) const;
  /// One placeholder case per baseline column.
  std::vector<EdgeCase> cases() const;

 private:
  KillFixture fixture_;
  std::vector<CaseOutcome> baseline_;
  std::vector<std::vector<CaseOutcome>> rows_;
};

/// Clock returning 0, step, 2*step, ... on successive calls.
Clock counter_clock(std::int64_t step = 1);

/// Unique directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view text);

/// Path of the fake worker binary (set at build time).
std::string fake_worker_path();

}  // namespace evotest::testkit

namespace evotest::testkit {

/// Compute-model inputs that reproduce the published per-iteration and
/// synthesis figures: 3584.0 / 819.2 TFLOPs and 812.0 / 128.0 TFLOPs.
FlopsParams flops_reference_large();
FlopsParams flops_reference_small();

/// Straight-line re-derivation of the compute model, kept apart from the
/// library code so the two can be compared.
struct FlopsOracle {
  double actor, exec, mut, critic, other, iteration, synthesis;
};
FlopsOracle flops_oracle(const FlopsParams& p);

/// Distance in units in the last place between two finite doubles.
std::uint64_t ulp_distance(double a, double b);

}  // namespace evotest::testkit

namespace evotest::testkit {

/// Model responses for stages 2 to 5 of a search over arith5: each stage
/// proposes the same case shapes with fresh values.
std::vector<std::string> arith5_stage_responses();

/// A test file that passes bracket_check.
std::string arith5_test_file();

/// Outcome of one scripted `run` over arith5 with the mock executor and a
/// scripted provider.
struct ScenarioResult {
  int exit_code = -1;
  std::string trace;
  Json summary;
  std::size_t dispatches = 0;
  std::size_t synthesis_calls = 0;
  std::string out;
  std::string err;
};

/// Writes arith5.py under `workdir` and runs the `run` command with output
/// under `workdir/out`. Same inputs give the same trace bytes.
ScenarioResult run_arith5_scenario(const std::filesystem::path& workdir,
                                   std::vector<std::string> extra_overrides = {});

}  // namespace evotest::testkit
