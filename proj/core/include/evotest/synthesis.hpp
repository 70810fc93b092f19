#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evotest/archive.hpp"
#include "evotest/errors.hpp"
#include "evotest/executor.hpp"
#include "evotest/gateway.hpp"
#include "evotest/state.hpp"

namespace evotest {

struct SynthesisConfig {
  double temperature = 0.0;
  int max_output_tokens = 8192;
  /// Archive entries forwarded to the model; 0 forwards the whole archive.
  int max_cases = 0;
  /// One diagnostic-guided retry when the first file fails the syntax check.
  bool repair = true;

  void validate() const;
  friend bool operator==(const SynthesisConfig&, const SynthesisConfig&) = default;
};

Json to_json(const SynthesisConfig& cfg);
SynthesisConfig synthesis_config_from_json(const Json& j);

struct TestFileArtifact {
  std::string text;
  bool syntax_ok = false;
  int test_count = 0;
  std::string run_id;
  int stage_count = 0;
  /// Gateway calls spent: 1, or 2 when the repair retry ran.
  int attempts = 0;
  std::vector<Diagnostic> diagnostics;
  UsageStats usage;
};

Json to_json(const TestFileArtifact& artifact);

/// Both synthesis attempts failed the syntax check. The artifact keeps the
/// last model output.
class SynthesisFailed : public Error {
 public:
  SynthesisFailed(TestFileArtifact artifact, const std::string& what)
      : Error(ErrorKind::kSynthesisFailed, what), artifact_(std::move(artifact)) {}
  const TestFileArtifact& artifact() const noexcept { return artifact_; }

 private:
  TestFileArtifact artifact_;
};

/// Removes a surrounding markdown code fence, if any.
std::string strip_code_fences(std::string_view text);

/// Number of lines declaring a `def test_...` function.
int count_tests(std::string_view text);

/// `{"function", "input", "expected" | "raises"}` records for the archive,
/// built from each entry's observed baseline behaviour.
Json synthesis_cases(const EliteArchive& archive, int max_cases = 0);

/// Cases without observed behaviour (the stateless pipelines).
Json synthesis_cases(std::span<const EdgeCase> cases);

/// One gateway call, a compile check, and at most one repair call. Throws
/// kPrecondition for an empty case list before any call, SynthesisFailed
/// when no attempt compiles.
TestFileArtifact synthesize_from_cases(const SourceArtifact& source, const Json& cases,
                                       Gateway& gateway, Executor& executor,
                                       const SynthesisConfig& cfg, bool baseline_prompts,
                                       std::string_view purpose);

TestFileArtifact synthesize_tests(const SourceArtifact& source, const SearchState& state,
                                  const EliteArchive& archive, Gateway& gateway,
                                  Executor& executor, const SynthesisConfig& cfg,
                                  std::string run_id = {});

struct BaselineMode {
  int shots = 0;
  bool cot = false;

  void validate() const;
  std::string name() const;
  friend bool operator==(const BaselineMode&, const BaselineMode&) = default;
};

/// The six combinations of {0, 1, 3} shots with and without CoT.
std::vector<BaselineMode> all_baseline_modes();

struct BaselineResult {
  BaselineMode mode;
  std::vector<EdgeCase> cases;
  TestFileArtifact artifact;
  UsageStats usage;
  std::string raw_cases_response;
};

/// Stateless pipeline: one call for edge cases, one for the test file. No
/// repair retry. A response without any valid case throws kActorExhausted
/// before synthesis is attempted.
BaselineResult run_baseline(const SourceArtifact& source,
                            std::span<const FunctionSignature> signatures,
                            const BaselineMode& mode, Gateway& gateway, Executor& executor,
                            SynthesisConfig cfg);

/// Runs the test file against the source in the worker. An empty file
/// yields zero coverage with the degenerate flag.
CoverageReport evaluate_artifact(const TestFileArtifact& artifact, const SourceArtifact& source,
                                 Executor& executor);

struct ArtifactPaths {
  std::filesystem::path test_file;
  std::filesystem::path metadata;
};

/// Writes `test_<stem>.py` and `test_<stem>.meta.json` under `dir`.
ArtifactPaths write_artifact(const TestFileArtifact& artifact, const std::filesystem::path& dir,
                             const std::string& stem, const Json& extra_metadata = {});

}  // namespace evotest
