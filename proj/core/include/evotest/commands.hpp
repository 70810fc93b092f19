#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "evotest/config.hpp"
#include "evotest/trace.hpp"

namespace evotest {

/// Process exit codes of the CLI commands.
enum ExitCode : int {
  kExitResolved = 0,
  kExitUnresolved = 1,
  kExitUsage = 2,
  kExitActorExhausted = 3,
  kExitExecutorUnavailable = 4,
  kExitSynthesisFailed = 5,
  kExitGateway = 6,
  kExitInternal = 70,
};

/// Exit code for an error kind raised during a run.
int exit_code_for(ErrorKind kind) noexcept;

/// Everything the commands need from the outside world. The defaults talk
/// to a real worker and provider; tests swap in fakes.
struct Services {
  std::function<std::unique_ptr<Executor>(const EngineConfig&)> make_executor;
  std::function<std::shared_ptr<ChatProvider>(const GatewayConfig&)> make_provider;
  Clock clock;
  Gateway::Sleeper sleeper;
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;

  /// Fills unset members with the defaults.
  static Services defaults();
};

std::unique_ptr<Executor> default_executor(const EngineConfig& cfg);
std::shared_ptr<ChatProvider> default_provider(const GatewayConfig& cfg);

struct RunRequest {
  std::vector<std::filesystem::path> sources;
  std::optional<std::filesystem::path> config;
  std::vector<std::string> overrides;
  int jobs = 1;
};

/// Search plus synthesis for each source. Writes under
/// `<output_dir>/<stem>/`: trace.jsonl, summary.json and the test file with
/// its metadata. Returns 0 when every run resolved, otherwise the code of
/// the first source that did not.
int cmd_run(const RunRequest& request, Services services);

struct BaselineRequest {
  std::vector<std::filesystem::path> sources;
  std::optional<std::filesystem::path> config;
  std::vector<std::string> overrides;
  int shots = 0;
  bool cot = false;
  /// All six shot/CoT modes; shots and cot are ignored.
  bool all = false;
};

/// Stateless pipelines. Writes under `<output_dir>/<stem>/baseline_<mode>/`.
int cmd_baseline(const BaselineRequest& request, Services services);

/// Aggregates the traces under `dir`: text to the output stream, JSON to
/// `<dir>/report.json`.
int cmd_report(const std::filesystem::path& dir, Services services);

/// Deterministic run identifier from the source text and the config.
std::string make_run_id(const SourceArtifact& source, const EngineConfig& cfg,
                        std::string_view method);

}  // namespace evotest
