#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <string>
#include <vector>

#include "evotest/edge_case.hpp"
#include "evotest/executor.hpp"

namespace evotest {

inline constexpr int kTraceSchemaVersion = 1;

/// Milliseconds since an arbitrary epoch. Injected so traces can be made
/// reproducible in tests.
using Clock = std::function<std::int64_t()>;

Clock steady_clock_ms();

/// Receives one JSON record per event. Implementations must be thread-safe.
class EventSink {
 public:
  virtual ~EventSink() = default;
  virtual void emit(Json record) = 0;
};

/// JSON Lines run trace. Every record gets "schema" and a monotonically
/// increasing "seq".
class TraceWriter final : public EventSink {
 public:
  explicit TraceWriter(const std::filesystem::path& path);

  void emit(Json record) override;
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
  std::mutex mu_;
  std::ofstream out_;
  std::int64_t seq_ = 0;
};

/// Keeps records in memory.
class MemorySink final : public EventSink {
 public:
  void emit(Json record) override;
  std::vector<Json> records() const;
  std::size_t count(std::string_view type) const;

 private:
  mutable std::mutex mu_;
  std::vector<Json> records_;
};

/// Parses a trace file; throws kTrace on a malformed line.
std::vector<Json> read_trace(const std::filesystem::path& path);

struct ReplayReport {
  int stage_records = 0;
  int reward_records = 0;
  std::vector<std::string> mismatches;

  bool exact() const noexcept { return mismatches.empty(); }
};

/// Recomputes every stored reward record from its stored inputs and
/// compares bit for bit.
ReplayReport replay_rewards(const std::vector<Json>& records);

/// Executor decorator that reports one "executor_request" record per call.
class TracedExecutor final : public Executor {
 public:
  TracedExecutor(Executor& inner, EventSink& sink, Clock clock);

  std::vector<FunctionSignature> analyze(const SourceArtifact& source) override;
  BatchResult run_cases(const SourceArtifact& source, std::span<const EdgeCase> cases) override;
  std::vector<MutantDescriptor> generate_mutants(const SourceArtifact& source, int pool_target,
                                                 std::uint64_t seed) override;
  std::vector<CaseOutcome> run_mutant(const SourceArtifact& source, const std::string& mutant_id,
                                      std::span<const EdgeCase> cases) override;
  CompileResult compile_check(std::string_view test_text) override;
  TestRunResult run_tests(const SourceArtifact& source, std::string_view test_text) override;
  void recover() override;

 private:
  template <typename F>
  auto traced(const char* tool, Json detail, F&& call) -> decltype(call());

  Executor& inner_;
  EventSink& sink_;
  Clock clock_;
};

}  // namespace evotest
