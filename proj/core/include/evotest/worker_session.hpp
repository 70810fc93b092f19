#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "evotest/errors.hpp"
#include "evotest/executor.hpp"

namespace evotest {

namespace detail {
class Subprocess;
}

inline constexpr std::string_view kProtocolVersion = "1";

/// Ordered: a worker satisfies a demand when its level is at least as strong.
enum class Isolation { kNone = 0, kProcess = 1, kContainer = 2 };

const char* to_string(Isolation isolation) noexcept;
Isolation isolation_from_string(std::string_view text);

enum class SessionState { kHandshaken, kBusy, kClosed };

const char* to_string(SessionState state) noexcept;

struct SessionOptions {
  std::vector<std::string> command;
  Isolation required_isolation = Isolation::kProcess;
  ResourceLimits limits;
  std::chrono::milliseconds handshake_timeout{10000};
  /// Time a worker gets to exit after shutdown before it is killed.
  std::chrono::milliseconds grace{2000};
  /// Added to the stage budget when waiting for any response.
  std::chrono::milliseconds io_slack{5000};
};

/// Client side of the worker protocol: newline-delimited JSON frames
/// `{"id", "tool", "args"}` answered by `{"id", "ok", "result" | "error"}`
/// over the worker's stdin and stdout. One request in flight at a time.
class WorkerSession final : public Executor {
 public:
  /// Spawns the worker and performs the hello exchange. Throws
  /// ExecutorError with kSpawnFailure or kHandshakeMismatch.
  static std::unique_ptr<WorkerSession> open(SessionOptions options);

  ~WorkerSession() override;
  WorkerSession(const WorkerSession&) = delete;
  WorkerSession& operator=(const WorkerSession&) = delete;

  std::vector<FunctionSignature> analyze(const SourceArtifact& source) override;
  BatchResult run_cases(const SourceArtifact& source, std::span<const EdgeCase> cases) override;
  std::vector<MutantDescriptor> generate_mutants(const SourceArtifact& source, int pool_target,
                                                 std::uint64_t seed) override;
  std::vector<CaseOutcome> run_mutant(const SourceArtifact& source, const std::string& mutant_id,
                                      std::span<const EdgeCase> cases) override;
  CompileResult compile_check(std::string_view test_text) override;
  TestRunResult run_tests(const SourceArtifact& source, std::string_view test_text) override;

  /// Replaces a lost worker with a fresh, handshaken one.
  void recover() override;

  /// Sends shutdown and waits out the grace period, then kills. A busy
  /// session is killed at once and its in-flight call fails with
  /// kSessionLost. Idempotent.
  void close();

  /// One raw request. Throws kSessionClosed on a closed session,
  /// kSessionLost on transport failure and the mapped tool error kind when
  /// the worker answers ok:false.
  Json call(std::string_view tool, Json args);

  SessionState state() const;
  const std::string& session_id() const noexcept { return session_id_; }
  Isolation isolation() const noexcept { return isolation_; }
  const SessionOptions& options() const noexcept { return options_; }
  std::int64_t requests_sent() const;

 private:
  explicit WorkerSession(SessionOptions options);
  void start();
  void kill_locked();

  SessionOptions options_;
  std::string session_id_;
  Isolation isolation_ = Isolation::kNone;

  mutable std::mutex mu_;
  SessionState state_ = SessionState::kClosed;
  std::unique_ptr<detail::Subprocess> child_;
  std::int64_t next_id_ = 0;
  std::int64_t generation_ = 0;
};

/// Maps a worker error kind string to an ErrorKind.
ErrorKind worker_error_kind(std::string_view kind) noexcept;

}  // namespace evotest
