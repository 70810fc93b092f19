#pragma once

#include <sys/types.h>

#include <chrono>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace evotest::detail {

/// Child process with its stdin and stdout connected to pipes; stderr is
/// inherited. kill() and reap() may be called from another thread while a
/// read is in progress.
class Subprocess {
 public:
  using Deadline = std::chrono::steady_clock::time_point;

  enum class ReadStatus { kLine, kEof, kTimeout, kError };

  /// Throws ExecutorError(kSpawnFailure).
  explicit Subprocess(const std::vector<std::string>& argv);
  ~Subprocess();

  Subprocess(const Subprocess&) = delete;
  Subprocess& operator=(const Subprocess&) = delete;

  bool write_all(std::string_view data, Deadline deadline);
  ReadStatus read_line(std::string& line, Deadline deadline);
  void close_stdin();

  /// Waits up to `timeout` for exit; true once the child is reaped.
  bool wait_for(std::chrono::milliseconds timeout);
  void kill();
  std::optional<int> exit_code() const;
  pid_t pid() const noexcept { return pid_; }

 private:
  bool try_reap_locked();

  pid_t pid_ = -1;
  int in_fd_ = -1;
  int out_fd_ = -1;
  std::string buffer_;
  mutable std::mutex mu_;
  bool reaped_ = false;
  int status_ = 0;
};

}  // namespace evotest::detail
