#pragma once

#include <stdexcept>
#include <string>

namespace evotest {

enum class ErrorKind {
  kDomain,
  kConfig,
  kPrecondition,
  kNoTargets,
  kActorExhausted,
  kGateway,
  kBudgetExceeded,
  kSpawnFailure,
  kHandshakeMismatch,
  kSessionLost,
  kSessionClosed,
  kParseFailure,
  kUnknownMutant,
  kToolError,
  kSynthesisFailed,
  kTrace,
};

const char* to_string(ErrorKind kind) noexcept;

/// Base exception for every failure the engine reports. Callers branch on
/// kind() rather than on the dynamic type.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised by the executor client. Transport failures (kSessionLost,
/// kSpawnFailure) are distinguished from tool-level failures reported by a
/// healthy worker (kParseFailure, kUnknownMutant, kToolError).
class ExecutorError : public Error {
 public:
  using Error::Error;

  bool is_transport() const noexcept {
    return kind() == ErrorKind::kSessionLost ||
           kind() == ErrorKind::kSpawnFailure ||
           kind() == ErrorKind::kSessionClosed;
  }
};

class GatewayError : public Error {
 public:
  using Error::Error;
};

}  // namespace evotest
