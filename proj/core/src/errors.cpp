#include "evotest/errors.hpp"

namespace evotest {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kDomain: return "domain_error";
    case ErrorKind::kConfig: return "config_error";
    case ErrorKind::kPrecondition: return "precondition";
    case ErrorKind::kNoTargets: return "no_targets";
    case ErrorKind::kActorExhausted: return "actor_exhausted";
    case ErrorKind::kGateway: return "gateway_error";
    case ErrorKind::kBudgetExceeded: return "budget_exceeded";
    case ErrorKind::kSpawnFailure: return "spawn_failure";
    case ErrorKind::kHandshakeMismatch: return "handshake_mismatch";
    case ErrorKind::kSessionLost: return "session_lost";
    case ErrorKind::kSessionClosed: return "session_closed";
    case ErrorKind::kParseFailure: return "parse_failure";
    case ErrorKind::kUnknownMutant: return "unknown_mutant";
    case ErrorKind::kToolError: return "tool_error";
    case ErrorKind::kSynthesisFailed: return "synthesis_failed";
    case ErrorKind::kTrace: return "trace_error";
  }
  return "unknown";
}

}  // namespace evotest
