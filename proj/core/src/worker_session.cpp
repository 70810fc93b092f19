#include "evotest/worker_session.hpp"

#include "evotest/errors.hpp"
#include "subprocess.hpp"

namespace evotest {

using OrderedJson = nlohmann::ordered_json;
using SteadyClock = std::chrono::steady_clock;

const char* to_string(Isolation isolation) noexcept {
  switch (isolation) {
    case Isolation::kNone: return "none";
    case Isolation::kProcess: return "process";
    case Isolation::kContainer: return "container";
  }
  return "none";
}

Isolation isolation_from_string(std::string_view text) {
  if (text == "none") return Isolation::kNone;
  if (text == "process") return Isolation::kProcess;
  if (text == "container") return Isolation::kContainer;
  throw Error(ErrorKind::kDomain, "unknown isolation mode: " + std::string(text));
}

const char* to_string(SessionState state) noexcept {
  switch (state) {
    case SessionState::kHandshaken: return "handshaken";
    case SessionState::kBusy: return "busy";
    case SessionState::kClosed: return "closed";
  }
  return "closed";
}

ErrorKind worker_error_kind(std::string_view kind) noexcept {
  if (kind == "parse_failure") return ErrorKind::kParseFailure;
  if (kind == "unknown_mutant") return ErrorKind::kUnknownMutant;
  return ErrorKind::kToolError;
}

namespace {

OrderedJson to_ordered(const Json& j) { return OrderedJson::parse(j.dump()); }

Json cases_json(std::span<const EdgeCase> cases) {
  Json out = Json::array();
  for (const auto& c : cases) out.push_back(to_json(c));
  return out;
}

std::vector<CaseOutcome> outcomes_json(const Json& result) {
  std::vector<CaseOutcome> out;
  const auto& list = result.at("outcomes");
  for (std::size_t i = 0; i < list.size(); ++i) out.push_back(outcome_from_json(list[i], i));
  return out;
}

template <typename F>
auto decode(std::string_view tool, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw ExecutorError(ErrorKind::kToolError,
                        "malformed " + std::string(tool) + " result: " + e.what());
  } catch (const ExecutorError&) {
    throw;
  } catch (const Error& e) {
    throw ExecutorError(ErrorKind::kToolError,
                        "malformed " + std::string(tool) + " result: " + e.what());
  }
}

}  // namespace

WorkerSession::WorkerSession(SessionOptions options) : options_(std::move(options)) {}

std::unique_ptr<WorkerSession> WorkerSession::open(SessionOptions options) {
  options.limits.validate();
  std::unique_ptr<WorkerSession> session(new WorkerSession(std::move(options)));
  session->start();
  return session;
}

WorkerSession::~WorkerSession() { close(); }

void WorkerSession::start() {
  auto child = std::make_unique<detail::Subprocess>(options_.command);
  auto fail = [&](ErrorKind kind, const std::string& msg) {
    child->kill();
    child->wait_for(options_.grace);
    throw ExecutorError(kind, msg);
  };

  OrderedJson hello;
  hello["tool"] = "hello";
  hello["args"]["version"] = kProtocolVersion;
  hello["args"]["isolation"] = to_string(options_.required_isolation);
  const auto deadline = SteadyClock::now() + options_.handshake_timeout;
  if (!child->write_all(hello.dump() + "\n", deadline)) {
    fail(ErrorKind::kSpawnFailure, "worker exited during handshake");
  }
  std::string line;
  switch (child->read_line(line, deadline)) {
    case detail::Subprocess::ReadStatus::kLine: break;
    case detail::Subprocess::ReadStatus::kTimeout:
      fail(ErrorKind::kSpawnFailure, "worker did not answer the handshake");
      break;
    default: fail(ErrorKind::kSpawnFailure, "worker exited during handshake");
  }

  auto reply = Json::parse(line, nullptr, false);
  if (reply.is_discarded() || !reply.is_object()) {
    fail(ErrorKind::kHandshakeMismatch, "malformed handshake reply");
  }
  if (reply.contains("id") && !(reply.at("id").is_number_integer() && reply.at("id") == 0)) {
    fail(ErrorKind::kHandshakeMismatch, "unexpected id in handshake reply");
  }
  if (!reply.value("ok", false)) {
    std::string detail = "worker rejected the handshake";
    if (reply.contains("error")) detail += ": " + reply.at("error").dump();
    fail(ErrorKind::kHandshakeMismatch, detail);
  }
  const Json result = reply.value("result", Json::object());
  const auto version = result.value("version", std::string{});
  if (version != kProtocolVersion) {
    fail(ErrorKind::kHandshakeMismatch, "protocol version skew: worker speaks '" + version +
                                            "', client speaks '" +
                                            std::string(kProtocolVersion) + "'");
  }
  Isolation attested = Isolation::kNone;
  try {
    attested = isolation_from_string(result.value("isolation", std::string{}));
  } catch (const Error&) {
    fail(ErrorKind::kHandshakeMismatch, "worker reported an unknown isolation mode");
  }
  if (attested < options_.required_isolation) {
    fail(ErrorKind::kHandshakeMismatch,
         std::string("worker isolation '") + to_string(attested) + "' is weaker than required '" +
             to_string(options_.required_isolation) + "'");
  }

  std::lock_guard lock(mu_);
  ++generation_;
  isolation_ = attested;
  session_id_ = "worker-" + std::to_string(child->pid()) + "-" + std::to_string(generation_);
  child_ = std::move(child);
  state_ = SessionState::kHandshaken;
}

void WorkerSession::kill_locked() {
  if (child_) child_->kill();
  state_ = SessionState::kClosed;
}

Json WorkerSession::call(std::string_view tool, Json args) {
  detail::Subprocess* child = nullptr;
  std::int64_t id = 0;
  std::int64_t generation = 0;
  {
    std::lock_guard lock(mu_);
    if (state_ == SessionState::kClosed) {
      throw ExecutorError(ErrorKind::kSessionClosed, "session is closed");
    }
    if (state_ == SessionState::kBusy) {
      throw Error(ErrorKind::kPrecondition, "a request is already in flight on this session");
    }
    state_ = SessionState::kBusy;
    id = ++next_id_;
    child = child_.get();
    generation = generation_;
  }
  auto lost = [&](const std::string& msg) -> ExecutorError {
    std::lock_guard lock(mu_);
    if (generation_ == generation && state_ == SessionState::kBusy) kill_locked();
    return ExecutorError(ErrorKind::kSessionLost,
                         std::string(tool) + ": " + msg);
  };

  OrderedJson frame;
  frame["id"] = id;
  frame["tool"] = tool;
  frame["args"] = to_ordered(args);
  const auto deadline = SteadyClock::now() + options_.limits.total_stage_budget + options_.io_slack;
  if (!child->write_all(frame.dump(-1, ' ', false, Json::error_handler_t::replace) + "\n",
                        deadline)) {
    throw lost("worker stopped accepting requests");
  }
  std::string line;
  switch (child->read_line(line, deadline)) {
    case detail::Subprocess::ReadStatus::kLine: break;
    case detail::Subprocess::ReadStatus::kTimeout: throw lost("worker response timed out");
    default: throw lost("worker exited before responding");
  }
  auto reply = Json::parse(line, nullptr, false);
  if (reply.is_discarded() || !reply.is_object()) throw lost("malformed response frame");
  if (!reply.contains("id") || !reply.at("id").is_number_integer() ||
      reply.at("id").get<std::int64_t>() != id) {
    throw lost("response id does not match request " + std::to_string(id));
  }
  {
    std::lock_guard lock(mu_);
    if (generation_ != generation || state_ != SessionState::kBusy) {
      throw ExecutorError(ErrorKind::kSessionLost, std::string(tool) + ": session closed");
    }
    state_ = SessionState::kHandshaken;
  }
  if (reply.value("ok", false)) return reply.value("result", Json::object());
  const Json err = reply.value("error", Json::object());
  const auto kind = err.is_object() ? err.value("kind", std::string("tool_error")) : "tool_error";
  const auto detail = err.is_object() ? err.value("detail", std::string{}) : err.dump();
  throw ExecutorError(worker_error_kind(kind), std::string(tool) + ": " + kind +
                                                   (detail.empty() ? "" : ": " + detail));
}

void WorkerSession::close() {
  std::unique_lock lock(mu_);
  if (!child_) return;
  if (state_ == SessionState::kClosed) {
    child_->kill();
    return;
  }
  if (state_ == SessionState::kBusy) {
    kill_locked();
    return;
  }
  state_ = SessionState::kClosed;
  OrderedJson frame;
  frame["id"] = ++next_id_;
  frame["tool"] = "shutdown";
  frame["args"] = OrderedJson::object();
  auto* child = child_.get();
  lock.unlock();
  child->write_all(frame.dump() + "\n", SteadyClock::now() + options_.grace);
  child->close_stdin();
  if (!child->wait_for(options_.grace)) {
    child->kill();
    child->wait_for(options_.grace);
  }
}

void WorkerSession::recover() {
  {
    std::lock_guard lock(mu_);
    if (state_ == SessionState::kBusy) {
      throw Error(ErrorKind::kPrecondition, "cannot recover a busy session");
    }
  }
  close();
  {
    std::lock_guard lock(mu_);
    child_.reset();
  }
  start();
}

SessionState WorkerSession::state() const {
  std::lock_guard lock(mu_);
  return state_;
}

std::int64_t WorkerSession::requests_sent() const {
  std::lock_guard lock(mu_);
  return next_id_;
}

std::vector<FunctionSignature> WorkerSession::analyze(const SourceArtifact& source) {
  auto result = call("analyze", {{"path", source.path}, {"source", source.text}});
  return decode("analyze", [&] {
    std::vector<FunctionSignature> out;
    for (const auto& f : result.at("functions")) out.push_back(signature_from_json(f));
    return out;
  });
}

BatchResult WorkerSession::run_cases(const SourceArtifact& source,
                                     std::span<const EdgeCase> cases) {
  if (cases.empty()) throw Error(ErrorKind::kPrecondition, "run_cases needs at least one case");
  auto result = call("run_cases", {{"path", source.path},
                                   {"source", source.text},
                                   {"cases", cases_json(cases)},
                                   {"limits", to_json(options_.limits)}});
  return decode("run_cases", [&] {
    BatchResult out;
    out.outcomes = outcomes_json(result);
    out.coverage = coverage_from_json(result.at("coverage"));
    out.budget_exceeded = result.value("budget_exceeded", false);
    if (!out.budget_exceeded && out.outcomes.size() != cases.size()) {
      throw ExecutorError(ErrorKind::kToolError, "run_cases returned " +
                                                     std::to_string(out.outcomes.size()) +
                                                     " outcomes for " +
                                                     std::to_string(cases.size()) + " cases");
    }
    return out;
  });
}

std::vector<MutantDescriptor> WorkerSession::generate_mutants(const SourceArtifact& source,
                                                              int pool_target,
                                                              std::uint64_t seed) {
  auto result = call("generate_mutants", {{"path", source.path},
                                          {"source", source.text},
                                          {"pool_target", pool_target},
                                          {"seed", seed}});
  return decode("generate_mutants", [&] {
    std::vector<MutantDescriptor> out;
    for (const auto& m : result.at("mutants")) out.push_back(mutant_from_json(m));
    return out;
  });
}

std::vector<CaseOutcome> WorkerSession::run_mutant(const SourceArtifact& source,
                                                   const std::string& mutant_id,
                                                   std::span<const EdgeCase> cases) {
  auto result = call("run_mutant", {{"path", source.path},
                                    {"source", source.text},
                                    {"mutant_id", mutant_id},
                                    {"cases", cases_json(cases)},
                                    {"limits", to_json(options_.limits)}});
  return decode("run_mutant", [&] { return outcomes_json(result); });
}

CompileResult WorkerSession::compile_check(std::string_view test_text) {
  auto result = call("compile_check", {{"text", std::string(test_text)}});
  return decode("compile_check", [&] {
    CompileResult out;
    out.ok = result.at("ok").get<bool>();
    for (const auto& d : result.value("diagnostics", Json::array())) {
      out.diagnostics.push_back(diagnostic_from_json(d));
    }
    return out;
  });
}

TestRunResult WorkerSession::run_tests(const SourceArtifact& source, std::string_view test_text) {
  auto result = call("run_tests", {{"path", source.path},
                                   {"source", source.text},
                                   {"tests", std::string(test_text)},
                                   {"limits", to_json(options_.limits)}});
  return decode("run_tests", [&] {
    TestRunResult out;
    out.coverage = coverage_from_json(result.at("coverage"));
    out.passed = result.value("passed", 0);
    out.failed = result.value("failed", 0);
    return out;
  });
}

}  // namespace evotest
