#include "evotest/trace.hpp"

#include <chrono>

#include "evotest/critic.hpp"
#include "evotest/errors.hpp"

namespace evotest {

Clock steady_clock_ms() {
  return [] {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
  };
}

TraceWriter::TraceWriter(const std::filesystem::path& path) : path_(path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  out_.open(path, std::ios::binary | std::ios::trunc);
  if (!out_) throw Error(ErrorKind::kTrace, "cannot open trace file " + path.string());
}

void TraceWriter::emit(Json record) {
  std::lock_guard lock(mu_);
  record["schema"] = kTraceSchemaVersion;
  record["seq"] = seq_++;
  out_ << record.dump(-1, ' ', false, Json::error_handler_t::replace) << '\n';
  out_.flush();
}

void MemorySink::emit(Json record) {
  std::lock_guard lock(mu_);
  record["schema"] = kTraceSchemaVersion;
  record["seq"] = static_cast<std::int64_t>(records_.size());
  records_.push_back(std::move(record));
}

std::vector<Json> MemorySink::records() const {
  std::lock_guard lock(mu_);
  return records_;
}

std::size_t MemorySink::count(std::string_view type) const {
  std::lock_guard lock(mu_);
  std::size_t n = 0;
  for (const auto& r : records_) {
    if (r.value("type", std::string{}) == type) ++n;
  }
  return n;
}

std::vector<Json> read_trace(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kTrace, "cannot open trace " + path.string());
  std::vector<Json> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto j = Json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("type")) {
      throw Error(ErrorKind::kTrace,
                  path.string() + ":" + std::to_string(lineno) + ": malformed trace record");
    }
    if (j.value("schema", 0) != kTraceSchemaVersion) {
      throw Error(ErrorKind::kTrace,
                  path.string() + ":" + std::to_string(lineno) + ": unsupported schema");
    }
    out.push_back(std::move(j));
  }
  return out;
}

ReplayReport replay_rewards(const std::vector<Json>& records) {
  ReplayReport report;
  for (const auto& r : records) {
    if (r.value("type", std::string{}) != "stage") continue;
    ++report.stage_records;
    if (!r.contains("reward")) continue;
    ++report.reward_records;
    auto stored = reward_record_from_json(r.at("reward"));
    auto again = score(stored.inputs, stored.params);
    if (again.unnormalized != stored.unnormalized || again.normalized != stored.normalized) {
      report.mismatches.push_back("stage " + std::to_string(r.value("stage", 0)) +
                                  ": reward does not replay");
    }
  }
  return report;
}

TracedExecutor::TracedExecutor(Executor& inner, EventSink& sink, Clock clock)
    : inner_(inner), sink_(sink), clock_(std::move(clock)) {}

template <typename F>
auto TracedExecutor::traced(const char* tool, Json detail, F&& call) -> decltype(call()) {
  const auto start = clock_();
  Json record = {{"type", "executor_request"}, {"tool", tool}, {"args", std::move(detail)}};
  try {
    auto result = call();
    record["ok"] = true;
    record["elapsed_ms"] = clock_() - start;
    sink_.emit(std::move(record));
    return result;
  } catch (const Error& e) {
    record["ok"] = false;
    record["error"] = to_string(e.kind());
    record["elapsed_ms"] = clock_() - start;
    sink_.emit(std::move(record));
    throw;
  }
}

std::vector<FunctionSignature> TracedExecutor::analyze(const SourceArtifact& source) {
  return traced("analyze", {{"source", source.path}}, [&] { return inner_.analyze(source); });
}

BatchResult TracedExecutor::run_cases(const SourceArtifact& source,
                                      std::span<const EdgeCase> cases) {
  return traced("run_cases", {{"cases", cases.size()}},
                [&] { return inner_.run_cases(source, cases); });
}

std::vector<MutantDescriptor> TracedExecutor::generate_mutants(const SourceArtifact& source,
                                                               int pool_target,
                                                               std::uint64_t seed) {
  return traced("generate_mutants", {{"pool_target", pool_target}, {"seed", seed}},
                [&] { return inner_.generate_mutants(source, pool_target, seed); });
}

std::vector<CaseOutcome> TracedExecutor::run_mutant(const SourceArtifact& source,
                                                    const std::string& mutant_id,
                                                    std::span<const EdgeCase> cases) {
  return traced("run_mutant", {{"mutant_id", mutant_id}, {"cases", cases.size()}},
                [&] { return inner_.run_mutant(source, mutant_id, cases); });
}

CompileResult TracedExecutor::compile_check(std::string_view test_text) {
  return traced("compile_check", {{"bytes", test_text.size()}},
                [&] { return inner_.compile_check(test_text); });
}

TestRunResult TracedExecutor::run_tests(const SourceArtifact& source,
                                        std::string_view test_text) {
  return traced("run_tests", {{"bytes", test_text.size()}},
                [&] { return inner_.run_tests(source, test_text); });
}

void TracedExecutor::recover() {
  traced("recover", Json::object(), [&] {
    inner_.recover();
    return 0;
  });
}

}  // namespace evotest
