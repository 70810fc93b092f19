#include "evotest/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "evotest/errors.hpp"
#include "evotest/prompts.hpp"
#include "evotest/report.hpp"

namespace evotest {

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kConfig:
    case ErrorKind::kNoTargets:
    case ErrorKind::kParseFailure:
      return kExitUsage;
    case ErrorKind::kActorExhausted:
      return kExitActorExhausted;
    case ErrorKind::kSpawnFailure:
    case ErrorKind::kHandshakeMismatch:
    case ErrorKind::kSessionLost:
    case ErrorKind::kSessionClosed:
      return kExitExecutorUnavailable;
    case ErrorKind::kSynthesisFailed:
      return kExitSynthesisFailed;
    case ErrorKind::kGateway:
    case ErrorKind::kBudgetExceeded:
      return kExitGateway;
    default:
      return kExitInternal;
  }
}

std::unique_ptr<Executor> default_executor(const EngineConfig& cfg) {
  SessionOptions opts;
  opts.command = cfg.executor.worker_cmd;
  opts.required_isolation = cfg.executor.isolation;
  opts.limits = cfg.limits;
  opts.handshake_timeout = std::chrono::milliseconds(cfg.executor.handshake_timeout_ms);
  opts.grace = std::chrono::milliseconds(cfg.executor.grace_ms);
  return WorkerSession::open(std::move(opts));
}

std::shared_ptr<ChatProvider> default_provider(const GatewayConfig& cfg) {
  if (cfg.provider == "mock") {
    if (cfg.mock_script.empty()) {
      throw Error(ErrorKind::kConfig, "gateway.mock_script is required for the mock provider");
    }
    return ScriptedProvider::from_file(cfg.mock_script);
  }
  if (cfg.provider != "openai") {
    throw Error(ErrorKind::kConfig, "unknown gateway.provider '" + cfg.provider + "'");
  }
  HttpChatProvider::Options opts;
  opts.endpoint = cfg.endpoint;
  opts.path = cfg.path;
  opts.timeout = std::chrono::milliseconds(cfg.timeout_ms);
  if (!cfg.api_key_env.empty()) {
    const char* key = std::getenv(cfg.api_key_env.c_str());
    if (!key || !*key) {
      throw Error(ErrorKind::kConfig, "environment variable " + cfg.api_key_env + " is not set");
    }
    opts.api_key = key;
  }
  return std::make_shared<HttpChatProvider>(std::move(opts));
}

Services Services::defaults() {
  Services s;
  s.make_executor = default_executor;
  s.make_provider = default_provider;
  s.clock = steady_clock_ms();
  s.out = &std::cout;
  s.err = &std::cerr;
  return s;
}

namespace {

void fill_defaults(Services& s) {
  auto d = Services::defaults();
  if (!s.make_executor) s.make_executor = d.make_executor;
  if (!s.make_provider) s.make_provider = d.make_provider;
  if (!s.clock) s.clock = d.clock;
  if (!s.out) s.out = d.out;
  if (!s.err) s.err = d.err;
}

std::uint64_t fnv1a(std::string_view text, std::uint64_t h = 0xcbf29ce484222325ull) {
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

/// Serialises writes to the shared output streams across jobs.
class Console {
 public:
  Console(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}
  void out(const std::string& line) {
    std::lock_guard lock(mu_);
    out_ << line << '\n' << std::flush;
  }
  void err(const std::string& line) {
    std::lock_guard lock(mu_);
    err_ << line << '\n' << std::flush;
  }

 private:
  std::mutex mu_;
  std::ostream& out_;
  std::ostream& err_;
};

void write_json(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << j.dump(2) << '\n';
  if (!out) throw Error(ErrorKind::kTrace, "cannot write " + path.string());
}

std::optional<EngineConfig> load_or_report(const std::optional<std::filesystem::path>& path,
                                           const std::vector<std::string>& overrides,
                                           Console& console) {
  try {
    return load_config(path, overrides);
  } catch (const Error& e) {
    console.err(std::string("error: ") + e.what());
    return std::nullopt;
  }
}

std::string summary_line(const std::string& label, const RunSummary& s, int code) {
  char buf[256];
  const double line = s.coverage_final ? s.coverage_final->line * 100 : 0.0;
  std::snprintf(buf, sizeof buf, "%s: stages=%d stop=%s resolved=%s line=%.1f%% exit=%d",
                label.c_str(), s.stages_used,
                s.stop_reason ? to_string(*s.stop_reason) : "none",
                s.resolution ? "yes" : "no", line, code);
  std::string out = buf;
  if (!s.failure.empty()) out += " failure=" + s.failure;
  return out;
}

Json summary_record(const RunSummary& s, const std::string& method) {
  Json j = to_json(s);
  j["type"] = "summary";
  j["method"] = method;
  return j;
}

std::optional<CoverageReport> try_evaluate(const TestFileArtifact& artifact,
                                           const SourceArtifact& source, Executor& executor,
                                           Console& console) {
  try {
    return evaluate_artifact(artifact, source, executor);
  } catch (const Error& e) {
    console.err("warning: " + source.path + ": test file evaluation failed: " + e.what());
    return std::nullopt;
  }
}

int run_one(const std::filesystem::path& path, const EngineConfig& cfg, Services& services,
            Console& console) {
  SourceArtifact source;
  try {
    source = SourceArtifact::load(path);
  } catch (const Error& e) {
    console.err(std::string("error: ") + e.what());
    return kExitUsage;
  }
  const std::string stem = source.stem();
  const auto dir = std::filesystem::path(cfg.output_dir) / stem;
  std::filesystem::create_directories(dir);
  const std::string run_id = make_run_id(source, cfg, "evolutionary");

  TraceWriter trace(dir / "trace.jsonl");
  trace.emit({{"type", "config"},
              {"run_id", run_id},
              {"source", source.path},
              {"template_version", prompts::kTemplateVersion},
              {"config", to_json(cfg)}});
  const auto started = services.clock();

  RunSummary summary;
  summary.run_id = run_id;
  summary.source = source.path;
  int code = kExitInternal;
  std::optional<UsageLedger> ledger;

  auto finish = [&](int exit_code) {
    summary.wall_time_ms = services.clock() - started;
    if (ledger) trace.emit({{"type", "usage"}, {"ledger", to_json(*ledger)}});
    trace.emit(summary_record(summary, "evolutionary"));
    write_json(dir / "summary.json", to_json(summary));
    console.out(summary_line(source.path, summary, exit_code));
    return exit_code;
  };

  std::unique_ptr<Executor> executor;
  std::shared_ptr<ChatProvider> provider;
  try {
    provider = services.make_provider(cfg.gateway);
    executor = services.make_executor(cfg);
  } catch (const Error& e) {
    console.err(std::string("error: ") + e.what());
    summary.failure = to_string(e.kind());
    return finish(exit_code_for(e.kind()));
  }

  Gateway gateway(provider, cfg.gateway.options(), &trace, services.clock, services.sleeper);
  TracedExecutor traced(*executor, trace, services.clock);
  LlmActor actor(gateway, cfg.actor);

  auto outcome = run_search(source, traced, actor, cfg.search(), &trace);
  summary = summarize_run(outcome, nullptr, std::nullopt, 0);
  summary.run_id = run_id;
  summary.source = source.path;
  if (outcome.failure) {
    console.err("error: " + source.path + ": " + outcome.failure_detail);
    ledger = gateway.ledger();
    return finish(exit_code_for(*outcome.failure));
  }

  TestFileArtifact artifact;
  try {
    artifact = synthesize_tests(source, outcome.state, outcome.archive, gateway, traced,
                                cfg.synthesis, run_id);
    code = kExitResolved;
  } catch (const SynthesisFailed& e) {
    artifact = e.artifact();
    artifact.run_id = run_id;
    artifact.stage_count = outcome.stage_count();
    code = kExitSynthesisFailed;
    console.err("error: " + source.path + ": " + e.what());
  } catch (const Error& e) {
    console.err("error: " + source.path + ": " + e.what());
    summary.failure = to_string(e.kind());
    ledger = gateway.ledger();
    return finish(exit_code_for(e.kind()));
  }

  std::optional<CoverageReport> coverage_final;
  if (artifact.syntax_ok) coverage_final = try_evaluate(artifact, source, traced, console);

  const auto paths = write_artifact(artifact, dir, stem,
                                    {{"source", source.path}, {"method", "evolutionary"}});
  trace.emit({{"type", "artifact"},
              {"test_file", paths.test_file.filename().string()},
              {"metadata", paths.metadata.filename().string()},
              {"artifact", to_json(artifact)}});

  ledger = gateway.ledger();
  summary = summarize_run(outcome, &artifact, coverage_final, 0);
  summary.run_id = run_id;
  summary.source = source.path;
  if (code == kExitSynthesisFailed) {
    summary.failure = to_string(ErrorKind::kSynthesisFailed);
  } else if (!summary.resolution) {
    code = kExitUnresolved;
  }
  return finish(code);
}

int baseline_one(const std::filesystem::path& path, const EngineConfig& cfg,
                 const BaselineMode& mode, Services& services, Console& console) {
  SourceArtifact source;
  try {
    source = SourceArtifact::load(path);
  } catch (const Error& e) {
    console.err(std::string("error: ") + e.what());
    return kExitUsage;
  }
  const std::string stem = source.stem();
  const std::string method = "baseline_" + mode.name();
  const auto dir = std::filesystem::path(cfg.output_dir) / stem / method;
  std::filesystem::create_directories(dir);
  const std::string run_id = make_run_id(source, cfg, method);

  TraceWriter trace(dir / "trace.jsonl");
  trace.emit({{"type", "config"},
              {"run_id", run_id},
              {"source", source.path},
              {"method", method},
              {"template_version", prompts::kTemplateVersion},
              {"config", to_json(cfg)}});
  const auto started = services.clock();

  RunSummary summary;
  summary.run_id = run_id;
  summary.source = source.path;
  summary.stages_used = 1;
  std::optional<UsageLedger> ledger;
  auto finish = [&](int exit_code) {
    summary.wall_time_ms = services.clock() - started;
    if (ledger) trace.emit({{"type", "usage"}, {"ledger", to_json(*ledger)}});
    trace.emit(summary_record(summary, method));
    write_json(dir / "summary.json", to_json(summary));
    console.out(summary_line(source.path + " [" + method + "]", summary, exit_code));
    return exit_code;
  };

  std::unique_ptr<Executor> executor;
  std::shared_ptr<ChatProvider> provider;
  try {
    provider = services.make_provider(cfg.gateway);
    executor = services.make_executor(cfg);
  } catch (const Error& e) {
    console.err(std::string("error: ") + e.what());
    summary.failure = to_string(e.kind());
    return finish(exit_code_for(e.kind()));
  }
  Gateway gateway(provider, cfg.gateway.options(), &trace, services.clock, services.sleeper);
  TracedExecutor traced(*executor, trace, services.clock);

  TestFileArtifact artifact;
  int code = kExitResolved;
  try {
    const auto signatures = traced.analyze(source);
    if (signatures.empty()) throw Error(ErrorKind::kNoTargets, "no target functions in source");
    auto result = run_baseline(source, signatures, mode, gateway, traced, cfg.synthesis);
    artifact = std::move(result.artifact);
    summary.coverage_search = std::nullopt;
  } catch (const SynthesisFailed& e) {
    artifact = e.artifact();
    code = kExitSynthesisFailed;
    console.err("error: " + source.path + ": " + e.what());
  } catch (const Error& e) {
    console.err("error: " + source.path + ": " + e.what());
    summary.failure = to_string(e.kind());
    ledger = gateway.ledger();
    return finish(exit_code_for(e.kind()));
  }
  artifact.run_id = run_id;
  artifact.stage_count = 1;

  if (artifact.syntax_ok) {
    summary.coverage_final = try_evaluate(artifact, source, traced, console);
  }
  const auto paths =
      write_artifact(artifact, dir, stem, {{"source", source.path}, {"method", method}});
  trace.emit({{"type", "artifact"},
              {"test_file", paths.test_file.filename().string()},
              {"metadata", paths.metadata.filename().string()},
              {"artifact", to_json(artifact)}});
  ledger = gateway.ledger();
  summary.resolution = artifact.syntax_ok;
  if (code == kExitSynthesisFailed) summary.failure = to_string(ErrorKind::kSynthesisFailed);
  return finish(code);
}

/// Runs `task(i)` for every index on up to `jobs` threads and returns the
/// first non-zero code in index order.
int fan_out(std::size_t count, int jobs, const std::function<int(std::size_t)>& task) {
  std::vector<int> codes(count, 0);
  const auto workers = static_cast<std::size_t>(std::clamp<int>(jobs, 1, 256));
  std::atomic<std::size_t> next{0};
  auto loop = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      try {
        codes[i] = task(i);
      } catch (...) {
        codes[i] = kExitInternal;
      }
    }
  };
  if (workers == 1 || count <= 1) {
    loop();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < std::min(workers, count); ++w) pool.emplace_back(loop);
    for (auto& t : pool) t.join();
  }
  for (int c : codes) {
    if (c != 0) return c;
  }
  return 0;
}

}  // namespace

std::string make_run_id(const SourceArtifact& source, const EngineConfig& cfg,
                        std::string_view method) {
  auto h = fnv1a(source.text);
  h = fnv1a(to_json(cfg).dump(), h);
  h = fnv1a(method, h);
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return source.stem() + "-" + buf;
}

int cmd_run(const RunRequest& request, Services services) {
  fill_defaults(services);
  Console console(*services.out, *services.err);
  if (request.sources.empty()) {
    console.err("error: no source files given");
    return kExitUsage;
  }
  if (request.jobs < 1) {
    console.err("error: --jobs must be >= 1");
    return kExitUsage;
  }
  auto cfg = load_or_report(request.config, request.overrides, console);
  if (!cfg) return kExitUsage;
  return fan_out(request.sources.size(), request.jobs, [&](std::size_t i) {
    try {
      return run_one(request.sources[i], *cfg, services, console);
    } catch (const std::exception& e) {
      console.err("internal error: " + request.sources[i].string() + ": " + e.what());
      return static_cast<int>(kExitInternal);
    }
  });
}

int cmd_baseline(const BaselineRequest& request, Services services) {
  fill_defaults(services);
  Console console(*services.out, *services.err);
  if (request.sources.empty()) {
    console.err("error: no source files given");
    return kExitUsage;
  }
  std::vector<BaselineMode> modes;
  if (request.all) {
    modes = all_baseline_modes();
  } else {
    BaselineMode mode{request.shots, request.cot};
    try {
      mode.validate();
    } catch (const Error& e) {
      console.err(std::string("error: ") + e.what());
      return kExitUsage;
    }
    modes.push_back(mode);
  }
  auto cfg = load_or_report(request.config, request.overrides, console);
  if (!cfg) return kExitUsage;
  int first = 0;
  for (const auto& source : request.sources) {
    for (const auto& mode : modes) {
      int code;
      try {
        code = baseline_one(source, *cfg, mode, services, console);
      } catch (const std::exception& e) {
        console.err("internal error: " + source.string() + ": " + e.what());
        code = kExitInternal;
      }
      if (first == 0) first = code;
    }
  }
  return first;
}

int cmd_report(const std::filesystem::path& dir, Services services) {
  fill_defaults(services);
  Console console(*services.out, *services.err);
  std::error_code ec;
  if (std::filesystem::exists(dir, ec) && !std::filesystem::is_directory(dir, ec)) {
    console.err("error: " + dir.string() + " is not a directory");
    return kExitUsage;
  }
  std::ostringstream warnings;
  auto report = build_report(dir, &warnings);
  if (!warnings.str().empty()) {
    std::string w = warnings.str();
    if (w.back() == '\n') w.pop_back();
    console.err(w);
  }
  if (std::filesystem::is_directory(dir, ec)) {
    try {
      write_json(dir / "report.json", to_json(report));
    } catch (const Error& e) {
      console.err(std::string("warning: ") + e.what());
    }
  }
  std::string text = render_text(report);
  if (!text.empty() && text.back() == '\n') text.pop_back();
  console.out(text);
  return 0;
}

}  // namespace evotest
