#include "evotest/synthesis.hpp"

#include <fstream>
#include <sstream>

#include "evotest/actor.hpp"
#include "evotest/prompts.hpp"

namespace evotest {

void SynthesisConfig::validate() const {
  if (!(temperature >= 0.0 && temperature <= 2.0)) {
    throw Error(ErrorKind::kConfig, "synthesis.temperature must lie in [0, 2]");
  }
  if (max_output_tokens < 1) {
    throw Error(ErrorKind::kConfig, "synthesis.max_output_tokens must be >= 1");
  }
  if (max_cases < 0) throw Error(ErrorKind::kConfig, "synthesis.max_cases must be >= 0");
}

Json to_json(const SynthesisConfig& cfg) {
  return {{"temperature", cfg.temperature},
          {"max_output_tokens", cfg.max_output_tokens},
          {"max_cases", cfg.max_cases},
          {"repair", cfg.repair}};
}

SynthesisConfig synthesis_config_from_json(const Json& j) {
  SynthesisConfig cfg;
  cfg.temperature = j.value("temperature", cfg.temperature);
  cfg.max_output_tokens = j.value("max_output_tokens", cfg.max_output_tokens);
  cfg.max_cases = j.value("max_cases", cfg.max_cases);
  cfg.repair = j.value("repair", cfg.repair);
  return cfg;
}

Json to_json(const TestFileArtifact& artifact) {
  Json diags = Json::array();
  for (const auto& d : artifact.diagnostics) diags.push_back(to_json(d));
  return {{"syntax_ok", artifact.syntax_ok},   {"test_count", artifact.test_count},
          {"run_id", artifact.run_id},         {"stage_count", artifact.stage_count},
          {"attempts", artifact.attempts},     {"diagnostics", std::move(diags)},
          {"usage", to_json(artifact.usage)}};
}

std::string strip_code_fences(std::string_view text) {
  auto open = text.find("```");
  if (open == std::string_view::npos) return std::string(text);
  auto body_start = text.find('\n', open);
  if (body_start == std::string_view::npos) return std::string(text);
  ++body_start;
  auto close = text.find("```", body_start);
  if (close == std::string_view::npos) close = text.size();
  return std::string(text.substr(body_start, close - body_start));
}

int count_tests(std::string_view text) {
  int n = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    auto p = line.find_first_not_of(" \t");
    if (p == std::string::npos) continue;
    std::string_view rest(line);
    rest.remove_prefix(p);
    if (rest.rfind("async ", 0) == 0) rest.remove_prefix(6);
    if (rest.rfind("def test", 0) == 0) ++n;
  }
  return n;
}

Json synthesis_cases(const EliteArchive& archive, int max_cases) {
  Json out = Json::array();
  int n = 0;
  for (const auto& entry : archive.entries()) {
    if (max_cases > 0 && n >= max_cases) break;
    Json rec = {{"function", entry.edge_case.function}, {"input", entry.edge_case.arguments}};
    if (entry.observed) {
      const auto& o = *entry.observed;
      if (o.status == OutcomeStatus::kReturned) {
        auto value = Json::parse(o.value_digest, nullptr, false);
        if (!value.is_discarded()) rec["expected"] = std::move(value);
      } else if (o.status == OutcomeStatus::kRaised && o.exception_type) {
        rec["raises"] = *o.exception_type;
      }
    }
    out.push_back(std::move(rec));
    ++n;
  }
  return out;
}

Json synthesis_cases(std::span<const EdgeCase> cases) {
  Json out = Json::array();
  for (const auto& c : cases) out.push_back({{"function", c.function}, {"input", c.arguments}});
  return out;
}

namespace {

std::string repair_note(const std::vector<Diagnostic>& diags, std::string_view previous) {
  std::string s = "\n\nYOUR PREVIOUS OUTPUT FAILED THE SYNTAX CHECK:\n";
  for (const auto& d : diags) {
    s += "  line " + std::to_string(d.line) + ", column " + std::to_string(d.column) + ": " +
         d.message + "\n";
  }
  s += "\nPREVIOUS OUTPUT:\n";
  s += previous;
  s += "\n\nReturn the corrected test file only.\n";
  return s;
}

}  // namespace

TestFileArtifact synthesize_from_cases(const SourceArtifact& source, const Json& cases,
                                       Gateway& gateway, Executor& executor,
                                       const SynthesisConfig& cfg, bool baseline_prompts,
                                       std::string_view purpose) {
  if (!cases.is_array() || cases.empty()) {
    throw Error(ErrorKind::kPrecondition, "synthesis needs at least one edge case");
  }
  const auto prompt = prompts::synthesis(source.text, cases.dump(2), baseline_prompts);
  const int max_attempts = cfg.repair ? 2 : 1;

  TestFileArtifact artifact;
  std::string user = prompt.user;
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    ChatRequest req;
    req.system_text = prompt.system;
    req.user_text = user;
    req.temperature = cfg.temperature;
    req.max_output_tokens = cfg.max_output_tokens;
    req.purpose = attempt == 1 ? std::string(purpose) : std::string(purpose) + "_repair";
    auto completion = gateway.complete(req);
    artifact.usage += completion.usage;
    artifact.attempts = attempt;
    artifact.text = strip_code_fences(completion.text);
    artifact.test_count = count_tests(artifact.text);
    auto check = executor.compile_check(artifact.text);
    artifact.syntax_ok = check.ok;
    artifact.diagnostics = check.diagnostics;
    if (check.ok) return artifact;
    user = prompt.user + repair_note(check.diagnostics, artifact.text);
  }
  throw SynthesisFailed(artifact, "generated test file failed the syntax check after " +
                                      std::to_string(artifact.attempts) + " attempt(s)");
}

TestFileArtifact synthesize_tests(const SourceArtifact& source, const SearchState& state,
                                  const EliteArchive& archive, Gateway& gateway,
                                  Executor& executor, const SynthesisConfig& cfg,
                                  std::string run_id) {
  cfg.validate();
  if (archive.empty()) {
    throw Error(ErrorKind::kPrecondition, "synthesis needs a non-empty elite archive");
  }
  try {
    auto artifact = synthesize_from_cases(source, synthesis_cases(archive, cfg.max_cases),
                                          gateway, executor, cfg, false, "synthesis");
    artifact.run_id = std::move(run_id);
    artifact.stage_count = state.stage_index();
    return artifact;
  } catch (const SynthesisFailed& e) {
    auto artifact = e.artifact();
    artifact.run_id = std::move(run_id);
    artifact.stage_count = state.stage_index();
    throw SynthesisFailed(std::move(artifact), e.what());
  }
}

void BaselineMode::validate() const {
  if (shots != 0 && shots != 1 && shots != 3) {
    throw Error(ErrorKind::kConfig, "shots must be 0, 1 or 3, got " + std::to_string(shots));
  }
}

std::string BaselineMode::name() const {
  return std::to_string(shots) + "shot" + (cot ? "_cot" : "");
}

std::vector<BaselineMode> all_baseline_modes() {
  return {{0, false}, {0, true}, {1, false}, {1, true}, {3, false}, {3, true}};
}

BaselineResult run_baseline(const SourceArtifact& source,
                            std::span<const FunctionSignature> signatures,
                            const BaselineMode& mode, Gateway& gateway, Executor& executor,
                            SynthesisConfig cfg) {
  mode.validate();
  cfg.validate();
  cfg.repair = false;
  BaselineResult out;
  out.mode = mode;

  const auto prompt = prompts::baseline_cases(source.text, format_functions_list(signatures),
                                              mode.shots, mode.cot);
  ChatRequest req;
  req.system_text = prompt.system;
  req.user_text = prompt.user;
  req.temperature = cfg.temperature;
  req.max_output_tokens = cfg.max_output_tokens;
  req.purpose = "baseline_cases";
  auto completion = gateway.complete(req);
  out.usage += completion.usage;
  out.raw_cases_response = completion.text;

  auto parsed = parse_proposals(completion.text, signatures, {});
  if (parsed.cases.empty()) {
    std::string why = parsed.rejected.empty() ? "no cases" : parsed.rejected.front();
    throw Error(ErrorKind::kActorExhausted, "baseline " + mode.name() +
                                                " produced no valid edge cases (" + why + ")");
  }
  out.cases = std::move(parsed.cases);

  out.artifact = synthesize_from_cases(source, synthesis_cases(out.cases), gateway, executor,
                                       cfg, true, "baseline_synthesis");
  out.usage += out.artifact.usage;
  return out;
}

CoverageReport evaluate_artifact(const TestFileArtifact& artifact, const SourceArtifact& source,
                                 Executor& executor) {
  if (artifact.text.find_first_not_of(" \t\r\n") == std::string::npos) {
    return make_coverage({}, {});
  }
  return executor.run_tests(source, artifact.text).coverage;
}

ArtifactPaths write_artifact(const TestFileArtifact& artifact, const std::filesystem::path& dir,
                             const std::string& stem, const Json& extra_metadata) {
  std::filesystem::create_directories(dir);
  ArtifactPaths paths{dir / ("test_" + stem + ".py"), dir / ("test_" + stem + ".meta.json")};
  {
    std::ofstream out(paths.test_file, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::kPrecondition, "cannot write " + paths.test_file.string());
    out << artifact.text;
  }
  Json meta = to_json(artifact);
  if (extra_metadata.is_object()) {
    for (const auto& [k, v] : extra_metadata.items()) meta[k] = v;
  }
  std::ofstream out(paths.metadata, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kPrecondition, "cannot write " + paths.metadata.string());
  out << meta.dump(2) << '\n';
  return paths;
}

}  // namespace evotest
