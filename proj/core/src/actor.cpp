#include "evotest/actor.hpp"

#include <cstdio>

#include "evotest/errors.hpp"
#include "evotest/prompts.hpp"

namespace evotest {

void ActorConfig::validate() const {
  if (target_count < 1) {
    throw Error(ErrorKind::kConfig, "actor.target_count must be >= 1");
  }
  if (retries < 0) throw Error(ErrorKind::kConfig, "actor.retries must be >= 0");
  if (cold_start_budget < 0) {
    throw Error(ErrorKind::kConfig, "actor.cold_start_budget must be >= 0");
  }
  if (!(temperature >= 0.0 && temperature <= 2.0)) {
    throw Error(ErrorKind::kConfig, "actor.temperature must lie in [0, 2]");
  }
  if (max_output_tokens < 1) {
    throw Error(ErrorKind::kConfig, "actor.max_output_tokens must be >= 1");
  }
  if (feedback_limit < 1) {
    throw Error(ErrorKind::kConfig, "actor.feedback_limit must be >= 1");
  }
}

Json to_json(const ActorConfig& cfg) {
  return {{"target_count", cfg.target_count},     {"retries", cfg.retries},
          {"cot", cfg.cot},                       {"cold_start_budget", cfg.cold_start_budget},
          {"temperature", cfg.temperature},       {"max_output_tokens", cfg.max_output_tokens},
          {"feedback_limit", cfg.feedback_limit}};
}

ActorConfig actor_config_from_json(const Json& j) {
  ActorConfig cfg;
  cfg.target_count = j.value("target_count", cfg.target_count);
  cfg.retries = j.value("retries", cfg.retries);
  cfg.cot = j.value("cot", cfg.cot);
  cfg.cold_start_budget = j.value("cold_start_budget", cfg.cold_start_budget);
  cfg.temperature = j.value("temperature", cfg.temperature);
  cfg.max_output_tokens = j.value("max_output_tokens", cfg.max_output_tokens);
  cfg.feedback_limit = j.value("feedback_limit", cfg.feedback_limit);
  return cfg;
}

std::optional<std::string_view> extract_json_object(std::string_view text) {
  const auto start = text.find('{');
  if (start == std::string_view::npos) return std::nullopt;
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (std::size_t i = start; i < text.size(); ++i) {
    const char ch = text[i];
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (ch == '\\') {
        escaped = true;
      } else if (ch == '"') {
        in_string = false;
      }
      continue;
    }
    if (ch == '"') {
      in_string = true;
    } else if (ch == '{') {
      ++depth;
    } else if (ch == '}') {
      if (--depth == 0) return text.substr(start, i - start + 1);
    }
  }
  return std::nullopt;
}

ParsedProposals parse_proposals(std::string_view text,
                                std::span<const FunctionSignature> signatures,
                                const std::set<std::string>& seen) {
  ParsedProposals out;
  auto region = extract_json_object(text);
  if (!region) {
    out.rejected.push_back("no balanced JSON object in response");
    return out;
  }
  auto doc = Json::parse(*region, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    out.rejected.push_back("response is not a strict JSON object");
    return out;
  }
  std::set<std::string> batch_seen;
  for (const auto& [fn, entries] : doc.items()) {
    const auto* sig = find_signature(signatures, fn);
    if (!sig) {
      out.rejected.push_back("unknown function '" + fn + "'");
      continue;
    }
    if (!entries.is_array()) {
      out.rejected.push_back("cases for '" + fn + "' are not an array");
      continue;
    }
    for (const auto& args : entries) {
      if (!args.is_object()) {
        out.rejected.push_back("case for '" + fn + "' is not an object");
        continue;
      }
      EdgeCase c{fn, args};
      if (!matches_signature(c, *sig)) {
        out.rejected.push_back("case for '" + fn + "' does not match its parameters");
        continue;
      }
      auto key = c.canonical();
      if (seen.count(key)) {
        out.duplicates.push_back(std::move(c));
        continue;
      }
      if (!batch_seen.insert(key).second) continue;
      out.cases.push_back(std::move(c));
    }
  }
  return out;
}

namespace {

std::string percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", fraction * 100.0);
  return buf;
}

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string stage_block(const SearchState& state, std::size_t i) {
  const auto& cov = state.coverage_history()[i];
  const auto& exc = state.exception_history()[i];
  std::string s = "stage " + std::to_string(state.edge_case_history()[i].stage) + ": line " +
                  percent(cov.line) + ", branch " + percent(cov.branch) + ", function " +
                  percent(cov.function) + "; mutation score " +
                  fixed3(state.mutation_history()[i]) + "; reward " +
                  fixed3(state.reward_history()[i]) + "\n";
  s += "  uncovered lines: ";
  if (cov.uncovered_lines.empty()) {
    s += "none";
  } else {
    for (std::size_t k = 0; k < cov.uncovered_lines.size(); ++k) {
      if (k) s += ", ";
      s += std::to_string(cov.uncovered_lines[k]);
    }
  }
  s += "\n  exceptions: ";
  if (exc.types.empty()) {
    s += "none";
  } else {
    for (std::size_t k = 0; k < exc.types.size(); ++k) {
      if (k) s += ", ";
      s += exc.types[k];
    }
  }
  s += "\n";
  return s;
}

std::string trend_line(const std::vector<double>& rewards) {
  std::string s = "reward trend: ";
  for (std::size_t i = 0; i < rewards.size(); ++i) {
    if (i) s += " -> ";
    s += fixed3(rewards[i]);
  }
  if (rewards.size() >= 2) {
    const double d = rewards.back() - rewards[rewards.size() - 2];
    s += d > 0 ? " (rising)" : d < 0 ? " (falling)" : " (flat)";
  }
  return s;
}

}  // namespace

std::string summarize_feedback(const SearchState& state, std::size_t limit) {
  std::string out;
  if (state.empty()) {
    out = "no prior feedback";
  } else {
    std::vector<std::string> blocks;
    for (std::size_t i = 0; i < static_cast<std::size_t>(state.stage_index()); ++i) {
      blocks.push_back(stage_block(state, i));
    }
    const std::string trend = trend_line(state.reward_history());
    std::size_t first = 0;
    auto total = [&] {
      std::size_t n = trend.size();
      for (std::size_t i = first; i < blocks.size(); ++i) n += blocks[i].size();
      return n;
    };
    while (first + 1 < blocks.size() && total() > limit) ++first;
    for (std::size_t i = first; i < blocks.size(); ++i) out += blocks[i];
    out += trend;
  }
  if (out.size() > limit) out.resize(limit);
  return out;
}

LlmActor::LlmActor(Gateway& gateway, ActorConfig cfg) : gateway_(gateway), cfg_(cfg) {
  cfg_.validate();
}

ProposalBatch LlmActor::cold_start(std::span<const FunctionSignature> signatures) {
  return evotest::cold_start(signatures, cfg_.cold_start_budget);
}

std::string LlmActor::render_user_prompt(const SourceArtifact& source,
                                         std::span<const FunctionSignature> signatures,
                                         const SearchState& state) const {
  const auto limit = static_cast<std::size_t>(cfg_.feedback_limit);
  std::string feedback = summarize_feedback(state, limit);

  std::vector<EdgeCase> prior;
  for (const auto& batch : state.edge_case_history()) {
    prior.insert(prior.end(), batch.cases.begin(), batch.cases.end());
  }
  if (!prior.empty()) {
    // Most recent cases win when the list does not fit.
    std::size_t first = 0;
    std::string listing;
    for (;;) {
      listing = group_by_function(std::span(prior).subspan(first)).dump();
      if (listing.size() <= limit || first + 1 >= prior.size()) break;
      ++first;
    }
    if (listing.size() <= limit) {
      feedback += "\n\nPREVIOUSLY GENERATED EDGE CASES (do not repeat):\n" + listing;
    }
  }
  return prompts::actor_user(source.text, format_functions_list(signatures), feedback,
                             cfg_.target_count);
}

ProposalBatch LlmActor::propose(const SourceArtifact& source,
                                std::span<const FunctionSignature> signatures,
                                const SearchState& state) {
  if (state.empty()) {
    throw Error(ErrorKind::kPrecondition, "propose needs at least one completed stage");
  }
  const auto seen = state.seen_canonical();
  ProposalBatch batch;
  batch.stage = state.stage_index() + 1;
  batch.origin = ProposalOrigin::kLlm;

  const std::string system = prompts::actor_system(cfg_.cot);
  for (int attempt = 0; attempt <= cfg_.retries; ++attempt) {
    ChatRequest req;
    req.system_text = system;
    req.user_text = render_user_prompt(source, signatures, state);
    req.temperature = cfg_.temperature;
    req.max_output_tokens = cfg_.max_output_tokens;
    req.purpose = "actor";
    auto completion = gateway_.complete(req);
    batch.attempts = attempt + 1;
    batch.raw_response = completion.text;

    auto parsed = parse_proposals(completion.text, signatures, seen);
    if (!parsed.cases.empty()) {
      batch.cases = std::move(parsed.cases);
      return batch;
    }
  }
  throw Error(ErrorKind::kActorExhausted,
              "actor produced no new valid edge cases after " +
                  std::to_string(cfg_.retries + 1) + " attempt(s)");
}

}  // namespace evotest
