#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evotest/actor.hpp"
#include "evotest/adversary.hpp"
#include "evotest/critic.hpp"
#include "evotest/engine.hpp"
#include "evotest/executor.hpp"
#include "evotest/gateway.hpp"
#include "evotest/stopping.hpp"
#include "evotest/synthesis.hpp"
#include "evotest/worker_session.hpp"

namespace evotest {

struct ExecutorConfig {
  std::vector<std::string> worker_cmd = {"evotest-worker"};
  Isolation isolation = Isolation::kProcess;
  int handshake_timeout_ms = 10000;
  int grace_ms = 2000;

  friend bool operator==(const ExecutorConfig&, const ExecutorConfig&) = default;
};

struct GatewayConfig {
  /// "openai" (any OpenAI-compatible endpoint) or "mock".
  std::string provider = "openai";
  std::string endpoint = "https://api.openai.com";
  std::string path = "/v1/chat/completions";
  std::string model = "gpt-4o-mini";
  /// Name of the environment variable holding the API key.
  std::string api_key_env = "OPENAI_API_KEY";
  /// Response script for the mock provider.
  std::string mock_script;
  int max_retries = 3;
  int backoff_initial_ms = 500;
  int backoff_cap_ms = 8000;
  std::int64_t token_cap = 0;
  int max_in_flight = 4;
  int timeout_ms = 120000;

  GatewayOptions options() const;
  friend bool operator==(const GatewayConfig&, const GatewayConfig&) = default;
};

struct EngineConfig {
  CriticParams critic;
  StopConfig stop;
  ActorConfig actor;
  std::size_t archive_capacity = 20;
  AdversaryConfig adversary;
  ResourceLimits limits;
  ExecutorConfig executor;
  GatewayConfig gateway;
  SynthesisConfig synthesis;
  std::string output_dir = "evotest-out";

  /// Throws kConfig naming the first offending field.
  void validate() const;
  SearchConfig search() const;

  friend bool operator==(const EngineConfig&, const EngineConfig&) = default;
};

Json to_json(const EngineConfig& cfg);

/// Overlays `tree` on the defaults. Unknown keys and mistyped values throw
/// kConfig; the result is validated.
EngineConfig config_from_json(const Json& tree);

/// Applies one `dotted.key=value` override to a config tree. The value is
/// parsed as JSON when possible and taken as a string otherwise.
void apply_override(Json& tree, std::string_view assignment);

/// Reads the JSON config file (if any), applies the overrides in order and
/// validates.
EngineConfig load_config(const std::optional<std::filesystem::path>& path,
                         std::span<const std::string> overrides = {});

/// Markdown table of every key with its default.
std::string config_reference_table();

}  // namespace evotest
