#include "evotest/config.hpp"

#include <fstream>

#include "evotest/errors.hpp"

namespace evotest {

GatewayOptions GatewayConfig::options() const {
  GatewayOptions o;
  o.max_retries = max_retries;
  o.backoff_initial = std::chrono::milliseconds(backoff_initial_ms);
  o.backoff_cap = std::chrono::milliseconds(backoff_cap_ms);
  o.token_cap = token_cap;
  o.max_in_flight = max_in_flight;
  o.model_tag = model;
  return o;
}

void EngineConfig::validate() const {
  critic.validate();
  stop.validate();
  actor.validate();
  adversary.validate();
  limits.validate();
  synthesis.validate();
  if (archive_capacity < 1) throw Error(ErrorKind::kConfig, "archive_capacity must be >= 1");
  if (executor.worker_cmd.empty() || executor.worker_cmd.front().empty()) {
    throw Error(ErrorKind::kConfig, "executor.worker_cmd must name a program");
  }
  if (executor.handshake_timeout_ms < 1) {
    throw Error(ErrorKind::kConfig, "executor.handshake_timeout_ms must be >= 1");
  }
  if (executor.grace_ms < 0) throw Error(ErrorKind::kConfig, "executor.grace_ms must be >= 0");
  if (gateway.provider != "openai" && gateway.provider != "mock") {
    throw Error(ErrorKind::kConfig,
                "gateway.provider must be 'openai' or 'mock', got '" + gateway.provider + "'");
  }
  if (gateway.provider == "mock" && gateway.mock_script.empty()) {
    throw Error(ErrorKind::kConfig, "gateway.mock_script is required for the mock provider");
  }
  if (gateway.max_retries < 0) throw Error(ErrorKind::kConfig, "gateway.max_retries must be >= 0");
  if (gateway.backoff_initial_ms < 0 || gateway.backoff_cap_ms < gateway.backoff_initial_ms) {
    throw Error(ErrorKind::kConfig,
                "gateway.backoff_initial_ms must be >= 0 and <= gateway.backoff_cap_ms");
  }
  if (gateway.token_cap < 0) throw Error(ErrorKind::kConfig, "gateway.token_cap must be >= 0");
  if (gateway.max_in_flight < 1 || gateway.max_in_flight > 1024) {
    throw Error(ErrorKind::kConfig, "gateway.max_in_flight must lie in [1, 1024]");
  }
  if (gateway.timeout_ms < 1) throw Error(ErrorKind::kConfig, "gateway.timeout_ms must be >= 1");
  if (output_dir.empty()) throw Error(ErrorKind::kConfig, "output_dir must not be empty");
}

SearchConfig EngineConfig::search() const {
  return {critic, stop, adversary, archive_capacity};
}

Json to_json(const EngineConfig& cfg) {
  return {
      {"critic", to_json(cfg.critic)},
      {"stop", to_json(cfg.stop)},
      {"actor", to_json(cfg.actor)},
      {"archive_capacity", cfg.archive_capacity},
      {"adversary", to_json(cfg.adversary)},
      {"limits", to_json(cfg.limits)},
      {"executor",
       {{"worker_cmd", cfg.executor.worker_cmd},
        {"isolation", to_string(cfg.executor.isolation)},
        {"handshake_timeout_ms", cfg.executor.handshake_timeout_ms},
        {"grace_ms", cfg.executor.grace_ms}}},
      {"gateway",
       {{"provider", cfg.gateway.provider},
        {"endpoint", cfg.gateway.endpoint},
        {"path", cfg.gateway.path},
        {"model", cfg.gateway.model},
        {"api_key_env", cfg.gateway.api_key_env},
        {"mock_script", cfg.gateway.mock_script},
        {"max_retries", cfg.gateway.max_retries},
        {"backoff_initial_ms", cfg.gateway.backoff_initial_ms},
        {"backoff_cap_ms", cfg.gateway.backoff_cap_ms},
        {"token_cap", cfg.gateway.token_cap},
        {"max_in_flight", cfg.gateway.max_in_flight},
        {"timeout_ms", cfg.gateway.timeout_ms}}},
      {"synthesis", to_json(cfg.synthesis)},
      {"output_dir", cfg.output_dir},
  };
}

namespace {

const char* type_name(const Json& j) { return j.type_name(); }

bool same_kind(const Json& def, const Json& val) {
  if (def.is_number()) {
    if (!val.is_number()) return false;
    // Integer-valued defaults reject fractional input.
    if (def.is_number_integer() && val.is_number_float()) return false;
    return true;
  }
  return std::string_view(def.type_name()) == val.type_name();
}

void overlay(Json& base, const Json& patch, const std::string& prefix) {
  if (!patch.is_object()) {
    throw Error(ErrorKind::kConfig,
                (prefix.empty() ? std::string("config") : prefix) + " must be an object");
  }
  for (const auto& [key, value] : patch.items()) {
    const std::string path = prefix.empty() ? key : prefix + "." + key;
    auto it = base.find(key);
    if (it == base.end()) throw Error(ErrorKind::kConfig, "unknown config key '" + path + "'");
    if (it->is_object()) {
      overlay(*it, value, path);
      continue;
    }
    if (!same_kind(*it, value)) {
      throw Error(ErrorKind::kConfig, path + " expects " + type_name(*it) + ", got " +
                                          type_name(value));
    }
    if (it->is_array()) {
      for (const auto& e : value) {
        if (!e.is_string()) throw Error(ErrorKind::kConfig, path + " must be a list of strings");
      }
    }
    if (it->is_number_unsigned() && value.is_number_integer() && value.get<std::int64_t>() < 0) {
      throw Error(ErrorKind::kConfig, path + " must be nonnegative");
    }
    *it = value;
  }
}

}  // namespace

EngineConfig config_from_json(const Json& tree) {
  Json merged = to_json(EngineConfig{});
  overlay(merged, tree, "");

  EngineConfig cfg;
  cfg.critic = critic_params_from_json(merged.at("critic"));
  cfg.stop = stop_config_from_json(merged.at("stop"));
  cfg.actor = actor_config_from_json(merged.at("actor"));
  cfg.archive_capacity = merged.at("archive_capacity").get<std::size_t>();
  cfg.adversary = adversary_config_from_json(merged.at("adversary"));
  cfg.limits = limits_from_json(merged.at("limits"));
  const auto& ex = merged.at("executor");
  cfg.executor.worker_cmd = ex.at("worker_cmd").get<std::vector<std::string>>();
  try {
    cfg.executor.isolation = isolation_from_string(ex.at("isolation").get<std::string>());
  } catch (const Error&) {
    throw Error(ErrorKind::kConfig, "executor.isolation must be none, process or container");
  }
  cfg.executor.handshake_timeout_ms = ex.at("handshake_timeout_ms").get<int>();
  cfg.executor.grace_ms = ex.at("grace_ms").get<int>();
  const auto& gw = merged.at("gateway");
  cfg.gateway.provider = gw.at("provider").get<std::string>();
  cfg.gateway.endpoint = gw.at("endpoint").get<std::string>();
  cfg.gateway.path = gw.at("path").get<std::string>();
  cfg.gateway.model = gw.at("model").get<std::string>();
  cfg.gateway.api_key_env = gw.at("api_key_env").get<std::string>();
  cfg.gateway.mock_script = gw.at("mock_script").get<std::string>();
  cfg.gateway.max_retries = gw.at("max_retries").get<int>();
  cfg.gateway.backoff_initial_ms = gw.at("backoff_initial_ms").get<int>();
  cfg.gateway.backoff_cap_ms = gw.at("backoff_cap_ms").get<int>();
  cfg.gateway.token_cap = gw.at("token_cap").get<std::int64_t>();
  cfg.gateway.max_in_flight = gw.at("max_in_flight").get<int>();
  cfg.gateway.timeout_ms = gw.at("timeout_ms").get<int>();
  cfg.synthesis = synthesis_config_from_json(merged.at("synthesis"));
  cfg.output_dir = merged.at("output_dir").get<std::string>();
  cfg.validate();
  return cfg;
}

void apply_override(Json& tree, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw Error(ErrorKind::kConfig,
                "override must look like key=value, got '" + std::string(assignment) + "'");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string raw(assignment.substr(eq + 1));
  Json value = Json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;

  if (!tree.is_object()) tree = Json::object();
  Json* node = &tree;
  std::size_t start = 0;
  for (;;) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? dot : dot - start);
    if (part.empty()) throw Error(ErrorKind::kConfig, "malformed override key '" + key + "'");
    if (dot == std::string::npos) {
      (*node)[part] = std::move(value);
      return;
    }
    Json& next = (*node)[part];
    if (!next.is_object()) next = Json::object();
    node = &next;
    start = dot + 1;
  }
}

EngineConfig load_config(const std::optional<std::filesystem::path>& path,
                         std::span<const std::string> overrides) {
  Json tree = Json::object();
  if (path) {
    std::ifstream in(*path);
    if (!in) throw Error(ErrorKind::kConfig, "cannot read config file " + path->string());
    tree = Json::parse(in, nullptr, false);
    if (tree.is_discarded()) {
      throw Error(ErrorKind::kConfig, "config file is not valid JSON: " + path->string());
    }
  }
  for (const auto& o : overrides) apply_override(tree, o);
  return config_from_json(tree);
}

std::string config_reference_table() {
  std::string out = "| key | default |\n|---|---|\n";
  auto walk = [&](auto&& self, const Json& node, const std::string& prefix) -> void {
    for (const auto& [k, v] : node.items()) {
      const std::string path = prefix.empty() ? k : prefix + "." + k;
      if (v.is_object()) {
        self(self, v, path);
      } else {
        out += "| `" + path + "` | `" + v.dump() + "` |\n";
      }
    }
  };
  walk(walk, to_json(EngineConfig{}), "");
  return out;
}

}  // namespace evotest
