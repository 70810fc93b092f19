#pragma once

#include <chrono>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <string>
#include <vector>

#include "evotest/edge_case.hpp"
#include "evotest/trace.hpp"

namespace evotest {

struct ChatRequest {
  std::string system_text;
  std::string user_text;
  double temperature = 0.0;
  int max_output_tokens = 4096;
  std::string model_tag;
  /// Ledger bucket: "actor", "synthesis", "baseline_cases", ...
  std::string purpose = "other";

  void validate() const;
};

struct UsageStats {
  std::int64_t prompt_tokens = 0;
  std::int64_t output_tokens = 0;
  std::int64_t call_count = 0;
  std::int64_t wall_time_ms = 0;

  std::int64_t total_tokens() const noexcept { return prompt_tokens + output_tokens; }
  UsageStats& operator+=(const UsageStats& other) noexcept;
  friend UsageStats operator+(UsageStats a, const UsageStats& b) noexcept { return a += b; }
  friend bool operator==(const UsageStats&, const UsageStats&) = default;
};

/// Additive usage totals, overall and per purpose.
struct UsageLedger {
  UsageStats totals;
  std::map<std::string, UsageStats> by_purpose;

  friend bool operator==(const UsageLedger&, const UsageLedger&) = default;
};

UsageLedger record_usage(UsageLedger ledger, const UsageStats& stats,
                         const std::string& purpose = "other");

Json to_json(const UsageStats& stats);
Json to_json(const UsageLedger& ledger);

/// Rough token count used when the provider reports none: ceil(bytes / 4).
std::int64_t estimate_tokens(std::string_view text) noexcept;

/// What a provider returns for one dispatch.
struct ProviderReply {
  std::string text;
  std::optional<std::int64_t> prompt_tokens;
  std::optional<std::int64_t> output_tokens;
};

/// Thrown by providers. Transient failures are retried by the gateway.
class ProviderFailure : public std::runtime_error {
 public:
  ProviderFailure(bool transient, const std::string& what)
      : std::runtime_error(what), transient_(transient) {}
  bool transient() const noexcept { return transient_; }

 private:
  bool transient_;
};

class ChatProvider {
 public:
  virtual ~ChatProvider() = default;
  virtual ProviderReply send(const ChatRequest& request) = 0;
};

/// Replays an ordered list of responses. Each entry is either a text reply
/// or a scripted failure. Records every request it receives.
class ScriptedProvider final : public ChatProvider {
 public:
  struct Step {
    std::optional<std::string> text;
    bool transient_failure = false;
    bool fatal_failure = false;
    std::string detail;
  };

  explicit ScriptedProvider(std::vector<Step> steps);

  /// Fixture file: a JSON array (or {"responses": [...]}) whose entries are
  /// strings, {"text": "..."} or {"error": "transient"|"fatal", "detail": "..."}.
  static std::shared_ptr<ScriptedProvider> from_file(const std::filesystem::path& path);
  static std::shared_ptr<ScriptedProvider> from_json(const Json& script);
  static std::shared_ptr<ScriptedProvider> with_texts(std::vector<std::string> texts);

  ProviderReply send(const ChatRequest& request) override;

  std::vector<ChatRequest> received() const;
  std::size_t dispatch_count() const;
  std::size_t remaining() const;

 private:
  mutable std::mutex mu_;
  std::deque<Step> steps_;
  std::vector<ChatRequest> received_;
};

/// OpenAI-compatible chat-completions endpoint over HTTP(S).
class HttpChatProvider final : public ChatProvider {
 public:
  struct Options {
    std::string endpoint;  // scheme://host[:port]
    std::string path = "/v1/chat/completions";
    std::string api_key;
    std::chrono::milliseconds timeout{120000};
  };

  explicit HttpChatProvider(Options options);
  ProviderReply send(const ChatRequest& request) override;

 private:
  Options options_;
};

struct GatewayOptions {
  int max_retries = 3;
  std::chrono::milliseconds backoff_initial{500};
  std::chrono::milliseconds backoff_cap{8000};
  /// Run-level cap on prompt + output tokens; 0 disables it.
  std::int64_t token_cap = 0;
  int max_in_flight = 4;
  /// Filled into requests that carry no model tag of their own.
  std::string model_tag;
};

struct Completion {
  std::string text;
  UsageStats usage;
};

/// Provider-agnostic chat client: retries transient failures with capped
/// exponential backoff, enforces the token cap and keeps the usage ledger.
/// Safe to share between threads.
class Gateway {
 public:
  using Sleeper = std::function<void(std::chrono::milliseconds)>;

  Gateway(std::shared_ptr<ChatProvider> provider, GatewayOptions options,
          EventSink* sink = nullptr, Clock clock = steady_clock_ms(), Sleeper sleeper = {});

  /// Throws GatewayError(kGateway) after exhausting retries, or
  /// GatewayError(kBudgetExceeded) before dispatch when the projected usage
  /// would cross the token cap.
  Completion complete(const ChatRequest& request);

  UsageLedger ledger() const;

 private:
  std::shared_ptr<ChatProvider> provider_;
  GatewayOptions options_;
  EventSink* sink_;
  Clock clock_;
  Sleeper sleeper_;
  std::counting_semaphore<1024> in_flight_;
  mutable std::mutex mu_;
  UsageLedger ledger_;
  std::int64_t reserved_tokens_ = 0;
};

}  // namespace evotest
