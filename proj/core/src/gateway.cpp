#include "evotest/gateway.hpp"

#include <algorithm>
#include <fstream>
#include <thread>

#include "evotest/errors.hpp"

namespace evotest {

void ChatRequest::validate() const {
  if (system_text.empty() || user_text.empty()) {
    throw Error(ErrorKind::kPrecondition, "chat request prompts must be non-empty");
  }
  if (max_output_tokens <= 0) {
    throw Error(ErrorKind::kPrecondition, "max_output_tokens must be positive");
  }
  if (!(temperature >= 0.0)) {
    throw Error(ErrorKind::kPrecondition, "temperature must be nonnegative");
  }
}

UsageStats& UsageStats::operator+=(const UsageStats& other) noexcept {
  prompt_tokens += other.prompt_tokens;
  output_tokens += other.output_tokens;
  call_count += other.call_count;
  wall_time_ms += other.wall_time_ms;
  return *this;
}

UsageLedger record_usage(UsageLedger ledger, const UsageStats& stats,
                         const std::string& purpose) {
  ledger.totals += stats;
  ledger.by_purpose[purpose] += stats;
  return ledger;
}

Json to_json(const UsageStats& stats) {
  return {{"prompt_tokens", stats.prompt_tokens},
          {"output_tokens", stats.output_tokens},
          {"call_count", stats.call_count},
          {"wall_time_ms", stats.wall_time_ms}};
}

Json to_json(const UsageLedger& ledger) {
  Json by = Json::object();
  for (const auto& [purpose, stats] : ledger.by_purpose) by[purpose] = to_json(stats);
  return {{"totals", to_json(ledger.totals)}, {"by_purpose", std::move(by)}};
}

std::int64_t estimate_tokens(std::string_view text) noexcept {
  return static_cast<std::int64_t>((text.size() + 3) / 4);
}

// --- ScriptedProvider ----------------------------------------------------------

ScriptedProvider::ScriptedProvider(std::vector<Step> steps)
    : steps_(steps.begin(), steps.end()) {}

std::shared_ptr<ScriptedProvider> ScriptedProvider::from_json(const Json& script) {
  const Json& list = script.is_object() ? script.at("responses") : script;
  if (!list.is_array()) {
    throw Error(ErrorKind::kConfig, "mock script must be a JSON array of responses");
  }
  std::vector<Step> steps;
  for (const auto& entry : list) {
    Step step;
    if (entry.is_string()) {
      step.text = entry.get<std::string>();
    } else if (entry.is_object() && entry.contains("text")) {
      step.text = entry.at("text").get<std::string>();
    } else if (entry.is_object() && entry.contains("error")) {
      auto kind = entry.at("error").get<std::string>();
      if (kind != "transient" && kind != "fatal") {
        throw Error(ErrorKind::kConfig, "mock script error must be transient or fatal: " + kind);
      }
      step.transient_failure = kind == "transient";
      step.fatal_failure = !step.transient_failure;
      step.detail = entry.value("detail", kind);
    } else {
      throw Error(ErrorKind::kConfig, "unrecognised mock script entry: " + entry.dump());
    }
    steps.push_back(std::move(step));
  }
  return std::make_shared<ScriptedProvider>(std::move(steps));
}

std::shared_ptr<ScriptedProvider> ScriptedProvider::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kConfig, "cannot read mock script " + path.string());
  auto j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorKind::kConfig, "mock script is not JSON: " + path.string());
  return from_json(j);
}

std::shared_ptr<ScriptedProvider> ScriptedProvider::with_texts(std::vector<std::string> texts) {
  std::vector<Step> steps;
  for (auto& t : texts) steps.push_back(Step{std::move(t), false, false, {}});
  return std::make_shared<ScriptedProvider>(std::move(steps));
}

ProviderReply ScriptedProvider::send(const ChatRequest& request) {
  std::lock_guard lock(mu_);
  received_.push_back(request);
  if (steps_.empty()) throw ProviderFailure(false, "mock script exhausted");
  Step step = std::move(steps_.front());
  steps_.pop_front();
  if (step.transient_failure) throw ProviderFailure(true, step.detail);
  if (step.fatal_failure) throw ProviderFailure(false, step.detail);
  return {*step.text, std::nullopt, std::nullopt};
}

std::vector<ChatRequest> ScriptedProvider::received() const {
  std::lock_guard lock(mu_);
  return received_;
}

std::size_t ScriptedProvider::dispatch_count() const {
  std::lock_guard lock(mu_);
  return received_.size();
}

std::size_t ScriptedProvider::remaining() const {
  std::lock_guard lock(mu_);
  return steps_.size();
}

// --- Gateway -------------------------------------------------------------------

Gateway::Gateway(std::shared_ptr<ChatProvider> provider, GatewayOptions options,
                 EventSink* sink, Clock clock, Sleeper sleeper)
    : provider_(std::move(provider)),
      options_(options),
      sink_(sink),
      clock_(std::move(clock)),
      sleeper_(std::move(sleeper)),
      in_flight_(std::clamp(options.max_in_flight, 1, 1024)) {
  if (!provider_) throw Error(ErrorKind::kPrecondition, "gateway needs a provider");
  if (!sleeper_) {
    sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  }
}

Completion Gateway::complete(const ChatRequest& incoming) {
  ChatRequest request = incoming;
  if (request.model_tag.empty()) request.model_tag = options_.model_tag;
  request.validate();
  const std::int64_t projected = estimate_tokens(request.system_text) +
                                 estimate_tokens(request.user_text) +
                                 request.max_output_tokens;
  {
    std::lock_guard lock(mu_);
    if (options_.token_cap > 0 &&
        ledger_.totals.total_tokens() + reserved_tokens_ + projected > options_.token_cap) {
      throw GatewayError(ErrorKind::kBudgetExceeded,
                         "request projects " + std::to_string(projected) +
                             " tokens; run cap " + std::to_string(options_.token_cap) +
                             " would be exceeded");
    }
    reserved_tokens_ += projected;
  }
  struct Release {
    Gateway& g;
    std::int64_t n;
    ~Release() {
      std::lock_guard lock(g.mu_);
      g.reserved_tokens_ -= n;
    }
  } release{*this, projected};

  in_flight_.acquire();
  struct Slot {
    std::counting_semaphore<1024>& s;
    ~Slot() { s.release(); }
  } slot{in_flight_};

  Completion out;
  std::chrono::milliseconds backoff = options_.backoff_initial;
  for (int attempt = 0;; ++attempt) {
    const auto start = clock_();
    UsageStats usage;
    usage.call_count = 1;
    Json record = {{"type", "gateway_call"},
                   {"purpose", request.purpose},
                   {"model", request.model_tag},
                   {"attempt", attempt + 1}};
    try {
      auto reply = provider_->send(request);
      usage.prompt_tokens = reply.prompt_tokens.value_or(
          estimate_tokens(request.system_text) + estimate_tokens(request.user_text));
      usage.output_tokens = reply.output_tokens.value_or(estimate_tokens(reply.text));
      usage.wall_time_ms = clock_() - start;
      {
        std::lock_guard lock(mu_);
        ledger_ = record_usage(std::move(ledger_), usage, request.purpose);
      }
      out.usage += usage;
      record["ok"] = true;
      record["usage"] = to_json(usage);
      if (sink_) sink_->emit(std::move(record));
      out.text = std::move(reply.text);
      return out;
    } catch (const ProviderFailure& failure) {
      usage.wall_time_ms = clock_() - start;
      {
        std::lock_guard lock(mu_);
        ledger_ = record_usage(std::move(ledger_), usage, request.purpose);
      }
      out.usage += usage;
      record["ok"] = false;
      record["error"] = failure.what();
      record["usage"] = to_json(usage);
      if (sink_) sink_->emit(std::move(record));
      if (!failure.transient() || attempt >= options_.max_retries) {
        throw GatewayError(ErrorKind::kGateway,
                           std::string("chat completion failed after ") +
                               std::to_string(attempt + 1) + " attempt(s): " + failure.what());
      }
    }
    sleeper_(backoff);
    backoff = std::min(backoff * 2, options_.backoff_cap);
  }
}

UsageLedger Gateway::ledger() const {
  std::lock_guard lock(mu_);
  return ledger_;
}

}  // namespace evotest
