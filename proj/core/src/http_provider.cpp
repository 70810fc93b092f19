#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "evotest/errors.hpp"
#include "evotest/gateway.hpp"

namespace evotest {

HttpChatProvider::HttpChatProvider(Options options) : options_(std::move(options)) {
  if (options_.endpoint.empty()) {
    throw Error(ErrorKind::kConfig, "gateway.endpoint is required for the http provider");
  }
}

ProviderReply HttpChatProvider::send(const ChatRequest& request) {
  httplib::Client client(options_.endpoint);
  if (!client.is_valid()) {
    throw ProviderFailure(false, "invalid endpoint " + options_.endpoint);
  }
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(options_.timeout);
  client.set_connection_timeout(secs);
  client.set_read_timeout(secs);
  client.set_write_timeout(secs);

  httplib::Headers headers;
  if (!options_.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + options_.api_key);
  }
  Json body = {{"model", request.model_tag},
               {"temperature", request.temperature},
               {"max_tokens", request.max_output_tokens},
               {"messages",
                Json::array({{{"role", "system"}, {"content", request.system_text}},
                             {{"role", "user"}, {"content", request.user_text}}})}};

  auto res = client.Post(options_.path, headers, body.dump(), "application/json");
  if (!res) {
    throw ProviderFailure(true, "transport error: " + httplib::to_string(res.error()));
  }
  if (res->status == 429 || res->status >= 500) {
    throw ProviderFailure(true, "HTTP " + std::to_string(res->status));
  }
  if (res->status != 200) {
    throw ProviderFailure(false, "HTTP " + std::to_string(res->status) + ": " +
                                     res->body.substr(0, 512));
  }

  auto reply = Json::parse(res->body, nullptr, false);
  if (reply.is_discarded()) throw ProviderFailure(false, "response body is not JSON");
  ProviderReply out;
  try {
    out.text = reply.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const Json::exception& e) {
    throw ProviderFailure(false, std::string("unexpected response shape: ") + e.what());
  }
  if (auto it = reply.find("usage"); it != reply.end() && it->is_object()) {
    if (it->contains("prompt_tokens")) out.prompt_tokens = it->at("prompt_tokens").get<std::int64_t>();
    if (it->contains("completion_tokens")) {
      out.output_tokens = it->at("completion_tokens").get<std::int64_t>();
    }
  }
  return out;
}

}  // namespace evotest
