#pragma once

#include <string>

#include "synth/agents/client.hpp"

namespace synth::agents {

// Chat-completions HTTP backend speaking the common OpenAI-style wire format:
// POST {endpoint}/v1/chat/completions with a JSON body of model, temperature,
// max_tokens, and messages, authenticated by a bearer token read from the
// environment variable named in the config. Transport and HTTP failures map
// onto the client error taxonomy (timeouts and 429/5xx are retryable; auth
// and policy rejections are not); retries themselves live in complete().
class HttpCompletionClient : public CompletionClient {
  public:
    explicit HttpCompletionClient(ClientConfig config);

    std::string complete_once(const CompletionRequest& request) override;

    // The bearer token, resolved per call so tests can adjust the
    // environment. Empty api_key_env means anonymous access (local servers).
    std::string resolve_api_key() const;

  private:
    std::string host_;  // scheme://host[:port]
    std::string path_;  // request path, e.g. "/v1/chat/completions"
};

}  // namespace synth::agents
