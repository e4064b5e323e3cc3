#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "synth/core/error.hpp"

namespace synth::agents {

struct Message {
    std::string role;  // "system" | "user" | "assistant"
    std::string content;

    bool operator==(const Message&) const = default;
};

struct RetryPolicy {
    int max_attempts = 3;
    std::chrono::milliseconds base_backoff{250};  // doubles per retry
};

struct ClientConfig {
    std::string endpoint = "mock";  // provider base URL, or "mock"
    std::string model = "scripted-default";
    std::string api_key_env;  // name of the env var holding the bearer token
    double temperature = 0.0;
    int max_tokens = 4096;
    std::chrono::milliseconds timeout{30000};
    RetryPolicy retry;
};

// One chat-style completion call. `agent` names the pipeline stage issuing
// the request; it is transcript metadata and part of the scripted-backend
// dispatch, but not part of the wire payload.
struct CompletionRequest {
    std::string agent;
    std::string model;
    double temperature = 0.0;
    int max_tokens = 4096;
    std::vector<Message> messages;
};

// SHA-256 over the canonical JSON payload (model, temperature, max_tokens,
// messages). Two requests with the same digest are interchangeable, which is
// what makes the content-addressed mock store work.
std::string request_digest(const CompletionRequest& request);

// ---- Client errors ---------------------------------------------------------

class ClientError : public Error {
  public:
    using Error::Error;
};

// Retryable: the same request may succeed later.
class Timeout : public ClientError {
  public:
    using ClientError::ClientError;
};
class RateLimited : public ClientError {
  public:
    using ClientError::ClientError;
};

// Non-retryable: retrying the identical request cannot help.
class InvalidAuth : public ClientError {
  public:
    using ClientError::ClientError;
};
class ContentRejected : public ClientError {
  public:
    using ClientError::ClientError;
};

class RetriesExhausted : public ClientError {
  public:
    using ClientError::ClientError;
};

bool is_retryable(const ClientError& error);

// ---- Abstract completion capability ----------------------------------------

class Transcript;

class CompletionClient {
  public:
    explicit CompletionClient(ClientConfig config) : config_(std::move(config)) {}
    virtual ~CompletionClient() = default;

    const ClientConfig& config() const { return config_; }

    // Single transport attempt, no retry logic. Implementations must be safe
    // for concurrent use.
    virtual std::string complete_once(const CompletionRequest& request) = 0;

    // Convenience: a request pre-filled from this client's configuration.
    CompletionRequest make_request(std::string agent, std::vector<Message> messages) const;

  protected:
    ClientConfig config_;
};

// Retrying transport: exponential backoff on retryable errors up to the
// configured attempt bound. Every attempt (success or failure) is appended
// to the transcript when one is supplied.
std::string complete(CompletionClient& client, const CompletionRequest& request,
                     Transcript* transcript);

}  // namespace synth::agents
