#include "synth/agents/client.hpp"

#include <thread>

#include "synth/agents/transcript.hpp"
#include "synth/core/serialize.hpp"
#include "synth/util/digest.hpp"

namespace synth::agents {

std::string request_digest(const CompletionRequest& request) {
    Json payload;
    payload["model"] = request.model;
    payload["temperature"] = request.temperature;
    payload["max_tokens"] = request.max_tokens;
    Json messages = Json::array();
    for (const Message& m : request.messages) {
        messages.push_back(Json{{"role", m.role}, {"content", m.content}});
    }
    payload["messages"] = messages;
    return util::sha256_hex(canonical_dump(payload));
}

bool is_retryable(const ClientError& error) {
    return dynamic_cast<const Timeout*>(&error) != nullptr ||
           dynamic_cast<const RateLimited*>(&error) != nullptr;
}

CompletionRequest CompletionClient::make_request(std::string agent,
                                                 std::vector<Message> messages) const {
    CompletionRequest request;
    request.agent = std::move(agent);
    request.model = config_.model;
    request.temperature = config_.temperature;
    request.max_tokens = config_.max_tokens;
    request.messages = std::move(messages);
    return request;
}

namespace {

std::string render_messages(const CompletionRequest& request) {
    std::string text;
    for (const Message& m : request.messages) {
        text += "[" + m.role + "]\n" + m.content + "\n";
    }
    return text;
}

TranscriptEntry base_entry(const CompletionRequest& request, const std::string& digest) {
    TranscriptEntry entry;
    entry.agent = request.agent;
    entry.digest = digest;
    entry.request_text = render_messages(request);
    entry.at = std::chrono::system_clock::now();
    return entry;
}

}  // namespace

std::string complete(CompletionClient& client, const CompletionRequest& request,
                     Transcript* transcript) {
    if (request.messages.empty()) throw DomainError("completion request has no messages");
    const std::string digest = request_digest(request);
    const RetryPolicy& retry = client.config().retry;
    const int attempts = std::max(1, retry.max_attempts);

    for (int attempt = 1; attempt <= attempts; ++attempt) {
        TranscriptEntry entry = base_entry(request, digest);
        try {
            std::string response = client.complete_once(request);
            entry.response = std::move(response);
            if (transcript) transcript->append(entry);
            return entry.response;
        } catch (const ClientError& e) {
            entry.ok = false;
            entry.error = e.what();
            if (transcript) transcript->append(entry);
            if (!is_retryable(e)) throw;
            if (attempt == attempts) {
                throw RetriesExhausted("gave up after " + std::to_string(attempts) +
                                       " attempts: " + e.what());
            }
            const auto backoff = retry.base_backoff * (1LL << (attempt - 1));
            if (backoff.count() > 0) std::this_thread::sleep_for(backoff);
        }
    }
    throw RetriesExhausted("unreachable");  // loop always returns or throws
}

}  // namespace synth::agents
