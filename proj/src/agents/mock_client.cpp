#include "synth/agents/mock_client.hpp"

#include <fstream>
#include <sstream>
#include <utility>

#include "synth/agents/transcript.hpp"
#include "synth/core/error.hpp"

namespace synth::agents {

ClientConfig MockCompletionClient::mock_config() {
    ClientConfig config;
    config.endpoint = "mock";
    config.model = "scripted-default";
    config.temperature = 0.0;
    return config;
}

MockCompletionClient::MockCompletionClient(ClientConfig config, bool scripted)
    : CompletionClient(std::move(config)), scripted_(scripted) {}

void MockCompletionClient::add_fixture(const std::string& digest, std::string response) {
    std::lock_guard<std::mutex> lock(mutex_);
    store_[digest] = std::move(response);
}

void MockCompletionClient::load_store_text(const std::string& jsonl_text) {
    auto entries = Transcript::load_store(jsonl_text);
    std::lock_guard<std::mutex> lock(mutex_);
    for (auto& [digest, response] : entries) {
        store_[digest] = std::move(response);
    }
}

void MockCompletionClient::load_store_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open fixture store: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    load_store_text(buffer.str());
}

std::size_t MockCompletionClient::store_size() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return store_.size();
}

std::string MockCompletionClient::complete_once(const CompletionRequest& request) {
    const std::string digest = request_digest(request);
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = store_.find(digest);
        if (it != store_.end()) {
            return it->second;
        }
    }
    if (scripted_) {
        return scripted_response(request);
    }
    throw ContentRejected("no recorded response for request digest " + digest + " (agent '" +
                          request.agent + "')");
}

}  // namespace synth::agents
