#include <httplib.h>

#include <chrono>
#include <cstdlib>
#include <utility>

#include "synth/agents/http_client.hpp"
#include "synth/core/serialize.hpp"

namespace synth::agents {

namespace {

// Splits "https://host:port/some/prefix" into the client root and a request
// path. A bare host gets the conventional "/v1/chat/completions"; an explicit
// path is honored as the full route prefix.
void split_endpoint(const std::string& endpoint, std::string* host, std::string* path) {
    const std::size_t scheme = endpoint.find("://");
    const std::size_t path_start =
        endpoint.find('/', scheme == std::string::npos ? 0 : scheme + 3);
    if (path_start == std::string::npos) {
        *host = endpoint;
        *path = "/v1/chat/completions";
        return;
    }
    *host = endpoint.substr(0, path_start);
    std::string prefix = endpoint.substr(path_start);
    while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
    *path = prefix + "/chat/completions";
}

bool transient_status(int status) { return status == 429 || status >= 500; }

}  // namespace

HttpCompletionClient::HttpCompletionClient(ClientConfig config)
    : CompletionClient(std::move(config)) {
    if (this->config().endpoint.empty() || this->config().endpoint == "mock") {
        throw ConfigError("HTTP client requires a real endpoint URL, got '" +
                          this->config().endpoint + "'");
    }
    split_endpoint(this->config().endpoint, &host_, &path_);
}

std::string HttpCompletionClient::resolve_api_key() const {
    if (config().api_key_env.empty()) return "";
    const char* value = std::getenv(config().api_key_env.c_str());
    if (value == nullptr || *value == '\0') {
        throw InvalidAuth("environment variable " + config().api_key_env +
                          " is not set; cannot authenticate against " + config().endpoint);
    }
    return value;
}

std::string HttpCompletionClient::complete_once(const CompletionRequest& request) {
    const std::string api_key = resolve_api_key();

    Json body;
    body["model"] = request.model;
    body["temperature"] = request.temperature;
    body["max_tokens"] = request.max_tokens;
    Json messages = Json::array();
    for (const Message& message : request.messages) {
        messages.push_back(Json{{"role", message.role}, {"content", message.content}});
    }
    body["messages"] = std::move(messages);

    httplib::Client client(host_);
    const auto timeout = std::chrono::milliseconds(config().timeout.count());
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    httplib::Headers headers;
    if (!api_key.empty()) headers.emplace("Authorization", "Bearer " + api_key);

    httplib::Result result = client.Post(path_, headers, body.dump(), "application/json");
    if (!result) {
        throw Timeout("no response from " + config().endpoint + ": " +
                      httplib::to_string(result.error()));
    }
    if (result->status == 401 || result->status == 403) {
        throw InvalidAuth("authentication rejected by " + config().endpoint + " (HTTP " +
                          std::to_string(result->status) + ")");
    }
    if (transient_status(result->status)) {
        if (result->status == 429) {
            throw RateLimited("rate limited by " + config().endpoint);
        }
        throw Timeout("transient server error from " + config().endpoint + " (HTTP " +
                      std::to_string(result->status) + ")");
    }
    if (result->status < 200 || result->status >= 300) {
        throw ContentRejected("request rejected by " + config().endpoint + " (HTTP " +
                              std::to_string(result->status) + "): " + result->body);
    }

    try {
        const Json payload = Json::parse(result->body);
        const Json& choices = payload.at("choices");
        if (!choices.is_array() || choices.empty()) {
            throw ContentRejected("completion response from " + config().endpoint +
                                  " has no choices");
        }
        return choices.at(0).at("message").at("content").get<std::string>();
    } catch (const Json::exception& e) {
        throw ContentRejected("malformed completion response from " + config().endpoint + ": " +
                              e.what());
    }
}

}  // namespace synth::agents
