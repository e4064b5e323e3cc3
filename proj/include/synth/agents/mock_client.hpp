#pragma once

#include <map>
#include <mutex>
#include <string>

#include "synth/agents/client.hpp"

namespace synth::agents {

// Offline completion backend. Lookup order:
//   1. content-addressed fixture store (request digest -> recorded response),
//   2. the scripted synthesizer: a pure function of the request that plays
//      the role of each pipeline stage well enough to exercise every
//      contract, so the whole pipeline runs deterministically with no
//      network.
// A miss with the synthesizer disabled raises ContentRejected.
class MockCompletionClient : public CompletionClient {
  public:
    explicit MockCompletionClient(ClientConfig config = mock_config(), bool scripted = true);

    static ClientConfig mock_config();

    void add_fixture(const std::string& digest, std::string response);
    void load_store_text(const std::string& jsonl_text);
    void load_store_file(const std::string& path);
    std::size_t store_size() const;

    std::string complete_once(const CompletionRequest& request) override;

  private:
    mutable std::mutex mutex_;
    std::map<std::string, std::string> store_;
    bool scripted_;
};

// The scripted synthesizer itself, exposed for targeted tests. Dispatches on
// request.agent ("summarizer", "generator", "augmenter", "evaluator",
// "refiner", "judge", "evidence"); the structured inputs are read from the
// last fenced JSON block of the final user message.
std::string scripted_response(const CompletionRequest& request);

}  // namespace synth::agents
