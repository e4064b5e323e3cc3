#pragma once

#include <chrono>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "synth/agents/client.hpp"

namespace synth::agents {

// One completion attempt. Failed attempts record the error text and an empty
// response; timestamps are in-memory metadata only and never serialized, so
// persisted transcripts stay byte-deterministic.
struct TranscriptEntry {
    std::string agent;
    std::string digest;
    std::string request_text;  // rendered messages, for inspection
    std::string response;
    std::string error;
    bool ok = true;
    std::chrono::system_clock::time_point at;
};

// Append-only exchange log. Appends are serialized; reads return copies so
// concurrent patients can share one store safely.
class Transcript {
  public:
    Transcript() = default;
    Transcript(const Transcript& other) : entries_(other.entries()) {}
    Transcript& operator=(const Transcript&) = delete;

    void append(TranscriptEntry entry);
    void append_all(const Transcript& other);

    std::vector<TranscriptEntry> entries() const;
    std::size_t size() const;

    // Persisted fixture form: one {"agent", "digest", "response"} object per
    // line, successful exchanges only, in append order.
    std::string to_jsonl() const;

    // SHA-256 of to_jsonl(); the manifest's transcript digest.
    std::string digest() const;

    // digest -> response map parsed from the JSONL fixture format.
    static std::map<std::string, std::string> load_store(const std::string& jsonl_text);

  private:
    mutable std::mutex mutex_;
    std::vector<TranscriptEntry> entries_;
};

}  // namespace synth::agents
