#include "synth/agents/transcript.hpp"

#include <sstream>

#include "synth/core/serialize.hpp"
#include "synth/util/digest.hpp"

namespace synth::agents {

void Transcript::append(TranscriptEntry entry) {
    std::lock_guard<std::mutex> lock(mutex_);
    entries_.push_back(std::move(entry));
}

void Transcript::append_all(const Transcript& other) {
    std::vector<TranscriptEntry> incoming = other.entries();
    std::lock_guard<std::mutex> lock(mutex_);
    for (auto& entry : incoming) entries_.push_back(std::move(entry));
}

std::vector<TranscriptEntry> Transcript::entries() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return entries_;
}

std::size_t Transcript::size() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return entries_.size();
}

std::string Transcript::to_jsonl() const {
    std::string out;
    for (const TranscriptEntry& entry : entries()) {
        if (!entry.ok) continue;
        Json line{{"agent", entry.agent}, {"digest", entry.digest}, {"response", entry.response}};
        out += line.dump() + "\n";
    }
    return out;
}

std::string Transcript::digest() const { return util::sha256_hex(to_jsonl()); }

std::map<std::string, std::string> Transcript::load_store(const std::string& jsonl_text) {
    std::map<std::string, std::string> store;
    std::istringstream in(jsonl_text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        Json j;
        try {
            j = Json::parse(line);
        } catch (const Json::parse_error& e) {
            throw ParseError("transcript line " + std::to_string(line_no) + ": " + e.what(),
                             line_no);
        }
        const Json& digest = require_key(j, "digest", "transcript");
        const Json& response = require_key(j, "response", "transcript");
        store[digest.get<std::string>()] = response.get<std::string>();
    }
    return store;
}

}  // namespace synth::agents
