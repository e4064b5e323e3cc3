#include "synth/agents/extract.hpp"

#include <optional>

#include "synth/core/profile.hpp"
#include "synth/literature/evidence.hpp"
#include "synth/util/strings.hpp"

namespace synth::agents {

const char* to_string(OutputSchema schema) {
    switch (schema) {
        case OutputSchema::Blueprint: return "blueprint";
        case OutputSchema::PatientProfile: return "patient profile";
        case OutputSchema::EvaluationReport: return "evaluation report";
        case OutputSchema::EvidenceSummary: return "evidence summary";
    }
    return "unknown";
}

namespace {

// The last fenced code block, if any ("```json\n...\n```" or plain "```").
std::optional<std::string> last_fenced_block(const std::string& text) {
    const std::string fence = "```";
    std::size_t close = text.rfind(fence);
    if (close == std::string::npos) return std::nullopt;
    std::size_t open = text.rfind(fence, close - 1);
    if (open == std::string::npos || open + fence.size() > close) return std::nullopt;
    std::string body = text.substr(open + fence.size(), close - open - fence.size());
    // Drop an optional language tag on the opening line.
    std::size_t newline = body.find('\n');
    if (newline != std::string::npos) {
        std::string tag = util::trim(body.substr(0, newline));
        if (tag == "json" || tag == "JSON" || tag.empty()) body = body.substr(newline + 1);
    }
    return body;
}

std::optional<std::string> outer_brace_span(const std::string& text) {
    std::size_t open = text.find('{');
    std::size_t close = text.rfind('}');
    if (open == std::string::npos || close == std::string::npos || close < open)
        return std::nullopt;
    return text.substr(open, close - open + 1);
}

// Remove commas directly before a closing brace/bracket (outside strings) —
// the single most common malformation in model JSON.
std::string repair_trailing_commas(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    bool in_string = false;
    bool escaped = false;
    for (char c : text) {
        if (in_string) {
            out += c;
            if (escaped)
                escaped = false;
            else if (c == '\\')
                escaped = true;
            else if (c == '"')
                in_string = false;
            continue;
        }
        if (c == '"') {
            in_string = true;
            out += c;
            continue;
        }
        if (c == '}' || c == ']') {
            std::size_t last = out.find_last_not_of(" \t\r\n");
            if (last != std::string::npos && out[last] == ',') out.erase(last, 1);
        }
        out += c;
    }
    return out;
}

Json parse_candidate(const std::string& candidate) {
    try {
        return Json::parse(candidate);
    } catch (const Json::parse_error&) {
        return Json::parse(repair_trailing_commas(candidate));  // may throw again
    }
}

void validate_schema(const Json& j, OutputSchema schema) {
    switch (schema) {
        case OutputSchema::Blueprint: {
            Blueprint blueprint = j.get<Blueprint>();
            check_blueprint(blueprint);
            return;
        }
        case OutputSchema::PatientProfile: {
            (void)j.get<PatientProfile>();
            return;
        }
        case OutputSchema::EvaluationReport: {
            (void)j.get<EvaluationReport>();
            return;
        }
        case OutputSchema::EvidenceSummary: {
            literature::EvidenceSummary summary = j.get<literature::EvidenceSummary>();
            literature::check_evidence(summary);
            return;
        }
    }
    throw DomainError("unknown output schema");
}

}  // namespace

Json extract_structured(const std::string& text, OutputSchema schema) {
    std::optional<std::string> candidate = last_fenced_block(text);
    if (!candidate || candidate->find('{') == std::string::npos)
        candidate = outer_brace_span(text);
    if (!candidate) {
        throw ExtractionFailed(std::string("no JSON object found in ") + to_string(schema) +
                               " output");
    }

    Json parsed;
    try {
        parsed = parse_candidate(*candidate);
    } catch (const Json::parse_error& e) {
        throw ExtractionFailed(std::string("unparseable ") + to_string(schema) +
                               " output: " + e.what());
    }
    try {
        validate_schema(parsed, schema);
    } catch (const Error& e) {
        throw ExtractionFailed(std::string("invalid ") + to_string(schema) + ": " + e.what());
    } catch (const Json::exception& e) {
        throw ExtractionFailed(std::string("invalid ") + to_string(schema) + ": " + e.what());
    }
    return parsed;
}

Json request_structured(CompletionClient& client, CompletionRequest request,
                        OutputSchema schema, Transcript* transcript) {
    std::string first = complete(client, request, transcript);
    try {
        return extract_structured(first, schema);
    } catch (const ExtractionFailed& e) {
        // One corrective turn: echo the model's reply and the failure, ask
        // for corrected JSON only.
        request.messages.push_back({"assistant", first});
        request.messages.push_back(
            {"user", std::string("Your previous output failed validation: ") + e.what() +
                         "\nReply with the corrected JSON object only."});
        std::string second = complete(client, request, transcript);
        try {
            return extract_structured(second, schema);
        } catch (const ExtractionFailed& retry_error) {
            throw UnrepairableOutput(std::string("model could not produce a valid ") +
                                     to_string(schema) + " after a corrective re-prompt: " +
                                     retry_error.what());
        }
    }
}

}  // namespace synth::agents
