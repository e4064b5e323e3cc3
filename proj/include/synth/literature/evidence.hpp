#pragma once

#include <optional>
#include <string>
#include <vector>

#include "synth/core/serialize.hpp"

namespace synth::literature {

// A published case report (PubMed-style), with demographics extracted from
// the abstract when present.
struct CaseReport {
    std::string id;  // e.g. a PMID
    std::string title;
    std::string abstract;
    std::optional<int> reported_age;
    std::optional<std::string> reported_gender;  // normalized "male"/"female"
    std::vector<std::string> keywords;

    bool operator==(const CaseReport&) const = default;
};

void to_json(Json& j, const CaseReport& report);
void from_json(const Json& j, CaseReport& report);

// One synthesized finding about a condition, backed by concrete reports.
struct Finding {
    std::string condition;
    std::string text;  // experiences, symptoms, behavioral patterns, states
    std::vector<std::string> source_ids;

    bool operator==(const Finding&) const = default;
};

struct EvidenceSummary {
    std::vector<Finding> findings;  // one per condition, condition order stable

    bool operator==(const EvidenceSummary&) const = default;

    bool empty() const { return findings.empty(); }
};

void to_json(Json& j, const EvidenceSummary& summary);
void from_json(const Json& j, EvidenceSummary& summary);

// Throws ValidationError if any finding cites no sources or the summary
// repeats a condition.
void check_evidence(const EvidenceSummary& summary);

}  // namespace synth::literature
