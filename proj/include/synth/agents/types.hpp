#pragma once

#include <string>
#include <vector>

#include "synth/core/serialize.hpp"
#include "synth/core/types.hpp"

namespace synth::agents {

// The summarizer's structured output: the identity facts every later stage
// must copy verbatim, plus summaries of the matched reference material.
struct Blueprint {
    Demographics demographics;
    BmiClass bmi_class;
    ComorbidityGroup comorbidity = ComorbidityGroup::ObesityOnly;
    std::string survey_summary;
    std::vector<std::string> trajectory_summaries;  // exactly three

    bool operator==(const Blueprint&) const = default;
};

void to_json(Json& j, const Blueprint& blueprint);
void from_json(const Json& j, Blueprint& blueprint);

// Throws ValidationError unless the blueprint satisfies its invariants
// (exactly three trajectory summaries, non-empty text fields).
void check_blueprint(const Blueprint& blueprint);

// The evaluator/judge finding list for one profile.
struct EvaluationReport {
    std::vector<Issue> issues;
    std::string summary;

    bool operator==(const EvaluationReport&) const = default;

    bool has_severity(Severity severity) const;
    bool empty() const { return issues.empty(); }
};

void to_json(Json& j, const EvaluationReport& report);
void from_json(const Json& j, EvaluationReport& report);

}  // namespace synth::agents
