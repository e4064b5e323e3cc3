#include "synth/judge/judge.hpp"

#include <cmath>

#include "synth/agents/extract.hpp"
#include "synth/core/serialize.hpp"

namespace synth::judge {

namespace {

std::string fenced(const Json& j) { return "```json\n" + canonical_dump(j) + "```\n"; }

}  // namespace

void validate(const DeductionSchedule& schedule) {
    if (schedule.minor < 1 || schedule.moderate < schedule.minor ||
        schedule.major < schedule.moderate) {
        throw ConfigError("deduction schedule must satisfy major >= moderate >= minor >= 1 (got " +
                          std::to_string(schedule.major) + "/" +
                          std::to_string(schedule.moderate) + "/" +
                          std::to_string(schedule.minor) + ")");
    }
}

int points_for(Severity severity, const DeductionSchedule& schedule) {
    switch (severity) {
        case Severity::Major: return schedule.major;
        case Severity::Moderate: return schedule.moderate;
        case Severity::Minor: return schedule.minor;
    }
    throw DomainError("unknown severity");
}

QualityScore apply_deductions(const std::vector<Issue>& issues,
                              const DeductionSchedule& schedule) {
    validate(schedule);
    QualityScore score;
    for (const char* dimension : kProfileSections) {
        score.dimension_scores[dimension] = 100;
    }
    for (const Issue& issue : issues) {
        if (!is_profile_section(issue.dimension)) {
            throw ValidationError("issue names unknown dimension '" + issue.dimension + "'");
        }
        const int points = points_for(issue.severity, schedule);
        score.deductions.push_back({issue, points});
        int& dimension_score = score.dimension_scores[issue.dimension];
        dimension_score = std::max(0, dimension_score - points);
    }
    double total = 0.0;
    for (const auto& [dimension, value] : score.dimension_scores) total += value;
    score.overall = static_cast<int>(
        std::llround(total / static_cast<double>(score.dimension_scores.size())));
    return score;
}

QualityScore judge_profile(const PatientProfile& profile, agents::CompletionClient& client,
                           const agents::PromptLibrary& prompts, agents::Transcript* transcript,
                           const DeductionSchedule& schedule) {
    validate(schedule);
    Json facts;
    facts["profile"] = profile;
    const std::vector<agents::Message> messages =
        prompts.render("judge", {{"facts", fenced(facts)}});
    const agents::CompletionRequest request = client.make_request("judge", messages);
    const Json output = agents::request_structured(client, request,
                                                   agents::OutputSchema::EvaluationReport,
                                                   transcript);
    const agents::EvaluationReport report = output.get<agents::EvaluationReport>();
    return apply_deductions(report.issues, schedule);
}

std::vector<double> CohortScores::overall_values() const {
    std::vector<double> values;
    values.reserve(scores.size());
    for (const QualityScore& score : scores) values.push_back(score.overall);
    return values;
}

CohortScores score_cohort(const std::string& label, const std::vector<PatientProfile>& profiles,
                          agents::CompletionClient& client, const agents::PromptLibrary& prompts,
                          agents::Transcript* transcript, const DeductionSchedule& schedule) {
    CohortScores cohort;
    cohort.label = label;
    for (const PatientProfile& profile : profiles) {
        try {
            QualityScore score = judge_profile(profile, client, prompts, transcript, schedule);
            cohort.profile_ids.push_back(profile.id);
            cohort.scores.push_back(std::move(score));
        } catch (const Error& e) {
            cohort.failures.push_back(profile.id + ": " + e.what());
        }
    }
    return cohort;
}

}  // namespace synth::judge
