#pragma once

#include <string>
#include <vector>

#include "synth/agents/client.hpp"
#include "synth/agents/prompts.hpp"
#include "synth/agents/transcript.hpp"
#include "synth/agents/types.hpp"
#include "synth/core/profile.hpp"
#include "synth/core/types.hpp"

namespace synth::judge {

// Points subtracted per finding. Every dimension starts at 100; the floor is
// 0; the overall score is the rounded mean of the ten dimension scores.
struct DeductionSchedule {
    int major = 8;
    int moderate = 4;
    int minor = 1;

    bool operator==(const DeductionSchedule&) const = default;
};

// Throws ConfigError unless major >= moderate >= minor >= 1.
void validate(const DeductionSchedule& schedule);

int points_for(Severity severity, const DeductionSchedule& schedule);

// Pure scoring arithmetic: no model involved, fully replayable from a
// finding list. Issues naming an unknown dimension are a ValidationError.
QualityScore apply_deductions(const std::vector<Issue>& issues,
                              const DeductionSchedule& schedule = {});

// One profile through the judge model, then the deduction arithmetic.
QualityScore judge_profile(const PatientProfile& profile, agents::CompletionClient& client,
                           const agents::PromptLibrary& prompts, agents::Transcript* transcript,
                           const DeductionSchedule& schedule = {});

// Scores for one cohort. A profile whose judging fails lands in `failures`
// without aborting the rest of the cohort.
struct CohortScores {
    std::string label;
    std::vector<std::string> profile_ids;  // parallel to `scores`
    std::vector<QualityScore> scores;
    std::vector<std::string> failures;  // "profile-id: error"

    std::vector<double> overall_values() const;
};

CohortScores score_cohort(const std::string& label, const std::vector<PatientProfile>& profiles,
                          agents::CompletionClient& client, const agents::PromptLibrary& prompts,
                          agents::Transcript* transcript, const DeductionSchedule& schedule = {});

}  // namespace synth::judge
