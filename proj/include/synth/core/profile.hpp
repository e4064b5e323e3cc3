#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "synth/core/date.hpp"
#include "synth/core/types.hpp"

namespace synth {

struct Condition {
    std::string name;
    Date onset;

    bool operator==(const Condition&) const = default;
};

struct Symptom {
    std::string name;
    std::string severity;   // mild | moderate | severe
    std::string frequency;  // daily | weekly | intermittent | ...

    bool operator==(const Symptom&) const = default;
};

struct Habits {
    std::string diet;
    std::string activity;
    std::string sleep;
    std::string substances;

    bool operator==(const Habits&) const = default;
};

struct LabValue {
    std::string analyte;
    double value = 0.0;
    std::string unit;
    std::string reference_range;

    bool operator==(const LabValue&) const = default;
};

enum class TreatmentType { Medication, Procedure, Therapy };

const char* to_string(TreatmentType type);
TreatmentType treatment_type_from_string(std::string_view name);

struct Treatment {
    std::string name;
    TreatmentType type = TreatmentType::Medication;
    Date start;

    bool operator==(const Treatment&) const = default;
};

struct HexacoScores {
    double honesty_humility = 3.0;
    double emotionality = 3.0;
    double extraversion = 3.0;
    double agreeableness = 3.0;
    double conscientiousness = 3.0;
    double openness = 3.0;

    bool operator==(const HexacoScores&) const = default;
};

struct RstScores {
    double bas = 3.0;
    double bis = 3.0;
    double fffs_fight = 3.0;
    double fffs_flight = 3.0;
    double fffs_freeze = 3.0;

    bool operator==(const RstScores&) const = default;
};

struct TciScores {
    double novelty_seeking = 3.0;
    double harm_avoidance = 3.0;
    double reward_dependence = 3.0;
    double persistence = 3.0;
    double self_directedness = 3.0;
    double cooperativeness = 3.0;
    double self_transcendence = 3.0;

    bool operator==(const TciScores&) const = default;
};

// Three personality instruments, every factor normalized to [1, 5].
struct PsychScales {
    HexacoScores hexaco;
    RstScores rst;
    TciScores tci;

    bool operator==(const PsychScales&) const = default;
};

struct TimelineEvent {
    Date date;
    std::string kind;  // diagnosis | treatment | lifestyle | followup | ...
    std::string description;

    bool operator==(const TimelineEvent&) const = default;
};

// The ten-section synthetic patient record that flows through every agent.
// `id`, `bmi`, and `comorbidity` ride along as identity/assignment metadata
// next to the ten content sections.
struct PatientProfile {
    std::string id;
    ComorbidityGroup comorbidity = ComorbidityGroup::ObesityOnly;
    BmiClass bmi;

    Demographics demographics;
    std::vector<Condition> medical_history;
    std::vector<Condition> current_conditions;
    std::vector<Symptom> symptoms;
    Habits habits;
    std::vector<LabValue> labs;
    std::vector<Treatment> treatments;
    PsychScales psych_scales;
    std::string role_play;
    std::vector<TimelineEvent> timeline;

    bool operator==(const PatientProfile&) const = default;
};

// Which of the four mental-health conditions a profile's current conditions
// mention, in fixed glyph order: depression, anxiety, social phobia,
// binge eating. Empty when the profile is obesity-only.
std::vector<std::string> comorbidity_flags(const PatientProfile& profile);

}  // namespace synth
