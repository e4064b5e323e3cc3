#pragma once

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace synth {

// The five study cohorts: obesity alone, or obesity with one comorbid
// mental-health condition.
enum class ComorbidityGroup {
    ObesityOnly,
    ObesityBingeEating,
    ObesityAnxiety,
    ObesityDepression,
    ObesitySocialPhobia,
};

inline constexpr std::array<ComorbidityGroup, 5> kComorbidityGroups = {
    ComorbidityGroup::ObesityOnly,        ComorbidityGroup::ObesityBingeEating,
    ComorbidityGroup::ObesityAnxiety,     ComorbidityGroup::ObesityDepression,
    ComorbidityGroup::ObesitySocialPhobia,
};

const char* to_string(ComorbidityGroup group);
ComorbidityGroup comorbidity_from_string(std::string_view name);

// Canonical condition-name for the mental-health half of a group; empty for
// obesity-only.
std::string comorbid_condition(ComorbidityGroup group);

enum class BmiCategory { I, II, III };

const char* to_string(BmiCategory category);
BmiCategory bmi_category_from_string(std::string_view name);

struct BmiClass {
    BmiCategory category = BmiCategory::I;
    double bmi = 30.0;  // kg/m^2

    bool operator==(const BmiClass&) const = default;
};

struct Demographics {
    int age = 0;
    std::string sex;
    std::string race;
    std::string education;
    std::string occupation;
    std::string income;
    std::string marital_status;
    std::string location;
    std::string insurance;

    bool operator==(const Demographics&) const = default;
};

enum class Severity { Major, Moderate, Minor };
enum class Criterion { InformationSufficiency, LogicalConsistency, MedicalPlausibility };

const char* to_string(Severity severity);
Severity severity_from_string(std::string_view name);
const char* to_string(Criterion criterion);
Criterion criterion_from_string(std::string_view name);

// One audit finding against a single profile section.
struct Issue {
    std::string dimension;  // one of kProfileSections
    Severity severity = Severity::Minor;
    Criterion criterion = Criterion::LogicalConsistency;
    std::string description;

    bool operator==(const Issue&) const = default;
};

struct ScoredIssue {
    Issue issue;
    int points = 0;

    bool operator==(const ScoredIssue&) const = default;
};

// Deductive quality score: every dimension starts at 100, issues subtract.
struct QualityScore {
    std::map<std::string, int> dimension_scores;
    int overall = 100;
    std::vector<ScoredIssue> deductions;

    bool operator==(const QualityScore&) const = default;
};

// The ten profile sections, in canonical (serialization) order.
inline constexpr std::array<const char*, 10> kProfileSections = {
    "demographics", "medical_history", "current_conditions", "symptoms", "habits",
    "labs",         "treatments",      "psych_scales",       "role_play", "timeline",
};

bool is_profile_section(std::string_view name);

}  // namespace synth
