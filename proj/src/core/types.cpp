#include "synth/core/types.hpp"

#include "synth/core/error.hpp"

namespace synth {

const char* to_string(ComorbidityGroup group) {
    switch (group) {
        case ComorbidityGroup::ObesityOnly: return "ObesityOnly";
        case ComorbidityGroup::ObesityBingeEating: return "ObesityBingeEating";
        case ComorbidityGroup::ObesityAnxiety: return "ObesityAnxiety";
        case ComorbidityGroup::ObesityDepression: return "ObesityDepression";
        case ComorbidityGroup::ObesitySocialPhobia: return "ObesitySocialPhobia";
    }
    return "ObesityOnly";
}

ComorbidityGroup comorbidity_from_string(std::string_view name) {
    for (auto group : kComorbidityGroups)
        if (name == to_string(group)) return group;
    throw FormatError("unknown comorbidity group: '" + std::string(name) + "'");
}

std::string comorbid_condition(ComorbidityGroup group) {
    switch (group) {
        case ComorbidityGroup::ObesityOnly: return "";
        case ComorbidityGroup::ObesityBingeEating: return "binge eating disorder";
        case ComorbidityGroup::ObesityAnxiety: return "generalized anxiety disorder";
        case ComorbidityGroup::ObesityDepression: return "major depressive disorder";
        case ComorbidityGroup::ObesitySocialPhobia: return "social phobia";
    }
    return "";
}

const char* to_string(BmiCategory category) {
    switch (category) {
        case BmiCategory::I: return "I";
        case BmiCategory::II: return "II";
        case BmiCategory::III: return "III";
    }
    return "I";
}

BmiCategory bmi_category_from_string(std::string_view name) {
    if (name == "I") return BmiCategory::I;
    if (name == "II") return BmiCategory::II;
    if (name == "III") return BmiCategory::III;
    throw FormatError("unknown BMI class: '" + std::string(name) + "'");
}

const char* to_string(Severity severity) {
    switch (severity) {
        case Severity::Major: return "Major";
        case Severity::Moderate: return "Moderate";
        case Severity::Minor: return "Minor";
    }
    return "Minor";
}

Severity severity_from_string(std::string_view name) {
    if (name == "Major") return Severity::Major;
    if (name == "Moderate") return Severity::Moderate;
    if (name == "Minor") return Severity::Minor;
    throw FormatError("unknown severity: '" + std::string(name) + "'");
}

const char* to_string(Criterion criterion) {
    switch (criterion) {
        case Criterion::InformationSufficiency: return "InformationSufficiency";
        case Criterion::LogicalConsistency: return "LogicalConsistency";
        case Criterion::MedicalPlausibility: return "MedicalPlausibility";
    }
    return "LogicalConsistency";
}

Criterion criterion_from_string(std::string_view name) {
    if (name == "InformationSufficiency") return Criterion::InformationSufficiency;
    if (name == "LogicalConsistency") return Criterion::LogicalConsistency;
    if (name == "MedicalPlausibility") return Criterion::MedicalPlausibility;
    throw FormatError("unknown criterion: '" + std::string(name) + "'");
}

bool is_profile_section(std::string_view name) {
    for (const char* section : kProfileSections)
        if (name == section) return true;
    return false;
}

}  // namespace synth
