#include "synth/core/profile.hpp"

#include "synth/core/error.hpp"
#include "synth/util/strings.hpp"

namespace synth {

const char* to_string(TreatmentType type) {
    switch (type) {
        case TreatmentType::Medication: return "medication";
        case TreatmentType::Procedure: return "procedure";
        case TreatmentType::Therapy: return "therapy";
    }
    return "medication";
}

TreatmentType treatment_type_from_string(std::string_view name) {
    if (name == "medication") return TreatmentType::Medication;
    if (name == "procedure") return TreatmentType::Procedure;
    if (name == "therapy") return TreatmentType::Therapy;
    throw FormatError("unknown treatment type: '" + std::string(name) + "'");
}

std::vector<std::string> comorbidity_flags(const PatientProfile& profile) {
    // Detection keywords are matched against the controlled condition
    // vocabulary; "social phobia" is the canonical term so plain "anxiety"
    // does not double-count social anxiety variants.
    static const std::pair<const char*, const char*> kFlags[] = {
        {"depression", "depress"},
        {"anxiety", "anxiety"},
        {"social_phobia", "social phobia"},
        {"binge_eating", "binge eating"},
    };
    std::vector<std::string> flags;
    for (const auto& [flag, needle] : kFlags) {
        bool found = false;
        for (const auto& condition : profile.current_conditions) {
            if (std::string(needle) == "anxiety" &&
                util::contains_ci(condition.name, "social phobia"))
                continue;
            if (util::contains_ci(condition.name, needle)) {
                found = true;
                break;
            }
        }
        if (found) flags.emplace_back(flag);
    }
    return flags;
}

}  // namespace synth
