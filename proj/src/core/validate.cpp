#include "synth/core/validate.hpp"

#include <cmath>

#include "synth/util/strings.hpp"

namespace synth {

BmiCategory classify_bmi(double bmi, const BmiThresholds& t) {
    if (!(bmi > 0.0)) throw DomainError("BMI must be positive");
    if (bmi < t.obesity_min)
        throw BelowObesityRange("BMI " + util::format_double(bmi, 1) +
                                " is below the obesity range");
    if (bmi < t.class_ii) return BmiCategory::I;
    if (bmi < t.class_iii) return BmiCategory::II;
    return BmiCategory::III;
}

std::string ValidationReport::to_string() const {
    std::string out;
    for (const auto& v : violations) {
        if (!out.empty()) out += "; ";
        out += v.section + ": " + v.message;
    }
    return out;
}

static void check_scale(std::vector<Violation>& out, const char* name, double value) {
    if (!(value >= 1.0 && value <= 5.0) || !std::isfinite(value))
        out.push_back({"psych_scales",
                       std::string(name) + " score " + util::format_double(value, 2) +
                           " outside [1, 5]"});
}

static bool mentions_condition(const std::vector<Condition>& conditions,
                               const std::string& needle) {
    for (const auto& c : conditions)
        if (util::contains_ci(c.name, needle)) return true;
    return false;
}

ValidationReport validate_profile(const PatientProfile& p, const BmiThresholds& t) {
    ValidationReport report;
    auto& out = report.violations;

    if (p.id.empty()) out.push_back({"id", "missing"});

    // Demographics.
    if (p.demographics.age < 18 || p.demographics.age > 100)
        out.push_back({"demographics",
                       "age " + std::to_string(p.demographics.age) + " outside [18, 100]"});
    const std::pair<const char*, const std::string*> categoricals[] = {
        {"sex", &p.demographics.sex},
        {"race", &p.demographics.race},
        {"education", &p.demographics.education},
        {"occupation", &p.demographics.occupation},
        {"income", &p.demographics.income},
        {"marital_status", &p.demographics.marital_status},
        {"location", &p.demographics.location},
        {"insurance", &p.demographics.insurance},
    };
    for (const auto& [name, value] : categoricals)
        if (value->empty())
            out.push_back({"demographics", std::string(name) + " is empty"});

    // BMI assignment consistent with the numeric value.
    try {
        if (classify_bmi(p.bmi.bmi, t) != p.bmi.category)
            out.push_back({"bmi", "value " + util::format_double(p.bmi.bmi, 1) +
                                      " not in the range of class " +
                                      to_string(p.bmi.category)});
    } catch (const DomainError& e) {
        out.push_back({"bmi", e.what()});
    }

    // All ten sections present and non-empty.
    if (p.medical_history.empty()) out.push_back({"medical_history", "missing"});
    if (p.current_conditions.empty()) out.push_back({"current_conditions", "missing"});
    if (p.symptoms.empty()) out.push_back({"symptoms", "missing"});
    if (p.habits.diet.empty() || p.habits.activity.empty() || p.habits.sleep.empty() ||
        p.habits.substances.empty())
        out.push_back({"habits", "missing"});
    if (p.labs.empty()) out.push_back({"labs", "missing"});
    if (p.treatments.empty()) out.push_back({"treatments", "missing"});
    if (p.role_play.empty()) out.push_back({"role_play", "missing"});
    if (p.timeline.empty()) out.push_back({"timeline", "missing"});

    for (const auto& lab : p.labs)
        if (!std::isfinite(lab.value))
            out.push_back({"labs", "non-finite value for " + lab.analyte});

    // Psych scale ranges (factor counts are structural).
    check_scale(out, "hexaco.honesty_humility", p.psych_scales.hexaco.honesty_humility);
    check_scale(out, "hexaco.emotionality", p.psych_scales.hexaco.emotionality);
    check_scale(out, "hexaco.extraversion", p.psych_scales.hexaco.extraversion);
    check_scale(out, "hexaco.agreeableness", p.psych_scales.hexaco.agreeableness);
    check_scale(out, "hexaco.conscientiousness", p.psych_scales.hexaco.conscientiousness);
    check_scale(out, "hexaco.openness", p.psych_scales.hexaco.openness);
    check_scale(out, "rst.bas", p.psych_scales.rst.bas);
    check_scale(out, "rst.bis", p.psych_scales.rst.bis);
    check_scale(out, "rst.fffs_fight", p.psych_scales.rst.fffs_fight);
    check_scale(out, "rst.fffs_flight", p.psych_scales.rst.fffs_flight);
    check_scale(out, "rst.fffs_freeze", p.psych_scales.rst.fffs_freeze);
    check_scale(out, "tci.novelty_seeking", p.psych_scales.tci.novelty_seeking);
    check_scale(out, "tci.harm_avoidance", p.psych_scales.tci.harm_avoidance);
    check_scale(out, "tci.reward_dependence", p.psych_scales.tci.reward_dependence);
    check_scale(out, "tci.persistence", p.psych_scales.tci.persistence);
    check_scale(out, "tci.self_directedness", p.psych_scales.tci.self_directedness);
    check_scale(out, "tci.cooperativeness", p.psych_scales.tci.cooperativeness);
    check_scale(out, "tci.self_transcendence", p.psych_scales.tci.self_transcendence);

    // Timeline dates non-decreasing.
    for (size_t i = 1; i < p.timeline.size(); ++i) {
        if (p.timeline[i].date < p.timeline[i - 1].date) {
            out.push_back({"timeline", "dates decrease at event " + std::to_string(i) +
                                           " (" + p.timeline[i].date.to_string() + ")"});
            break;
        }
    }

    // Every treatment must start on or after the onset of some condition it
    // could target.
    for (const auto& treatment : p.treatments) {
        bool anchored = false;
        for (const auto& c : p.medical_history)
            if (c.onset <= treatment.start) anchored = true;
        for (const auto& c : p.current_conditions)
            if (c.onset <= treatment.start) anchored = true;
        if (!anchored)
            out.push_back({"treatments", "'" + treatment.name + "' starts " +
                                             treatment.start.to_string() +
                                             ", before every condition onset"});
    }

    // The assigned comorbidity group must be reflected in current conditions.
    if (!mentions_condition(p.current_conditions, "obesity"))
        out.push_back({"current_conditions", "obesity not present"});
    std::string disorder = comorbid_condition(p.comorbidity);
    if (!disorder.empty() && !mentions_condition(p.current_conditions, disorder))
        out.push_back({"current_conditions",
                       "assigned comorbidity '" + disorder + "' not present"});

    return report;
}

}  // namespace synth
