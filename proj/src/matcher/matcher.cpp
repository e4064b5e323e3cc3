#include "synth/matcher/matcher.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <tuple>

#include "synth/util/strings.hpp"

namespace synth::matcher {

namespace {

constexpr double kFlagWeight = 2.0;  // comorbidity pattern dominates the match

constexpr std::array<const char*, 4> kFlagNames = {
    "has_binge_eating",
    "has_anxiety",
    "has_depression",
    "has_social_phobia",
};

const char* bool_str(bool v) { return v ? "true" : "false"; }

}  // namespace

double FeatureVector::weight_of(const std::string& name) const {
    auto it = weights.find(name);
    return it == weights.end() ? 1.0 : it->second;
}

double mixed_distance(const FeatureVector& a, const FeatureVector& b) {
    double weighted_sum = 0.0;
    double total_weight = 0.0;

    for (const auto& [name, fa] : a.numeric) {
        auto it = b.numeric.find(name);
        if (it == b.numeric.end()) continue;
        const NumericFeature& fb = it->second;
        // Averaging the two declared weights (and taking the union of the two
        // declared ranges) keeps the distance symmetric even if the vectors
        // were built against slightly different pools.
        const double w = 0.5 * (a.weight_of(name) + b.weight_of(name));
        if (w < 0.0) throw DomainError("negative weight for feature '" + name + "'");
        const double range =
            std::max(fa.range_max, fb.range_max) - std::min(fa.range_min, fb.range_min);
        double d;
        if (range > 0.0) {
            d = std::min(std::abs(fa.value - fb.value) / range, 1.0);
        } else {
            d = fa.value == fb.value ? 0.0 : 1.0;
        }
        weighted_sum += w * d;
        total_weight += w;
    }

    for (const auto& [name, va] : a.categorical) {
        auto it = b.categorical.find(name);
        if (it == b.categorical.end()) continue;
        const double w = 0.5 * (a.weight_of(name) + b.weight_of(name));
        if (w < 0.0) throw DomainError("negative weight for feature '" + name + "'");
        weighted_sum += w * (va == it->second ? 0.0 : 1.0);
        total_weight += w;
    }

    if (total_weight <= 0.0) {
        throw UndefinedDistance("vectors share no observed feature with positive weight");
    }
    return weighted_sum / total_weight;
}

std::size_t match_survey(const FeatureVector& query, const std::vector<FeatureVector>& candidates) {
    if (candidates.empty()) throw InsufficientCandidates("no survey candidates to match against");
    std::optional<std::size_t> best;
    double best_distance = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        double d;
        try {
            d = mixed_distance(query, candidates[i]);
        } catch (const UndefinedDistance&) {
            continue;  // candidate shares nothing with the query
        }
        if (d < best_distance) {
            best_distance = d;
            best = i;
        }
    }
    if (!best) throw UndefinedDistance("no survey candidate shares features with the query");
    return *best;
}

std::vector<std::size_t> match_trajectories(const FeatureVector& profile,
                                            const FeatureVector& survey_match,
                                            const std::vector<FeatureVector>& candidates) {
    if (candidates.size() < 3) {
        throw InsufficientCandidates("need at least 3 trajectory candidates, got " +
                                     std::to_string(candidates.size()));
    }
    const FeatureVector query = merge_features(profile, survey_match);
    std::vector<std::pair<double, std::size_t>> ranked;
    ranked.reserve(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        try {
            ranked.emplace_back(mixed_distance(query, candidates[i]), i);
        } catch (const UndefinedDistance&) {
            // unrankable candidate; only a problem if fewer than 3 remain
        }
    }
    if (ranked.size() < 3) {
        throw UndefinedDistance("only " + std::to_string(ranked.size()) + " of " +
                                std::to_string(candidates.size()) +
                                " trajectory candidates share features with the query");
    }
    std::sort(ranked.begin(), ranked.end());
    std::vector<std::size_t> picks = {ranked[0].second, ranked[1].second, ranked[2].second};
    return picks;
}

FeatureVector merge_features(const FeatureVector& primary, const FeatureVector& secondary) {
    FeatureVector merged = secondary;
    for (const auto& [name, f] : primary.numeric) merged.numeric[name] = f;
    for (const auto& [name, v] : primary.categorical) {
        merged.categorical[name] = v;
        merged.numeric.erase(name);  // primary's typing wins outright
    }
    for (const auto& [name, f] : primary.numeric) merged.categorical.erase(name);
    for (const auto& [name, w] : primary.weights) merged.weights[name] = w;
    return merged;
}

namespace {

void set_flags(FeatureVector& fv, bool binge, bool anxiety, bool depression, bool phobia) {
    const bool values[] = {binge, anxiety, depression, phobia};
    for (std::size_t i = 0; i < kFlagNames.size(); ++i) {
        fv.categorical[kFlagNames[i]] = bool_str(values[i]);
        fv.weights[kFlagNames[i]] = kFlagWeight;
    }
    fv.categorical["obesity_only"] = bool_str(!binge && !anxiety && !depression && !phobia);
    fv.weights["obesity_only"] = kFlagWeight;
}

std::optional<bool> flag_value(const ingest::VariableValue& v) {
    if (const double* num = std::get_if<double>(&v)) return *num != 0.0;
    if (const std::string* text = std::get_if<std::string>(&v)) {
        const std::string lowered = util::to_lower(*text);
        if (lowered == "yes" || lowered == "true" || lowered == "1") return true;
        if (lowered == "no" || lowered == "false" || lowered == "0") return false;
    }
    return std::nullopt;  // null or unparseable: leave the flag unobserved
}

}  // namespace

FeatureVector demographic_features(const Demographics& demo, const BmiClass& bmi, ComorbidityGroup group) {
    FeatureVector fv;
    fv.numeric["age"] = {static_cast<double>(demo.age), 18.0, 100.0};
    fv.numeric["bmi"] = {bmi.bmi, 30.0, 60.0};
    fv.categorical["sex"] = demo.sex;
    fv.categorical["race"] = demo.race;
    fv.categorical["education"] = demo.education;
    fv.categorical["income"] = demo.income;
    set_flags(fv, group == ComorbidityGroup::ObesityBingeEating, group == ComorbidityGroup::ObesityAnxiety,
              group == ComorbidityGroup::ObesityDepression, group == ComorbidityGroup::ObesitySocialPhobia);
    return fv;
}

FeatureVector survey_features(const ingest::SurveyRecord& record) {
    FeatureVector fv;
    const auto get = [&](const char* name) -> const ingest::VariableValue* {
        auto it = record.variables.find(name);
        return it == record.variables.end() ? nullptr : &it->second;
    };
    if (const auto* v = get("demographics.age")) {
        if (const double* age = std::get_if<double>(v)) fv.numeric["age"] = {*age, 18.0, 100.0};
    }
    if (const auto* v = get("body.bmi")) {
        if (const double* bmi = std::get_if<double>(v)) fv.numeric["bmi"] = {*bmi, 30.0, 60.0};
    }
    const std::pair<const char*, const char*> categorical_map[] = {
        {"demographics.sex", "sex"},
        {"demographics.race", "race"},
        {"demographics.education", "education"},
        {"demographics.income", "income"},
    };
    for (const auto& [variable, feature] : categorical_map) {
        if (const auto* v = get(variable)) {
            if (!ingest::is_null(*v)) fv.categorical[feature] = ingest::variable_to_string(*v);
        }
    }
    // Mental-health screener items become comorbidity flags; an item the
    // respondent never answered stays unobserved rather than counting as "no".
    const std::pair<const char*, const char*> flag_map[] = {
        {"mental_health.binge_eating", "has_binge_eating"},
        {"mental_health.anxiety", "has_anxiety"},
        {"mental_health.depression", "has_depression"},
        {"mental_health.social_phobia", "has_social_phobia"},
    };
    bool all_flags_observed = true;
    bool any_set = false;
    for (const auto& [variable, feature] : flag_map) {
        const auto* v = get(variable);
        std::optional<bool> flag = v ? flag_value(*v) : std::nullopt;
        if (flag) {
            fv.categorical[feature] = bool_str(*flag);
            fv.weights[feature] = kFlagWeight;
            any_set = any_set || *flag;
        } else {
            all_flags_observed = false;
        }
    }
    if (all_flags_observed) {
        fv.categorical["obesity_only"] = bool_str(!any_set);
        fv.weights["obesity_only"] = kFlagWeight;
    }
    return fv;
}

FeatureVector trajectory_features(const ingest::ClaimsTrajectory& trajectory) {
    bool binge = false, anxiety = false, depression = false, phobia = false;
    for (const ingest::ClaimEvent& event : trajectory.events) {
        if (event.kind != ingest::ClaimKind::Diagnosis) continue;
        const std::string& text = event.description;
        if (util::contains_ci(text, "binge eating") || util::contains_ci(text, "binge-eating")) binge = true;
        if (util::contains_ci(text, "social phobia") || util::contains_ci(text, "social anxiety")) {
            phobia = true;
        } else if (util::contains_ci(text, "anxiety")) {
            anxiety = true;
        }
        if (util::contains_ci(text, "depress")) depression = true;
    }
    FeatureVector fv;
    // Claims are a complete record of billed care, so all flags count as
    // observed: no code for a disorder means the patient was never diagnosed.
    set_flags(fv, binge, anxiety, depression, phobia);
    return fv;
}

}  // namespace synth::matcher
