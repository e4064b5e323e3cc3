#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "support/builders.hpp"
#include "synth/matcher/matcher.hpp"

using namespace synth;
using namespace synth::matcher;

namespace {

FeatureVector person(double age, const std::string& sex) {
    FeatureVector fv;
    fv.numeric["age"] = {age, 18.0, 80.0};
    fv.categorical["sex"] = sex;
    return fv;
}

// Slow, direct re-computation of the weighted Gower mean, structured
// differently from the library (walks the union of names).
double reference_distance(const FeatureVector& a, const FeatureVector& b) {
    std::vector<std::string> names;
    for (const auto& [n, v] : a.numeric) names.push_back(n);
    for (const auto& [n, v] : a.categorical) names.push_back(n);
    double num = 0.0, den = 0.0;
    for (const std::string& n : names) {
        double d = -1.0;
        if (a.numeric.count(n) && b.numeric.count(n)) {
            const auto& fa = a.numeric.at(n);
            const auto& fb = b.numeric.at(n);
            const double range =
                std::max(fa.range_max, fb.range_max) - std::min(fa.range_min, fb.range_min);
            d = range > 0.0 ? std::min(std::abs(fa.value - fb.value) / range, 1.0)
                            : (fa.value == fb.value ? 0.0 : 1.0);
        } else if (a.categorical.count(n) && b.categorical.count(n)) {
            d = a.categorical.at(n) == b.categorical.at(n) ? 0.0 : 1.0;
        }
        if (d < 0.0) continue;
        const double w = 0.5 * (a.weight_of(n) + b.weight_of(n));
        num += w * d;
        den += w;
    }
    return num / den;
}

}  // namespace

TEST_CASE("worked example: one numeric + one matching categorical") {
    // age 40 vs 55 over range [18, 80], same sex: (15/62 + 0) / 2.
    const double d = mixed_distance(person(40, "male"), person(55, "male"));
    CHECK(d == doctest::Approx(15.0 / 62.0 / 2.0).epsilon(1e-12));
    CHECK(d == doctest::Approx(0.12097).epsilon(1e-4));
}

TEST_CASE("distance is a normalized dissimilarity") {
    FeatureVector a = person(40, "male"), b = person(55, "female"), c = person(80, "female");
    CHECK(mixed_distance(a, a) == 0.0);
    CHECK(mixed_distance(a, b) == doctest::Approx(mixed_distance(b, a)).epsilon(1e-15));
    for (const auto& [x, y] :
         {std::pair{a, b}, std::pair{a, c}, std::pair{b, c}}) {
        const double d = mixed_distance(x, y);
        CHECK(d >= 0.0);
        CHECK(d <= 1.0);
    }
    // Single differing categorical -> exactly 1.
    FeatureVector only_sex_m, only_sex_f;
    only_sex_m.categorical["sex"] = "male";
    only_sex_f.categorical["sex"] = "female";
    CHECK(mixed_distance(only_sex_m, only_sex_f) == 1.0);
}

TEST_CASE("unobserved features do not contribute") {
    FeatureVector a = person(40, "male");
    FeatureVector b = person(55, "male");
    const double base = mixed_distance(a, b);
    a.numeric["bmi"] = {42.0, 30.0, 60.0};  // only a observes bmi
    a.categorical["race"] = "white";        // only a observes race
    CHECK(mixed_distance(a, b) == doctest::Approx(base).epsilon(1e-15));
}

TEST_CASE("weights shift the mean toward heavy features") {
    FeatureVector a = person(40, "male"), b = person(40, "female");
    const double unweighted = mixed_distance(a, b);  // (0 + 1) / 2
    CHECK(unweighted == doctest::Approx(0.5));
    a.weights["sex"] = 3.0;
    b.weights["sex"] = 3.0;
    CHECK(mixed_distance(a, b) == doctest::Approx(3.0 / 4.0));

    // Weight zero removes a feature from consideration.
    a.weights["sex"] = 0.0;
    b.weights["sex"] = 0.0;
    CHECK(mixed_distance(a, b) == 0.0);
}

TEST_CASE("no shared features (or all weight zero) has no defined distance") {
    FeatureVector a, b;
    a.categorical["sex"] = "male";
    b.categorical["race"] = "white";
    CHECK_THROWS_AS(mixed_distance(a, b), UndefinedDistance);

    FeatureVector c, d;
    c.categorical["sex"] = "male";
    d.categorical["sex"] = "male";
    c.weights["sex"] = 0.0;
    d.weights["sex"] = 0.0;
    CHECK_THROWS_AS(mixed_distance(c, d), UndefinedDistance);

    // Same name, mismatched typing: not comparable.
    FeatureVector e, f;
    e.numeric["age"] = {40.0, 18.0, 80.0};
    f.categorical["age"] = "40";
    CHECK_THROWS_AS(mixed_distance(e, f), UndefinedDistance);
}

TEST_CASE("distance agrees with a direct reference over random vectors") {
    std::mt19937_64 gen(12345);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const std::vector<std::string> cats = {"a", "b", "c"};
    auto random_vector = [&]() {
        FeatureVector fv;
        if (unif(gen) < 0.8) fv.numeric["x"] = {unif(gen) * 10.0, 0.0, 10.0};
        if (unif(gen) < 0.8) fv.numeric["y"] = {unif(gen) * 4.0 - 2.0, -2.0, 2.0};
        if (unif(gen) < 0.8) fv.categorical["c1"] = cats[gen() % 3];
        if (unif(gen) < 0.8) fv.categorical["c2"] = cats[gen() % 3];
        if (unif(gen) < 0.5) fv.weights["x"] = 2.0;
        if (unif(gen) < 0.5) fv.weights["c1"] = 1.5;
        return fv;
    };
    int compared = 0;
    for (int trial = 0; trial < 500; ++trial) {
        FeatureVector a = random_vector(), b = random_vector();
        try {
            const double d = mixed_distance(a, b);
            CHECK(d == doctest::Approx(reference_distance(a, b)).epsilon(1e-12));
            CHECK(d == doctest::Approx(mixed_distance(b, a)).epsilon(1e-15));
            ++compared;
        } catch (const UndefinedDistance&) {
            // Both must agree the distance is undefined: the reference
            // denominator would be zero.
            bool shares = false;
            for (const auto& [n, v] : a.numeric)
                if (b.numeric.count(n) && 0.5 * (a.weight_of(n) + b.weight_of(n)) > 0.0)
                    shares = true;
            for (const auto& [n, v] : a.categorical)
                if (b.categorical.count(n) && 0.5 * (a.weight_of(n) + b.weight_of(n)) > 0.0)
                    shares = true;
            CHECK_FALSE(shares);
        }
    }
    CHECK(compared > 400);  // the property actually exercised the main path
}

TEST_CASE("match_survey returns the argmin with lowest-index ties") {
    FeatureVector query = person(40, "male");
    std::vector<FeatureVector> candidates = {
        person(70, "female"),
        person(42, "male"),
        person(42, "male"),  // exact tie with index 1
        person(40, "female"),
    };
    CHECK(match_survey(query, candidates) == 1);

    // A candidate sharing nothing with the query is skipped, not fatal.
    FeatureVector opaque;
    opaque.categorical["zip"] = "27514";
    candidates.insert(candidates.begin(), opaque);
    CHECK(match_survey(query, candidates) == 2);

    CHECK_THROWS_AS(match_survey(query, {}), InsufficientCandidates);
    CHECK_THROWS_AS(match_survey(query, {opaque, opaque}), UndefinedDistance);
}

TEST_CASE("match_trajectories returns the top three by (distance, index)") {
    FeatureVector profile = person(40, "male");
    FeatureVector survey;
    survey.numeric["age"] = {44.0, 18.0, 80.0};  // ignored: profile wins conflicts
    survey.categorical["smoker"] = "no";

    std::vector<FeatureVector> candidates;
    for (double age : {70.0, 41.0, 39.0, 60.0, 40.0}) {
        FeatureVector c = person(age, "male");
        c.categorical["smoker"] = "no";
        candidates.push_back(c);
    }
    auto picks = match_trajectories(profile, survey, candidates);
    REQUIRE(picks.size() == 3);
    CHECK(picks[0] == 4);  // age 40, exact
    CHECK(picks[1] == 1);  // age 41
    CHECK(picks[2] == 2);  // age 39 ties 41 on |d|, higher index

    CHECK_THROWS_AS(match_trajectories(profile, survey, {candidates[0], candidates[1]}),
                    InsufficientCandidates);
}

TEST_CASE("match_trajectories agrees with a brute-force ranking") {
    std::mt19937_64 gen(777);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        FeatureVector profile = person(18.0 + 62.0 * unif(gen), gen() % 2 ? "male" : "female");
        std::vector<FeatureVector> candidates;
        for (int i = 0; i < 12; ++i)
            candidates.push_back(person(18.0 + 62.0 * unif(gen), gen() % 2 ? "male" : "female"));

        std::vector<std::pair<double, std::size_t>> ranked;
        for (std::size_t i = 0; i < candidates.size(); ++i)
            ranked.emplace_back(mixed_distance(profile, candidates[i]), i);
        std::sort(ranked.begin(), ranked.end());

        auto picks = match_trajectories(profile, FeatureVector{profile}, candidates);
        REQUIRE(picks.size() == 3);
        for (int k = 0; k < 3; ++k) CHECK(picks[k] == ranked[k].second);
    }
}

TEST_CASE("merge_features prefers the primary vector") {
    FeatureVector profile = person(40, "male");
    profile.weights["age"] = 2.0;
    FeatureVector survey = person(44, "female");
    survey.categorical["smoker"] = "no";
    survey.weights["age"] = 1.0;

    FeatureVector merged = merge_features(profile, survey);
    CHECK(merged.numeric.at("age").value == 40.0);
    CHECK(merged.categorical.at("sex") == "male");
    CHECK(merged.categorical.at("smoker") == "no");  // survey-only survives
    CHECK(merged.weights.at("age") == 2.0);
}

TEST_CASE("demographic features carry the study ranges and flag weights") {
    PatientProfile p = testing::make_valid_profile();
    FeatureVector fv = demographic_features(p.demographics, p.bmi, p.comorbidity);
    CHECK(fv.numeric.at("age").value == 51.0);
    CHECK(fv.numeric.at("age").range_min == 18.0);
    CHECK(fv.numeric.at("age").range_max == 100.0);
    CHECK(fv.numeric.at("bmi").value == 33.0);
    CHECK(fv.numeric.at("bmi").range_min == 30.0);
    CHECK(fv.numeric.at("bmi").range_max == 60.0);
    CHECK(fv.categorical.at("has_binge_eating") == "true");
    CHECK(fv.categorical.at("has_depression") == "false");
    CHECK(fv.categorical.at("obesity_only") == "false");
    CHECK(fv.weights.at("has_binge_eating") == 2.0);

    // Same comorbidity beats same age: flags are weighted heavier.
    Demographics same_age = p.demographics;
    FeatureVector same_group =
        demographic_features(same_age, {BmiCategory::II, 37.0}, ComorbidityGroup::ObesityBingeEating);
    Demographics other = p.demographics;
    FeatureVector other_group = demographic_features(other, p.bmi, ComorbidityGroup::ObesityDepression);
    CHECK(mixed_distance(fv, same_group) < mixed_distance(fv, other_group));
}

TEST_CASE("survey features skip nulls and unparsed flags") {
    ingest::SurveyRecord record;
    record.respondent_id = "R1";
    record.variables["demographics.age"] = 46.0;
    record.variables["demographics.sex"] = std::string("female");
    record.variables["demographics.race"] = std::monostate{};  // explicit null
    record.variables["body.bmi"] = 36.2;
    record.variables["mental_health.depression"] = 1.0;
    record.variables["mental_health.anxiety"] = 0.0;
    record.variables["mental_health.social_phobia"] = std::string("no");
    // binge_eating never asked -> flag unobserved, so no obesity_only either.

    FeatureVector fv = survey_features(record);
    CHECK(fv.numeric.at("age").value == 46.0);
    CHECK(fv.numeric.at("bmi").value == 36.2);
    CHECK(fv.categorical.at("sex") == "female");
    CHECK(fv.categorical.count("race") == 0);
    CHECK(fv.categorical.at("has_depression") == "true");
    CHECK(fv.categorical.at("has_anxiety") == "false");
    CHECK(fv.categorical.at("has_social_phobia") == "false");
    CHECK(fv.categorical.count("has_binge_eating") == 0);
    CHECK(fv.categorical.count("obesity_only") == 0);
}

TEST_CASE("trajectory features derive flags from diagnosis text") {
    ingest::ClaimsTrajectory traj;
    traj.patient_id = "P1";
    traj.events = {
        {Date{2019, 1, 1}, ingest::ClaimKind::Diagnosis, "E66.9", "Obesity, unspecified"},
        {Date{2019, 6, 1}, ingest::ClaimKind::Diagnosis, "F40.10", "Social anxiety disorder"},
        {Date{2019, 7, 1}, ingest::ClaimKind::Medication, "RX1", "sertraline"},
    };
    FeatureVector fv = trajectory_features(traj);
    // "social anxiety" is the phobia, not generalized anxiety.
    CHECK(fv.categorical.at("has_social_phobia") == "true");
    CHECK(fv.categorical.at("has_anxiety") == "false");
    CHECK(fv.categorical.at("has_binge_eating") == "false");
    CHECK(fv.categorical.at("obesity_only") == "false");

    ingest::ClaimsTrajectory plain;
    plain.patient_id = "P2";
    plain.events = {{Date{2019, 1, 1}, ingest::ClaimKind::Diagnosis, "E66.9", "Obesity"}};
    CHECK(trajectory_features(plain).categorical.at("obesity_only") == "true");
}
