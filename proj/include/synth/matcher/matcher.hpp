#pragma once

#include <map>
#include <string>
#include <vector>

#include "synth/core/error.hpp"
#include "synth/core/types.hpp"
#include "synth/ingest/ingest.hpp"

namespace synth::matcher {

// Raised when two vectors share no observed feature (or only zero-weight
// ones), so no distance is defined between them.
class UndefinedDistance : public DomainError {
  public:
    using DomainError::DomainError;
};

class InsufficientCandidates : public DomainError {
  public:
    using DomainError::DomainError;
};

struct NumericFeature {
    double value = 0.0;
    // Shared normalization range for this feature across the comparison pool.
    double range_min = 0.0;
    double range_max = 1.0;

    bool operator==(const NumericFeature&) const = default;
};

// Mixed-type record for similarity matching: numeric features normalized by
// range, categorical features matched exactly.  A feature missing from the
// maps is "unobserved" and never contributes to a distance.
struct FeatureVector {
    std::map<std::string, NumericFeature> numeric;
    std::map<std::string, std::string> categorical;
    std::map<std::string, double> weights;  // per-feature, 1.0 when absent

    bool operator==(const FeatureVector&) const = default;

    double weight_of(const std::string& name) const;
};

// Gower-style dissimilarity in [0, 1]: weighted mean of per-feature
// distances over the features observed in both vectors.  Numeric features
// contribute |a-b|/range (clamped to [0,1]), categoricals 0 or 1.
double mixed_distance(const FeatureVector& a, const FeatureVector& b);

// Index of the closest candidate; ties resolve to the lowest index.
// Candidates with no defined distance to the query are skipped.
std::size_t match_survey(const FeatureVector& query, const std::vector<FeatureVector>& candidates);

// Indices of the three closest trajectories to the combined (profile wins
// conflicts) query, ascending by (distance, index).
std::vector<std::size_t> match_trajectories(const FeatureVector& profile,
                                            const FeatureVector& survey_match,
                                            const std::vector<FeatureVector>& candidates);

// Union of two vectors; `primary` wins wherever both define a feature.
FeatureVector merge_features(const FeatureVector& primary, const FeatureVector& secondary);

// ---- Feature builders ------------------------------------------------------
//
// All three builders emit the same feature names so query and candidates
// overlap: numeric age/bmi with the study-wide ranges, categorical sex/race/
// education/income, and five has_* comorbidity flags ("true"/"false") at
// weight 2.0 so the disease pattern dominates the match.

FeatureVector demographic_features(const Demographics& demo, const BmiClass& bmi, ComorbidityGroup group);
FeatureVector survey_features(const ingest::SurveyRecord& record);
FeatureVector trajectory_features(const ingest::ClaimsTrajectory& trajectory);

}  // namespace synth::matcher
