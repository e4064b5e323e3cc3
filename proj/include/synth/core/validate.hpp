#pragma once

#include <string>
#include <vector>

#include "synth/core/error.hpp"
#include "synth/core/profile.hpp"

namespace synth {

// Raised by classify_bmi for values below the obesity floor; the pipeline
// only simulates obesity patients.
class BelowObesityRange : public DomainError {
  public:
    using DomainError::DomainError;
};

// WHO obesity cut-points. The Class III numeric ceiling keeps labs and
// narrative plausible.
struct BmiThresholds {
    double obesity_min = 30.0;
    double class_ii = 35.0;
    double class_iii = 40.0;
    double cap = 60.0;
};

BmiCategory classify_bmi(double bmi, const BmiThresholds& thresholds = {});

struct Violation {
    std::string section;  // section name or "id"/"bmi"/"comorbidity"
    std::string message;

    bool operator==(const Violation&) const = default;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    std::string to_string() const;
};

// Schema-level audit of every PatientProfile invariant. Violations are data,
// not failures: the report is empty iff the profile is valid.
ValidationReport validate_profile(const PatientProfile& profile,
                                  const BmiThresholds& thresholds = {});

}  // namespace synth
