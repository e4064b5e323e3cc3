#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "synth/core/date.hpp"
#include "synth/core/error.hpp"
#include "synth/core/serialize.hpp"
#include "synth/core/types.hpp"

namespace synth::ingest {

// Explicit null (observed but missing) | numeric | categorical.
using VariableValue = std::variant<std::monostate, double, std::string>;

bool is_null(const VariableValue& v);
std::string variable_to_string(const VariableValue& v);

// One harmonized survey participant: rows sharing a respondent id are merged
// across cycles, later cycles overwriting earlier values.
struct SurveyRecord {
    std::string respondent_id;
    std::string cycle;  // most recent cycle that contributed
    std::map<std::string, VariableValue> variables;  // "domain.variable" keys

    bool operator==(const SurveyRecord&) const = default;
};

enum class ClaimKind { Diagnosis, Procedure, Medication };

const char* to_string(ClaimKind kind);
ClaimKind claim_kind_from_string(std::string_view name);

struct ClaimEvent {
    Date date;
    ClaimKind kind = ClaimKind::Diagnosis;
    std::string code;
    std::string description;

    bool operator==(const ClaimEvent&) const = default;
};

// A patient's dated diagnosis/procedure/medication history, events sorted
// ascending by (date, kind, code).
struct ClaimsTrajectory {
    std::string patient_id;
    std::vector<ClaimEvent> events;

    bool operator==(const ClaimsTrajectory&) const = default;
};

// Categorical distribution with a stable, declared category order (the order
// drives inverse-CDF sampling).
struct Categorical {
    std::vector<std::pair<std::string, double>> entries;

    bool operator==(const Categorical&) const = default;

    // Throws ValidationError unless probabilities are >= 0 and sum to 1
    // within 1e-9; `name` labels the offending distribution.
    void validate(const std::string& name) const;
};

struct PriorTable {
    std::map<std::string, Categorical> demographic_priors;
    Categorical comorbidity_priors;  // categories are ComorbidityGroup names
    // Keyed by group name with an optional "default" fallback.
    std::map<std::string, Categorical> bmi_class_priors;

    bool operator==(const PriorTable&) const = default;

    const Categorical& bmi_prior_for(ComorbidityGroup group) const;
};

// JSON bindings, used when reference records are embedded in prompts.
void to_json(Json& j, const SurveyRecord& record);
void from_json(const Json& j, SurveyRecord& record);
void to_json(Json& j, const ClaimEvent& event);
void from_json(const Json& j, ClaimEvent& event);
void to_json(Json& j, const ClaimsTrajectory& trajectory);
void from_json(const Json& j, ClaimsTrajectory& trajectory);

std::vector<SurveyRecord> load_surveys(const std::string& path);
std::vector<SurveyRecord> parse_surveys(const std::string& csv_text);

std::vector<ClaimsTrajectory> load_claims(const std::string& path);
std::vector<ClaimsTrajectory> parse_claims(const std::string& jsonl_text);

PriorTable load_priors(const std::string& path);
PriorTable parse_priors(const std::string& json_text);
std::string serialize_priors(const PriorTable& table);

}  // namespace synth::ingest
