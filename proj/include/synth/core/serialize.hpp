#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <string_view>

#include "synth/core/profile.hpp"

namespace synth {

using Json = nlohmann::json;

// JSON bindings. nlohmann keeps object keys in std::map order, so dumps are
// key-sorted and byte-deterministic for equal values.
void to_json(Json& j, const Date& date);
void from_json(const Json& j, Date& date);
void to_json(Json& j, const BmiClass& bmi);
void from_json(const Json& j, BmiClass& bmi);
void to_json(Json& j, const Demographics& demographics);
void from_json(const Json& j, Demographics& demographics);
void to_json(Json& j, const Condition& condition);
void from_json(const Json& j, Condition& condition);
void to_json(Json& j, const Symptom& symptom);
void from_json(const Json& j, Symptom& symptom);
void to_json(Json& j, const Habits& habits);
void from_json(const Json& j, Habits& habits);
void to_json(Json& j, const LabValue& lab);
void from_json(const Json& j, LabValue& lab);
void to_json(Json& j, const Treatment& treatment);
void from_json(const Json& j, Treatment& treatment);
void to_json(Json& j, const PsychScales& scales);
void from_json(const Json& j, PsychScales& scales);
void to_json(Json& j, const TimelineEvent& event);
void from_json(const Json& j, TimelineEvent& event);
void to_json(Json& j, const PatientProfile& profile);
void from_json(const Json& j, PatientProfile& profile);
void to_json(Json& j, const Issue& issue);
void from_json(const Json& j, Issue& issue);
void to_json(Json& j, const ScoredIssue& issue);
void from_json(const Json& j, ScoredIssue& issue);
void to_json(Json& j, const QualityScore& score);
void from_json(const Json& j, QualityScore& score);

// Canonical text form: UTF-8, sorted keys, two-space indent, LF line
// endings, trailing newline. Equal values serialize byte-identically.
std::string canonical_dump(const Json& j);

std::string canonical_serialize(const PatientProfile& profile);
PatientProfile canonical_parse(const std::string& bytes);  // throws ParseError

// Canonical JSON of one named section ("demographics", ..., "timeline").
Json section_json(const PatientProfile& profile, std::string_view section);

// Canonical text of the nine non-demographic sections, used for embedding.
std::string clinical_core_text(const PatientProfile& profile);

// Strict-object helpers shared by the other modules' parsers.
const Json& require_key(const Json& j, const char* key, const char* context);
void expect_keys(const Json& j, std::initializer_list<const char*> required,
                 std::initializer_list<const char*> optional, const char* context);

}  // namespace synth
