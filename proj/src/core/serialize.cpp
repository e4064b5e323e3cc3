#include "synth/core/serialize.hpp"

#include <algorithm>

#include "synth/core/error.hpp"

namespace synth {

const Json& require_key(const Json& j, const char* key, const char* context) {
    if (!j.is_object())
        throw FormatError(std::string(context) + ": expected a JSON object");
    auto it = j.find(key);
    if (it == j.end())
        throw FormatError(std::string(context) + ": missing key '" + key + "'");
    return *it;
}

void expect_keys(const Json& j, std::initializer_list<const char*> required,
                 std::initializer_list<const char*> optional, const char* context) {
    if (!j.is_object())
        throw FormatError(std::string(context) + ": expected a JSON object");
    for (const char* key : required) {
        if (!j.contains(key))
            throw FormatError(std::string(context) + ": missing key '" + key + "'");
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& key = it.key();
        auto matches = [&key](const char* k) { return key == k; };
        if (!std::any_of(required.begin(), required.end(), matches) &&
            !std::any_of(optional.begin(), optional.end(), matches)) {
            throw FormatError(std::string(context) + ": unknown key '" + key + "'");
        }
    }
}

static double number_at(const Json& j, const char* key, const char* context) {
    const Json& v = require_key(j, key, context);
    if (!v.is_number())
        throw FormatError(std::string(context) + ": '" + key + "' must be a number");
    return v.get<double>();
}

static std::string string_at(const Json& j, const char* key, const char* context) {
    const Json& v = require_key(j, key, context);
    if (!v.is_string())
        throw FormatError(std::string(context) + ": '" + key + "' must be a string");
    return v.get<std::string>();
}

void to_json(Json& j, const Date& date) { j = date.to_string(); }

void from_json(const Json& j, Date& date) {
    if (!j.is_string()) throw FormatError("date: expected an ISO-8601 string");
    date = Date::parse(j.get<std::string>());
}

void to_json(Json& j, const BmiClass& bmi) {
    j = Json{{"bmi", bmi.bmi}, {"category", to_string(bmi.category)}};
}

void from_json(const Json& j, BmiClass& bmi) {
    expect_keys(j, {"bmi", "category"}, {}, "bmi");
    bmi.bmi = number_at(j, "bmi", "bmi");
    bmi.category = bmi_category_from_string(string_at(j, "category", "bmi"));
}

void to_json(Json& j, const Demographics& d) {
    j = Json{{"age", d.age},
             {"sex", d.sex},
             {"race", d.race},
             {"education", d.education},
             {"occupation", d.occupation},
             {"income", d.income},
             {"marital_status", d.marital_status},
             {"location", d.location},
             {"insurance", d.insurance}};
}

void from_json(const Json& j, Demographics& d) {
    expect_keys(j,
                {"age", "sex", "race", "education", "occupation", "income",
                 "marital_status", "location", "insurance"},
                {}, "demographics");
    d.age = static_cast<int>(number_at(j, "age", "demographics"));
    d.sex = string_at(j, "sex", "demographics");
    d.race = string_at(j, "race", "demographics");
    d.education = string_at(j, "education", "demographics");
    d.occupation = string_at(j, "occupation", "demographics");
    d.income = string_at(j, "income", "demographics");
    d.marital_status = string_at(j, "marital_status", "demographics");
    d.location = string_at(j, "location", "demographics");
    d.insurance = string_at(j, "insurance", "demographics");
}

void to_json(Json& j, const Condition& c) {
    j = Json{{"name", c.name}, {"onset", c.onset}};
}

void from_json(const Json& j, Condition& c) {
    expect_keys(j, {"name", "onset"}, {}, "condition");
    c.name = string_at(j, "name", "condition");
    from_json(j.at("onset"), c.onset);
}

void to_json(Json& j, const Symptom& s) {
    j = Json{{"name", s.name}, {"severity", s.severity}, {"frequency", s.frequency}};
}

void from_json(const Json& j, Symptom& s) {
    expect_keys(j, {"name", "severity", "frequency"}, {}, "symptom");
    s.name = string_at(j, "name", "symptom");
    s.severity = string_at(j, "severity", "symptom");
    s.frequency = string_at(j, "frequency", "symptom");
}

void to_json(Json& j, const Habits& h) {
    j = Json{{"diet", h.diet},
             {"activity", h.activity},
             {"sleep", h.sleep},
             {"substances", h.substances}};
}

void from_json(const Json& j, Habits& h) {
    expect_keys(j, {"diet", "activity", "sleep", "substances"}, {}, "habits");
    h.diet = string_at(j, "diet", "habits");
    h.activity = string_at(j, "activity", "habits");
    h.sleep = string_at(j, "sleep", "habits");
    h.substances = string_at(j, "substances", "habits");
}

void to_json(Json& j, const LabValue& lab) {
    j = Json{{"analyte", lab.analyte},
             {"value", lab.value},
             {"unit", lab.unit},
             {"reference_range", lab.reference_range}};
}

void from_json(const Json& j, LabValue& lab) {
    expect_keys(j, {"analyte", "value", "unit", "reference_range"}, {}, "lab");
    lab.analyte = string_at(j, "analyte", "lab");
    lab.value = number_at(j, "value", "lab");
    lab.unit = string_at(j, "unit", "lab");
    lab.reference_range = string_at(j, "reference_range", "lab");
}

void to_json(Json& j, const Treatment& t) {
    j = Json{{"name", t.name}, {"type", to_string(t.type)}, {"start", t.start}};
}

void from_json(const Json& j, Treatment& t) {
    expect_keys(j, {"name", "type", "start"}, {}, "treatment");
    t.name = string_at(j, "name", "treatment");
    t.type = treatment_type_from_string(string_at(j, "type", "treatment"));
    from_json(j.at("start"), t.start);
}

void to_json(Json& j, const PsychScales& p) {
    j = Json{
        {"hexaco",
         {{"honesty_humility", p.hexaco.honesty_humility},
          {"emotionality", p.hexaco.emotionality},
          {"extraversion", p.hexaco.extraversion},
          {"agreeableness", p.hexaco.agreeableness},
          {"conscientiousness", p.hexaco.conscientiousness},
          {"openness", p.hexaco.openness}}},
        {"rst",
         {{"bas", p.rst.bas},
          {"bis", p.rst.bis},
          {"fffs_fight", p.rst.fffs_fight},
          {"fffs_flight", p.rst.fffs_flight},
          {"fffs_freeze", p.rst.fffs_freeze}}},
        {"tci",
         {{"novelty_seeking", p.tci.novelty_seeking},
          {"harm_avoidance", p.tci.harm_avoidance},
          {"reward_dependence", p.tci.reward_dependence},
          {"persistence", p.tci.persistence},
          {"self_directedness", p.tci.self_directedness},
          {"cooperativeness", p.tci.cooperativeness},
          {"self_transcendence", p.tci.self_transcendence}}},
    };
}

void from_json(const Json& j, PsychScales& p) {
    expect_keys(j, {"hexaco", "rst", "tci"}, {}, "psych_scales");
    const Json& hex = j.at("hexaco");
    expect_keys(hex,
                {"honesty_humility", "emotionality", "extraversion", "agreeableness",
                 "conscientiousness", "openness"},
                {}, "psych_scales.hexaco");
    p.hexaco.honesty_humility = number_at(hex, "honesty_humility", "hexaco");
    p.hexaco.emotionality = number_at(hex, "emotionality", "hexaco");
    p.hexaco.extraversion = number_at(hex, "extraversion", "hexaco");
    p.hexaco.agreeableness = number_at(hex, "agreeableness", "hexaco");
    p.hexaco.conscientiousness = number_at(hex, "conscientiousness", "hexaco");
    p.hexaco.openness = number_at(hex, "openness", "hexaco");

    const Json& rst = j.at("rst");
    expect_keys(rst, {"bas", "bis", "fffs_fight", "fffs_flight", "fffs_freeze"}, {},
                "psych_scales.rst");
    p.rst.bas = number_at(rst, "bas", "rst");
    p.rst.bis = number_at(rst, "bis", "rst");
    p.rst.fffs_fight = number_at(rst, "fffs_fight", "rst");
    p.rst.fffs_flight = number_at(rst, "fffs_flight", "rst");
    p.rst.fffs_freeze = number_at(rst, "fffs_freeze", "rst");

    const Json& tci = j.at("tci");
    expect_keys(tci,
                {"novelty_seeking", "harm_avoidance", "reward_dependence", "persistence",
                 "self_directedness", "cooperativeness", "self_transcendence"},
                {}, "psych_scales.tci");
    p.tci.novelty_seeking = number_at(tci, "novelty_seeking", "tci");
    p.tci.harm_avoidance = number_at(tci, "harm_avoidance", "tci");
    p.tci.reward_dependence = number_at(tci, "reward_dependence", "tci");
    p.tci.persistence = number_at(tci, "persistence", "tci");
    p.tci.self_directedness = number_at(tci, "self_directedness", "tci");
    p.tci.cooperativeness = number_at(tci, "cooperativeness", "tci");
    p.tci.self_transcendence = number_at(tci, "self_transcendence", "tci");
}

void to_json(Json& j, const TimelineEvent& e) {
    j = Json{{"date", e.date}, {"kind", e.kind}, {"description", e.description}};
}

void from_json(const Json& j, TimelineEvent& e) {
    expect_keys(j, {"date", "kind", "description"}, {}, "timeline event");
    from_json(j.at("date"), e.date);
    e.kind = string_at(j, "kind", "timeline event");
    e.description = string_at(j, "description", "timeline event");
}

void to_json(Json& j, const PatientProfile& p) {
    j = Json{{"id", p.id},
             {"comorbidity", to_string(p.comorbidity)},
             {"bmi", p.bmi},
             {"demographics", p.demographics},
             {"medical_history", p.medical_history},
             {"current_conditions", p.current_conditions},
             {"symptoms", p.symptoms},
             {"habits", p.habits},
             {"labs", p.labs},
             {"treatments", p.treatments},
             {"psych_scales", p.psych_scales},
             {"role_play", p.role_play},
             {"timeline", p.timeline}};
}

void from_json(const Json& j, PatientProfile& p) {
    expect_keys(j,
                {"comorbidity", "bmi", "demographics", "medical_history",
                 "current_conditions", "symptoms", "habits", "labs", "treatments",
                 "psych_scales", "role_play", "timeline"},
                {"id"}, "profile");
    p.id = j.contains("id") ? string_at(j, "id", "profile") : "";
    p.comorbidity = comorbidity_from_string(string_at(j, "comorbidity", "profile"));
    from_json(j.at("bmi"), p.bmi);
    from_json(j.at("demographics"), p.demographics);
    p.medical_history = j.at("medical_history").get<std::vector<Condition>>();
    p.current_conditions = j.at("current_conditions").get<std::vector<Condition>>();
    p.symptoms = j.at("symptoms").get<std::vector<Symptom>>();
    from_json(j.at("habits"), p.habits);
    p.labs = j.at("labs").get<std::vector<LabValue>>();
    p.treatments = j.at("treatments").get<std::vector<Treatment>>();
    from_json(j.at("psych_scales"), p.psych_scales);
    const Json& role = require_key(j, "role_play", "profile");
    if (!role.is_string()) throw FormatError("profile: 'role_play' must be a string");
    p.role_play = role.get<std::string>();
    p.timeline = j.at("timeline").get<std::vector<TimelineEvent>>();
}

void to_json(Json& j, const Issue& issue) {
    j = Json{{"dimension", issue.dimension},
             {"severity", to_string(issue.severity)},
             {"criterion", to_string(issue.criterion)},
             {"description", issue.description}};
}

void from_json(const Json& j, Issue& issue) {
    expect_keys(j, {"dimension", "severity", "criterion", "description"}, {}, "issue");
    issue.dimension = string_at(j, "dimension", "issue");
    issue.severity = severity_from_string(string_at(j, "severity", "issue"));
    issue.criterion = criterion_from_string(string_at(j, "criterion", "issue"));
    issue.description = string_at(j, "description", "issue");
}

void to_json(Json& j, const ScoredIssue& s) {
    to_json(j, s.issue);
    j["points"] = s.points;
}

void from_json(const Json& j, ScoredIssue& s) {
    expect_keys(j, {"dimension", "severity", "criterion", "description", "points"}, {},
                "scored issue");
    from_json(Json{{"dimension", j.at("dimension")},
                   {"severity", j.at("severity")},
                   {"criterion", j.at("criterion")},
                   {"description", j.at("description")}},
              s.issue);
    s.points = static_cast<int>(number_at(j, "points", "scored issue"));
}

void to_json(Json& j, const QualityScore& score) {
    j = Json{{"dimension_scores", score.dimension_scores},
             {"overall", score.overall},
             {"deductions", score.deductions}};
}

void from_json(const Json& j, QualityScore& score) {
    expect_keys(j, {"dimension_scores", "overall", "deductions"}, {}, "quality score");
    score.dimension_scores =
        j.at("dimension_scores").get<std::map<std::string, int>>();
    score.overall = static_cast<int>(number_at(j, "overall", "quality score"));
    score.deductions = j.at("deductions").get<std::vector<ScoredIssue>>();
}

std::string canonical_dump(const Json& j) { return j.dump(2) + "\n"; }

std::string canonical_serialize(const PatientProfile& profile) {
    return canonical_dump(Json(profile));
}

PatientProfile canonical_parse(const std::string& bytes) {
    Json j;
    try {
        j = Json::parse(bytes);
    } catch (const Json::parse_error& e) {
        throw ParseError(std::string("profile parse error: ") + e.what(),
                         e.byte > 0 ? e.byte - 1 : 0);
    }
    try {
        return j.get<PatientProfile>();
    } catch (const ParseError&) {
        throw;  // bad date strings already carry an offset
    } catch (const Json::exception& e) {
        throw ParseError(std::string("profile schema error: ") + e.what(), 0);
    } catch (const Error& e) {
        throw ParseError(std::string("profile schema error: ") + e.what(), 0);
    }
}

Json section_json(const PatientProfile& profile, std::string_view section) {
    if (!is_profile_section(section))
        throw DomainError("unknown profile section: '" + std::string(section) + "'");
    Json j(profile);
    return j.at(std::string(section));
}

std::string clinical_core_text(const PatientProfile& profile) {
    Json j(profile);
    Json core = Json::object();
    for (const char* section : kProfileSections) {
        if (std::string_view(section) == "demographics") continue;
        core[section] = j.at(section);
    }
    return canonical_dump(core);
}

}  // namespace synth
