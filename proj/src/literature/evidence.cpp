#include "synth/literature/evidence.hpp"

#include <set>

#include "synth/core/error.hpp"

namespace synth::literature {

void to_json(Json& j, const CaseReport& r) {
    j = Json{{"id", r.id},
             {"title", r.title},
             {"abstract", r.abstract},
             {"keywords", r.keywords}};
    if (r.reported_age) j["reported_age"] = *r.reported_age;
    if (r.reported_gender) j["reported_gender"] = *r.reported_gender;
}

void from_json(const Json& j, CaseReport& r) {
    expect_keys(j, {"id", "title", "abstract", "keywords"},
                {"reported_age", "reported_gender"}, "case report");
    r.id = j.at("id").get<std::string>();
    r.title = j.at("title").get<std::string>();
    r.abstract = j.at("abstract").get<std::string>();
    r.keywords = j.at("keywords").get<std::vector<std::string>>();
    if (r.id.empty()) throw FormatError("case report: empty id");
    r.reported_age.reset();
    r.reported_gender.reset();
    if (j.contains("reported_age")) {
        if (!j.at("reported_age").is_number_integer())
            throw FormatError("case report: 'reported_age' must be an integer");
        r.reported_age = j.at("reported_age").get<int>();
    }
    if (j.contains("reported_gender")) {
        if (!j.at("reported_gender").is_string())
            throw FormatError("case report: 'reported_gender' must be a string");
        r.reported_gender = j.at("reported_gender").get<std::string>();
    }
}

void to_json(Json& j, const Finding& f) {
    j = Json{{"condition", f.condition}, {"text", f.text}, {"source_ids", f.source_ids}};
}

void from_json(const Json& j, Finding& f) {
    expect_keys(j, {"condition", "text", "source_ids"}, {}, "finding");
    f.condition = j.at("condition").get<std::string>();
    f.text = j.at("text").get<std::string>();
    f.source_ids = j.at("source_ids").get<std::vector<std::string>>();
}

void to_json(Json& j, const EvidenceSummary& s) { j = Json{{"findings", s.findings}}; }

void from_json(const Json& j, EvidenceSummary& s) {
    expect_keys(j, {"findings"}, {}, "evidence summary");
    s.findings = j.at("findings").get<std::vector<Finding>>();
}

void check_evidence(const EvidenceSummary& summary) {
    std::set<std::string> seen;
    for (const Finding& finding : summary.findings) {
        if (finding.condition.empty())
            throw ValidationError("evidence finding with an empty condition");
        if (finding.source_ids.empty())
            throw ValidationError("evidence finding for '" + finding.condition +
                                  "' cites no sources");
        if (!seen.insert(finding.condition).second)
            throw ValidationError("evidence repeats condition '" + finding.condition + "'");
    }
}

}  // namespace synth::literature
