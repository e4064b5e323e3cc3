#include "synth/agents/types.hpp"

#include "synth/core/error.hpp"

namespace synth::agents {

void to_json(Json& j, const Blueprint& b) {
    j = Json{{"demographics", b.demographics},
             {"bmi_class", b.bmi_class},
             {"comorbidity", to_string(b.comorbidity)},
             {"survey_summary", b.survey_summary},
             {"trajectory_summaries", b.trajectory_summaries}};
}

void from_json(const Json& j, Blueprint& b) {
    expect_keys(j,
                {"demographics", "bmi_class", "comorbidity", "survey_summary",
                 "trajectory_summaries"},
                {}, "blueprint");
    from_json(j.at("demographics"), b.demographics);
    from_json(j.at("bmi_class"), b.bmi_class);
    const Json& group = j.at("comorbidity");
    if (!group.is_string()) throw FormatError("blueprint: 'comorbidity' must be a string");
    b.comorbidity = comorbidity_from_string(group.get<std::string>());
    const Json& summary = j.at("survey_summary");
    if (!summary.is_string()) throw FormatError("blueprint: 'survey_summary' must be a string");
    b.survey_summary = summary.get<std::string>();
    const Json& trajectories = j.at("trajectory_summaries");
    if (!trajectories.is_array())
        throw FormatError("blueprint: 'trajectory_summaries' must be an array");
    b.trajectory_summaries.clear();
    for (const Json& t : trajectories) {
        if (!t.is_string())
            throw FormatError("blueprint: trajectory summaries must be strings");
        b.trajectory_summaries.push_back(t.get<std::string>());
    }
}

void check_blueprint(const Blueprint& b) {
    if (b.trajectory_summaries.size() != 3) {
        throw ValidationError("blueprint must carry exactly 3 trajectory summaries, has " +
                              std::to_string(b.trajectory_summaries.size()));
    }
    if (b.survey_summary.empty()) throw ValidationError("blueprint survey summary is empty");
    for (const std::string& t : b.trajectory_summaries) {
        if (t.empty()) throw ValidationError("blueprint has an empty trajectory summary");
    }
}

bool EvaluationReport::has_severity(Severity severity) const {
    for (const Issue& issue : issues) {
        if (issue.severity == severity) return true;
    }
    return false;
}

void to_json(Json& j, const EvaluationReport& report) {
    j = Json{{"issues", report.issues}, {"summary", report.summary}};
}

void from_json(const Json& j, EvaluationReport& report) {
    expect_keys(j, {"issues", "summary"}, {}, "evaluation report");
    report.issues = j.at("issues").get<std::vector<Issue>>();
    const Json& summary = j.at("summary");
    if (!summary.is_string())
        throw FormatError("evaluation report: 'summary' must be a string");
    report.summary = summary.get<std::string>();
    for (const Issue& issue : report.issues) {
        if (!is_profile_section(issue.dimension)) {
            throw FormatError("evaluation report names unknown dimension '" + issue.dimension +
                              "'");
        }
    }
}

}  // namespace synth::agents
