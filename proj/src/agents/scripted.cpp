#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "synth/agents/mock_client.hpp"
#include "synth/agents/types.hpp"
#include "synth/core/date.hpp"
#include "synth/core/profile.hpp"
#include "synth/core/serialize.hpp"
#include "synth/ingest/ingest.hpp"
#include "synth/literature/evidence.hpp"
#include "synth/sampler/sampler.hpp"
#include "synth/util/digest.hpp"
#include "synth/util/strings.hpp"

// The scripted stage synthesizer.  Each stage is a pure function of its
// request: the structured inputs ride in the prompt's final fenced JSON
// block, and all randomness is hash-seeded from (model, inputs).  Together
// the stages form a self-consistent universe: the generator never produces
// the defects the evaluator knows how to find, the refiner repairs exactly
// those defects, and the judge grades content richness that the generator
// varies by engine, so different engine names yield measurably different
// cohorts while every byte stays reproducible.

namespace synth::agents {

namespace {

using literature::CaseReport;
using literature::EvidenceSummary;
using literature::Finding;
using sampler::SeedState;

constexpr Date kAsOf{2025, 6, 30};

// ---------------------------------------------------------------------------
// Request plumbing

// Last fenced code block across the user messages; the pipeline always puts
// the machine-readable inputs there. (Corrective re-prompts append plain-text
// user turns, so the scan walks every user message, not just the final one.)
Json facts_from(const CompletionRequest& request) {
    std::string block;
    bool found = false;
    for (const Message& message : request.messages) {
        if (message.role != "user") continue;
        const std::string& text = message.content;
        std::size_t pos = 0;
        while (true) {
            std::size_t start = text.find("```", pos);
            if (start == std::string::npos) break;
            std::size_t body = text.find('\n', start);
            if (body == std::string::npos) break;
            std::size_t end = text.find("```", body);
            if (end == std::string::npos) break;
            block = text.substr(body + 1, end - body - 1);
            found = true;
            pos = end + 3;
        }
    }
    if (!found) {
        throw ContentRejected("scripted backend: no fenced input block in any user message");
    }
    try {
        return Json::parse(block);
    } catch (const Json::exception& e) {
        throw ContentRejected(std::string("scripted backend: malformed input block: ") + e.what());
    }
}

// Engine "quality" in [0, 1], a stable function of the model name alone.  It
// drives how rich the generated content is, which is what the judge grades,
// so distinct engine names produce cohorts with genuinely different score
// distributions.
double engine_quality(const std::string& model) {
    return static_cast<double>(util::sha256_seed(model) % 10000) / 9999.0;
}

std::string fenced(const Json& j) {
    return "```json\n" + canonical_dump(j) + "```\n";
}

double round1(double v) { return std::round(v * 10.0) / 10.0; }

// ---------------------------------------------------------------------------
// Shared audit rules.  The evaluator reports them, the refiner fixes them,
// and the judge counts them; keeping one implementation keeps the three
// agents mutually consistent.

bool first_diagnosis_date(const PatientProfile& p, Date* out) {
    bool found = false;
    for (const TimelineEvent& event : p.timeline) {
        if (event.kind != "diagnosis") continue;
        if (!found || event.date < *out) {
            *out = event.date;
            found = true;
        }
    }
    return found;
}

bool chaotic_diet(const Habits& habits) {
    return util::contains_ci(habits.diet, "chaotic") || util::contains_ci(habits.diet, "erratic") ||
           util::contains_ci(habits.diet, "irregular");
}

std::vector<Issue> audit_rules(const PatientProfile& p) {
    std::vector<Issue> issues;

    Date first_diag;
    if (first_diagnosis_date(p, &first_diag)) {
        for (const TimelineEvent& event : p.timeline) {
            if (event.kind == "treatment" && event.date < first_diag) {
                issues.push_back({"timeline", Severity::Major, Criterion::MedicalPlausibility,
                                  "treatment '" + event.description + "' dated " +
                                      event.date.to_string() + " precedes the first diagnosis on " +
                                      first_diag.to_string()});
            }
        }
    }

    for (std::size_t i = 1; i < p.timeline.size(); ++i) {
        if (p.timeline[i].date < p.timeline[i - 1].date) {
            issues.push_back({"timeline", Severity::Major, Criterion::LogicalConsistency,
                              "timeline events are not in chronological order"});
            break;
        }
    }

    if (p.psych_scales.hexaco.conscientiousness >= 4.0 && chaotic_diet(p.habits)) {
        issues.push_back({"psych_scales", Severity::Moderate, Criterion::LogicalConsistency,
                          "conscientiousness of " +
                              util::format_double(p.psych_scales.hexaco.conscientiousness, 1) +
                              " contradicts a diet described as '" + p.habits.diet + "'"});
    }

    if (p.symptoms.size() < 2) {
        issues.push_back({"symptoms", Severity::Minor, Criterion::InformationSufficiency,
                          "only " + std::to_string(p.symptoms.size()) +
                              " symptom(s) documented; the presentation is underspecified"});
    }

    for (const LabValue& lab : p.labs) {
        if (util::contains_ci(lab.analyte, "triglyceride") && lab.value > 500.0) {
            issues.push_back({"labs", Severity::Major, Criterion::MedicalPlausibility,
                              "triglycerides of " + util::format_double(lab.value, 1) + " " +
                                  lab.unit + " without any matching acute event or treatment"});
        }
    }

    return issues;
}

// ---------------------------------------------------------------------------
// Summarizer

std::string describe_survey(const Json& survey_json) {
    ingest::SurveyRecord survey = survey_json.get<ingest::SurveyRecord>();
    std::string text = "Reference respondent " + survey.respondent_id + " (cycle " + survey.cycle +
                       ") with " + std::to_string(survey.variables.size()) + " recorded variables";
    auto describe = [&](const char* key, const char* label) {
        auto it = survey.variables.find(key);
        if (it == survey.variables.end() || ingest::is_null(it->second)) return;
        text += "; " + std::string(label) + " " + ingest::variable_to_string(it->second);
    };
    describe("demographics.age", "age");
    describe("demographics.sex", "sex");
    describe("body.bmi", "BMI");
    std::vector<std::string> flags;
    for (const auto& [name, value] : survey.variables) {
        if (!util::starts_with(name, "mental_health.") || ingest::is_null(value)) continue;
        flags.push_back(name.substr(std::string("mental_health.").size()) + "=" +
                        ingest::variable_to_string(value));
    }
    if (!flags.empty()) text += "; screeners: " + util::join(flags, ", ");
    return text + ".";
}

std::string describe_trajectory(const Json& trajectory_json) {
    ingest::ClaimsTrajectory trajectory = trajectory_json.get<ingest::ClaimsTrajectory>();
    if (trajectory.events.empty()) {
        return trajectory.patient_id + ": no claim events on record.";
    }
    std::vector<std::string> diagnoses;
    for (const ingest::ClaimEvent& event : trajectory.events) {
        if (event.kind == ingest::ClaimKind::Diagnosis) diagnoses.push_back(event.description);
    }
    std::string text = trajectory.patient_id + ": " + std::to_string(trajectory.events.size()) +
                       " claim events from " + trajectory.events.front().date.to_string() + " to " +
                       trajectory.events.back().date.to_string();
    if (!diagnoses.empty()) text += "; diagnoses: " + util::join(diagnoses, "; ");
    return text + ".";
}

std::string scripted_summarizer(const Json& facts) {
    expect_keys(facts, {"demographics", "bmi_class", "comorbidity", "survey", "trajectories"}, {},
                "summarizer inputs");
    Blueprint blueprint;
    blueprint.demographics = facts.at("demographics").get<Demographics>();
    blueprint.bmi_class = facts.at("bmi_class").get<BmiClass>();
    blueprint.comorbidity = comorbidity_from_string(facts.at("comorbidity").get<std::string>());
    blueprint.survey_summary = describe_survey(facts.at("survey"));
    for (const Json& trajectory : facts.at("trajectories")) {
        blueprint.trajectory_summaries.push_back(describe_trajectory(trajectory));
    }
    Json out = blueprint;
    return "Here is the patient blueprint distilled from the reference records.\n\n" + fenced(out);
}

// ---------------------------------------------------------------------------
// Generator content tables

struct GroupContent {
    std::array<Symptom, 5> symptoms;
    Habits habits;
    const char* narrative;
    const char* treatment_name;  // empty: no condition-specific treatment
    TreatmentType treatment_type;
};

const GroupContent& content_for(ComorbidityGroup group) {
    static const std::array<GroupContent, 5> kContent = {{
        // ObesityOnly
        {{{{"shortness of breath on exertion", "moderate", "daily"},
           {"knee pain when climbing stairs", "moderate", "daily"},
           {"daytime fatigue", "mild", "daily"},
           {"lower back pain", "mild", "intermittent"},
           {"snoring with restless sleep", "moderate", "nightly"}}},
         {"large portions with frequent takeout meals",
          "mostly sedentary; short walks on weekends", "about 7 hours, snores most nights",
          "does not smoke; alcohol rarely"},
         " You frame the weight as a practical problem — stairs, knees, energy — and answer"
         " questions in a matter-of-fact tone.",
         "", TreatmentType::Therapy},
        // ObesityBingeEating
        {{{{"recurrent binge eating episodes", "severe", "weekly"},
           {"eating rapidly until uncomfortably full", "moderate", "weekly"},
           {"guilt and shame after eating", "moderate", "weekly"},
           {"eating alone out of embarrassment", "moderate", "weekly"},
           {"daytime fatigue", "mild", "daily"}}},
         {"irregular meals with recurrent evening binge episodes",
          "mostly sedentary; avoids the gym", "6-7 hours, disrupted after late-night eating",
          "does not smoke; occasional beer"},
         " Evenings are the hard part: once a binge starts you describe feeling unable to stop,"
         " and you deflect questions about it with self-deprecating humor.",
         "cognitive behavioral therapy focused on binge triggers", TreatmentType::Therapy},
        // ObesityAnxiety
        {{{{"persistent uncontrollable worry", "severe", "daily"},
           {"restlessness and feeling on edge", "moderate", "daily"},
           {"muscle tension in neck and shoulders", "moderate", "daily"},
           {"difficulty concentrating at work", "moderate", "daily"},
           {"irritability", "mild", "intermittent"}}},
         {"regular meals but stress snacking through the afternoon",
          "short walks; worry cuts sessions short", "takes over an hour to fall asleep on bad days",
          "does not smoke; coffee through the day"},
         " You worry out loud, circle back to worst-case scenarios, and ask clarifying questions"
         " twice before you trust an answer.",
         "sertraline 50 mg daily", TreatmentType::Medication},
        // ObesityDepression
        {{{{"low mood for most of the day", "severe", "daily"},
           {"loss of interest in former hobbies", "severe", "daily"},
           {"early-morning waking", "moderate", "nightly"},
           {"difficulty concentrating", "moderate", "daily"},
           {"feelings of worthlessness", "moderate", "intermittent"}}},
         {"skips breakfast; low appetite alternating with comfort eating",
          "rarely leaves the house beyond errands", "sleeps 9-10 hours yet wakes unrefreshed",
          "does not smoke; a glass of wine some evenings"},
         " Your answers come slowly and flat; you mention that hobbies you used to enjoy now feel"
         " like chores.",
         "fluoxetine 20 mg daily", TreatmentType::Medication},
        // ObesitySocialPhobia
        {{{{"intense fear of being judged in social settings", "severe", "situational"},
           {"avoidance of group meals and gatherings", "moderate", "weekly"},
           {"blushing and sweating when speaking up", "moderate", "situational"},
           {"anticipatory worry before meetings", "moderate", "daily"},
           {"rehearsing sentences before speaking", "mild", "situational"}}},
         {"eats lunch alone at a desk to avoid the cafeteria", "home exercise videos; avoids group"
          " classes",
          "7 hours, restless before public events", "does not smoke; alcohol only to face"
          " gatherings"},
         " You speak quietly, avoid eye contact in groups, and rehearse what to say before"
         " appointments.",
         "graduated exposure therapy", TreatmentType::Therapy},
    }};
    return kContent[static_cast<std::size_t>(group)];
}

struct BackgroundCondition {
    const char* name;
    const char* treatment;
    TreatmentType type;
};

constexpr std::array<BackgroundCondition, 6> kBackground = {{
    {"hypertension", "lisinopril 10 mg daily", TreatmentType::Medication},
    {"hyperlipidemia", "atorvastatin 20 mg daily", TreatmentType::Medication},
    {"type 2 diabetes mellitus", "metformin 500 mg twice daily", TreatmentType::Medication},
    {"gastroesophageal reflux disease", "omeprazole 20 mg daily", TreatmentType::Medication},
    {"osteoarthritis of the knee", "structured physical therapy program", TreatmentType::Therapy},
    {"obstructive sleep apnea", "CPAP titration study", TreatmentType::Procedure},
}};

PsychScales sample_scales(ComorbidityGroup group, SeedState& rng) {
    PsychScales scales;
    // Fixed draw order so the seed-to-profile mapping never shifts.
    double* fields[] = {
        &scales.hexaco.honesty_humility, &scales.hexaco.emotionality,
        &scales.hexaco.extraversion,     &scales.hexaco.agreeableness,
        &scales.hexaco.conscientiousness, &scales.hexaco.openness,
        &scales.rst.bas,                 &scales.rst.bis,
        &scales.rst.fffs_fight,          &scales.rst.fffs_flight,
        &scales.rst.fffs_freeze,         &scales.tci.novelty_seeking,
        &scales.tci.harm_avoidance,      &scales.tci.reward_dependence,
        &scales.tci.persistence,         &scales.tci.self_directedness,
        &scales.tci.cooperativeness,     &scales.tci.self_transcendence,
    };
    for (double* field : fields) *field = rng.uniform_real(2.2, 3.8);

    switch (group) {
        case ComorbidityGroup::ObesityOnly:
            scales.tci.harm_avoidance += 0.2;
            break;
        case ComorbidityGroup::ObesityBingeEating:
            scales.tci.novelty_seeking += 0.8;
            scales.tci.self_directedness -= 0.9;
            scales.rst.bas += 0.6;
            scales.hexaco.conscientiousness -= 0.4;
            break;
        case ComorbidityGroup::ObesityAnxiety:
            scales.rst.bis += 1.0;
            scales.tci.harm_avoidance += 0.9;
            scales.rst.fffs_flight += 0.4;
            scales.hexaco.emotionality += 0.6;
            break;
        case ComorbidityGroup::ObesityDepression:
            scales.hexaco.extraversion -= 1.0;
            scales.tci.harm_avoidance += 0.8;
            scales.rst.bas -= 0.6;
            break;
        case ComorbidityGroup::ObesitySocialPhobia:
            scales.rst.fffs_freeze += 0.9;
            scales.rst.bis += 0.7;
            scales.hexaco.extraversion -= 0.7;
            break;
    }
    for (double* field : fields) *field = round1(std::clamp(*field, 1.2, 4.6));
    // A tidy personality next to a disordered diet reads as a contradiction,
    // so conscientiousness stays clearly below that threshold.
    scales.hexaco.conscientiousness = std::min(scales.hexaco.conscientiousness, 3.8);
    return scales;
}

std::string scripted_generator(const CompletionRequest& request, const Json& facts) {
    expect_keys(facts, {"blueprint"}, {"patient_id"}, "generator inputs");
    const Json& blueprint_json = facts.at("blueprint");
    Blueprint blueprint = blueprint_json.get<Blueprint>();

    // Same engine + same blueprint => same profile, different engine =>
    // different profile, which is what lets engine cohorts diverge.
    SeedState rng(util::sha256_seed(request.model + "\n" + canonical_dump(blueprint_json)), 0);
    const double quality = engine_quality(request.model);
    const GroupContent& content = content_for(blueprint.comorbidity);

    PatientProfile p;
    if (facts.contains("patient_id")) p.id = facts.at("patient_id").get<std::string>();
    p.comorbidity = blueprint.comorbidity;
    p.bmi = blueprint.bmi_class;
    p.demographics = blueprint.demographics;

    // Two background conditions, each with its own treatment.
    const int first_idx = rng.uniform_int(0, 5);
    int second_idx = rng.uniform_int(0, 4);
    if (second_idx >= first_idx) ++second_idx;
    const Date first_onset = kAsOf.plus_days(-rng.uniform_int(2400, 4200));
    const Date second_onset = first_onset.plus_days(rng.uniform_int(200, 900));
    p.medical_history = {{kBackground[first_idx].name, first_onset},
                         {kBackground[second_idx].name, second_onset}};
    p.treatments.push_back({kBackground[first_idx].treatment, kBackground[first_idx].type,
                            first_onset.plus_days(rng.uniform_int(10, 45))});
    p.treatments.push_back({kBackground[second_idx].treatment, kBackground[second_idx].type,
                            second_onset.plus_days(rng.uniform_int(10, 45))});

    const Date obesity_onset = kAsOf.plus_days(-rng.uniform_int(1500, 3000));
    p.current_conditions.push_back({"obesity", obesity_onset});
    const std::string disorder = comorbid_condition(blueprint.comorbidity);
    Date disorder_onset;
    Date disorder_tx_start;
    if (!disorder.empty()) {
        disorder_onset = obesity_onset.plus_days(rng.uniform_int(300, 1200));
        p.current_conditions.push_back({disorder, disorder_onset});
        disorder_tx_start = disorder_onset.plus_days(rng.uniform_int(14, 60));
        p.treatments.push_back(
            {content.treatment_name, content.treatment_type, disorder_tx_start});
    }

    const std::size_t symptom_count = quality >= 0.30 ? 4 : 3;
    for (std::size_t i = 0; i < symptom_count; ++i) p.symptoms.push_back(content.symptoms[i]);

    p.habits = content.habits;

    const double bmi = blueprint.bmi_class.bmi;
    auto lab = [&](const char* analyte, double base, double slope, double spread,
                   const char* unit, const char* reference) {
        double value = base + (bmi - 30.0) * slope + rng.next_double() * spread;
        p.labs.push_back({analyte, round1(value), unit, reference});
    };
    lab("HbA1c", 5.0, 0.03, 0.5, "%", "4.0-5.6");
    lab("fasting glucose", 86.0, 0.7, 10.0, "mg/dL", "70-99");
    lab("total cholesterol", 172.0, 1.1, 25.0, "mg/dL", "<200");
    if (quality >= 0.15) lab("LDL cholesterol", 96.0, 0.9, 18.0, "mg/dL", "<130");
    lab("HDL cholesterol", 54.0, -0.4, -8.0, "mg/dL", ">40");
    lab("triglycerides", 130.0, 3.0, 45.0, "mg/dL", "<150");

    p.psych_scales = sample_scales(blueprint.comorbidity, rng);

    p.role_play = "You are a " + std::to_string(p.demographics.age) + "-year-old " +
                  p.demographics.sex + " from " + p.demographics.location + " working as " +
                  (p.demographics.occupation.empty() ? "n/a" : p.demographics.occupation) +
                  ". You live with class " + to_string(p.bmi.category) + " obesity (BMI " +
                  util::format_double(p.bmi.bmi, 1) +
                  "); weight has shaped your routines since your diagnosis in " +
                  std::to_string(obesity_onset.year) + "." + content.narrative;
    if (quality >= 0.45) {
        p.role_play += " When asked about routines, describe your meals (" + p.habits.diet +
                       ") and activity (" + p.habits.activity +
                       ") consistently, and never volunteer lab numbers unprompted.";
    }

    p.timeline.push_back({first_onset, "diagnosis",
                          "diagnosed with " + std::string(kBackground[first_idx].name)});
    p.timeline.push_back({p.treatments[0].start, "treatment",
                          "started " + std::string(kBackground[first_idx].treatment)});
    p.timeline.push_back({second_onset, "diagnosis",
                          "diagnosed with " + std::string(kBackground[second_idx].name)});
    p.timeline.push_back({p.treatments[1].start, "treatment",
                          "started " + std::string(kBackground[second_idx].treatment)});
    p.timeline.push_back(
        {obesity_onset, "diagnosis",
         "obesity documented at BMI " + util::format_double(round1(bmi - rng.uniform_real(0.8, 2.4)), 1)});
    if (!disorder.empty()) {
        p.timeline.push_back({disorder_onset, "diagnosis", "diagnosed with " + disorder});
        p.timeline.push_back({disorder_tx_start, "treatment",
                              "started " + std::string(content.treatment_name)});
    }
    if (quality >= 0.25) {
        p.timeline.push_back({obesity_onset.plus_days(rng.uniform_int(300, 700)), "lifestyle",
                              "joined a structured walking program"});
    }
    p.timeline.push_back({kAsOf.plus_days(-rng.uniform_int(30, 120)), "followup",
                          "annual physical; BMI " + util::format_double(bmi, 1) +
                              ", labs reviewed"});
    std::stable_sort(p.timeline.begin(), p.timeline.end(),
                     [](const TimelineEvent& a, const TimelineEvent& b) { return a.date < b.date; });

    Json out = p;
    return "Here is the complete patient profile.\n\n" + fenced(out);
}

// ---------------------------------------------------------------------------
// Augmenter.  Every edit is idempotent (guarded by a contains-check) and
// lands only in the sections the pipeline permits the augmenter to touch.

std::string scripted_augmenter(const Json& facts) {
    expect_keys(facts, {"profile", "evidence"}, {}, "augmenter inputs");
    PatientProfile p = facts.at("profile").get<PatientProfile>();
    EvidenceSummary evidence = facts.at("evidence").get<EvidenceSummary>();

    auto has_symptom = [&](std::string_view needle) {
        return std::any_of(p.symptoms.begin(), p.symptoms.end(), [&](const Symptom& s) {
            return util::contains_ci(s.name, needle);
        });
    };
    // Appends `sentence` to `text` with a proper sentence boundary.
    auto add_sentence = [](std::string* text, std::string_view sentence) {
        if (!text->empty() && text->back() != '.' && text->back() != '!' &&
            text->back() != '?') {
            *text += '.';
        }
        if (!text->empty()) *text += ' ';
        *text += sentence;
    };

    for (const Finding& finding : evidence.findings) {
        const std::string condition = util::to_lower(finding.condition);
        const std::string combined = condition + " " + util::to_lower(finding.text);
        bool matched = false;
        if (combined.find("anxiety") != std::string::npos ||
            combined.find("worry") != std::string::npos) {
            matched = true;
            if (!has_symptom("sleep")) {
                p.symptoms.push_back({"sleep disturbance with delayed sleep onset", "moderate",
                                      "nightly"});
            }
            if (!util::contains_ci(p.habits.sleep, "worry")) {
                add_sentence(&p.habits.sleep, "Falls asleep slowly on high-worry nights.");
            }
        }
        if (condition.find("depress") != std::string::npos) {
            matched = true;
            if (!util::contains_ci(p.role_play, "brief, flat sentences")) {
                add_sentence(&p.role_play, "Published cases echo your pattern: you describe"
                                    " meals and moods in brief, flat sentences.");
            }
        }
        if (condition.find("binge") != std::string::npos) {
            matched = true;
            if (!util::contains_ci(p.habits.diet, "snack foods")) {
                add_sentence(&p.habits.diet,
                             "Keeps no snack foods at home after repeated late-night binges.");
            }
        }
        if (condition.find("social phobia") != std::string::npos ||
            condition.find("social anxiety") != std::string::npos) {
            matched = true;
            if (!has_symptom("rehears")) {
                p.symptoms.push_back({"rehearsing sentences before speaking", "mild",
                                      "situational"});
            }
        }
        if (!matched && !util::contains_ci(p.role_play, finding.condition)) {
            add_sentence(&p.role_play, "Case reports describing " + finding.condition +
                                  " inform how you talk about day-to-day coping.");
        }
    }

    Json out = p;
    return "Profile enriched with the published evidence.\n\n" + fenced(out);
}

// ---------------------------------------------------------------------------
// Evaluator

std::string scripted_evaluator(const Json& facts) {
    expect_keys(facts, {"profile"}, {}, "evaluator inputs");
    PatientProfile p = facts.at("profile").get<PatientProfile>();
    EvaluationReport report;
    report.issues = audit_rules(p);
    report.summary = report.issues.empty()
                         ? "no issues found"
                         : std::to_string(report.issues.size()) + " issue(s) found";
    Json out = report;
    return "Audit complete.\n\n" + fenced(out);
}

// ---------------------------------------------------------------------------
// Refiner.  Repairs exactly the defects the audit rules describe, touching
// only the flagged dimensions.

std::string scripted_refiner(const Json& facts) {
    expect_keys(facts, {"profile", "report"}, {"final_sweep"}, "refiner inputs");
    PatientProfile p = facts.at("profile").get<PatientProfile>();
    EvaluationReport report = facts.at("report").get<EvaluationReport>();

    bool resort_timeline = false;
    for (const Issue& issue : report.issues) {
        if (issue.dimension == "timeline" && issue.criterion == Criterion::MedicalPlausibility) {
            Date first_diag;
            if (first_diagnosis_date(p, &first_diag)) {
                for (TimelineEvent& event : p.timeline) {
                    if (event.kind == "treatment" && event.date < first_diag) {
                        event.date = first_diag.plus_days(30);
                    }
                }
                resort_timeline = true;
            }
        } else if (issue.dimension == "timeline" &&
                   issue.criterion == Criterion::LogicalConsistency) {
            resort_timeline = true;
        } else if (issue.dimension == "psych_scales") {
            p.psych_scales.hexaco.conscientiousness = 2.5;
        } else if (issue.dimension == "symptoms") {
            auto missing = [&](std::string_view name) {
                return std::none_of(p.symptoms.begin(), p.symptoms.end(),
                                    [&](const Symptom& s) { return s.name == name; });
            };
            if (missing("persistent low energy")) {
                p.symptoms.push_back({"persistent low energy", "mild", "daily"});
            }
            if (p.symptoms.size() < 2 && missing("waking unrefreshed")) {
                p.symptoms.push_back({"waking unrefreshed", "mild", "daily"});
            }
        } else if (issue.dimension == "labs" &&
                   issue.criterion == Criterion::MedicalPlausibility) {
            for (LabValue& lab : p.labs) {
                if (util::contains_ci(lab.analyte, "triglyceride") && lab.value > 500.0) {
                    lab.value = 180.0;
                }
            }
        }
        // Other dimensions have no scripted repair; the pipeline's
        // changed-section contract is what catches an unrepaired major.
    }
    if (resort_timeline) {
        std::stable_sort(p.timeline.begin(), p.timeline.end(),
                         [](const TimelineEvent& a, const TimelineEvent& b) {
                             return a.date < b.date;
                         });
    }

    Json out = p;
    return "Here is the refined profile.\n\n" + fenced(out);
}

// ---------------------------------------------------------------------------
// Judge.  Audit rules + deterministic completeness checks + hash-seeded
// spot-checks whose severity odds worsen as the profile gets thinner, so
// richer generator output earns systematically higher scores.

std::string scripted_judge(const CompletionRequest& request, const Json& facts) {
    expect_keys(facts, {"profile"}, {}, "judge inputs");
    PatientProfile p = facts.at("profile").get<PatientProfile>();

    EvaluationReport report;
    report.issues = audit_rules(p);

    const bool has_lifestyle = std::any_of(p.timeline.begin(), p.timeline.end(),
                                           [](const TimelineEvent& e) {
                                               return e.kind == "lifestyle";
                                           });
    int richness = 0;
    if (p.symptoms.size() >= 4) ++richness;
    if (p.role_play.size() >= 300) ++richness;
    if (has_lifestyle) ++richness;
    if (p.labs.size() >= 6) ++richness;

    if (p.symptoms.size() < 4) {
        report.issues.push_back({"symptoms", Severity::Minor, Criterion::InformationSufficiency,
                                 "fewer than four symptoms documented"});
    }
    if (p.role_play.size() < 300) {
        report.issues.push_back({"role_play", Severity::Minor, Criterion::InformationSufficiency,
                                 "role-play brief gives little behavioral guidance"});
    }
    if (!has_lifestyle) {
        report.issues.push_back({"timeline", Severity::Minor, Criterion::InformationSufficiency,
                                 "no lifestyle milestones recorded between diagnoses"});
    }
    if (p.labs.size() < 6) {
        report.issues.push_back({"labs", Severity::Minor, Criterion::InformationSufficiency,
                                 "fewer than six laboratory results reported"});
    }

    // Seeded per-(dimension, criterion) spot checks: same judge engine and
    // same profile bytes => same report.
    SeedState rng(util::sha256_seed(request.model + "\n" + canonical_serialize(p)), 0);
    const double thin = static_cast<double>(4 - richness);
    const double major_cut = 0.02 + 0.02 * thin;
    const double moderate_cut = major_cut + 0.07 + 0.04 * thin;
    const double minor_cut = moderate_cut + 0.15 + 0.02 * thin;
    constexpr std::array<Criterion, 3> kCriteria = {Criterion::InformationSufficiency,
                                                    Criterion::LogicalConsistency,
                                                    Criterion::MedicalPlausibility};
    for (const char* dimension : kProfileSections) {
        for (Criterion criterion : kCriteria) {
            const double u = rng.next_double();
            if (u >= minor_cut) continue;
            Severity severity = Severity::Minor;
            const char* flavor = "minor wording inconsistency in";
            if (u < major_cut) {
                severity = Severity::Major;
                flavor = "material gap undermines";
            } else if (u < moderate_cut) {
                severity = Severity::Moderate;
                flavor = "uneven level of detail in";
            }
            report.issues.push_back({dimension, severity, criterion,
                                     std::string(to_string(criterion)) + " spot check: " +
                                         flavor + " " + dimension});
        }
    }

    report.summary = report.issues.empty()
                         ? "no issues found"
                         : std::to_string(report.issues.size()) + " issue(s) found";
    Json out = report;
    return "Scoring audit complete.\n\n" + fenced(out);
}

// ---------------------------------------------------------------------------
// Evidence synthesizer: one finding per condition keyword, citing every
// report that carries the keyword, in first-appearance order.

std::string motif_for(const std::string& condition) {
    if (condition.find("binge") != std::string::npos) {
        return "loss-of-control eating followed by guilt and secrecy";
    }
    if (condition.find("social") != std::string::npos) {
        return "avoidance of group settings and fear of scrutiny";
    }
    if (condition.find("anxiety") != std::string::npos) {
        return "persistent worry and disrupted sleep";
    }
    if (condition.find("depress") != std::string::npos) {
        return "loss of interest, fatigue, and flattened affect";
    }
    if (condition.find("obesity") != std::string::npos) {
        return "weight-related functional limits and repeated dieting cycles";
    }
    return "overlapping symptoms that reshape daily routines";
}

std::string scripted_evidence(const Json& facts) {
    expect_keys(facts, {"reports"}, {}, "evidence inputs");
    std::vector<std::string> order;
    std::map<std::string, std::vector<std::string>> sources;
    for (const Json& report_json : facts.at("reports")) {
        CaseReport report = report_json.get<CaseReport>();
        for (const std::string& keyword : report.keywords) {
            const std::string condition = util::normalize_term(keyword);
            if (condition.empty()) continue;
            auto [it, inserted] = sources.try_emplace(condition);
            if (inserted) order.push_back(condition);
            if (std::find(it->second.begin(), it->second.end(), report.id) == it->second.end()) {
                it->second.push_back(report.id);
            }
        }
    }

    EvidenceSummary summary;
    for (const std::string& condition : order) {
        const std::vector<std::string>& ids = sources.at(condition);
        Finding finding;
        finding.condition = condition;
        finding.text = "Across " + std::to_string(ids.size()) + " case report(s), patients with " +
                       condition + " commonly describe " + motif_for(condition) + ".";
        finding.source_ids = ids;
        summary.findings.push_back(std::move(finding));
    }
    Json out = summary;
    return "Synthesized findings from the retrieved case reports.\n\n" + fenced(out);
}

}  // namespace

std::string scripted_response(const CompletionRequest& request) {
    const Json facts = facts_from(request);
    try {
        if (request.agent == "summarizer") return scripted_summarizer(facts);
        if (request.agent == "generator") return scripted_generator(request, facts);
        if (request.agent == "augmenter") return scripted_augmenter(facts);
        if (request.agent == "evaluator") return scripted_evaluator(facts);
        if (request.agent == "refiner") return scripted_refiner(facts);
        if (request.agent == "judge") return scripted_judge(request, facts);
        if (request.agent == "evidence") return scripted_evidence(facts);
    } catch (const ClientError&) {
        throw;
    } catch (const Error& e) {
        throw ContentRejected("scripted backend: bad inputs for agent '" + request.agent +
                              "': " + e.what());
    } catch (const Json::exception& e) {
        throw ContentRejected("scripted backend: bad inputs for agent '" + request.agent +
                              "': " + e.what());
    }
    throw ContentRejected("scripted backend: unknown agent '" + request.agent + "'");
}

}  // namespace synth::agents
