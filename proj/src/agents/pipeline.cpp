#include "synth/agents/pipeline.hpp"

#include <functional>
#include <set>
#include <utility>

#include "synth/agents/extract.hpp"
#include "synth/core/validate.hpp"
#include "synth/matcher/matcher.hpp"
#include "synth/util/strings.hpp"

namespace synth::agents {

namespace {

// The sections the augmenter and refiner are allowed to rewrite; everything
// else (and the identity metadata) must come back byte-identical.
const std::set<std::string>& mutable_sections() {
    static const std::set<std::string> kMutable = {"symptoms", "habits", "psych_scales",
                                                   "role_play", "timeline"};
    return kMutable;
}

std::string fenced(const Json& j) { return "```json\n" + canonical_dump(j) + "```\n"; }

struct ContractCheck {
    std::vector<std::string> problems;
    bool tamper = false;  // edits to content that had to stay untouched
};

// Structured output plus stage-contract enforcement: one corrective
// re-prompt quoting the violations, then a hard error. The extraction layer
// underneath already handles malformed/ill-typed output the same way, so a
// response must be parseable before it ever reaches the contract check.
Json structured_with_contract(CompletionClient& client, const CompletionRequest& request,
                              OutputSchema schema, Transcript* transcript, const char* stage,
                              const std::function<ContractCheck(const Json&)>& check) {
    Json first = request_structured(client, request, schema, transcript);
    ContractCheck verdict = check(first);
    if (verdict.problems.empty()) return first;

    CompletionRequest corrective = request;
    corrective.messages.push_back({"assistant", canonical_dump(first)});
    std::string complaint = "The previous output violates required contract rules:\n";
    for (const std::string& problem : verdict.problems) complaint += "- " + problem + "\n";
    complaint +=
        "Produce the corrected JSON object only, keeping every part that was not flagged "
        "byte-for-byte identical.";
    corrective.messages.push_back({"user", std::move(complaint)});

    Json second = request_structured(client, corrective, schema, transcript);
    ContractCheck retry = check(second);
    if (retry.problems.empty()) return second;

    const std::string detail =
        std::string(stage) + ": output still violates contract after corrective re-prompt: " +
        util::join(retry.problems, "; ");
    if (retry.tamper) throw SectionTamper(detail);
    throw InvariantViolation(detail);
}

void append_validation_problems(const PatientProfile& candidate,
                                std::vector<std::string>* problems) {
    const ValidationReport report = validate_profile(candidate);
    for (const Violation& violation : report.violations) {
        problems->push_back(violation.section + ": " + violation.message);
    }
}

}  // namespace

Blueprint summarize(const std::vector<ingest::SurveyRecord>& surveys,
                    const std::vector<ingest::ClaimsTrajectory>& trajectories,
                    const ingest::PriorTable& priors, sampler::SeedState& rng,
                    CompletionClient& client, const PromptLibrary& prompts,
                    Transcript* transcript, const CorpusExpectation& corpus) {
    if (corpus.strict && surveys.size() != corpus.surveys) {
        throw ConfigError("reference survey corpus has " + std::to_string(surveys.size()) +
                          " records, expected exactly " + std::to_string(corpus.surveys));
    }
    if (corpus.strict && trajectories.size() != corpus.trajectories) {
        throw ConfigError("reference claims corpus has " + std::to_string(trajectories.size()) +
                          " trajectories, expected exactly " + std::to_string(corpus.trajectories));
    }

    // Fixed sampling order: downstream draws never shift when one stage
    // changes how much randomness it consumes.
    const Demographics demographics = sampler::sample_demographics(priors, rng);
    const ComorbidityGroup group = sampler::assign_comorbidity(priors, rng);
    const BmiClass bmi = sampler::sample_bmi(priors, group, rng);

    const matcher::FeatureVector query = matcher::demographic_features(demographics, bmi, group);
    std::vector<matcher::FeatureVector> survey_features;
    survey_features.reserve(surveys.size());
    for (const ingest::SurveyRecord& record : surveys) {
        survey_features.push_back(matcher::survey_features(record));
    }
    const std::size_t survey_index = matcher::match_survey(query, survey_features);

    std::vector<matcher::FeatureVector> trajectory_features;
    trajectory_features.reserve(trajectories.size());
    for (const ingest::ClaimsTrajectory& trajectory : trajectories) {
        trajectory_features.push_back(matcher::trajectory_features(trajectory));
    }
    const std::vector<std::size_t> picks =
        matcher::match_trajectories(query, survey_features[survey_index], trajectory_features);

    Json facts;
    facts["demographics"] = demographics;
    facts["bmi_class"] = bmi;
    facts["comorbidity"] = to_string(group);
    facts["survey"] = surveys[survey_index];
    Json picked = Json::array();
    for (std::size_t index : picks) picked.push_back(trajectories[index]);
    facts["trajectories"] = std::move(picked);

    const std::vector<Message> messages = prompts.render("summarizer", {{"facts", fenced(facts)}});
    const CompletionRequest request = client.make_request("summarizer", messages);
    const Json output = request_structured(client, request, OutputSchema::Blueprint, transcript);

    Blueprint blueprint = output.get<Blueprint>();
    // The sample, not the model, owns identity.
    blueprint.demographics = demographics;
    blueprint.bmi_class = bmi;
    blueprint.comorbidity = group;
    check_blueprint(blueprint);
    return blueprint;
}

PatientProfile generate(const Blueprint& blueprint, const std::string& profile_id,
                        CompletionClient& client, const PromptLibrary& prompts,
                        Transcript* transcript) {
    check_blueprint(blueprint);
    if (profile_id.empty()) {
        throw ValidationError("generate: profile id must be non-empty");
    }

    Json facts;
    facts["blueprint"] = blueprint;
    facts["patient_id"] = profile_id;
    const std::vector<Message> messages = prompts.render("generator", {{"facts", fenced(facts)}});
    const CompletionRequest request = client.make_request("generator", messages);

    auto check = [&](const Json& j) {
        ContractCheck verdict;
        PatientProfile parsed = j.get<PatientProfile>();
        if (!(parsed.demographics == blueprint.demographics)) {
            verdict.problems.push_back("demographics must match the blueprint verbatim");
        }
        if (!(parsed.bmi == blueprint.bmi_class)) {
            verdict.problems.push_back("bmi class and value must match the blueprint verbatim");
        }
        if (parsed.comorbidity != blueprint.comorbidity) {
            verdict.problems.push_back("comorbidity assignment must match the blueprint verbatim");
        }
        if (!parsed.timeline.empty()) {
            const long span =
                days_between(parsed.timeline.front().date, parsed.timeline.back().date);
            if (span < 3 * 365) {
                verdict.problems.push_back("timeline spans only " + std::to_string(span) +
                                           " days; at least three years of history are required");
            }
        }
        parsed.id = profile_id;
        append_validation_problems(parsed, &verdict.problems);
        return verdict;
    };

    const Json output = structured_with_contract(client, request, OutputSchema::PatientProfile,
                                                 transcript, "generate", check);
    PatientProfile profile = output.get<PatientProfile>();
    profile.id = profile_id;
    profile.demographics = blueprint.demographics;
    profile.bmi = blueprint.bmi_class;
    profile.comorbidity = blueprint.comorbidity;
    return profile;
}

std::vector<std::string> changed_sections(const PatientProfile& before,
                                          const PatientProfile& after) {
    std::vector<std::string> changed;
    for (const char* section : kProfileSections) {
        if (canonical_dump(section_json(before, section)) !=
            canonical_dump(section_json(after, section))) {
            changed.emplace_back(section);
        }
    }
    return changed;
}

PatientProfile augment(const PatientProfile& profile, const literature::EvidenceSummary& evidence,
                       CompletionClient& client, const PromptLibrary& prompts,
                       Transcript* transcript) {
    const ValidationReport pre = validate_profile(profile);
    if (!pre.ok()) {
        throw ValidationError("augment: input profile is invalid: " + pre.to_string());
    }
    if (evidence.empty()) {
        return profile;  // nothing to weave in; no model call
    }
    literature::check_evidence(evidence);

    Json facts;
    facts["profile"] = profile;
    facts["evidence"] = evidence;
    const std::vector<Message> messages = prompts.render("augmenter", {{"facts", fenced(facts)}});
    const CompletionRequest request = client.make_request("augmenter", messages);

    auto check = [&](const Json& j) {
        ContractCheck verdict;
        PatientProfile parsed = j.get<PatientProfile>();
        parsed.id = profile.id;
        if (!(parsed.bmi == profile.bmi)) {
            verdict.problems.push_back("identity metadata (bmi) was modified");
            verdict.tamper = true;
        }
        if (parsed.comorbidity != profile.comorbidity) {
            verdict.problems.push_back("identity metadata (comorbidity) was modified");
            verdict.tamper = true;
        }
        for (const std::string& section : changed_sections(profile, parsed)) {
            if (mutable_sections().count(section) == 0) {
                verdict.problems.push_back("frozen section '" + section + "' was modified");
                verdict.tamper = true;
            }
        }
        append_validation_problems(parsed, &verdict.problems);
        return verdict;
    };

    const Json output = structured_with_contract(client, request, OutputSchema::PatientProfile,
                                                 transcript, "augment", check);
    PatientProfile augmented = output.get<PatientProfile>();
    augmented.id = profile.id;
    augmented.bmi = profile.bmi;
    augmented.comorbidity = profile.comorbidity;
    return augmented;
}

EvaluationReport evaluate(const PatientProfile& profile, CompletionClient& client,
                          const PromptLibrary& prompts, Transcript* transcript) {
    const ValidationReport pre = validate_profile(profile);
    if (!pre.ok()) {
        throw ValidationError("evaluate: profile is not schema-valid: " + pre.to_string());
    }
    Json facts;
    facts["profile"] = profile;
    const std::vector<Message> messages = prompts.render("evaluator", {{"facts", fenced(facts)}});
    const CompletionRequest request = client.make_request("evaluator", messages);
    // Dimension vocabulary is enforced while parsing the report, with the
    // extraction layer's corrective re-prompt behind it.
    const Json output = request_structured(client, request, OutputSchema::EvaluationReport,
                                           transcript);
    return output.get<EvaluationReport>();
}

PatientProfile refine(const PatientProfile& profile, const EvaluationReport& report,
                      CompletionClient& client, const PromptLibrary& prompts,
                      Transcript* transcript, const RefineOptions& options) {
    for (const Issue& issue : report.issues) {
        if (!is_profile_section(issue.dimension)) {
            throw ValidationError("refine: issue names unknown dimension '" + issue.dimension +
                                  "'");
        }
    }
    if (report.empty() && !options.final_sweep) {
        return profile;  // nothing to repair; no model call
    }

    std::set<std::string> flagged;
    std::set<std::string> must_change;
    for (const Issue& issue : report.issues) {
        flagged.insert(issue.dimension);
        if (issue.severity != Severity::Minor) must_change.insert(issue.dimension);
    }

    Json facts;
    facts["profile"] = profile;
    facts["report"] = report;
    facts["final_sweep"] = options.final_sweep;
    const std::vector<Message> messages = prompts.render("refiner", {{"facts", fenced(facts)}});
    const CompletionRequest request = client.make_request("refiner", messages);

    auto check = [&](const Json& j) {
        ContractCheck verdict;
        PatientProfile parsed = j.get<PatientProfile>();
        parsed.id = profile.id;
        if (!(parsed.bmi == profile.bmi)) {
            verdict.problems.push_back("identity metadata (bmi) was modified");
            verdict.tamper = true;
        }
        if (parsed.comorbidity != profile.comorbidity) {
            verdict.problems.push_back("identity metadata (comorbidity) was modified");
            verdict.tamper = true;
        }
        const std::vector<std::string> diff = changed_sections(profile, parsed);
        const std::set<std::string> diff_set(diff.begin(), diff.end());
        if (!options.final_sweep) {
            for (const std::string& section : diff) {
                if (flagged.count(section) == 0) {
                    verdict.problems.push_back("issue-free section '" + section +
                                               "' was modified");
                    verdict.tamper = true;
                }
            }
        }
        for (const std::string& section : must_change) {
            if (diff_set.count(section) == 0) {
                verdict.problems.push_back("dimension '" + section +
                                           "' has major or moderate issues but was returned "
                                           "unchanged");
            }
        }
        append_validation_problems(parsed, &verdict.problems);
        return verdict;
    };

    const Json output = structured_with_contract(client, request, OutputSchema::PatientProfile,
                                                 transcript, "refine", check);
    PatientProfile refined = output.get<PatientProfile>();
    refined.id = profile.id;
    refined.bmi = profile.bmi;
    refined.comorbidity = profile.comorbidity;

    if (options.verify) {
        const EvaluationReport post = evaluate(refined, client, prompts, transcript);
        if (post.has_severity(Severity::Major)) {
            throw UnresolvedMajorIssues(
                "refine: verification re-audit still reports at least one major issue (" +
                post.summary + ")");
        }
    }
    return refined;
}

}  // namespace synth::agents
