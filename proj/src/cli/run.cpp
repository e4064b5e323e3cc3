#include "synth/cli/run.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>
#include <utility>

#include "synth/agents/http_client.hpp"
#include "synth/agents/mock_client.hpp"
#include "synth/agents/pipeline.hpp"
#include "synth/cli/svg.hpp"
#include "synth/core/validate.hpp"
#include "synth/diversity/diversity.hpp"
#include "synth/diversity/tsne.hpp"
#include "synth/judge/judge.hpp"
#include "synth/literature/literature.hpp"
#include "synth/stats/stats.hpp"
#include "synth/util/csv.hpp"
#include "synth/util/digest.hpp"
#include "synth/util/strings.hpp"

namespace fs = std::filesystem;

namespace synth::cli {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string pad4(int value) {
    char buffer[16];
    std::snprintf(buffer, sizeof(buffer), "%04d", value);
    return buffer;
}

std::string fmt_g(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.4g", value);
    return buffer;
}

void to_json(Json& j, const EngineConfig& engine) {
    j = Json{{"endpoint", engine.endpoint},
             {"model", engine.model},
             {"api_key_env", engine.api_key_env},
             {"temperature", engine.temperature},
             {"max_tokens", engine.max_tokens}};
}

void engine_from_json(const Json& j, EngineConfig* engine) {
    expect_keys(j, {}, {"endpoint", "model", "api_key_env", "temperature", "max_tokens"},
                "engine config");
    if (j.contains("endpoint")) engine->endpoint = j.at("endpoint").get<std::string>();
    if (j.contains("model")) engine->model = j.at("model").get<std::string>();
    if (j.contains("api_key_env")) engine->api_key_env = j.at("api_key_env").get<std::string>();
    if (j.contains("temperature")) engine->temperature = j.at("temperature").get<double>();
    if (j.contains("max_tokens")) engine->max_tokens = j.at("max_tokens").get<int>();
}

agents::ClientConfig to_client_config(const EngineConfig& engine) {
    agents::ClientConfig config;
    config.endpoint = engine.endpoint;
    config.model = engine.model;
    config.api_key_env = engine.api_key_env;
    config.temperature = engine.temperature;
    config.max_tokens = engine.max_tokens;
    return config;
}

struct CohortSpec {
    std::string label;
    std::string directory;
};

std::vector<CohortSpec> parse_cohorts(const std::vector<std::string>& entries) {
    std::vector<CohortSpec> cohorts;
    std::set<std::string> labels;
    for (const std::string& entry : entries) {
        const std::size_t eq = entry.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == entry.size()) {
            throw ConfigError("cohort '" + entry + "' must have the form label=profiles-dir");
        }
        CohortSpec spec{entry.substr(0, eq), entry.substr(eq + 1)};
        if (!labels.insert(spec.label).second) {
            throw ConfigError("duplicate cohort label '" + spec.label + "'");
        }
        cohorts.push_back(std::move(spec));
    }
    return cohorts;
}

std::vector<PatientProfile> load_profiles_dir(const std::string& directory) {
    std::error_code ec;
    if (!fs::is_directory(directory, ec)) {
        throw ConfigError("profiles path is not a directory: " + directory);
    }
    std::vector<fs::path> files;
    for (const fs::directory_entry& entry : fs::directory_iterator(directory)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    std::vector<PatientProfile> profiles;
    for (const fs::path& file : files) {
        try {
            PatientProfile profile = canonical_parse(read_file(file.string()));
            if (profile.id.empty()) profile.id = file.stem().string();
            profiles.push_back(std::move(profile));
        } catch (const Error& e) {
            throw FormatError("profile " + file.string() + ": " + e.what());
        }
    }
    if (profiles.empty()) {
        throw ConfigError("no profile JSON files found in " + directory);
    }
    return profiles;
}

std::string hash_directory(const std::string& directory) {
    std::vector<fs::path> files;
    std::error_code ec;
    if (fs::is_directory(directory, ec)) {
        for (const fs::directory_entry& entry : fs::directory_iterator(directory)) {
            if (entry.is_regular_file()) files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    std::string combined;
    for (const fs::path& file : files) {
        combined += file.filename().string();
        combined += '\0';
        combined += read_file(file.string());
        combined += '\0';
    }
    return util::sha256_hex(combined);
}

// Scores CSV shared by generate and judge: one row per profile, the ten
// dimensions in canonical order, then the overall.
std::string scores_csv(const std::vector<std::string>& ids,
                       const std::vector<ComorbidityGroup>& groups,
                       const std::vector<QualityScore>& scores) {
    std::vector<std::string> header = {"patient_id", "comorbidity"};
    for (const char* section : kProfileSections) header.emplace_back(section);
    header.emplace_back("overall");
    std::string csv = util::write_csv_row(header);
    for (std::size_t i = 0; i < ids.size(); ++i) {
        std::vector<std::string> row = {ids[i], to_string(groups[i])};
        for (const char* section : kProfileSections) {
            row.push_back(std::to_string(scores[i].dimension_scores.at(section)));
        }
        row.push_back(std::to_string(scores[i].overall));
        csv += util::write_csv_row(row);
    }
    return csv;
}

Json prompt_hashes(const std::string& prompts_dir) {
    Json hashes = Json::object();
    for (const char* stage : {"summarizer", "generator", "augmenter", "evaluator", "refiner",
                              "judge", "evidence"}) {
        const std::string path = prompts_dir + "/" + stage + ".txt";
        std::error_code ec;
        if (fs::exists(path, ec)) hashes[stage] = util::sha256_hex(read_file(path));
    }
    return hashes;
}

}  // namespace

void atomic_write(const std::string& path, const std::string& bytes) {
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw ConfigError("cannot write " + tmp.string());
    }
    fs::rename(tmp, target);
}

void apply_config_json(const Json& j, RunConfig* config) {
    expect_keys(j, {},
                {"seed", "batch", "offline", "concurrency", "out_dir", "comorbidity_mix",
                 "surveys", "claims", "priors", "corpus", "prompts", "fixture_store",
                 "blueprints", "evidence_k", "refine_max_cycles", "generator", "evaluator",
                 "judge", "cohorts"},
                "run config");
    if (j.contains("seed")) config->seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("batch")) config->batch = j.at("batch").get<int>();
    if (j.contains("offline")) config->offline = j.at("offline").get<bool>();
    if (j.contains("concurrency")) config->concurrency = j.at("concurrency").get<int>();
    if (j.contains("out_dir")) config->out_dir = j.at("out_dir").get<std::string>();
    if (j.contains("comorbidity_mix")) {
        config->comorbidity_mix = j.at("comorbidity_mix").get<std::string>();
    }
    if (j.contains("surveys")) config->surveys_path = j.at("surveys").get<std::string>();
    if (j.contains("claims")) config->claims_path = j.at("claims").get<std::string>();
    if (j.contains("priors")) config->priors_path = j.at("priors").get<std::string>();
    if (j.contains("corpus")) config->corpus_dir = j.at("corpus").get<std::string>();
    if (j.contains("prompts")) config->prompts_dir = j.at("prompts").get<std::string>();
    if (j.contains("fixture_store")) {
        config->fixture_store = j.at("fixture_store").get<std::string>();
    }
    if (j.contains("blueprints")) config->blueprints_dir = j.at("blueprints").get<std::string>();
    if (j.contains("evidence_k")) config->evidence_k = j.at("evidence_k").get<std::uint64_t>();
    if (j.contains("refine_max_cycles")) {
        config->refine_max_cycles = j.at("refine_max_cycles").get<int>();
    }
    if (j.contains("generator")) engine_from_json(j.at("generator"), &config->generator);
    if (j.contains("evaluator")) engine_from_json(j.at("evaluator"), &config->evaluator);
    if (j.contains("judge")) engine_from_json(j.at("judge"), &config->judge);
    if (j.contains("cohorts")) config->cohorts = j.at("cohorts").get<std::vector<std::string>>();
}

RunConfig load_run_config(const std::string& path) {
    RunConfig config;
    Json j;
    try {
        j = Json::parse(read_file(path));
    } catch (const Json::exception& e) {
        throw ParseError("config " + path + ": " + e.what(), 0);
    }
    apply_config_json(j, &config);
    return config;
}

Json config_json(const RunConfig& config) {
    Json j;
    j["seed"] = config.seed;
    j["batch"] = config.batch;
    j["offline"] = config.offline;
    j["concurrency"] = config.concurrency;
    j["comorbidity_mix"] = config.comorbidity_mix;
    j["surveys"] = config.surveys_path;
    j["claims"] = config.claims_path;
    j["priors"] = config.priors_path;
    j["corpus"] = config.corpus_dir;
    j["prompts"] = config.prompts_dir;
    j["fixture_store"] = config.fixture_store;
    j["blueprints"] = config.blueprints_dir;
    j["evidence_k"] = config.evidence_k;
    j["refine_max_cycles"] = config.refine_max_cycles;
    to_json(j["generator"], config.generator);
    to_json(j["evaluator"], config.evaluator);
    to_json(j["judge"], config.judge);
    j["cohorts"] = config.cohorts;
    return j;
}

std::string config_hash(const RunConfig& config) {
    return util::sha256_hex(canonical_dump(config_json(config)));
}

std::unique_ptr<agents::CompletionClient> make_client(const EngineConfig& engine, bool offline,
                                                      const std::string& fixture_store) {
    if (offline || engine.endpoint == "mock") {
        auto client = std::make_unique<agents::MockCompletionClient>(to_client_config(engine));
        if (!fixture_store.empty()) client->load_store_file(fixture_store);
        return client;
    }
    return std::make_unique<agents::HttpCompletionClient>(to_client_config(engine));
}

namespace {

struct PatientOutcome {
    std::string id;
    std::uint64_t stream = 0;
    bool ok = false;
    std::string error;
    std::string blueprint_bytes;
    std::string profile_bytes;
    PatientProfile profile;  // valid only when ok
    agents::Transcript transcript;
    std::map<std::string, double> stage_ms;
};

// The per-patient pipeline: summarize (or reuse a blueprint), generate,
// gather evidence, augment, evaluate, refine until clean or out of cycles.
void run_patient(int index, const RunConfig& config, const ingest::PriorTable& priors,
                 const std::vector<ingest::SurveyRecord>& surveys,
                 const std::vector<ingest::ClaimsTrajectory>& claims,
                 literature::CorpusReportSource& corpus, const agents::PromptLibrary& prompts,
                 agents::CompletionClient& generator_client,
                 agents::CompletionClient& evaluator_client, PatientOutcome* outcome) {
    outcome->id = "patient-" + pad4(index + 1);
    outcome->stream = static_cast<std::uint64_t>(index) + 1;

    auto timed = [&](const char* stage, auto&& fn) {
        const auto start = std::chrono::steady_clock::now();
        auto finish = [&] {
            const auto elapsed = std::chrono::steady_clock::now() - start;
            outcome->stage_ms[stage] =
                std::chrono::duration<double, std::milli>(elapsed).count();
        };
        try {
            auto value = fn();
            finish();
            return value;
        } catch (...) {
            finish();
            throw;
        }
    };

    try {
        sampler::SeedState rng(config.seed, outcome->stream);

        ingest::PriorTable patient_priors = priors;
        if (config.comorbidity_mix == "uniform") {
            // Round-robin group assignment: the prior collapses to a point
            // mass so the sampled draw is the scheduled group.
            const ComorbidityGroup group = kComorbidityGroups[index % kComorbidityGroups.size()];
            patient_priors.comorbidity_priors = ingest::Categorical{{{to_string(group), 1.0}}};
        }

        agents::Blueprint blueprint;
        if (config.blueprints_dir.empty()) {
            blueprint = timed("summarize", [&] {
                return agents::summarize(surveys, claims, patient_priors, rng, generator_client,
                                         prompts, &outcome->transcript);
            });
        } else {
            const std::string path = config.blueprints_dir + "/" + outcome->id + ".json";
            blueprint = Json::parse(read_file(path)).get<agents::Blueprint>();
            agents::check_blueprint(blueprint);
        }
        outcome->blueprint_bytes = canonical_dump(Json(blueprint));

        PatientProfile profile = timed("generate", [&] {
            return agents::generate(blueprint, outcome->id, generator_client, prompts,
                                    &outcome->transcript);
        });

        const literature::EvidenceSummary evidence = timed("evidence", [&] {
            return literature::gather_evidence(profile, corpus, config.evidence_k,
                                               generator_client, prompts, &outcome->transcript);
        });

        profile = timed("augment", [&] {
            return agents::augment(profile, evidence, generator_client, prompts,
                                   &outcome->transcript);
        });

        agents::EvaluationReport report = timed("evaluate", [&] {
            return agents::evaluate(profile, evaluator_client, prompts, &outcome->transcript);
        });
        int cycle = 0;
        while (!report.empty() && cycle < config.refine_max_cycles) {
            profile = timed("refine", [&] {
                return agents::refine(profile, report, evaluator_client, prompts,
                                      &outcome->transcript);
            });
            report = timed("evaluate", [&] {
                return agents::evaluate(profile, evaluator_client, prompts,
                                        &outcome->transcript);
            });
            ++cycle;
        }
        if (report.has_severity(Severity::Major)) {
            throw agents::UnresolvedMajorIssues(
                "profile still has major issues after " + std::to_string(cycle) +
                " refinement cycle(s): " + report.summary);
        }

        outcome->profile_bytes = canonical_serialize(profile);
        outcome->profile = std::move(profile);
        outcome->ok = true;
    } catch (const Error& e) {
        outcome->error = e.what();
    } catch (const std::exception& e) {
        outcome->error = std::string("unexpected: ") + e.what();
    }
}

void validate_common(const RunConfig& config) {
    if (config.batch < 1) throw ConfigError("batch must be at least 1");
    if (config.concurrency < 1) throw ConfigError("concurrency must be at least 1");
    if (config.comorbidity_mix != "uniform" && config.comorbidity_mix != "priors") {
        throw ConfigError("comorbidity_mix must be 'uniform' or 'priors', got '" +
                          config.comorbidity_mix + "'");
    }
    if (config.evidence_k == 0) throw ConfigError("evidence_k must be at least 1");
    if (config.refine_max_cycles < 0) throw ConfigError("refine_max_cycles must be >= 0");
}

}  // namespace

int run_generate(const RunConfig& config) {
    validate_common(config);

    const ingest::PriorTable priors = ingest::load_priors(config.priors_path);
    const std::vector<ingest::SurveyRecord> surveys = ingest::load_surveys(config.surveys_path);
    const std::vector<ingest::ClaimsTrajectory> claims = ingest::load_claims(config.claims_path);
    const agents::PromptLibrary prompts(config.prompts_dir);
    literature::CorpusReportSource corpus(config.corpus_dir);

    const std::unique_ptr<agents::CompletionClient> generator_client =
        make_client(config.generator, config.offline, config.fixture_store);
    const std::unique_ptr<agents::CompletionClient> evaluator_client =
        make_client(config.evaluator, config.offline, config.fixture_store);
    const std::unique_ptr<agents::CompletionClient> judge_client =
        make_client(config.judge, config.offline, config.fixture_store);

    std::vector<PatientOutcome> outcomes(static_cast<std::size_t>(config.batch));
    const int workers = std::min(config.concurrency, config.batch);
    if (workers <= 1) {
        for (int i = 0; i < config.batch; ++i) {
            run_patient(i, config, priors, surveys, claims, corpus, prompts, *generator_client,
                        *evaluator_client, &outcomes[static_cast<std::size_t>(i)]);
        }
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                while (true) {
                    const int i = next.fetch_add(1);
                    if (i >= config.batch) return;
                    run_patient(i, config, priors, surveys, claims, corpus, prompts,
                                *generator_client, *evaluator_client,
                                &outcomes[static_cast<std::size_t>(i)]);
                }
            });
        }
        for (std::thread& t : pool) t.join();
    }

    // Artifacts, written in patient order by this single thread.
    agents::Transcript run_transcript;
    std::vector<std::string> score_ids;
    std::vector<ComorbidityGroup> score_groups;
    std::vector<QualityScore> scores;
    Json patients = Json::array();
    int failures = 0;
    for (const PatientOutcome& outcome : outcomes) {
        run_transcript.append_all(outcome.transcript);
        Json entry;
        entry["id"] = outcome.id;
        entry["stream"] = outcome.stream;
        entry["status"] = outcome.ok ? "ok" : "failed";
        if (!outcome.ok) {
            entry["error"] = outcome.error;
            ++failures;
            patients.push_back(std::move(entry));
            continue;
        }
        atomic_write(config.out_dir + "/blueprints/" + outcome.id + ".json",
                     outcome.blueprint_bytes);
        atomic_write(config.out_dir + "/profiles/" + outcome.id + ".json",
                     outcome.profile_bytes);
        patients.push_back(std::move(entry));
    }
    for (const PatientOutcome& outcome : outcomes) {
        if (!outcome.ok) continue;
        const QualityScore score = judge::judge_profile(outcome.profile, *judge_client, prompts,
                                                        &run_transcript);
        score_ids.push_back(outcome.id);
        score_groups.push_back(outcome.profile.comorbidity);
        scores.push_back(score);
    }

    atomic_write(config.out_dir + "/scores.csv", scores_csv(score_ids, score_groups, scores));

    const std::string transcript_bytes = run_transcript.to_jsonl();
    atomic_write(config.out_dir + "/transcripts.jsonl", transcript_bytes);

    Json manifest;
    manifest["command"] = "generate";
    manifest["config"] = config_json(config);
    manifest["config_hash"] = config_hash(config);
    Json fixture_hashes;
    fixture_hashes["surveys"] = util::sha256_hex(read_file(config.surveys_path));
    fixture_hashes["claims"] = util::sha256_hex(read_file(config.claims_path));
    fixture_hashes["priors"] = util::sha256_hex(read_file(config.priors_path));
    fixture_hashes["corpus"] = hash_directory(config.corpus_dir);
    fixture_hashes["prompts"] = prompt_hashes(config.prompts_dir);
    manifest["fixture_hashes"] = std::move(fixture_hashes);
    manifest["patients"] = std::move(patients);
    manifest["transcript_digest"] = util::sha256_hex(transcript_bytes);
    atomic_write(config.out_dir + "/manifest.json", canonical_dump(manifest));

    // Wall-clock timings live in a sidecar: everything in manifest.json is
    // byte-reproducible, timings by nature are not.
    Json timings;
    for (const PatientOutcome& outcome : outcomes) {
        Json stages = Json::object();
        for (const auto& [stage, ms] : outcome.stage_ms) stages[stage] = ms;
        timings[outcome.id] = std::move(stages);
    }
    atomic_write(config.out_dir + "/timings.json", canonical_dump(timings));

    return failures == 0 ? 0 : 1;
}

int run_judge(const RunConfig& config) {
    const std::vector<CohortSpec> specs = parse_cohorts(config.cohorts);
    if (specs.empty()) {
        throw ConfigError("judge needs at least one --cohort label=profiles-dir");
    }
    const agents::PromptLibrary prompts(config.prompts_dir);
    const std::unique_ptr<agents::CompletionClient> judge_client =
        make_client(config.judge, config.offline, config.fixture_store);

    agents::Transcript run_transcript;
    std::vector<judge::CohortScores> cohorts;
    Json cohort_manifest = Json::array();
    int failures = 0;
    for (const CohortSpec& spec : specs) {
        const std::vector<PatientProfile> profiles = load_profiles_dir(spec.directory);
        judge::CohortScores scored = judge::score_cohort(spec.label, profiles, *judge_client,
                                                         prompts, &run_transcript);
        failures += static_cast<int>(scored.failures.size());

        std::vector<ComorbidityGroup> groups;
        for (const PatientProfile& profile : profiles) {
            // Parallel to scored ids: skip profiles that failed judging.
            if (std::find(scored.profile_ids.begin(), scored.profile_ids.end(), profile.id) !=
                scored.profile_ids.end()) {
                groups.push_back(profile.comorbidity);
            }
        }
        atomic_write(config.out_dir + "/scores_" + spec.label + ".csv",
                     scores_csv(scored.profile_ids, groups, scored.scores));

        Json entry;
        entry["label"] = spec.label;
        entry["directory"] = spec.directory;
        entry["profiles"] = scored.profile_ids.size();
        entry["failures"] = scored.failures;
        entry["profile_set_digest"] = hash_directory(spec.directory);
        cohort_manifest.push_back(std::move(entry));
        cohorts.push_back(std::move(scored));
    }

    // Cohort summary.
    {
        std::string csv = util::write_csv_row({"cohort", "n", "mean", "sd", "min", "max",
                                               "median"});
        for (const judge::CohortScores& cohort : cohorts) {
            const std::vector<double> values = cohort.overall_values();
            if (values.size() < 2) {
                csv += util::write_csv_row({cohort.label, std::to_string(values.size()), "", "",
                                            "", "", ""});
                continue;
            }
            const stats::SummaryStats summary = stats::describe(values);
            csv += util::write_csv_row({cohort.label, std::to_string(summary.n),
                                        util::format_double(summary.mean, 4),
                                        util::format_double(summary.sd, 4),
                                        util::format_double(summary.min, 1),
                                        util::format_double(summary.max, 1),
                                        util::format_double(summary.median, 1)});
        }
        atomic_write(config.out_dir + "/summary.csv", csv);
    }

    // Pairwise significance: every unordered pair of cohorts.
    {
        std::string csv = util::write_csv_row({"comparison", "n_a", "mean_a", "sd_a", "n_b",
                                               "mean_b", "sd_b", "t", "df", "p_value",
                                               "significant", "interpretation"});
        for (std::size_t i = 0; i < cohorts.size(); ++i) {
            for (std::size_t j = i + 1; j < cohorts.size(); ++j) {
                const std::vector<double> a = cohorts[i].overall_values();
                const std::vector<double> b = cohorts[j].overall_values();
                const stats::SummaryStats sa = stats::describe(a);
                const stats::SummaryStats sb = stats::describe(b);
                stats::TTestResult test;
                try {
                    test = stats::t_test(a, b);
                } catch (const stats::DegenerateTest&) {
                    // Both cohorts have zero spread: equal means are a
                    // perfect tie, unequal means an unambiguous separation.
                    test.t = 0.0;
                    test.df = static_cast<double>(sa.n + sb.n - 2);
                    test.p = sa.mean == sb.mean ? 1.0 : 0.0;
                    test.significant = sa.mean != sb.mean;
                }
                std::string interpretation = "Equivalent";
                if (test.significant) {
                    interpretation = sa.mean > sb.mean
                                         ? cohorts[i].label + " > " + cohorts[j].label
                                         : cohorts[j].label + " > " + cohorts[i].label;
                }
                csv += util::write_csv_row(
                    {cohorts[i].label + " vs " + cohorts[j].label, std::to_string(sa.n),
                     util::format_double(sa.mean, 4), util::format_double(sa.sd, 4),
                     std::to_string(sb.n), util::format_double(sb.mean, 4),
                     util::format_double(sb.sd, 4), util::format_double(test.t, 4),
                     util::format_double(test.df, 1), fmt_g(test.p),
                     test.significant ? "yes" : "no", interpretation});
            }
        }
        atomic_write(config.out_dir + "/pairwise.csv", csv);
    }

    const std::string transcript_bytes = run_transcript.to_jsonl();
    atomic_write(config.out_dir + "/transcripts.jsonl", transcript_bytes);

    Json manifest;
    manifest["command"] = "judge";
    manifest["config"] = config_json(config);
    manifest["config_hash"] = config_hash(config);
    manifest["cohorts"] = std::move(cohort_manifest);
    manifest["transcript_digest"] = util::sha256_hex(transcript_bytes);
    atomic_write(config.out_dir + "/manifest.json", canonical_dump(manifest));

    return failures == 0 ? 0 : 1;
}

int run_diversity(const RunConfig& config) {
    const std::vector<CohortSpec> specs = parse_cohorts(config.cohorts);
    if (specs.empty()) {
        throw ConfigError("diversity needs at least one --cohort label=profiles-dir");
    }

    diversity::FeatureHashEmbedder embedder;
    struct EmbeddedCohort {
        std::string label;
        std::vector<std::string> ids;
        std::vector<std::vector<std::string>> flags;
        std::vector<std::vector<double>> embeddings;
    };
    std::vector<EmbeddedCohort> cohorts;
    for (const CohortSpec& spec : specs) {
        EmbeddedCohort cohort;
        cohort.label = spec.label;
        for (const PatientProfile& profile : load_profiles_dir(spec.directory)) {
            cohort.ids.push_back(profile.id);
            cohort.flags.push_back(comorbidity_flags(profile));
            cohort.embeddings.push_back(diversity::embed_profile(profile, embedder));
        }
        cohorts.push_back(std::move(cohort));
    }

    {
        std::string csv = util::write_csv_row({"cohort", "n", "diversity"});
        for (const EmbeddedCohort& cohort : cohorts) {
            csv += util::write_csv_row({cohort.label, std::to_string(cohort.embeddings.size()),
                                        util::format_double(
                                            diversity::diversity_score(cohort.embeddings), 6)});
        }
        atomic_write(config.out_dir + "/diversity.csv", csv);
    }

    {
        std::string csv = util::write_csv_row({"cohort_a", "cohort_b", "mean_cosine",
                                               "mean_euclidean"});
        for (std::size_t i = 0; i < cohorts.size(); ++i) {
            for (std::size_t j = i + 1; j < cohorts.size(); ++j) {
                const diversity::CrossCohortStats stats =
                    diversity::cross_cohort(cohorts[i].embeddings, cohorts[j].embeddings);
                csv += util::write_csv_row({cohorts[i].label, cohorts[j].label,
                                            util::format_double(stats.mean_cosine, 6),
                                            util::format_double(stats.mean_euclidean, 6)});
            }
        }
        atomic_write(config.out_dir + "/cross_cohort.csv", csv);
    }

    // Joint 2-D layout of every profile, with segmented-circle glyphs keyed
    // to the comorbidity flags.
    std::vector<std::vector<double>> all_embeddings;
    for (const EmbeddedCohort& cohort : cohorts) {
        all_embeddings.insert(all_embeddings.end(), cohort.embeddings.begin(),
                              cohort.embeddings.end());
    }
    std::string tsne_note = "ok";
    if (all_embeddings.size() >= 4) {
        diversity::TsneConfig tsne_config;
        tsne_config.seed = config.seed;
        const diversity::TsneResult layout = diversity::tsne(all_embeddings, tsne_config);

        std::string csv = util::write_csv_row({"cohort", "patient_id", "x", "y"});
        std::vector<GlyphPoint> glyphs;
        std::size_t offset = 0;
        for (const EmbeddedCohort& cohort : cohorts) {
            for (std::size_t k = 0; k < cohort.ids.size(); ++k) {
                const auto& point = layout.points[offset + k];
                csv += util::write_csv_row({cohort.label, cohort.ids[k],
                                            util::format_double(point[0], 6),
                                            util::format_double(point[1], 6)});
                glyphs.push_back({point[0], point[1], cohort.flags[k],
                                  cohort.label + "/" + cohort.ids[k]});
            }
            offset += cohort.ids.size();
        }
        atomic_write(config.out_dir + "/tsne.csv", csv);
        atomic_write(config.out_dir + "/scatter.svg", render_scatter_svg(glyphs));
    } else {
        tsne_note = "skipped: fewer than 4 profiles";
    }

    Json manifest;
    manifest["command"] = "diversity";
    manifest["config"] = config_json(config);
    manifest["config_hash"] = config_hash(config);
    Json cohort_entries = Json::array();
    for (std::size_t i = 0; i < cohorts.size(); ++i) {
        Json entry;
        entry["label"] = cohorts[i].label;
        entry["directory"] = specs[i].directory;
        entry["profiles"] = cohorts[i].ids.size();
        entry["profile_set_digest"] = hash_directory(specs[i].directory);
        cohort_entries.push_back(std::move(entry));
    }
    manifest["cohorts"] = std::move(cohort_entries);
    manifest["tsne"] = tsne_note;
    atomic_write(config.out_dir + "/manifest.json", canonical_dump(manifest));
    return 0;
}

namespace {

// Renders one CSV artifact as a GitHub-style markdown table.
bool append_csv_section(const std::string& path, const std::string& heading, std::string* out) {
    std::error_code ec;
    if (!fs::exists(path, ec)) return false;
    const util::CsvTable table = util::read_csv_file(path);
    *out += "## " + heading + "\n\n";
    auto row_line = [](const std::vector<std::string>& fields) {
        std::string line = "|";
        for (const std::string& field : fields) line += " " + field + " |";
        return line + "\n";
    };
    *out += row_line(table.header);
    std::string rule = "|";
    for (std::size_t i = 0; i < table.header.size(); ++i) rule += " --- |";
    *out += rule + "\n";
    for (const std::vector<std::string>& row : table.rows) *out += row_line(row);
    *out += "\n";
    return true;
}

}  // namespace

int run_report(const RunConfig& config) {
    std::string report = "# Synthetic cohort report\n\n";
    bool any = false;
    any |= append_csv_section(config.out_dir + "/summary.csv", "Cohort score summary", &report);
    any |= append_csv_section(config.out_dir + "/pairwise.csv", "Pairwise comparisons", &report);
    any |= append_csv_section(config.out_dir + "/scores.csv", "Per-profile scores", &report);
    any |= append_csv_section(config.out_dir + "/diversity.csv", "Within-cohort diversity",
                              &report);
    any |= append_csv_section(config.out_dir + "/cross_cohort.csv", "Cross-cohort geometry",
                              &report);
    if (!any) {
        throw ConfigError("no report inputs found under " + config.out_dir +
                          " (expected summary.csv, pairwise.csv, scores.csv, diversity.csv, or "
                          "cross_cohort.csv)");
    }
    std::error_code ec;
    if (fs::exists(config.out_dir + "/scatter.svg", ec)) {
        report += "## Embedding scatter\n\nSee `scatter.svg` (segmented-circle glyphs: red "
                  "depression, blue anxiety, green social phobia, purple binge eating, gray "
                  "obesity-only).\n";
    }
    atomic_write(config.out_dir + "/report.md", report);
    return 0;
}

}  // namespace synth::cli
