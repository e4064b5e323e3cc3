#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "synth/agents/client.hpp"
#include "synth/core/serialize.hpp"

namespace synth::cli {

// One completion backend (an "engine"). With offline mode or the literal
// endpoint "mock", requests resolve against the deterministic mock instead
// of the network.
struct EngineConfig {
    std::string endpoint = "mock";
    std::string model = "scripted-default";
    std::string api_key_env;
    double temperature = 0.0;
    int max_tokens = 4096;

    bool operator==(const EngineConfig&) const = default;
};

// Resolved run settings. Precedence: built-in defaults, then the JSON config
// file, then command-line flags.
struct RunConfig {
    std::uint64_t seed = 42;
    int batch = 5;
    bool offline = true;
    int concurrency = 1;
    std::string out_dir = "out";
    // "uniform" cycles patients through the five groups round-robin;
    // "priors" samples the group from the comorbidity prior instead.
    std::string comorbidity_mix = "uniform";
    std::string surveys_path = "fixtures/surveys.csv";
    std::string claims_path = "fixtures/claims.jsonl";
    std::string priors_path = "fixtures/priors.json";
    std::string corpus_dir = "fixtures/corpus";
    std::string prompts_dir = "prompts";
    std::string fixture_store;  // optional recorded-transcript JSONL
    std::string blueprints_dir;  // reuse previously written blueprints
    std::uint64_t evidence_k = 5;
    int refine_max_cycles = 2;
    EngineConfig generator;  // summarizer/generator/augmenter/evidence
    EngineConfig evaluator;  // evaluator/refiner
    EngineConfig judge;
    std::vector<std::string> cohorts;  // "label=profiles-dir" pairs

    bool operator==(const RunConfig&) const = default;
};

// Strict parse of a config file / JSON object over the defaults; unknown
// keys are a FormatError.
RunConfig load_run_config(const std::string& path);
void apply_config_json(const Json& j, RunConfig* config);

// The semantic identity of a run: every setting that can change output
// bytes. out_dir is deliberately excluded so the same run written to two
// directories produces identical manifests.
Json config_json(const RunConfig& config);
std::string config_hash(const RunConfig& config);

// Engine -> client. Offline forces the mock regardless of endpoint.
std::unique_ptr<agents::CompletionClient> make_client(const EngineConfig& engine, bool offline,
                                                      const std::string& fixture_store);

// Subcommand entry points; each writes its artifacts under config.out_dir
// and returns a process exit code (0 success, 1 when any patient or cohort
// failed; hard configuration errors throw).
int run_generate(const RunConfig& config);
int run_judge(const RunConfig& config);
int run_diversity(const RunConfig& config);
int run_report(const RunConfig& config);

// Write-to-temp-then-rename, so readers never observe partial files.
void atomic_write(const std::string& path, const std::string& bytes);

}  // namespace synth::cli
