// synthagent: generate synthetic patient cohorts, judge them, and measure
// their diversity, entirely from the command line.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "synth/cli/run.hpp"
#include "synth/core/error.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Synthetic patient cohort pipeline"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    synth::cli::RunConfig overrides;  // holds parsed flag values
    bool offline_flag = true;

    CLI::Option* opt_config = app.add_option("--config", config_path,
                                             "JSON run configuration file");
    CLI::Option* opt_seed = app.add_option("--seed", overrides.seed, "Master RNG seed");
    CLI::Option* opt_batch = app.add_option("--batch", overrides.batch,
                                            "Number of profiles to generate");
    CLI::Option* opt_offline = app.add_flag("--offline,!--online", offline_flag,
                                            "Use the deterministic offline backend (default)");
    CLI::Option* opt_concurrency = app.add_option("--concurrency", overrides.concurrency,
                                                  "Worker threads for generation");
    CLI::Option* opt_out = app.add_option("--out", overrides.out_dir, "Output directory");
    CLI::Option* opt_mix = app.add_option("--mix", overrides.comorbidity_mix,
                                          "Comorbidity assignment: uniform or priors");
    CLI::Option* opt_surveys = app.add_option("--surveys", overrides.surveys_path,
                                              "Survey CSV path");
    CLI::Option* opt_claims = app.add_option("--claims", overrides.claims_path,
                                             "Claims JSONL path");
    CLI::Option* opt_priors = app.add_option("--priors", overrides.priors_path,
                                             "Priors JSON path");
    CLI::Option* opt_corpus = app.add_option("--corpus", overrides.corpus_dir,
                                             "Case-report corpus directory");
    CLI::Option* opt_prompts = app.add_option("--prompts", overrides.prompts_dir,
                                              "Prompt template directory");
    CLI::Option* opt_store = app.add_option("--fixture-store", overrides.fixture_store,
                                            "Recorded-response JSONL for the offline backend");
    CLI::Option* opt_blueprints = app.add_option("--blueprints", overrides.blueprints_dir,
                                                 "Reuse blueprints from this directory");
    CLI::Option* opt_evidence_k = app.add_option("--evidence-k", overrides.evidence_k,
                                                 "Case reports per keyword");
    CLI::Option* opt_cycles = app.add_option("--refine-max-cycles", overrides.refine_max_cycles,
                                             "Refinement cycles before giving up");
    CLI::Option* opt_model = app.add_option("--model", overrides.generator.model,
                                            "Generator engine model");
    CLI::Option* opt_endpoint = app.add_option("--endpoint", overrides.generator.endpoint,
                                               "Generator engine endpoint (or 'mock')");
    CLI::Option* opt_api_key_env = app.add_option("--api-key-env",
                                                  overrides.generator.api_key_env,
                                                  "Environment variable holding the API key");
    CLI::Option* opt_eval_model = app.add_option("--evaluator-model",
                                                 overrides.evaluator.model,
                                                 "Evaluator engine model");
    CLI::Option* opt_judge_model = app.add_option("--judge-model", overrides.judge.model,
                                                  "Judge engine model");
    CLI::Option* opt_cohort = app.add_option("--cohort", overrides.cohorts,
                                             "Cohort as label=profiles-dir (repeatable)");

    CLI::App* cmd_generate = app.add_subcommand("generate", "Run the full generation pipeline");
    CLI::App* cmd_judge = app.add_subcommand("judge", "Score profile cohorts and compare them");
    CLI::App* cmd_diversity = app.add_subcommand("diversity",
                                                 "Embedding diversity and 2-D layout");
    CLI::App* cmd_report = app.add_subcommand("report", "Render collected CSVs as markdown");

    CLI11_PARSE(app, argc, argv);

    try {
        synth::cli::RunConfig config;
        if (opt_config->count() > 0) config = synth::cli::load_run_config(config_path);

        if (opt_seed->count() > 0) config.seed = overrides.seed;
        if (opt_batch->count() > 0) config.batch = overrides.batch;
        if (opt_offline->count() > 0) config.offline = offline_flag;
        if (opt_concurrency->count() > 0) config.concurrency = overrides.concurrency;
        if (opt_out->count() > 0) config.out_dir = overrides.out_dir;
        if (opt_mix->count() > 0) config.comorbidity_mix = overrides.comorbidity_mix;
        if (opt_surveys->count() > 0) config.surveys_path = overrides.surveys_path;
        if (opt_claims->count() > 0) config.claims_path = overrides.claims_path;
        if (opt_priors->count() > 0) config.priors_path = overrides.priors_path;
        if (opt_corpus->count() > 0) config.corpus_dir = overrides.corpus_dir;
        if (opt_prompts->count() > 0) config.prompts_dir = overrides.prompts_dir;
        if (opt_store->count() > 0) config.fixture_store = overrides.fixture_store;
        if (opt_blueprints->count() > 0) config.blueprints_dir = overrides.blueprints_dir;
        if (opt_evidence_k->count() > 0) config.evidence_k = overrides.evidence_k;
        if (opt_cycles->count() > 0) config.refine_max_cycles = overrides.refine_max_cycles;
        if (opt_model->count() > 0) config.generator.model = overrides.generator.model;
        if (opt_endpoint->count() > 0) config.generator.endpoint = overrides.generator.endpoint;
        if (opt_api_key_env->count() > 0) {
            config.generator.api_key_env = overrides.generator.api_key_env;
        }
        if (opt_eval_model->count() > 0) config.evaluator.model = overrides.evaluator.model;
        if (opt_judge_model->count() > 0) config.judge.model = overrides.judge.model;
        if (opt_cohort->count() > 0) config.cohorts = overrides.cohorts;

        if (cmd_generate->parsed()) return synth::cli::run_generate(config);
        if (cmd_judge->parsed()) return synth::cli::run_judge(config);
        if (cmd_diversity->parsed()) return synth::cli::run_diversity(config);
        if (cmd_report->parsed()) return synth::cli::run_report(config);
        std::cerr << "error: no subcommand selected\n";
        return 2;
    } catch (const synth::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 2;
    }
}
