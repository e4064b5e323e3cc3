// Release gate: every shipping requirement checked end to end in one binary,
// one PASS/FAIL line per requirement. Exits nonzero if any check fails.
//
// Unlike the per-module suites, these checks run the installed CLI binary,
// full-scale randomized oracle comparisons, and the timing budgets.

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "support/builders.hpp"
#include "support/clients.hpp"
#include "support/oracles.hpp"
#include "synth/agents/extract.hpp"
#include "synth/agents/mock_client.hpp"
#include "synth/agents/pipeline.hpp"
#include "synth/cli/run.hpp"
#include "synth/cli/svg.hpp"
#include "synth/core/serialize.hpp"
#include "synth/core/validate.hpp"
#include "synth/diversity/diversity.hpp"
#include "synth/diversity/tsne.hpp"
#include "synth/ingest/ingest.hpp"
#include "synth/judge/judge.hpp"
#include "synth/matcher/matcher.hpp"
#include "synth/sampler/sampler.hpp"
#include "synth/stats/stats.hpp"
#include "synth/util/csv.hpp"

namespace fs = std::filesystem;
using namespace synth;

namespace {

const std::string kRepo = SYNTH_REPO_DIR;
const std::string kCli = SYNTH_CLI_PATH;

// ---------------------------------------------------------------------------
// Tiny check harness.

struct Checker {
    std::vector<std::string> failures;

    void expect(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
    template <typename T>
    void expect_eq(const T& got, const T& want, const std::string& what) {
        if (!(got == want)) failures.push_back(what);
    }
    void expect_near(double got, double want, double tol, const std::string& what) {
        if (!(std::abs(got - want) <= tol)) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "%s: got %.12g, want %.12g +/- %.3g", what.c_str(), got,
                          want, tol);
            failures.push_back(buf);
        }
    }
};

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("missing file: " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "synth_acceptance" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int run_cli(const std::string& args) {
    const std::string command = kCli + " " + args + " > /dev/null 2> /dev/null";
    const int status = std::system(command.c_str());
    return status == -1 ? -1 : WEXITSTATUS(status);
}

std::string fixture_flags() {
    return " --surveys " + kRepo + "/fixtures/surveys.csv --claims " + kRepo +
           "/fixtures/claims.jsonl --priors " + kRepo + "/fixtures/priors.json --corpus " + kRepo +
           "/fixtures/corpus --prompts " + kRepo + "/prompts";
}

cli::RunConfig offline_config(const fs::path& out_dir) {
    cli::RunConfig config;
    config.offline = true;
    config.out_dir = out_dir.string();
    config.surveys_path = kRepo + "/fixtures/surveys.csv";
    config.claims_path = kRepo + "/fixtures/claims.jsonl";
    config.priors_path = kRepo + "/fixtures/priors.json";
    config.corpus_dir = kRepo + "/fixtures/corpus";
    config.prompts_dir = kRepo + "/prompts";
    return config;
}

// ---------------------------------------------------------------------------
// 1. Published engine comparison: summary-statistics t-tests.

void check_engine_comparison(Checker& check) {
    struct Engine {
        const char* name;
        double mean;
        double sd;
    };
    const std::array<Engine, 4> engines = {{
        {"gpt5", 76.27, 2.84},
        {"claude", 76.17, 3.90},
        {"gemini", 71.17, 2.96},
        {"deepseek", 67.83, 3.26},
    }};
    const int n = 30;
    auto p_value = [&](int a, int b) {
        return stats::t_test_summary(n, engines[a].mean, engines[a].sd, n, engines[b].mean,
                                     engines[b].sd)
            .p;
    };

    check.expect_near(p_value(1, 0), 0.910, 0.005, "claude vs gpt5 p-value");
    check.expect_near(p_value(2, 3), 0.0001, 0.00005, "gemini vs deepseek p-value");
    for (const auto& [a, b] : {std::pair{1, 2}, {1, 3}, {0, 2}, {0, 3}}) {
        const double p = p_value(a, b);
        check.expect(p < 0.001, std::string(engines[a].name) + " vs " + engines[b].name +
                                    " p-value should be < 0.001, got " + std::to_string(p));
    }
}

// ---------------------------------------------------------------------------
// 2. t CDF against an independent quadrature oracle.

void check_t_cdf(Checker& check) {
    const std::array<double, 6> ts = {0.0, 0.5, 1.0, 2.0, 4.0, 10.0};
    const std::array<double, 6> dfs = {1.0, 2.0, 5.0, 10.0, 58.0, 120.0};
    for (const double t : ts) {
        for (const double df : dfs) {
            const double got = stats::t_cdf(t, df);
            const double want = testing::oracle_t_cdf(t, df);
            char label[64];
            std::snprintf(label, sizeof label, "t_cdf(%g, %g)", t, df);
            check.expect_near(got, want, 1e-9, label);
            const double anti = stats::t_cdf(t, df) + stats::t_cdf(-t, df) - 1.0;
            check.expect(std::abs(anti) <= 1e-12,
                         std::string(label) + ": antisymmetry residual " + std::to_string(anti));
        }
    }
}

// ---------------------------------------------------------------------------
// 3. Offline CLI determinism on a 30-patient batch.

void check_offline_determinism(Checker& check) {
    const fs::path first = fresh_dir("determinism_a");
    const fs::path second = fresh_dir("determinism_b");
    const std::string base = "generate --offline --seed 7 --batch 30" + fixture_flags();
    check.expect_eq(run_cli(base + " --out " + first.string()), 0, "first generate exit code");
    check.expect_eq(run_cli(base + " --out " + second.string()), 0, "second generate exit code");
    if (!check.failures.empty()) return;

    for (const char* name : {"manifest.json", "scores.csv", "transcripts.jsonl"}) {
        check.expect(slurp(first / name) == slurp(second / name),
                     std::string(name) + " differs between identical runs");
    }
    int profiles = 0;
    for (const char* sub : {"profiles", "blueprints"}) {
        for (const auto& entry : fs::directory_iterator(first / sub)) {
            const std::string bytes = slurp(entry.path());
            check.expect(bytes == slurp(second / sub / entry.path().filename()),
                         entry.path().string() + " differs between identical runs");
            if (std::string(sub) == "profiles") {
                ++profiles;
                try {
                    validate_profile(canonical_parse(bytes));
                } catch (const Error& e) {
                    check.failures.push_back(entry.path().filename().string() +
                                             " failed validation: " + e.what());
                }
            }
        }
    }
    check.expect_eq(profiles, 30, "expected 30 generated profiles");
}

// ---------------------------------------------------------------------------
// 4. Agent contracts under adversarial client doubles.

void check_agent_contracts(Checker& check) {
    const agents::PromptLibrary prompts(kRepo + "/prompts");
    const PatientProfile profile = testing::make_valid_profile();

    agents::Blueprint blueprint;
    blueprint.demographics = profile.demographics;
    blueprint.bmi_class = profile.bmi;
    blueprint.comorbidity = profile.comorbidity;
    blueprint.survey_summary = "51-year-old married man, BMI 33, binge-eating screener positive.";
    blueprint.trajectory_summaries = {
        "obesity diagnosed 2016, binge eating disorder added 2021, CBT started",
        "morbid obesity with type 2 diabetes managed on metformin",
        "obesity with hyperlipidemia on atorvastatin",
    };

    literature::EvidenceSummary evidence;
    evidence.findings.push_back(
        {"binge eating disorder",
         "Across 3 case report(s), patients with binge eating disorder commonly describe "
         "loss-of-control eating followed by guilt.",
         {"CR-001", "CR-002", "CR-003"}});

    // Retry bound: two transient failures recover, the third attempt wins.
    {
        testing::FlakyClient<agents::Timeout> flaky(2);
        agents::CompletionRequest request =
            flaky.make_request("generator", {{"system", "You write JSON."}, {"user", "Emit {}"}});
        flaky.add_fixture(agents::request_digest(request), "recovered");
        agents::Transcript transcript;
        try {
            check.expect_eq(agents::complete(flaky, request, &transcript),
                            std::string("recovered"), "retry recovery response");
            check.expect_eq(transcript.size(), std::size_t{3}, "retry recovery transcript size");
        } catch (const Error& e) {
            check.failures.push_back(std::string("retry recovery threw: ") + e.what());
        }
    }
    // ... but persistent failure stops at the attempt cap.
    {
        testing::FlakyClient<agents::Timeout> flaky(99);
        const agents::CompletionRequest request =
            flaky.make_request("generator", {{"user", "hello"}});
        bool threw = false;
        try {
            agents::complete(flaky, request, nullptr);
        } catch (const agents::RetriesExhausted&) {
            threw = true;
        }
        check.expect(threw, "persistent failure should raise RetriesExhausted");
        check.expect_eq(flaky.calls.load(), 3, "attempt cap");
    }

    // Structured output: one corrective re-prompt, then a typed failure.
    {
        testing::QueueClient queue;
        queue.push_response("not json at all");
        queue.push_response("still not json");
        agents::CompletionRequest request =
            queue.make_request("evaluator", {{"user", "report please"}});
        bool threw = false;
        try {
            agents::request_structured(queue, request, agents::OutputSchema::EvaluationReport,
                                       nullptr);
        } catch (const agents::UnrepairableOutput&) {
            threw = true;
        }
        check.expect(threw, "double extraction failure should raise UnrepairableOutput");
        check.expect_eq(queue.requests.size(), std::size_t{2}, "exactly one corrective re-prompt");
    }
    {
        testing::QueueClient queue;
        queue.push_response("garbage first");
        queue.push_response("```json\n{\"issues\": [], \"summary\": \"clean\"}\n```");
        agents::CompletionRequest request =
            queue.make_request("evaluator", {{"user", "report please"}});
        try {
            const Json repaired = agents::request_structured(
                queue, request, agents::OutputSchema::EvaluationReport, nullptr);
            check.expect(repaired.at("issues").empty(), "repaired report parses");
            check.expect_eq(queue.requests.size(), std::size_t{2}, "repair used one re-prompt");
        } catch (const Error& e) {
            check.failures.push_back(std::string("recoverable extraction threw: ") + e.what());
        }
    }

    // Blueprint copy-through: generated identity matches the blueprint even
    // when the model keeps lying about it.
    {
        agents::MockCompletionClient mock;
        try {
            const PatientProfile generated =
                agents::generate(blueprint, "patient-0001", mock, prompts, nullptr);
            check.expect(generated.demographics == blueprint.demographics,
                         "generated demographics copy through");
            check.expect(generated.comorbidity == blueprint.comorbidity,
                         "generated comorbidity copies through");
        } catch (const Error& e) {
            check.failures.push_back(std::string("clean generate threw: ") + e.what());
        }

        testing::TamperClient tamper("generator", [](Json& payload) {
            payload["demographics"]["age"] = payload["demographics"]["age"].get<int>() + 4;
        });
        bool threw = false;
        try {
            agents::generate(blueprint, "patient-0001", tamper, prompts, nullptr);
        } catch (const agents::InvariantViolation&) {
            threw = true;
        }
        check.expect(threw, "identity drift in generate should raise InvariantViolation");
        check.expect_eq(tamper.tampered_calls.load(), 2, "generate re-prompts once before failing");
    }

    // Section freeze in augment: labs edits survive one re-prompt, then fail.
    {
        testing::TamperClient tamper("augmenter", [](Json& payload) {
            payload["labs"][0]["value"] = payload["labs"][0]["value"].get<double>() + 1.0;
        });
        bool threw = false;
        try {
            agents::augment(profile, evidence, tamper, prompts, nullptr);
        } catch (const agents::SectionTamper&) {
            threw = true;
        }
        check.expect(threw, "frozen-section edit in augment should raise SectionTamper");
    }

    // Section freeze in refine: touching an issue-free section fails.
    {
        agents::EvaluationReport report;
        report.issues.push_back(Issue{"psych_scales", Severity::Moderate,
                                      Criterion::LogicalConsistency,
                                      "conscientiousness conflicts with the described chaotic "
                                      "diet"});
        testing::TamperClient tamper("refiner", [](Json& payload) {
            payload["role_play"] = payload["role_play"].get<std::string>() + " Stray edit.";
        });
        bool threw = false;
        try {
            agents::refine(profile, report, tamper, prompts, nullptr);
        } catch (const agents::SectionTamper&) {
            threw = true;
        }
        check.expect(threw, "issue-free-section edit in refine should raise SectionTamper");
    }
}

// ---------------------------------------------------------------------------
// 5. Matcher against a brute-force reference on randomized fixtures.

// Independent Gower recomputation: walks the union of names, averages the
// two declared weights, and unions the declared ranges.
std::optional<double> reference_distance(const matcher::FeatureVector& a,
                                         const matcher::FeatureVector& b) {
    double num = 0.0;
    double den = 0.0;
    for (const auto& [name, fa] : a.numeric) {
        const auto it = b.numeric.find(name);
        if (it == b.numeric.end()) continue;
        const double range = std::max(fa.range_max, it->second.range_max) -
                             std::min(fa.range_min, it->second.range_min);
        double d;
        if (range > 0.0) {
            d = std::min(std::abs(fa.value - it->second.value) / range, 1.0);
        } else {
            d = fa.value == it->second.value ? 0.0 : 1.0;
        }
        const double w = 0.5 * (a.weight_of(name) + b.weight_of(name));
        num += w * d;
        den += w;
    }
    for (const auto& [name, va] : a.categorical) {
        const auto it = b.categorical.find(name);
        if (it == b.categorical.end()) continue;
        const double w = 0.5 * (a.weight_of(name) + b.weight_of(name));
        num += w * (va == it->second ? 0.0 : 1.0);
        den += w;
    }
    if (den <= 0.0) return std::nullopt;
    return num / den;
}

matcher::FeatureVector random_features(sampler::SeedState& rng) {
    struct NumericSpec {
        const char* name;
        double lo;
        double hi;
    };
    static const std::array<NumericSpec, 3> numeric_specs = {
        {{"age", 18.0, 80.0}, {"bmi", 30.0, 60.0}, {"income_k", 20.0, 200.0}}};
    static const std::array<std::pair<const char*, std::array<const char*, 3>>, 3>
        categorical_specs = {{
            {"sex", {"male", "female", "female"}},
            {"race", {"white", "black", "asian"}},
            {"education", {"high school", "college", "graduate"}},
        }};

    matcher::FeatureVector fv;
    for (const NumericSpec& spec : numeric_specs) {
        if (rng.next_double() < 0.25) continue;  // injected missing value
        matcher::NumericFeature feature;
        feature.value = rng.uniform_real(spec.lo, spec.hi);
        feature.range_min = spec.lo;
        feature.range_max = spec.hi;
        if (rng.next_double() < 0.2) feature.range_max += rng.uniform_real(0.0, 10.0);
        fv.numeric[spec.name] = feature;
        if (rng.next_double() < 0.3) fv.weights[spec.name] = rng.uniform_real(0.5, 3.0);
    }
    for (const auto& [name, values] : categorical_specs) {
        if (rng.next_double() < 0.25) continue;
        fv.categorical[name] = values[static_cast<std::size_t>(rng.uniform_int(0, 2))];
        if (rng.next_double() < 0.3) fv.weights[name] = 2.0;
    }
    return fv;
}

void check_matcher(Checker& check) {
    sampler::SeedState rng(20260814, 11);

    // Survey matching: argmin with lowest-index tie-breaks, undefined
    // distances skipped, all-undefined raising.
    int undefined_hits = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const matcher::FeatureVector query = random_features(rng);
        const int k = rng.uniform_int(1, 20);
        std::vector<matcher::FeatureVector> candidates;
        for (int i = 0; i < k; ++i) candidates.push_back(random_features(rng));

        std::optional<std::size_t> expected;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            const std::optional<double> d = reference_distance(query, candidates[i]);
            if (d && *d < best) {
                best = *d;
                expected = i;
            }
        }
        try {
            const std::size_t got = matcher::match_survey(query, candidates);
            if (!expected) {
                check.failures.push_back("survey trial " + std::to_string(trial) +
                                         ": matched where the oracle finds no defined distance");
            } else if (got != *expected) {
                check.failures.push_back("survey trial " + std::to_string(trial) + ": got index " +
                                         std::to_string(got) + ", oracle says " +
                                         std::to_string(*expected));
            }
        } catch (const matcher::UndefinedDistance&) {
            ++undefined_hits;
            if (expected) {
                check.failures.push_back("survey trial " + std::to_string(trial) +
                                         ": library refused a query the oracle can match");
            }
        }
    }

    // Trajectory matching: merged query, top-3 by (distance, index).
    for (int trial = 0; trial < 200; ++trial) {
        const matcher::FeatureVector profile = random_features(rng);
        const matcher::FeatureVector survey = random_features(rng);
        const int k = rng.uniform_int(3, 20);
        std::vector<matcher::FeatureVector> candidates;
        for (int i = 0; i < k; ++i) candidates.push_back(random_features(rng));

        const matcher::FeatureVector merged = matcher::merge_features(profile, survey);
        std::vector<std::pair<double, std::size_t>> ranked;
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            if (const std::optional<double> d = reference_distance(merged, candidates[i])) {
                ranked.emplace_back(*d, i);
            }
        }
        std::sort(ranked.begin(), ranked.end());
        try {
            const std::vector<std::size_t> got =
                matcher::match_trajectories(profile, survey, candidates);
            if (ranked.size() < 3) {
                check.failures.push_back("trajectory trial " + std::to_string(trial) +
                                         ": matched with fewer than 3 rankable candidates");
                continue;
            }
            const std::vector<std::size_t> expected = {ranked[0].second, ranked[1].second,
                                                       ranked[2].second};
            if (got != expected) {
                check.failures.push_back("trajectory trial " + std::to_string(trial) +
                                         ": picks disagree with the oracle");
            }
        } catch (const matcher::UndefinedDistance&) {
            if (ranked.size() >= 3) {
                check.failures.push_back("trajectory trial " + std::to_string(trial) +
                                         ": library refused a rankable pool");
            }
        }
    }

    // Distance symmetry and bounds on 10^4 random pairs.
    int compared = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        const matcher::FeatureVector a = random_features(rng);
        const matcher::FeatureVector b = random_features(rng);
        double forward;
        try {
            forward = matcher::mixed_distance(a, b);
        } catch (const matcher::UndefinedDistance&) {
            continue;
        }
        ++compared;
        const double backward = matcher::mixed_distance(b, a);
        if (forward != backward) {
            check.failures.push_back("pair " + std::to_string(trial) + ": asymmetric distance");
        }
        if (!(forward >= 0.0 && forward <= 1.0)) {
            check.failures.push_back("pair " + std::to_string(trial) + ": distance " +
                                     std::to_string(forward) + " out of [0, 1]");
        }
        const std::optional<double> oracle = reference_distance(a, b);
        if (!oracle || std::abs(*oracle - forward) > 1e-12) {
            check.failures.push_back("pair " + std::to_string(trial) +
                                     ": oracle disagrees with mixed_distance");
        }
    }
    check.expect(compared > 9000, "random pair generator starved the symmetry check");
}

// ---------------------------------------------------------------------------
// 6. Sampler frequencies, goodness of fit, and replay.

void check_sampler(Checker& check) {
    const int draws = 100000;

    // The shipped uniform comorbidity prior, through the real assignment path.
    {
        const ingest::PriorTable priors = ingest::load_priors(kRepo + "/fixtures/priors.json");
        sampler::SeedState rng(20260814, 21);
        std::map<ComorbidityGroup, int> counts;
        for (int i = 0; i < draws; ++i) ++counts[sampler::assign_comorbidity(priors, rng)];
        double chi2 = 0.0;
        const double expected = draws / 5.0;
        for (const ComorbidityGroup group : kComorbidityGroups) {
            const double freq = counts[group] / static_cast<double>(draws);
            check.expect_near(freq, 0.2, 0.01,
                              "comorbidity frequency for " + std::string(to_string(group)));
            chi2 += (counts[group] - expected) * (counts[group] - expected) / expected;
        }
        const double critical = testing::chi_square_critical_001(4);
        check.expect(chi2 < critical, "comorbidity chi-square " + std::to_string(chi2) +
                                          " exceeds the 0.001 critical value " +
                                          std::to_string(critical));
    }

    // An eight-way uniform categorical through the inverse-CDF path.
    {
        ingest::Categorical uniform;
        for (int i = 0; i < 8; ++i) uniform.entries.emplace_back("cat-" + std::to_string(i), 0.125);
        sampler::SeedState rng(20260814, 22);
        std::vector<int> counts(8, 0);
        for (int i = 0; i < draws; ++i) ++counts[rng.categorical(uniform)];
        double chi2 = 0.0;
        const double expected = draws / 8.0;
        for (int i = 0; i < 8; ++i) {
            check.expect_near(counts[i] / static_cast<double>(draws), 0.125, 0.01,
                              "category " + std::to_string(i) + " frequency");
            chi2 += (counts[i] - expected) * (counts[i] - expected) / expected;
        }
        const double critical = testing::chi_square_critical_001(7);
        check.expect(chi2 < critical, "categorical chi-square " + std::to_string(chi2) +
                                          " exceeds the 0.001 critical value " +
                                          std::to_string(critical));
    }

    // Replay determinism: same (seed, stream) is bit-identical, siblings and
    // children are not.
    {
        sampler::SeedState a(123, 5);
        sampler::SeedState b(123, 5);
        sampler::SeedState sibling(123, 6);
        bool identical = true;
        bool sibling_differs = false;
        for (int i = 0; i < 10000; ++i) {
            const std::uint64_t va = a.next_u64();
            identical = identical && va == b.next_u64();
            sibling_differs = sibling_differs || va != sibling.next_u64();
        }
        check.expect(identical, "replay of the same stream diverged");
        check.expect(sibling_differs, "adjacent streams produced identical output");

        sampler::SeedState parent(123, 5);
        sampler::SeedState child_a = parent.split(1);
        sampler::SeedState child_b = parent.split(2);
        check.expect(child_a.next_u64() != child_b.next_u64(),
                     "split children collide immediately");
    }
}

// ---------------------------------------------------------------------------
// 7. Diversity kernels against brute-force recomputation.

std::vector<std::vector<double>> random_embeddings(int n, int dim, sampler::SeedState& rng) {
    std::vector<std::vector<double>> out(n, std::vector<double>(dim));
    for (auto& row : out) {
        for (double& x : row) x = rng.normal();
    }
    return out;
}

double brute_diversity(const std::vector<std::vector<double>>& embeddings) {
    const std::size_t n = embeddings.size();
    const std::size_t dim = embeddings.front().size();
    std::vector<double> centroid(dim, 0.0);
    for (const auto& row : embeddings) {
        for (std::size_t d = 0; d < dim; ++d) centroid[d] += row[d];
    }
    for (double& c : centroid) c /= static_cast<double>(n);
    double total = 0.0;
    for (const auto& row : embeddings) {
        double sq = 0.0;
        for (std::size_t d = 0; d < dim; ++d) {
            sq += (row[d] - centroid[d]) * (row[d] - centroid[d]);
        }
        total += std::sqrt(sq);
    }
    return total / static_cast<double>(n);
}

void check_diversity(Checker& check) {
    sampler::SeedState rng(20260814, 31);

    for (int trial = 0; trial < 25; ++trial) {
        const auto cohort = random_embeddings(rng.uniform_int(2, 40), 768, rng);
        const double got = diversity::diversity_score(cohort);
        const double want = brute_diversity(cohort);
        if (std::abs(got - want) > 1e-12 * std::max(1.0, std::abs(want))) {
            check.failures.push_back("diversity trial " + std::to_string(trial) +
                                     ": brute-force mismatch");
        }
    }

    {
        const auto a = random_embeddings(25, 768, rng);
        const auto b = random_embeddings(30, 768, rng);
        const diversity::CrossCohortStats got = diversity::cross_cohort(a, b);
        double cosine = 0.0;
        double euclid = 0.0;
        for (const auto& va : a) {
            for (const auto& vb : b) {
                double dot = 0.0, na = 0.0, nb = 0.0, sq = 0.0;
                for (std::size_t d = 0; d < va.size(); ++d) {
                    dot += va[d] * vb[d];
                    na += va[d] * va[d];
                    nb += vb[d] * vb[d];
                    sq += (va[d] - vb[d]) * (va[d] - vb[d]);
                }
                cosine += dot / (std::sqrt(na) * std::sqrt(nb));
                euclid += std::sqrt(sq);
            }
        }
        cosine /= static_cast<double>(a.size() * b.size());
        euclid /= static_cast<double>(a.size() * b.size());
        check.expect(std::abs(got.mean_cosine - cosine) <= 1e-12, "cross-cohort cosine mismatch");
        check.expect(std::abs(got.mean_euclidean - euclid) <= 1e-12 * std::max(1.0, euclid),
                     "cross-cohort euclidean mismatch");
    }

    // Structural properties: zero spread, translation invariance, scaling.
    {
        const std::vector<std::vector<double>> same(6, std::vector<double>(768, 0.25));
        check.expect_eq(diversity::diversity_score(same), 0.0, "identical points diversity");

        auto cohort = random_embeddings(20, 768, rng);
        const double base = diversity::diversity_score(cohort);
        auto shifted = cohort;
        for (auto& row : shifted) {
            for (double& x : row) x += 17.5;
        }
        check.expect(std::abs(diversity::diversity_score(shifted) - base) <= 1e-9 * base,
                     "translation changed the diversity score");
        auto scaled = cohort;
        for (auto& row : scaled) {
            for (double& x : row) x *= 2.0;
        }
        check.expect(std::abs(diversity::diversity_score(scaled) - 2.0 * base) <= 1e-12 * base,
                     "scaling by 2 did not double the diversity score");
    }
}

// ---------------------------------------------------------------------------
// 8. t-SNE calibration, normalization, separation, determinism, and scale.

void check_tsne(Checker& check) {
    // Two tight 6-D clusters.
    sampler::SeedState rng(20260814, 41);
    std::vector<std::vector<double>> clusters;
    const int per_cluster = 12;
    for (int c = 0; c < 2; ++c) {
        for (int i = 0; i < per_cluster; ++i) {
            std::vector<double> point(6);
            for (double& x : point) x = rng.normal() * 0.05 + (c == 0 ? -4.0 : 4.0);
            clusters.push_back(std::move(point));
        }
    }
    diversity::TsneConfig config;
    config.perplexity = 8.0;
    config.iterations = 1000;
    config.seed = 3;
    const diversity::TsneResult result = diversity::tsne(clusters, config);

    const double target_bits = std::log2(result.clamped_perplexity);
    for (std::size_t i = 0; i < result.entropies_bits.size(); ++i) {
        if (std::abs(result.entropies_bits[i] - target_bits) >= 1e-3) {
            check.failures.push_back("point " + std::to_string(i) +
                                     " entropy missed the perplexity target");
        }
    }
    check.expect(std::abs(result.p_sum - 1.0) <= 1e-9, "joint distribution sum");

    double intra = 0.0, inter = 0.0;
    int intra_n = 0, inter_n = 0;
    for (std::size_t i = 0; i < result.points.size(); ++i) {
        for (std::size_t j = i + 1; j < result.points.size(); ++j) {
            const double d = std::hypot(result.points[i][0] - result.points[j][0],
                                        result.points[i][1] - result.points[j][1]);
            if ((i < per_cluster) == (j < per_cluster)) {
                intra += d;
                ++intra_n;
            } else {
                inter += d;
                ++inter_n;
            }
        }
    }
    check.expect(inter / inter_n > intra / intra_n,
                 "clusters failed to separate in the embedding");

    const diversity::TsneResult replay = diversity::tsne(clusters, config);
    check.expect(replay.points == result.points, "same-seed layout is not reproducible");

    // A full-size input must finish inside the budget.
    const auto big = random_embeddings(120, 768, rng);
    const auto start = std::chrono::steady_clock::now();
    const diversity::TsneResult large = diversity::tsne(big, {});
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    check.expect_eq(large.points.size(), std::size_t{120}, "large layout point count");
    check.expect(seconds < 30.0,
                 "large layout took " + std::to_string(seconds) + "s, budget is 30s");
    for (const auto& p : large.points) {
        if (!std::isfinite(p[0]) || !std::isfinite(p[1])) {
            check.failures.push_back("large layout produced non-finite coordinates");
            break;
        }
    }
}

// ---------------------------------------------------------------------------
// 9. Judge arithmetic properties on random issue lists.

void check_judge(Checker& check) {
    sampler::SeedState rng(20260814, 51);
    const judge::DeductionSchedule schedule;

    // Zero issues: a perfect scorecard.
    {
        const QualityScore clean = judge::apply_deductions({}, schedule);
        check.expect_eq(clean.overall, 100, "zero-issue overall");
        for (const char* section : kProfileSections) {
            if (clean.dimension_scores.at(section) != 100) {
                check.failures.push_back(std::string("zero-issue score for ") + section);
            }
        }
        check.expect(clean.deductions.empty(), "zero-issue deduction list");
    }

    for (int trial = 0; trial < 10000; ++trial) {
        const int count = rng.uniform_int(0, 25);
        std::vector<Issue> issues;
        issues.reserve(count);
        for (int i = 0; i < count; ++i) {
            Issue issue;
            issue.dimension = kProfileSections[rng.uniform_int(0, 9)];
            issue.severity = static_cast<Severity>(rng.uniform_int(0, 2));
            issue.criterion = static_cast<Criterion>(rng.uniform_int(0, 2));
            issue.description = "finding " + std::to_string(i);
            issues.push_back(std::move(issue));
        }

        const QualityScore got = judge::apply_deductions(issues, schedule);

        // Brute-force recomputation.
        std::map<std::string, int> expected;
        for (const char* section : kProfileSections) expected[section] = 100;
        for (const Issue& issue : issues) {
            expected[issue.dimension] =
                std::max(0, expected[issue.dimension] - judge::points_for(issue.severity, schedule));
        }
        long sum = 0;
        for (const auto& [section, score] : expected) sum += score;
        const int overall = static_cast<int>(
            std::llround(sum / static_cast<double>(expected.size())));

        bool ok = got.overall == overall;
        for (const auto& [section, score] : expected) {
            ok = ok && got.dimension_scores.at(section) == score;
            ok = ok && score >= 0 && score <= 100;
        }
        if (!ok) {
            check.failures.push_back("trial " + std::to_string(trial) +
                                     ": deduction arithmetic disagrees with brute force");
            continue;
        }

        // Permutation invariance of the scores (the deduction log keeps
        // input order by design, so it is excluded from the comparison).
        std::vector<Issue> shuffled = issues;
        for (std::size_t i = shuffled.size(); i > 1; --i) {
            std::swap(shuffled[i - 1],
                      shuffled[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(i) - 1))]);
        }
        const QualityScore reordered = judge::apply_deductions(shuffled, schedule);
        if (reordered.dimension_scores != got.dimension_scores ||
            reordered.overall != got.overall) {
            check.failures.push_back("trial " + std::to_string(trial) +
                                     ": issue order changed the score");
        }

        // Monotonicity: one more finding never raises any score.
        Issue extra;
        extra.dimension = kProfileSections[rng.uniform_int(0, 9)];
        extra.severity = static_cast<Severity>(rng.uniform_int(0, 2));
        extra.criterion = Criterion::MedicalPlausibility;
        extra.description = "extra finding";
        std::vector<Issue> more = issues;
        more.push_back(extra);
        const QualityScore worse = judge::apply_deductions(more, schedule);
        if (worse.overall > got.overall) {
            check.failures.push_back("trial " + std::to_string(trial) +
                                     ": extra issue raised the overall score");
        }
        for (const char* section : kProfileSections) {
            if (worse.dimension_scores.at(section) > got.dimension_scores.at(section)) {
                check.failures.push_back("trial " + std::to_string(trial) +
                                         ": extra issue raised a dimension score");
                break;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// 10. SVG snapshot stability on a golden run.

void check_svg_snapshot(Checker& check) {
    const fs::path gen = fresh_dir("svg_generate");
    cli::RunConfig generate_config = offline_config(gen);
    generate_config.seed = 7;
    generate_config.batch = 5;
    check.expect_eq(cli::run_generate(generate_config), 0, "golden generate exit code");
    if (!check.failures.empty()) return;

    const std::string cohort = "golden=" + (gen / "profiles").string();
    const fs::path first = fresh_dir("svg_a");
    const fs::path second = fresh_dir("svg_b");
    for (const fs::path* out : {&first, &second}) {
        cli::RunConfig config = offline_config(*out);
        config.seed = 7;
        config.cohorts = {cohort};
        check.expect_eq(cli::run_diversity(config), 0, "diversity exit code");
    }
    if (!check.failures.empty()) return;

    const std::string svg = slurp(first / "scatter.svg");
    check.expect(svg == slurp(second / "scatter.svg"), "scatter SVG differs across reruns");

    // Every glyph's arcs close the circle.
    std::size_t glyphs = 0;
    for (const PatientProfile& profile :
         {canonical_parse(slurp(gen / "profiles" / "patient-0001.json")),
          canonical_parse(slurp(gen / "profiles" / "patient-0002.json")),
          canonical_parse(slurp(gen / "profiles" / "patient-0003.json")),
          canonical_parse(slurp(gen / "profiles" / "patient-0004.json")),
          canonical_parse(slurp(gen / "profiles" / "patient-0005.json"))}) {
        double total = 0.0;
        for (const cli::ArcSpec& arc : cli::glyph_arcs(comorbidity_flags(profile))) {
            total += arc.sweep_deg;
        }
        if (std::abs(total - 360.0) > 1e-9) {
            check.failures.push_back(profile.id + ": glyph arcs sum to " + std::to_string(total));
        }
        ++glyphs;
    }
    check.expect_eq(glyphs, std::size_t{5}, "glyph count");

    std::size_t rendered = 0;
    for (std::size_t pos = svg.find("<g>"); pos != std::string::npos;
         pos = svg.find("<g>", pos + 1)) {
        ++rendered;
    }
    check.expect_eq(rendered, std::size_t{5}, "rendered glyph group count");
}

struct GateCriterion {
    int id;
    const char* label;
    double time_limit_s;  // 0 = no budget
    std::function<void(Checker&)> run;
};

}  // namespace

int main() {
    const std::vector<GateCriterion> criteria = {
        {1, "published engine comparison p-values from summary statistics", 1.0,
         check_engine_comparison},
        {2, "t CDF matches the quadrature oracle on the reference grid", 1.0, check_t_cdf},
        {3, "offline 30-patient generate is byte-stable and fully valid", 60.0,
         check_offline_determinism},
        {4, "agent contracts hold under adversarial completion clients", 0.0,
         check_agent_contracts},
        {5, "matcher agrees with the brute-force oracle on random fixtures", 0.0, check_matcher},
        {6, "sampler frequencies, goodness of fit, and replay", 0.0, check_sampler},
        {7, "diversity kernels match brute-force recomputation", 0.0, check_diversity},
        {8, "2-D layout calibration, determinism, and scale budget", 30.0, check_tsne},
        {9, "judge deduction arithmetic properties", 0.0, check_judge},
        {10, "diversity SVG snapshot is byte-stable with closed glyphs", 0.0, check_svg_snapshot},
    };

    int failed = 0;
    for (const GateCriterion& criterion : criteria) {
        Checker check;
        const auto start = std::chrono::steady_clock::now();
        try {
            criterion.run(check);
        } catch (const std::exception& e) {
            check.failures.push_back(std::string("unhandled exception: ") + e.what());
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (criterion.time_limit_s > 0.0 && seconds > criterion.time_limit_s) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "exceeded the %.0fs budget (took %.2fs)",
                          criterion.time_limit_s, seconds);
            check.failures.push_back(buf);
        }
        if (check.failures.empty()) {
            std::printf("[PASS] criterion %2d: %s (%.2fs)\n", criterion.id, criterion.label,
                        seconds);
        } else {
            ++failed;
            std::printf("[FAIL] criterion %2d: %s (%.2fs)\n", criterion.id, criterion.label,
                        seconds);
            for (const std::string& reason : check.failures) {
                std::printf("       - %s\n", reason.c_str());
            }
        }
    }

    if (failed == 0) {
        std::printf("all %zu criteria passed\n", criteria.size());
        return 0;
    }
    std::printf("%d of %zu criteria FAILED\n", failed, criteria.size());
    return 1;
}
