// Keyword extraction, case-report retrieval (local corpus and a stubbed
// PubMed endpoint), demographic filtering, and evidence synthesis.

#include <doctest.h>
#include <httplib.h>

#include <algorithm>
#include <chrono>
#include <string>
#include <thread>
#include <vector>

#include "support/builders.hpp"
#include "support/clients.hpp"
#include "synth/agents/mock_client.hpp"
#include "synth/agents/prompts.hpp"
#include "synth/literature/literature.hpp"

using namespace synth;
using namespace synth::literature;
using synth::testing::CountingClient;

namespace {

const std::string kRepo = SYNTH_REPO_DIR;

CorpusReportSource fixture_corpus() { return CorpusReportSource(kRepo + "/fixtures/corpus"); }

CaseReport make_report(std::string id, std::optional<int> age,
                       std::optional<std::string> gender) {
    CaseReport report;
    report.id = std::move(id);
    report.title = "title " + report.id;
    report.abstract = "abstract";
    report.keywords = {"obesity"};
    report.reported_age = age;
    report.reported_gender = std::move(gender);
    return report;
}

// In-memory source that returns a fixed list regardless of keyword.
class FixedSource : public ReportSource {
  public:
    explicit FixedSource(std::vector<CaseReport> reports) : reports_(std::move(reports)) {}

    std::vector<CaseReport> search(const std::string&, std::size_t k) override {
        std::vector<CaseReport> out = reports_;
        if (out.size() > k) out.resize(k);
        return out;
    }

  private:
    std::vector<CaseReport> reports_;
};

}  // namespace

TEST_CASE("keywords come from current conditions then history, deduplicated") {
    PatientProfile profile = testing::make_valid_profile();
    const std::vector<std::string> keywords = extract_keywords(profile);
    const std::vector<std::string> expected = {"obesity", "binge eating disorder",
                                               "hypertension", "hyperlipidemia"};
    CHECK(keywords == expected);

    // Repeats and case/whitespace variants collapse onto one normalized term.
    profile.medical_history.push_back({"  Obesity ", Date{2020, 1, 1}});
    CHECK(extract_keywords(profile) == expected);
}

TEST_CASE("a profile with no named conditions cannot be searched") {
    PatientProfile profile = testing::make_valid_profile();
    profile.current_conditions.clear();
    profile.medical_history.clear();
    try {
        extract_keywords(profile);
        FAIL("expected NoKeywords");
    } catch (const NoKeywords& e) {
        CHECK(std::string(e.what()).find(profile.id) != std::string::npos);
    }
}

TEST_CASE("corpus source loads every report and ranks by filename") {
    CorpusReportSource corpus = fixture_corpus();
    CHECK(corpus.corpus_size() == 30);

    const auto hits = corpus.search("binge eating disorder", 5);
    REQUIRE(hits.size() == 5);
    CHECK(hits[0].id == "CR-001");  // cr_001.json sorts first
    CHECK(hits[1].id == "CR-002");
    for (const CaseReport& hit : hits) {
        CHECK(std::find(hit.keywords.begin(), hit.keywords.end(), "binge eating disorder") !=
              hit.keywords.end());
    }

    // Full sweep: every fixture report declares the obesity keyword.
    CHECK(corpus.search("obesity", 100).size() == 30);
}

TEST_CASE("corpus search also matches title and abstract text") {
    CorpusReportSource corpus = fixture_corpus();
    const auto hits = corpus.search("Epworth", 10);
    REQUIRE(hits.size() == 1);
    CHECK(hits[0].id == "CR-028");
    CHECK(corpus.search("no such condition anywhere", 10).empty());
}

TEST_CASE("corpus source rejects a missing directory") {
    CHECK_THROWS_AS(CorpusReportSource(kRepo + "/fixtures/no-such-dir"), ConfigError);
}

TEST_CASE("search_case_reports enforces preconditions and deduplicates") {
    CorpusReportSource corpus = fixture_corpus();
    CHECK_THROWS_AS(search_case_reports(corpus, "obesity", 0), DomainError);
    CHECK_THROWS_AS(search_case_reports(corpus, "   ", 5), DomainError);

    FixedSource dupes({make_report("A", 40, "male"), make_report("A", 40, "male"),
                       make_report("B", 50, "female")});
    const auto unique = search_case_reports(dupes, "obesity", 10);
    REQUIRE(unique.size() == 2);
    CHECK(unique[0].id == "A");
    CHECK(unique[1].id == "B");
}

TEST_CASE("demographic filter keeps ages within ten years and matching gender") {
    Demographics patient;
    patient.age = 50;
    patient.sex = "female";

    const std::vector<CaseReport> reports = {
        make_report("exact", 50, "female"),
        make_report("edge-low", 40, "female"),     // |50-40| == 10: keep
        make_report("edge-high", 60, "female"),    // |50-60| == 10: keep
        make_report("too-young", 39, "female"),    // 11 years off: drop
        make_report("too-old", 61, "female"),      // 11 years off: drop
        make_report("wrong-gender", 50, "male"),   // drop
        make_report("no-age", std::nullopt, "female"),
        make_report("no-gender", 50, std::nullopt),
        make_report("no-demographics", std::nullopt, std::nullopt),
        make_report("spaced-gender", 50, " Female "),  // normalizes before comparing
    };
    const auto kept = filter_by_demographics(reports, patient);
    std::vector<std::string> ids;
    for (const CaseReport& report : kept) ids.push_back(report.id);
    const std::vector<std::string> expected = {"exact",   "edge-low",  "edge-high",
                                               "no-age",  "no-gender", "no-demographics",
                                               "spaced-gender"};
    CHECK(ids == expected);
}

TEST_CASE("reported demographics parse from common case-report phrasings") {
    int age = 0;
    std::string gender;

    CHECK(parse_reported_demographics("A 29-year-old woman presented with", &age, &gender));
    CHECK(age == 29);
    CHECK(gender == "female");

    CHECK(parse_reported_demographics("a 62 year old man was referred", &age, &gender));
    CHECK(age == 62);
    CHECK(gender == "male");

    CHECK(parse_reported_demographics("A 17-year-old boy with obesity", &age, &gender));
    CHECK(age == 17);
    CHECK(gender == "male");

    CHECK(parse_reported_demographics("An 8-YEAR-OLD GIRL presented", &age, &gender));
    CHECK(age == 8);
    CHECK(gender == "female");

    CHECK_FALSE(parse_reported_demographics("A middle-aged patient presented", &age, &gender));
}

TEST_CASE("synthesize_evidence with no reports makes no model call") {
    const agents::PromptLibrary prompts(kRepo + "/prompts");
    CountingClient client;
    const EvidenceSummary summary = synthesize_evidence({}, client, prompts, nullptr);
    CHECK(summary.empty());
    CHECK(client.calls.load() == 0);
}

TEST_CASE("evidence invariants reject uncited or repeated findings") {
    EvidenceSummary summary;
    summary.findings.push_back({"obesity", "text", {"CR-001"}});
    CHECK_NOTHROW(check_evidence(summary));

    EvidenceSummary uncited = summary;
    uncited.findings[0].source_ids.clear();
    CHECK_THROWS_AS(check_evidence(uncited), ValidationError);

    EvidenceSummary repeated = summary;
    repeated.findings.push_back({"obesity", "other text", {"CR-002"}});
    CHECK_THROWS_AS(check_evidence(repeated), ValidationError);
}

TEST_CASE("gather_evidence runs the full retrieval chain against the corpus") {
    const agents::PromptLibrary prompts(kRepo + "/prompts");
    CorpusReportSource corpus = fixture_corpus();
    agents::MockCompletionClient mock;
    const PatientProfile profile = testing::make_valid_profile();  // 51-year-old man

    const EvidenceSummary evidence =
        gather_evidence(profile, corpus, 5, mock, prompts, nullptr);
    REQUIRE_FALSE(evidence.empty());
    CHECK_NOTHROW(check_evidence(evidence));

    std::vector<std::string> conditions;
    for (const Finding& finding : evidence.findings) {
        conditions.push_back(finding.condition);
        CHECK_FALSE(finding.text.empty());
        CHECK_FALSE(finding.source_ids.empty());
    }
    // The patient's own conditions are all represented.
    for (const char* expected :
         {"obesity", "binge eating disorder", "hypertension", "hyperlipidemia"}) {
        CHECK(std::find(conditions.begin(), conditions.end(), expected) != conditions.end());
    }

    // Demographic fit: every cited report is a male within ten years of 51
    // (or does not report that half of its demographics).
    for (const Finding& finding : evidence.findings) {
        for (const std::string& id : finding.source_ids) {
            const auto all = corpus.search("obesity", 100);
            const auto it = std::find_if(all.begin(), all.end(),
                                         [&](const CaseReport& r) { return r.id == id; });
            REQUIRE(it != all.end());
            if (it->reported_age) CHECK(std::abs(*it->reported_age - 51) <= 10);
            if (it->reported_gender) CHECK(*it->reported_gender == "male");
        }
    }

    // Determinism: the same profile yields byte-identical evidence.
    const EvidenceSummary again = gather_evidence(profile, corpus, 5, mock, prompts, nullptr);
    CHECK(again == evidence);
}

TEST_CASE("pubmed source parses E-utilities payloads via a local stub") {
    httplib::Server server;
    server.Get("/entrez/eutils/esearch.fcgi",
               [](const httplib::Request& req, httplib::Response& res) {
                   CHECK(req.get_param_value("db") == "pubmed");
                   CHECK(req.get_param_value("term").find("case reports[Publication Type]") !=
                         std::string::npos);
                   res.set_content("<eSearchResult><IdList><Id>11111</Id><Id>22222</Id>"
                                   "</IdList></eSearchResult>",
                                   "text/xml");
               });
    server.Get("/entrez/eutils/efetch.fcgi",
               [](const httplib::Request& req, httplib::Response& res) {
                   CHECK(req.get_param_value("id") == "11111,22222");
                   res.set_content(
                       "<PubmedArticleSet>"
                       "<PubmedArticle><MedlineCitation><PMID>11111</PMID>"
                       "<ArticleTitle>Severe obesity in a 34-year-old man</ArticleTitle>"
                       "<Abstract><AbstractText>A 34-year-old man presented with class III "
                       "obesity.</AbstractText></Abstract>"
                       "<KeywordList><Keyword>Obesity</Keyword></KeywordList>"
                       "</MedlineCitation></PubmedArticle>"
                       "<PubmedArticle><MedlineCitation><PMID>22222</PMID>"
                       "<ArticleTitle>Case without demographics</ArticleTitle>"
                       "<Abstract><AbstractText>No age or gender is stated.</AbstractText>"
                       "</Abstract></MedlineCitation></PubmedArticle>"
                       "</PubmedArticleSet>",
                       "text/xml");
               });

    const int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread serving([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    PubMedReportSource source("http://127.0.0.1:" + std::to_string(port));
    const std::vector<CaseReport> reports = source.search("obesity", 2);

    server.stop();
    serving.join();

    REQUIRE(reports.size() == 2);
    CHECK(reports[0].id == "11111");
    CHECK(reports[0].title == "Severe obesity in a 34-year-old man");
    CHECK(reports[0].keywords == std::vector<std::string>{"obesity"});
    REQUIRE(reports[0].reported_age.has_value());
    CHECK(*reports[0].reported_age == 34);
    CHECK(*reports[0].reported_gender == "male");
    CHECK_FALSE(reports[1].reported_age.has_value());
    CHECK_FALSE(reports[1].reported_gender.has_value());
}

TEST_CASE("pubmed source raises RetrievalError when the endpoint is down") {
    // Nothing listens on this port; three fast failures then a typed error.
    PubMedReportSource source("http://127.0.0.1:9");
    CHECK_THROWS_AS(source.search("obesity", 1), RetrievalError);
}
