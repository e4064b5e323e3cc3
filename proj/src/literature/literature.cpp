#include "synth/literature/literature.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <regex>
#include <set>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "synth/agents/extract.hpp"
#include "synth/core/serialize.hpp"
#include "synth/util/strings.hpp"

namespace synth::literature {

namespace {

std::string fenced(const Json& j) { return "```json\n" + canonical_dump(j) + "```\n"; }

std::string normalize_gender(std::string_view raw) {
    const std::string g = util::normalize_term(raw);
    if (g == "man" || g == "boy" || g == "m" || g == "male") return "male";
    if (g == "woman" || g == "girl" || g == "f" || g == "female") return "female";
    return g;
}

}  // namespace

std::vector<std::string> extract_keywords(const PatientProfile& profile) {
    std::vector<std::string> keywords;
    std::set<std::string> seen;
    auto add = [&](const std::string& name) {
        const std::string term = util::normalize_term(name);
        if (term.empty() || !seen.insert(term).second) return;
        keywords.push_back(term);
    };
    for (const Condition& condition : profile.current_conditions) add(condition.name);
    for (const Condition& condition : profile.medical_history) add(condition.name);
    if (keywords.empty()) {
        throw NoKeywords("profile " + profile.id + " names no conditions to search for");
    }
    return keywords;
}

CorpusReportSource::CorpusReportSource(std::string directory) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(directory, ec)) {
        throw ConfigError("case report corpus is not a directory: " + directory);
    }
    std::vector<fs::path> files;
    for (const fs::directory_entry& entry : fs::directory_iterator(directory)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    for (const fs::path& file : files) {
        std::ifstream in(file, std::ios::binary);
        std::ostringstream buffer;
        buffer << in.rdbuf();
        try {
            reports_.push_back(Json::parse(buffer.str()).get<CaseReport>());
        } catch (const Json::exception& e) {
            throw FormatError("case report " + file.string() + ": " + e.what());
        } catch (const Error& e) {
            throw FormatError("case report " + file.string() + ": " + e.what());
        }
    }
}

std::vector<CaseReport> CorpusReportSource::search(const std::string& keyword, std::size_t k) {
    const std::string term = util::normalize_term(keyword);
    std::vector<CaseReport> hits;
    for (const CaseReport& report : reports_) {
        if (hits.size() == k) break;
        const bool keyword_hit =
            std::any_of(report.keywords.begin(), report.keywords.end(),
                        [&](const std::string& kw) { return util::normalize_term(kw) == term; });
        if (keyword_hit || util::contains_ci(report.title, term) ||
            util::contains_ci(report.abstract, term)) {
            hits.push_back(report);
        }
    }
    return hits;
}

bool parse_reported_demographics(const std::string& text, int* age, std::string* gender) {
    static const std::regex kPattern(
        R"((\d{1,3})[\s-]*year[\s-]*old\s+(man|woman|male|female|boy|girl))",
        std::regex::icase);
    std::smatch match;
    if (!std::regex_search(text, match, kPattern)) return false;
    if (age != nullptr) *age = std::stoi(match[1].str());
    if (gender != nullptr) *gender = normalize_gender(match[2].str());
    return true;
}

PubMedReportSource::PubMedReportSource(std::string base_url) : base_url_(std::move(base_url)) {}

std::string PubMedReportSource::fetch(const std::string& path) {
    // One shared limiter across instances: at most three requests per second
    // toward NCBI, no matter how many sources the process creates.
    static std::mutex gate_mutex;
    static std::chrono::steady_clock::time_point last_request{};

    std::string error_detail;
    for (int attempt = 1; attempt <= 3; ++attempt) {
        {
            std::lock_guard<std::mutex> lock(gate_mutex);
            const auto now = std::chrono::steady_clock::now();
            const auto earliest = last_request + std::chrono::milliseconds(334);
            if (now < earliest) std::this_thread::sleep_for(earliest - now);
            last_request = std::chrono::steady_clock::now();
        }
        httplib::Client client(base_url_);
        client.set_connection_timeout(std::chrono::seconds(10));
        client.set_read_timeout(std::chrono::seconds(30));
        httplib::Result result = client.Get(path);
        if (result && result->status == 200) return result->body;
        error_detail = result ? "HTTP " + std::to_string(result->status)
                              : httplib::to_string(result.error());
        if (attempt < 3) {
            std::this_thread::sleep_for(std::chrono::milliseconds(250 << (attempt - 1)));
        }
    }
    throw RetrievalError("PubMed request " + path + " failed after 3 attempts: " + error_detail);
}

namespace {

// Minimal tag scraping for the two E-utilities payloads we consume; a full
// XML parser would be overkill for <Id> lists and abstract text.
std::vector<std::string> extract_tag_values(const std::string& xml, const std::string& tag) {
    std::vector<std::string> values;
    const std::string open = "<" + tag;
    const std::string close = "</" + tag + ">";
    std::size_t pos = 0;
    while (true) {
        std::size_t start = xml.find(open, pos);
        if (start == std::string::npos) break;
        // "<Keyword" must not swallow "<KeywordList>": the name has to end
        // right here, optionally followed by attributes.
        const char next = start + open.size() < xml.size() ? xml[start + open.size()] : '\0';
        if (next != '>' && next != ' ' && next != '\t' && next != '\n' && next != '/') {
            pos = start + open.size();
            continue;
        }
        start = xml.find('>', start);
        if (start == std::string::npos) break;
        const std::size_t end = xml.find(close, start + 1);
        if (end == std::string::npos) break;
        values.push_back(xml.substr(start + 1, end - start - 1));
        pos = end + close.size();
    }
    return values;
}

std::string url_encode(const std::string& text) {
    std::string encoded;
    for (unsigned char c : text) {
        if (std::isalnum(c) != 0 || c == '-' || c == '_' || c == '.' || c == '~') {
            encoded += static_cast<char>(c);
        } else {
            char buffer[4];
            std::snprintf(buffer, sizeof(buffer), "%%%02X", c);
            encoded += buffer;
        }
    }
    return encoded;
}

}  // namespace

std::vector<CaseReport> PubMedReportSource::search(const std::string& keyword, std::size_t k) {
    const std::string term = keyword + " AND case reports[Publication Type]";
    const std::string search_path = "/entrez/eutils/esearch.fcgi?db=pubmed&retmax=" +
                                    std::to_string(k) + "&term=" + url_encode(term);
    const std::string search_xml = fetch(search_path);
    const std::vector<std::string> ids = extract_tag_values(search_xml, "Id");
    if (ids.empty()) return {};

    const std::string fetch_path = "/entrez/eutils/efetch.fcgi?db=pubmed&rettype=abstract"
                                   "&retmode=xml&id=" +
                                   util::join(ids, ",");
    const std::string fetch_xml = fetch(fetch_path);
    const std::vector<std::string> articles = extract_tag_values(fetch_xml, "PubmedArticle");

    std::vector<CaseReport> reports;
    for (const std::string& article : articles) {
        CaseReport report;
        const std::vector<std::string> pmids = extract_tag_values(article, "PMID");
        if (pmids.empty()) continue;
        report.id = pmids.front();
        const std::vector<std::string> titles = extract_tag_values(article, "ArticleTitle");
        report.title = titles.empty() ? "" : titles.front();
        report.abstract = util::join(extract_tag_values(article, "AbstractText"), " ");
        for (const std::string& kw : extract_tag_values(article, "Keyword")) {
            report.keywords.push_back(util::normalize_term(kw));
        }
        int age = 0;
        std::string gender;
        if (parse_reported_demographics(report.title + " " + report.abstract, &age, &gender)) {
            report.reported_age = age;
            report.reported_gender = gender;
        }
        reports.push_back(std::move(report));
    }
    return reports;
}

std::vector<CaseReport> search_case_reports(ReportSource& source, const std::string& keyword,
                                            std::size_t k) {
    if (k == 0) {
        throw DomainError("search_case_reports: k must be positive");
    }
    const std::string term = util::normalize_term(keyword);
    if (term.empty()) {
        throw DomainError("search_case_reports: keyword must be non-blank");
    }
    std::vector<CaseReport> unique;
    std::set<std::string> seen;
    for (CaseReport& report : source.search(term, k)) {
        if (unique.size() == k) break;
        if (seen.insert(report.id).second) unique.push_back(std::move(report));
    }
    return unique;
}

std::vector<CaseReport> filter_by_demographics(const std::vector<CaseReport>& reports,
                                               const Demographics& demographics) {
    const std::string patient_gender = normalize_gender(demographics.sex);
    std::vector<CaseReport> kept;
    for (const CaseReport& report : reports) {
        if (report.reported_gender.has_value() &&
            normalize_gender(*report.reported_gender) != patient_gender) {
            continue;
        }
        if (report.reported_age.has_value() &&
            std::abs(*report.reported_age - demographics.age) > 10) {
            continue;
        }
        kept.push_back(report);
    }
    return kept;
}

EvidenceSummary synthesize_evidence(const std::vector<CaseReport>& reports,
                                    agents::CompletionClient& client,
                                    const agents::PromptLibrary& prompts,
                                    agents::Transcript* transcript) {
    if (reports.empty()) {
        return {};  // nothing to synthesize; no model call
    }
    Json facts;
    facts["reports"] = reports;
    const std::vector<agents::Message> messages =
        prompts.render("evidence", {{"facts", fenced(facts)}});
    const agents::CompletionRequest request = client.make_request("evidence", messages);
    const Json output = agents::request_structured(client, request,
                                                   agents::OutputSchema::EvidenceSummary,
                                                   transcript);
    return output.get<EvidenceSummary>();
}

EvidenceSummary gather_evidence(const PatientProfile& profile, ReportSource& source,
                                std::size_t k_per_keyword, agents::CompletionClient& client,
                                const agents::PromptLibrary& prompts,
                                agents::Transcript* transcript) {
    std::vector<CaseReport> pool;
    std::set<std::string> seen;
    for (const std::string& keyword : extract_keywords(profile)) {
        const std::vector<CaseReport> hits = search_case_reports(source, keyword, k_per_keyword);
        for (const CaseReport& report : filter_by_demographics(hits, profile.demographics)) {
            if (seen.insert(report.id).second) pool.push_back(report);
        }
    }
    return synthesize_evidence(pool, client, prompts, transcript);
}

}  // namespace synth::literature
