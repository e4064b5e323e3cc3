#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "synth/agents/client.hpp"
#include "synth/agents/prompts.hpp"
#include "synth/agents/transcript.hpp"
#include "synth/core/error.hpp"
#include "synth/core/profile.hpp"
#include "synth/literature/evidence.hpp"

namespace synth::literature {

// The profile has no named conditions to search for.
class NoKeywords : public DomainError {
  public:
    using DomainError::DomainError;
};

// Live retrieval kept failing after retries.
class RetrievalError : public Error {
  public:
    using Error::Error;
};

// Search terms for literature retrieval: the condition names from
// current_conditions then medical_history, normalized, first occurrence wins.
std::vector<std::string> extract_keywords(const PatientProfile& profile);

// Where case reports come from; one implementation reads a local corpus, the
// other queries PubMed.
class ReportSource {
  public:
    virtual ~ReportSource() = default;

    // Up to k reports relevant to the keyword, best first. May return fewer
    // (or none); failures of the backing store raise RetrievalError.
    virtual std::vector<CaseReport> search(const std::string& keyword, std::size_t k) = 0;
};

// Reads every "*.json" file in a directory once (lexicographic filename
// order, which doubles as the relevance ranking) and serves keyword matches
// from memory. A report matches when the keyword equals one of its declared
// keywords or appears in its title or abstract.
class CorpusReportSource : public ReportSource {
  public:
    explicit CorpusReportSource(std::string directory);

    std::vector<CaseReport> search(const std::string& keyword, std::size_t k) override;

    std::size_t corpus_size() const { return reports_.size(); }

  private:
    std::vector<CaseReport> reports_;
};

// NCBI E-utilities client: esearch for "<keyword> AND case reports
// [Publication Type]", then efetch for titles/abstracts. Polite by
// construction: at most three requests per second, three attempts per call.
class PubMedReportSource : public ReportSource {
  public:
    explicit PubMedReportSource(std::string base_url = "https://eutils.ncbi.nlm.nih.gov");

    std::vector<CaseReport> search(const std::string& keyword, std::size_t k) override;

  private:
    std::string fetch(const std::string& path);  // rate-limited GET with retries

    std::string base_url_;
};

// "45-year-old woman" style age/gender extraction used for PubMed results
// (and available to corpus curation scripts). Returns false when no pattern
// matches; out-params are left untouched for absent halves.
bool parse_reported_demographics(const std::string& text, int* age, std::string* gender);

// Deduplicated (by id, first wins) top-k retrieval for one keyword. k == 0 or
// a blank keyword is a precondition violation.
std::vector<CaseReport> search_case_reports(ReportSource& source, const std::string& keyword,
                                            std::size_t k);

// Keeps reports whose reported age is within ten years of the patient (absent
// age passes) and whose reported gender matches (absent gender passes).
// Order-preserving.
std::vector<CaseReport> filter_by_demographics(const std::vector<CaseReport>& reports,
                                               const Demographics& demographics);

// One finding per condition across the reports, via the evidence model. An
// empty report list yields an empty summary without any model call.
EvidenceSummary synthesize_evidence(const std::vector<CaseReport>& reports,
                                    agents::CompletionClient& client,
                                    const agents::PromptLibrary& prompts,
                                    agents::Transcript* transcript);

// The full retrieval chain for one profile: extract keywords, search each,
// filter to demographic fit, pool (dedup by id), synthesize.
EvidenceSummary gather_evidence(const PatientProfile& profile, ReportSource& source,
                                std::size_t k_per_keyword, agents::CompletionClient& client,
                                const agents::PromptLibrary& prompts,
                                agents::Transcript* transcript);

}  // namespace synth::literature
