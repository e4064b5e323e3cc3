#pragma once

#include <string>
#include <vector>

#include "synth/agents/client.hpp"
#include "synth/agents/prompts.hpp"
#include "synth/agents/transcript.hpp"
#include "synth/agents/types.hpp"
#include "synth/core/profile.hpp"
#include "synth/ingest/ingest.hpp"
#include "synth/literature/evidence.hpp"
#include "synth/sampler/sampler.hpp"

namespace synth::agents {

// A stage output broke a hard contract (blueprint identity drift, schema
// violations, an unrepaired major finding) and one corrective re-prompt did
// not fix it.
class InvariantViolation : public Error {
  public:
    using Error::Error;
};

// A stage modified content it was required to leave untouched (frozen
// sections, identity metadata) and the corrective re-prompt repeated the
// edit.
class SectionTamper : public Error {
  public:
    using Error::Error;
};

// Verified refinement still reports at least one major issue.
class UnresolvedMajorIssues : public Error {
  public:
    using Error::Error;
};

// Expected reference-corpus shape. With `strict` set (the default), corpus
// size mismatches are configuration errors rather than silent degradation.
struct CorpusExpectation {
    std::size_t surveys = 10;
    std::size_t trajectories = 20;
    bool strict = true;
};

// Stage 1: sample the patient skeleton from the priors, match the reference
// survey and the three closest claims trajectories, and have the model distill
// them into a Blueprint. The sampled demographics/BMI/comorbidity are copied
// over the model's echo verbatim, so sampling, not the model, owns identity.
Blueprint summarize(const std::vector<ingest::SurveyRecord>& surveys,
                    const std::vector<ingest::ClaimsTrajectory>& trajectories,
                    const ingest::PriorTable& priors, sampler::SeedState& rng,
                    CompletionClient& client, const PromptLibrary& prompts,
                    Transcript* transcript, const CorpusExpectation& corpus = {});

// Stage 2: full profile from a blueprint. The model must copy demographics,
// BMI class, and comorbidity through verbatim and emit a schema-valid profile
// whose timeline spans at least three years; one corrective re-prompt, then
// InvariantViolation.
PatientProfile generate(const Blueprint& blueprint, const std::string& profile_id,
                        CompletionClient& client, const PromptLibrary& prompts,
                        Transcript* transcript);

// Which of the ten sections differ between two profiles, in canonical
// section order, compared on canonical bytes.
std::vector<std::string> changed_sections(const PatientProfile& before,
                                          const PatientProfile& after);

// Stage 3: enrich the permitted sections (symptoms, habits, psych_scales,
// role_play, timeline) with literature evidence. Empty evidence returns the
// profile unchanged without any model call. Edits to frozen sections survive
// one corrective re-prompt, then SectionTamper.
PatientProfile augment(const PatientProfile& profile, const literature::EvidenceSummary& evidence,
                       CompletionClient& client, const PromptLibrary& prompts,
                       Transcript* transcript);

// Stage 4: audit a schema-valid profile; issues name real sections (enforced
// on parse, with a corrective re-prompt inside the structured-output layer).
EvaluationReport evaluate(const PatientProfile& profile, CompletionClient& client,
                          const PromptLibrary& prompts, Transcript* transcript);

struct RefineOptions {
    // Allow stylistic edits to issue-free sections (last pass of a run).
    bool final_sweep = false;
    // Re-run evaluate() on the result and require zero major issues.
    bool verify = false;
};

// Stage 5: repair the reported issues. Sections without issues must come back
// byte-identical (unless final_sweep), every Major/Moderate dimension must
// actually change, and the result must validate; one corrective re-prompt,
// then SectionTamper/InvariantViolation. An empty report without final_sweep
// returns the input unchanged with no model call.
PatientProfile refine(const PatientProfile& profile, const EvaluationReport& report,
                      CompletionClient& client, const PromptLibrary& prompts,
                      Transcript* transcript, const RefineOptions& options = {});

}  // namespace synth::agents
