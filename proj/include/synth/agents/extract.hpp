#pragma once

#include <string>

#include "synth/agents/client.hpp"
#include "synth/agents/types.hpp"
#include "synth/core/serialize.hpp"

namespace synth::agents {

enum class OutputSchema { Blueprint, PatientProfile, EvaluationReport, EvidenceSummary };

const char* to_string(OutputSchema schema);

// A single extraction pass failed; carries the parse/validation message.
class ExtractionFailed : public Error {
  public:
    using Error::Error;
};

// Raised by request_structured after the corrective re-prompt also failed.
class UnrepairableOutput : public Error {
  public:
    using Error::Error;
};

// Pulls the JSON payload out of raw model text: prefers a fenced ```json```
// block, falls back to the outermost brace span, repairs trailing commas,
// then validates the result against the named schema. Throws
// ExtractionFailed with the reason otherwise.
Json extract_structured(const std::string& text, OutputSchema schema);

// complete() + extract_structured() with the standard recovery contract: on
// extraction failure the validation errors are appended as a corrective user
// message and the request retried once; a second failure raises
// UnrepairableOutput.
Json request_structured(CompletionClient& client, CompletionRequest request,
                        OutputSchema schema, Transcript* transcript);

}  // namespace synth::agents
