// Copyright 2026 The Sift Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef SIFT_SCOPE_H_
#define SIFT_SCOPE_H_

#include <optional>
#include <string>
#include <vector>

#include "sift/backend.h"
#include "sift/candidate.h"
#include "sift/error.h"
#include "sift/guardrails.h"
#include "sift/schema.h"

namespace sift {

inline constexpr int kDefaultMaxRetries = 3;
inline constexpr int kMaxRetriesCap = 10;

struct ExtractionRequest {
  ExtractionRequest(std::string source_text, SchemaDoc schema)
      : source_text(std::move(source_text)), schema(std::move(schema)) {}

  std::string source_text;
  SchemaDoc schema;
  int max_retries = kDefaultMaxRetries;
  bool reflection_enabled = true;
  // Adds the model-judged Condition stage after the static stages.
  bool llm_condition_check = false;
};

struct Attempt {
  std::string prompt;
  std::string raw_response;
  std::optional<ExtractionCandidate> candidate;
  // Set when the response was parsed; absent after a parse failure.
  std::optional<ValidationReport> report;
  // "<Code> at <path>: <detail>" of a parse failure.
  std::optional<std::string> parse_error;
  std::optional<ReflectionNote> reflection;
  // Text appended to the next attempt's prompt, when there is one.
  std::optional<std::string> retry_note;
  double latency_ms = 0;  // as recorded by the backend

  bool passed() const { return report && report->passed(); }
};

struct ExtractionFailure {
  std::string reason;
  std::optional<ValidationReport> last_report;
};

struct ExtractionOutcome {
  std::optional<ExtractionCandidate> final;
  std::optional<ExtractionFailure> failure;
  std::vector<Attempt> attempts;
  int retries_used = 0;
  // Engine time measured locally plus the backend-recorded latency of every
  // call, so replayed runs report the recorded cost.
  double wall_time_ms = 0;
  std::vector<std::string> warnings;

  bool ok() const { return final.has_value(); }
};

// Canonical schema in place of $attribute_schema, an output skeleton in
// place of $attribute_val_format, then the source text.
std::string render_base_prompt(const SchemaDoc& schema, std::string_view source_text);
// One placeholder value per leaf, e.g. {"model":"<string>"}.
Json value_skeleton(const AttributeSpec& node);

// Throws Error with MissingTags, MalformedPayload or ShapeViolation.
ExtractionCandidate parse_response(std::string_view raw, const SchemaDoc& schema,
                                   std::string_view source_text = "");

// Asks `backend` whether each non-null condition-bearing value satisfies its
// condition. No call is made when nothing carries a condition.
std::vector<Finding> llm_condition_stage(const ExtractionCandidate& candidate,
                                         const SchemaDoc& schema, ModelBackend& backend);
std::string render_condition_prompt(const std::string& path, const std::string& condition,
                                    const Json& value);

// Runs the reflect-and-retry loop. Transport failures surface as
// Error(BackendUnavailable); budget exhaustion is a Failure in the outcome.
// When request.llm_condition_check is set and `condition_backend` is null,
// the Condition stage is skipped with a warning.
ExtractionOutcome extract(const ExtractionRequest& request, ModelBackend& backend,
                          ModelBackend* condition_backend = nullptr);

Json to_json(const Attempt& attempt);
Json to_json(const ExtractionOutcome& outcome);

}  // namespace sift

#endif  // SIFT_SCOPE_H_
