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

#ifndef SIFT_GUARDRAILS_H_
#define SIFT_GUARDRAILS_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sift/candidate.h"
#include "sift/schema.h"

namespace sift {

// The three static stages always run in this order. kCondition is the
// optional model-judged stage appended after them by the extraction engine.
enum class Stage { kMissingAttribute, kGrounding, kRuleCompliance, kCondition };

enum class FindingCode {
  kMissingRequired,
  kNotGrounded,
  kPatternMismatch,
  kLengthViolation,
  kEnumViolation,
  kDateFormatViolation,
  kTypeMismatch,
  kConditionUnsatisfied,
};

std::string_view stage_name(Stage stage);
std::string_view finding_code_name(FindingCode code);
std::optional<FindingCode> finding_code_from_name(std::string_view name);
Stage stage_of(FindingCode code);

struct Finding {
  Stage stage;
  std::string path;  // instance path, e.g. "/cars/0/model"
  FindingCode code;
  std::string detail;
  std::optional<Json> offending_value;

  bool operator==(const Finding&) const = default;
};

struct StageResult {
  Stage stage;
  bool passed;
  std::vector<Finding> findings;

  bool operator==(const StageResult&) const = default;
};

struct ValidationReport {
  std::vector<StageResult> stages;

  bool passed() const;
  std::vector<Finding> findings() const;
  bool operator==(const ValidationReport&) const = default;
};

StageResult make_stage(Stage stage, std::vector<Finding> findings);

// One MissingRequired per required key absent from a present object. An
// explicit null counts as present.
std::vector<Finding> check_missing_attributes(const ExtractionCandidate& candidate,
                                              const SchemaDoc& schema);
std::vector<Finding> check_grounding(const ExtractionCandidate& candidate,
                                     const SchemaDoc& schema);
// Per non-null leaf, every applicable violation in the order type, enum,
// pattern, length, date format.
std::vector<Finding> check_rules(const ExtractionCandidate& candidate, const SchemaDoc& schema);

// Runs all three stages without short-circuiting. Throws
// Error(ShapeViolation) when the candidate has paths outside the schema.
ValidationReport validate(const ExtractionCandidate& candidate, const SchemaDoc& schema);

// Grounding primitives. Text: the folded, whitespace-collapsed value with
// edge punctuation removed must occur in the folded, collapsed source.
// Numbers: the value's digits must occur in the source's digit stream once
// separators between digits are dropped.
bool text_grounded(std::string_view value, std::string_view source);
bool number_grounded(const Json& number, std::string_view source);
bool date_grounded(std::string_view value, const DateSpec& spec, std::string_view source);

// The string a rule sees for a leaf: the string itself, or its JSON text.
std::string string_form(const Json& value);

struct ReflectionNote {
  std::string text;
  size_t finding_count = 0;
  std::string source_report;  // report_id() of the report it came from
};

// Deterministic correction guidance for a failed report. Each finding is
// listed with its stage, path, observed value, schema demand and a
// correction instruction. Throws Error(NothingToReflect) on a passing
// report.
ReflectionNote build_reflection(const ValidationReport& report, const SchemaDoc& schema);

Json to_json(const Finding& finding);
Json to_json(const ValidationReport& report);
std::string report_id(const ValidationReport& report);

}  // namespace sift

#endif  // SIFT_GUARDRAILS_H_
