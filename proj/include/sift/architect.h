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


#ifndef SIFT_ARCHITECT_H_
#define SIFT_ARCHITECT_H_

#include <optional>
#include <string>
#include <vector>

#include "sift/backend.h"
#include "sift/error.h"
#include "sift/schema.h"
#include "sift/schema_diff.h"
#include "sift/scope.h"

namespace sift {

inline constexpr const char* kInsufficientSchema = "INSUFFICIENT_SCHEMA";

struct SeedSample {
  std::string input_text;
  Json expected;
};

// JSON Lines with input_text and expected per line.
std::vector<SeedSample> load_seeds(const std::string& path);
Json seeds_to_json(const std::vector<SeedSample>& seeds);

struct SyntheticCase {
  std::string input_text;
  std::optional<Json> ground_truth;  // nullopt: INSUFFICIENT_SCHEMA
  std::string challenge;

  bool insufficient() const { return !ground_truth.has_value(); }
  std::string id() const;  // stable_hash of the input text
};

Json to_json(const SyntheticCase& c);

struct GenerationStats {
  int rounds = 0;
  int block_parse_errors = 0;
  int shape_rejects = 0;
  int duplicates = 0;
};

struct FailureRecord {
  std::string case_id;
  std::string input_text;
  Json expected;  // ground truth, or the INSUFFICIENT_SCHEMA string
  Json actual;    // final values, or null after an extraction failure
  bool extraction_failed = false;
  bool schema_insufficiency = false;
  int retries_used = 0;
  std::vector<std::string> mismatch_paths;
  std::vector<std::string> finding_codes;  // from the last attempt
};

Json to_json(const FailureRecord& f);

struct EvalSettings {
  int max_retries = kDefaultMaxRetries;
  bool reflection_enabled = true;
};

struct SchemaEvaluation {
  double accuracy = 0;
  int correct = 0;
  int total = 0;
  std::vector<FailureRecord> failures;
};

struct Iteration {
  SchemaDoc schema;
  double train_accuracy = 0;
  // Accuracy on the hold-out cases this schema can represent; equals
  // train_accuracy when there are none.
  double val_accuracy = 0;
  int n_cases = 0;
  int n_holdout = 0;
  std::vector<FailureRecord> failures;
  SchemaDiff diff_from_prev;
  GenerationStats generation;
};

struct RefinementState {
  std::vector<Iteration> iterations;
  size_t best_index = 0;
  double tau = 0.95;
  int max_iters = 6;
  int refinements_used = 0;

  Json to_json() const;
};

struct ArchitectConfig {
  double tau = 0.95;
  int max_iters = 6;  // K
  int n_samples = 10;
  int holdout_size = 5;
  int max_generation_rounds = 3;
  int repair_attempts = 2;
  EvalSettings eval;
};

// Carries the loop state reached before the failure.
class ArchitectError : public Error {
 public:
  ArchitectError(const Error& cause, RefinementState state)
      : Error(cause), state_(std::move(state)) {}
  const RefinementState& state() const { return state_; }

 private:
  RefinementState state_;
};

std::string render_generator_prompt(const std::string& task);
std::string render_synthetic_prompt(const SchemaDoc& schema, const std::string& task,
                                    const std::vector<SeedSample>& seeds, int round);
std::string render_refiner_prompt(const SchemaDoc& schema, const std::string& task,
                                  const std::vector<FailureRecord>& failures, double accuracy);

// The first balanced JSON object in `text`, or nullopt.

// Throws Error(GenerationFailed) once the repairs are used up.
SchemaDoc generate_initial_schema(const std::string& task, ModelBackend& backend,
                                  int repair_attempts = 2);

// Parses the <example> blocks of one response. Malformed blocks and ground
// truths that do not fit the schema are skipped and counted.
std::vector<SyntheticCase> parse_examples(std::string_view text, const SchemaDoc& schema,
                                          GenerationStats& stats);

// Throws Error(InsufficientGeneration) when fewer than n_samples distinct
// cases arrive within max_rounds.
std::vector<SyntheticCase> generate_synthetic_cases(const SchemaDoc& schema, const std::string& task,
                                                    const std::vector<SeedSample>& seeds,
                                                    int n_samples, ModelBackend& backend,
                                                    int max_rounds = 3,
                                                    GenerationStats* stats = nullptr);

// Correct when the strict comparison passes; INSUFFICIENT_SCHEMA cases are
// correct when extraction fails or every required root field is null.
SchemaEvaluation evaluate_schema(const SchemaDoc& schema, const std::vector<SyntheticCase>& cases,
                                 ModelBackend& backend, const EvalSettings& settings = {});

// Throws Error(RefinementFailed) once the repairs are used up.
SchemaDoc refine_schema(const RefinementState& state, const std::string& task, ModelBackend& backend,
                        int repair_attempts = 2);

struct OptimizeResult {
  SchemaDoc best;
  RefinementState state;
};

OptimizeResult optimize(const std::optional<SchemaDoc>& user_schema, const std::string& task,
                        const std::vector<SeedSample>& seeds, const ArchitectConfig& config,
                        ModelBackend& backend);

}  // namespace sift

#endif  // SIFT_ARCHITECT_H_
