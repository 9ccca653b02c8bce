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


#ifndef SIFT_HARNESS_H_
#define SIFT_HARNESS_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sift/backend.h"
#include "sift/metrics.h"
#include "sift/schema.h"
#include "sift/scope.h"

namespace sift {

enum class DatasetFormat { kConversation, kPage };

std::optional<DatasetFormat> dataset_format_from_name(std::string_view name);

struct DatasetSpec {
  DatasetFormat format = DatasetFormat::kPage;
  std::string path;
  std::optional<size_t> sample_cap;
};

struct DatasetSample {
  std::string id;  // the line's "id", or "line-<n>"
  std::string input_text;
  Json expected;
};

// "[USER]: ...\n[ASSISTANT]: ..." with one line per turn. Speakers other
// than "user" render as ASSISTANT.
std::string flatten_turns(const Json& turns);

// Throws LineParseError or ShapeViolation with path "line <n>" (plus the
// offending instance path for shape errors).
std::vector<DatasetSample> load_dataset(const DatasetSpec& spec, const SchemaDoc& schema);

struct EngineConfig {
  std::string name = "default";
  int max_retries = kDefaultMaxRetries;
  bool reflection_enabled = true;
  bool llm_condition_check = false;
  int workers = 1;
};

struct EvalRecord {
  std::string id;
  Json expected;
  ExtractionOutcome outcome;
  CompareResult compare;
  bool correct() const { return compare.correct; }
};

struct RunReport {
  Json config;
  size_t n_samples = 0;
  size_t processed = 0;
  std::optional<std::string> interrupted;  // error that stopped the run
  double accuracy = 0;
  std::map<int, int> retry_histogram;
  // 1 - (failures still open after one retry / failures at attempt 0);
  // absent when attempt 0 never failed.
  std::optional<double> error_reduction_at_1;
  double mean_latency_ms = 0;    // backend-recorded, per sample
  double mean_wall_time_ms = 0;  // includes local engine time; not in to_json
  std::map<std::string, int> finding_counts;
  std::map<std::string, int> failure_counts;
  std::vector<EvalRecord> records;

  // Deterministic under replay: no locally measured times.
  Json to_json() const;
  std::string summary() const;
};

RunReport run_eval(const std::vector<DatasetSample>& samples, const SchemaDoc& schema,
                   const EngineConfig& config, ModelBackend& backend,
                   ModelBackend* condition_backend = nullptr);

struct AbReport {
  RunReport a;
  RunReport b;
  Json to_json() const;
  std::string summary() const;
};

}  // namespace sift

#endif  // SIFT_HARNESS_H_
