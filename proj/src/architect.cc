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


#include "sift/architect.h"

#include <fstream>
#include <set>
#include <sstream>

#include "sift/candidate.h"
#include "sift/metrics.h"
#include "sift/prompts.h"
#include "sift/text.h"

namespace sift {
namespace {

std::string call_backend(ModelBackend& backend, const std::string& prompt) {
  try {
    return backend.complete(user_request(prompt)).text;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kTransport) {
      throw Error(ErrorCode::kBackendUnavailable, e.path(), e.detail());
    }
    throw;
  }
}

// Extracts and parses a schema from `tag`, re-prompting with the error
// appended while repairs remain.
SchemaDoc schema_with_repairs(ModelBackend& backend, const std::string& prompt,
                              const std::string& tag, bool lenient_close, int repair_attempts,
                              ErrorCode failure_code) {
  std::string current = prompt;
  std::string last_error;
  for (int attempt = 0; attempt <= repair_attempts; ++attempt) {
    const std::string response = call_backend(backend, current);
    try {
      const auto block = prompts::tagged_block(response, tag, lenient_close);
      if (!block) throw Error(ErrorCode::kMissingTags, "", "no <" + tag + "> block in the answer");
      const auto object = prompts::first_json_object(*block);
      if (!object) throw Error(ErrorCode::kMalformedDocument, "", "no JSON object in <" + tag + ">");
      return parse_schema(*object);
    } catch (const Error& e) {
      last_error = e.what();
    }
    current = prompt + "\n\nYour previous schema was rejected: " + last_error +
              "\nReturn a corrected schema in <" + tag + "></" + tag + "> tags.";
  }
  throw Error(failure_code, "", last_error);
}

std::string strip_quotes(std::string s) {
  s = text::trim(s);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

bool all_required_null(const Json& values, const SchemaDoc& schema) {
  const AttributeSpec& root = schema.root();
  for (const AttributeSpec& p : root.properties) {
    if (!root.required.empty() && !root.is_required(p.name)) continue;
    if (values.is_object() && values.contains(p.name) && !values[p.name].is_null()) return false;
  }
  return true;
}

}  // namespace

std::vector<SeedSample> load_seeds(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kMalformedDocument, path, "cannot open seed file");
  std::vector<SeedSample> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      const Json j = Json::parse(line);
      SeedSample s{j.at("input_text").get<std::string>(), j.at("expected")};
      if (!s.expected.is_object() || s.expected.empty()) {
        throw Error(ErrorCode::kLineParseError, "line " + std::to_string(line_no),
                    "expected must be a non-empty object");
      }
      out.push_back(std::move(s));
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::kLineParseError, "line " + std::to_string(line_no), e.what());
    }
  }
  return out;
}

Json seeds_to_json(const std::vector<SeedSample>& seeds) {
  Json arr = Json::array();
  for (const SeedSample& s : seeds) arr.push_back({{"input_text", s.input_text}, {"expected", s.expected}});
  return arr;
}

std::string SyntheticCase::id() const { return stable_hash(input_text); }

Json to_json(const SyntheticCase& c) {
  return {{"id", c.id()},
          {"input_text", c.input_text},
          {"ground_truth", c.ground_truth ? *c.ground_truth : Json(kInsufficientSchema)},
          {"challenge", c.challenge}};
}

Json to_json(const FailureRecord& f) {
  return {{"case_id", f.case_id},
          {"input_text", f.input_text},
          {"expected", f.expected},
          {"actual", f.actual},
          {"extraction_failed", f.extraction_failed},
          {"schema_insufficiency", f.schema_insufficiency},
          {"retries_used", f.retries_used},
          {"mismatch_paths", f.mismatch_paths},
          {"finding_codes", f.finding_codes}};
}

std::string render_generator_prompt(const std::string& task) {
  return prompts::substitute(prompts::kSchemaGeneratorTemplate, {{"$task", task}});
}

std::string render_synthetic_prompt(const SchemaDoc& schema, const std::string& task,
                                    const std::vector<SeedSample>& seeds, int round) {
  std::string p = prompts::substitute(prompts::kSyntheticDataTemplate,
                                      {{"$schema", canonical_serialize(schema)},
                                       {"$task", task},
                                       {"user_samples", canonical_dump(seeds_to_json(seeds))}});
  if (round > 0) {
    p += "\n\nGeneration round " + std::to_string(round + 1) +
         ": produce examples that differ from the earlier rounds.";
  }
  return p;
}

std::string render_refiner_prompt(const SchemaDoc& schema, const std::string& task,
                                  const std::vector<FailureRecord>& failures, double accuracy) {
  Json records = Json::array();
  for (const FailureRecord& f : failures) records.push_back(to_json(f));
  const Json samples = {{"accuracy", accuracy}, {"failures", std::move(records)}};
  return prompts::substitute(prompts::kSchemaRefinerTemplate,
                             {{"$task", task},
                              {"$schema", canonical_serialize(schema)},
                              {"$eval_samples", canonical_dump(samples)}});
}

SchemaDoc generate_initial_schema(const std::string& task, ModelBackend& backend,
                                  int repair_attempts) {
  if (text::trim(task).empty()) {
    throw Error(ErrorCode::kPrecondition, "", "task description must not be empty");
  }
  return schema_with_repairs(backend, render_generator_prompt(task), "json_schema", false,
                             repair_attempts, ErrorCode::kGenerationFailed)
      .with_task_hint(task);
}

std::vector<SyntheticCase> parse_examples(std::string_view text, const SchemaDoc& schema,
                                          GenerationStats& stats) {
  std::vector<SyntheticCase> out;
  const std::string open = "<example>";
  const std::string close = "</example>";
  size_t pos = 0;
  while ((pos = text.find(open, pos)) != std::string_view::npos) {
    const size_t body = pos + open.size();
    size_t end = text.find(close, body);
    const size_t next_open = text.find(open, body);
    if (end == std::string_view::npos || (next_open != std::string_view::npos && next_open < end)) {
      end = next_open == std::string_view::npos ? text.size() : next_open;
    }
    const std::string_view block = text.substr(body, end - body);
    pos = end;

    const auto input = prompts::tagged_block(block, "input_text");
    const auto truth = prompts::tagged_block(block, "ground_truth");
    if (!input || !truth || text::trim(*input).empty()) {
      ++stats.block_parse_errors;
      continue;
    }
    SyntheticCase c;
    c.input_text = text::trim(*input);
    c.challenge = text::trim(prompts::tagged_block(block, "challenge").value_or(""));
    if (strip_quotes(*truth) == kInsufficientSchema) {
      out.push_back(std::move(c));
      continue;
    }
    const std::string trimmed = text::trim(*truth);
    Json gt;
    if (trimmed.empty()) {
      gt = Json::object();
    } else {
      const auto object = prompts::first_json_object(trimmed);
      try {
        if (!object) throw Json::parse_error::create(101, 0, "no object", nullptr);
        gt = Json::parse(*object);
      } catch (const Json::exception&) {
        ++stats.block_parse_errors;
        continue;
      }
    }
    if (find_shape_violation(gt, schema.root()) || !gt.is_object()) {
      ++stats.shape_rejects;
      continue;
    }
    c.ground_truth = std::move(gt);
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<SyntheticCase> generate_synthetic_cases(const SchemaDoc& schema, const std::string& task,
                                                    const std::vector<SeedSample>& seeds,
                                                    int n_samples, ModelBackend& backend,
                                                    int max_rounds, GenerationStats* stats_out) {
  if (n_samples < 1) throw Error(ErrorCode::kPrecondition, "", "n_samples must be at least 1");
  GenerationStats stats;
  std::vector<SyntheticCase> cases;
  std::set<std::u32string> seen;
  for (int round = 0; round < max_rounds && static_cast<int>(cases.size()) < n_samples; ++round) {
    ++stats.rounds;
    const std::string response =
        call_backend(backend, render_synthetic_prompt(schema, task, seeds, round));
    for (SyntheticCase& c : parse_examples(response, schema, stats)) {
      if (!seen.insert(text::normalize_haystack(c.input_text)).second) {
        ++stats.duplicates;
        continue;
      }
      cases.push_back(std::move(c));
    }
  }
  if (stats_out) *stats_out = stats;
  if (static_cast<int>(cases.size()) < n_samples) {
    throw Error(ErrorCode::kInsufficientGeneration, "",
                std::to_string(cases.size()) + " usable case(s) after " +
                    std::to_string(stats.rounds) + " round(s), " + std::to_string(n_samples) +
                    " needed");
  }
  cases.resize(static_cast<size_t>(n_samples));
  return cases;
}

SchemaEvaluation evaluate_schema(const SchemaDoc& schema, const std::vector<SyntheticCase>& cases,
                                 ModelBackend& backend, const EvalSettings& settings) {
  if (cases.empty()) throw Error(ErrorCode::kPrecondition, "", "no cases to evaluate");
  SchemaEvaluation ev;
  for (const SyntheticCase& c : cases) {
    ExtractionRequest req(c.input_text, schema);
    req.max_retries = settings.max_retries;
    req.reflection_enabled = settings.reflection_enabled;
    const ExtractionOutcome outcome = extract(req, backend);
    const Json actual = outcome.final ? outcome.final->values : Json::object();

    bool correct;
    std::vector<std::string> mismatches;
    if (c.insufficient()) {
      correct = !outcome.ok() || all_required_null(actual, schema);
    } else {
      const CompareResult cmp = strict_compare(*c.ground_truth, actual, schema);
      correct = cmp.correct;
      for (const auto& [path, status] : cmp.per_field) {
        if (status != FieldStatus::kMatch) mismatches.push_back(path);
      }
    }
    ++ev.total;
    if (correct) {
      ++ev.correct;
      continue;
    }
    FailureRecord f;
    f.case_id = c.id();
    f.input_text = c.input_text;
    f.expected = c.ground_truth ? *c.ground_truth : Json(kInsufficientSchema);
    f.actual = outcome.final ? outcome.final->values : Json(nullptr);
    f.extraction_failed = !outcome.ok();
    f.schema_insufficiency = c.insufficient();
    f.retries_used = outcome.retries_used;
    f.mismatch_paths = std::move(mismatches);
    const Attempt& last = outcome.attempts.back();
    if (last.report) {
      for (const Finding& finding : last.report->findings()) {
        f.finding_codes.push_back(std::string(finding_code_name(finding.code)) + " at " +
                                  finding.path);
      }
    } else if (last.parse_error) {
      f.finding_codes.push_back(*last.parse_error);
    }
    ev.failures.push_back(std::move(f));
  }
  ev.accuracy = static_cast<double>(ev.correct) / ev.total;
  return ev;
}

SchemaDoc refine_schema(const RefinementState& state, const std::string& task, ModelBackend& backend,
                        int repair_attempts) {
  if (state.iterations.empty() || state.iterations.back().failures.empty()) {
    throw Error(ErrorCode::kPrecondition, "", "the last iteration has no failures to refine on");
  }
  const Iteration& last = state.iterations.back();
  return schema_with_repairs(
             backend, render_refiner_prompt(last.schema, task, last.failures, last.train_accuracy),
             "refined_schema", true, repair_attempts, ErrorCode::kRefinementFailed)
      .with_task_hint(task);
}

Json RefinementState::to_json() const {
  Json its = Json::array();
  for (size_t i = 0; i < iterations.size(); ++i) {
    const Iteration& it = iterations[i];
    Json failures = Json::array();
    for (const FailureRecord& f : it.failures) failures.push_back(sift::to_json(f));
    its.push_back({{"index", i},
                   {"schema", sift::to_json(it.schema)},
                   {"version_tag", it.schema.version_tag()},
                   {"train_accuracy", it.train_accuracy},
                   {"val_accuracy", it.val_accuracy},
                   {"n_cases", it.n_cases},
                   {"n_holdout", it.n_holdout},
                   {"failures", std::move(failures)},
                   {"diff_from_prev", sift::to_json(it.diff_from_prev)},
                   {"generation",
                    {{"rounds", it.generation.rounds},
                     {"block_parse_errors", it.generation.block_parse_errors},
                     {"shape_rejects", it.generation.shape_rejects},
                     {"duplicates", it.generation.duplicates}}}});
  }
  return {{"tau", tau},
          {"max_iters", max_iters},
          {"best_index", best_index},
          {"refinements_used", refinements_used},
          {"iterations", std::move(its)}};
}

OptimizeResult optimize(const std::optional<SchemaDoc>& user_schema, const std::string& task,
                        const std::vector<SeedSample>& seeds, const ArchitectConfig& config,
                        ModelBackend& backend) {
  if (!(config.tau > 0 && config.tau <= 1)) {
    throw Error(ErrorCode::kPrecondition, "", "tau must be in (0, 1]");
  }
  if (config.max_iters < 1) throw Error(ErrorCode::kPrecondition, "", "max_iters must be at least 1");
  if (config.n_samples < 1 || config.holdout_size < 0) {
    throw Error(ErrorCode::kPrecondition, "", "n_samples must be at least 1");
  }

  RefinementState state;
  state.tau = config.tau;
  state.max_iters = config.max_iters;
  std::vector<SyntheticCase> holdout;

  try {
    SchemaDoc schema = user_schema ? user_schema->with_task_hint(task)
                                   : generate_initial_schema(task, backend, config.repair_attempts);
    while (true) {
      const bool first = state.iterations.empty();
      Iteration it{schema, 0, 0, 0, 0, {}, {}, {}};
      const int wanted = config.n_samples + (first ? config.holdout_size : 0);
      std::vector<SyntheticCase> cases = generate_synthetic_cases(
          schema, task, seeds, wanted, backend, config.max_generation_rounds, &it.generation);
      if (first) {
        holdout.assign(cases.begin() + config.n_samples, cases.end());
        cases.resize(static_cast<size_t>(config.n_samples));
      }

      const SchemaEvaluation train = evaluate_schema(schema, cases, backend, config.eval);
      it.train_accuracy = train.accuracy;
      it.failures = train.failures;
      it.n_cases = train.total;

      std::vector<SyntheticCase> usable;
      for (const SyntheticCase& c : holdout) {
        if (c.insufficient() || !find_shape_violation(*c.ground_truth, schema.root())) {
          usable.push_back(c);
        }
      }
      it.n_holdout = static_cast<int>(usable.size());
      it.val_accuracy = usable.empty() ? train.accuracy
                                       : evaluate_schema(schema, usable, backend, config.eval).accuracy;
      if (!first) it.diff_from_prev = diff_schemas(state.iterations.back().schema, schema);
      state.iterations.push_back(std::move(it));

      size_t best = 0;
      for (size_t i = 1; i < state.iterations.size(); ++i) {
        if (state.iterations[i].val_accuracy > state.iterations[best].val_accuracy) best = i;
      }
      state.best_index = best;

      if (state.iterations.back().train_accuracy >= config.tau ||
          state.refinements_used >= config.max_iters) {
        break;
      }
      schema = refine_schema(state, task, backend, config.repair_attempts);
      ++state.refinements_used;
    }
  } catch (const ArchitectError&) {
    throw;
  } catch (const Error& e) {
    throw ArchitectError(e, state);
  }
  return {state.iterations[state.best_index].schema, state};
}

}  // namespace sift
