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


#include "sift/scope.h"

#include <chrono>

#include "sift/prompts.h"
#include "sift/text.h"

namespace sift {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t).count();
}

std::string strip_fences(std::string s) {
  s = text::trim(s);
  if (s.rfind("```", 0) == 0) {
    const size_t nl = s.find('\n');
    s = nl == std::string::npos ? "" : s.substr(nl + 1);
    const size_t end = s.rfind("```");
    if (end != std::string::npos) s = s.substr(0, end);
    s = text::trim(s);
  }
  return s;
}

// The prior answer as shown to the model on retry: its payload only, or the
// raw text with thinking removed when there is no payload.
std::string previous_answer(const std::string& raw) {
  if (auto payload = prompts::tagged_block(raw, "attribute_values")) {
    return "<attribute_values>" + *payload + "</attribute_values>";
  }
  std::string s = raw;
  for (size_t open; (open = s.find("<thinking>")) != std::string::npos;) {
    const size_t close = s.find("</thinking>", open);
    s.erase(open, close == std::string::npos ? std::string::npos
                                             : close + std::string("</thinking>").size() - open);
  }
  s = text::trim(s);
  if (s.size() > 2000) s = s.substr(0, 2000) + "...";
  return s;
}

constexpr const char* kNaiveRetryLine = "Your previous answer was invalid, try again.";

std::string parse_failure_note(const Error& e) {
  return std::string("Your previous answer could not be used: ") + e.what() +
         ". Return the attribute values as a single JSON object inside "
         "<attribute_values></attribute_values> tags, using only the attributes in "
         "<attributes></attributes>.";
}

ChatResponse call(ModelBackend& backend, const std::string& prompt) {
  try {
    return backend.complete(user_request(prompt));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kTransport) {
      throw Error(ErrorCode::kBackendUnavailable, e.path(), e.detail());
    }
    throw;
  }
}

void collect_conditions(const AttributeSpec& node, const Json& value, const std::string& path,
                        std::vector<std::tuple<std::string, const AttributeSpec*, Json>>& out) {
  if (value.is_null()) return;
  if (node.condition) out.emplace_back(path, &node, value);
  if (node.kind == Kind::kObject && value.is_object()) {
    for (const auto& [key, child] : value.items()) {
      if (const AttributeSpec* spec = node.property(key)) {
        collect_conditions(*spec, child, path_join(path, key), out);
      }
    }
  } else if (node.kind == Kind::kArray && value.is_array() && node.items()) {
    for (size_t i = 0; i < value.size(); ++i) {
      collect_conditions(*node.items(), value[i], path_join(path, i), out);
    }
  }
}

}  // namespace

Json value_skeleton(const AttributeSpec& node) {
  switch (node.kind) {
    case Kind::kObject: {
      Json obj = Json::object();
      for (const AttributeSpec& child : node.properties) obj[child.name] = value_skeleton(child);
      return obj;
    }
    case Kind::kArray:
      return Json::array({node.items() ? value_skeleton(*node.items()) : Json("<value>")});
    default:
      return "<" + std::string(kind_name(node.kind)) + ">";
  }
}

std::string render_base_prompt(const SchemaDoc& schema, std::string_view source_text) {
  return prompts::substitute(prompts::kScopeBaseTemplate,
                             {{"$attribute_schema", canonical_serialize(schema)},
                              {"$attribute_val_format", canonical_dump(value_skeleton(schema.root()))}}) +
         std::string(source_text);
}

ExtractionCandidate parse_response(std::string_view raw, const SchemaDoc& schema,
                                   std::string_view source_text) {
  const auto payload = prompts::tagged_block(raw, "attribute_values");
  if (!payload) {
    throw Error(ErrorCode::kMissingTags, "", "no <attribute_values> block in the answer");
  }
  const std::string body = strip_fences(*payload);
  Json values;
  try {
    values = Json::parse(body);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kMalformedPayload, "",
                body.empty() ? "empty <attribute_values> block" : "payload is not JSON");
  }
  check_shape(values, schema);
  return {std::move(values), std::string(source_text), schema.version_tag()};
}

std::string render_condition_prompt(const std::string& path, const std::string& condition,
                                    const Json& value) {
  return "You are checking whether an extracted attribute value satisfies a condition.\n"
         "Attribute path: " + path + "\n"
         "Condition: " + condition + "\n"
         "Value: " + canonical_dump(value) + "\n\n"
         "Answer <verdict>yes</verdict> if the value satisfies the condition, otherwise "
         "<verdict>no</verdict>.";
}

std::vector<Finding> llm_condition_stage(const ExtractionCandidate& candidate,
                                         const SchemaDoc& schema, ModelBackend& backend) {
  std::vector<std::tuple<std::string, const AttributeSpec*, Json>> targets;
  collect_conditions(schema.root(), candidate.values, "", targets);
  std::vector<Finding> out;
  for (const auto& [path, node, value] : targets) {
    const ChatResponse r = call(backend, render_condition_prompt(path, *node->condition, value));
    const auto verdict = prompts::tagged_block(r.text, "verdict");
    std::string v = verdict ? text::utf8_encode(text::case_fold(text::utf8_decode(text::trim(*verdict))))
                            : "";
    if (v != "yes") {
      out.push_back({Stage::kCondition, path, FindingCode::kConditionUnsatisfied,
                     verdict ? "condition unsatisfied" : "condition unsatisfied (no verdict given)",
                     std::optional<Json>(value)});
    }
  }
  return out;
}

ExtractionOutcome extract(const ExtractionRequest& request, ModelBackend& backend,
                          ModelBackend* condition_backend) {
  if (request.max_retries < 0 || request.max_retries > kMaxRetriesCap) {
    throw Error(ErrorCode::kPrecondition, "",
                "max_retries must be between 0 and " + std::to_string(kMaxRetriesCap));
  }
  ExtractionOutcome outcome;
  double engine_ms = 0;
  double backend_ms = 0;
  auto t = Clock::now();

  const std::string base = render_base_prompt(request.schema, request.source_text);
  std::string prompt = base;
  bool condition_warned = false;

  for (int k = 0; k <= request.max_retries; ++k) {
    Attempt attempt;
    attempt.prompt = prompt;
    engine_ms += ms_since(t);
    const ChatResponse response = call(backend, prompt);
    t = Clock::now();
    backend_ms += response.latency_ms;
    attempt.raw_response = response.text;
    attempt.latency_ms = response.latency_ms;

    std::string note;
    try {
      attempt.candidate = parse_response(response.text, request.schema, request.source_text);
      attempt.report = validate(*attempt.candidate, request.schema);
      if (request.llm_condition_check) {
        if (condition_backend) {
          std::vector<Finding> findings =
              llm_condition_stage(*attempt.candidate, request.schema, *condition_backend);
          attempt.report->stages.push_back(make_stage(Stage::kCondition, std::move(findings)));
        } else if (!condition_warned) {
          outcome.warnings.push_back("condition check skipped: no condition backend");
          condition_warned = true;
        }
      }
      if (attempt.report->passed()) {
        outcome.final = attempt.candidate;
        outcome.attempts.push_back(std::move(attempt));
        break;
      }
      if (request.reflection_enabled) {
        attempt.reflection = build_reflection(*attempt.report, request.schema);
        note = attempt.reflection->text;
      } else {
        note = kNaiveRetryLine;
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kMissingTags && e.code() != ErrorCode::kMalformedPayload &&
          e.code() != ErrorCode::kShapeViolation) {
        throw;
      }
      attempt.candidate.reset();
      attempt.report.reset();
      attempt.parse_error = e.what();
      note = request.reflection_enabled ? parse_failure_note(e) : kNaiveRetryLine;
    }
    if (k < request.max_retries) {
      attempt.retry_note = note;
      prompt = base + "\n\nYour previous answer:\n" + previous_answer(response.text) + "\n\n" + note;
    }
    outcome.attempts.push_back(std::move(attempt));
  }

  outcome.retries_used = static_cast<int>(outcome.attempts.size()) - 1;
  if (!outcome.final) {
    const Attempt& last = outcome.attempts.back();
    outcome.failure = ExtractionFailure{
        last.parse_error ? *last.parse_error
                         : "validation failed after " + std::to_string(outcome.attempts.size()) +
                               " attempt(s)",
        last.report};
  }
  engine_ms += ms_since(t);
  outcome.wall_time_ms = engine_ms + backend_ms;
  return outcome;
}

Json to_json(const Attempt& a) {
  Json j = {{"raw_response", a.raw_response}, {"latency_ms", a.latency_ms}};
  j["values"] = a.candidate ? a.candidate->values : Json(nullptr);
  if (a.report) j["report"] = to_json(*a.report);
  if (a.parse_error) j["parse_error"] = *a.parse_error;
  if (a.reflection) j["reflection"] = a.reflection->text;
  return j;
}

Json to_json(const ExtractionOutcome& o) {
  Json attempts = Json::array();
  for (const Attempt& a : o.attempts) attempts.push_back(to_json(a));
  Json j = {{"status", o.ok() ? "pass" : "fail"},
            {"retries_used", o.retries_used},
            {"attempts", std::move(attempts)}};
  j["values"] = o.final ? o.final->values : Json(nullptr);
  if (o.failure) j["failure"] = o.failure->reason;
  if (!o.warnings.empty()) j["warnings"] = o.warnings;
  return j;
}

}  // namespace sift
