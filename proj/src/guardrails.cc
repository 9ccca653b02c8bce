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

#include "sift/guardrails.h"

#include <cmath>
#include <functional>
#include <sstream>

#include "sift/dates.h"
#include "sift/error.h"
#include "sift/text.h"

namespace sift {
namespace {

using LeafFn = std::function<void(const AttributeSpec&, const Json&, const std::string&)>;

// Calls `fn` for every value that is not descended into: scalars, nulls and
// containers whose kind disagrees with the schema node.
void for_each_leaf(const AttributeSpec& node, const Json& value, const std::string& path,
                   const LeafFn& fn) {
  if (node.kind == Kind::kObject && value.is_object()) {
    for (const auto& [key, child] : value.items()) {
      if (const AttributeSpec* spec = node.property(key)) {
        for_each_leaf(*spec, child, path_join(path, key), fn);
      }
    }
    return;
  }
  if (node.kind == Kind::kArray && value.is_array() && node.items()) {
    for (size_t i = 0; i < value.size(); ++i) {
      for_each_leaf(*node.items(), value[i], path_join(path, i), fn);
    }
    return;
  }
  fn(node, value, path);
}

void collect_missing(const AttributeSpec& node, const Json& value, const std::string& path,
                     std::vector<Finding>& out) {
  if (node.kind == Kind::kObject && value.is_object()) {
    for (const std::string& key : node.required) {
      if (!value.contains(key)) {
        out.push_back({Stage::kMissingAttribute, path_join(path, key),
                       FindingCode::kMissingRequired,
                       "required attribute \"" + key + "\" is absent", std::nullopt});
      }
    }
    for (const auto& [key, child] : value.items()) {
      if (const AttributeSpec* spec = node.property(key)) {
        collect_missing(*spec, child, path_join(path, key), out);
      }
    }
  } else if (node.kind == Kind::kArray && value.is_array() && node.items()) {
    for (size_t i = 0; i < value.size(); ++i) {
      collect_missing(*node.items(), value[i], path_join(path, i), out);
    }
  }
}

std::string json_type_name(const Json& v) {
  if (v.is_null()) return "null";
  if (v.is_boolean()) return "boolean";
  if (v.is_number_integer()) return "integer";
  if (v.is_number()) return "number";
  if (v.is_string()) return "string";
  if (v.is_array()) return "array";
  return "object";
}

bool kind_matches(Kind kind, const Json& v) {
  switch (kind) {
    case Kind::kString: return v.is_string();
    case Kind::kNumber: return v.is_number();
    case Kind::kInteger:
      if (v.is_number_integer()) return true;
      if (v.is_number_float()) {
        const double d = v.get<double>();
        return std::isfinite(d) && d == std::floor(d);
      }
      return false;
    case Kind::kBoolean: return v.is_boolean();
    case Kind::kObject: return v.is_object();
    case Kind::kArray: return v.is_array();
  }
  return false;
}

std::string quote(std::string_view s) { return Json(std::string(s)).dump(); }

std::string number_digits(const Json& number) {
  std::string rendered;
  if (number.is_number_float()) {
    const double d = number.get<double>();
    if (std::isfinite(d) && d == std::floor(d) && std::fabs(d) < 1e15) {
      rendered = std::to_string(static_cast<long long>(d));
    } else {
      rendered = number.dump();
    }
  } else {
    rendered = number.dump();
  }
  std::string digits;
  for (char c : rendered) {
    if (c == 'e' || c == 'E') break;
    if (c >= '0' && c <= '9') digits.push_back(c);
  }
  return digits;
}

bool is_digit_separator(char32_t c) {
  return c == U',' || c == U'.' || c == U' ' || c == U'\'' || c == 0xA0 || c == 0x202F ||
         c == 0x2009;
}

}  // namespace

std::string_view stage_name(Stage stage) {
  switch (stage) {
    case Stage::kMissingAttribute: return "MissingAttribute";
    case Stage::kGrounding: return "Grounding";
    case Stage::kRuleCompliance: return "RuleCompliance";
    case Stage::kCondition: return "Condition";
  }
  return "";
}

std::string_view finding_code_name(FindingCode code) {
  switch (code) {
    case FindingCode::kMissingRequired: return "MissingRequired";
    case FindingCode::kNotGrounded: return "NotGrounded";
    case FindingCode::kPatternMismatch: return "PatternMismatch";
    case FindingCode::kLengthViolation: return "LengthViolation";
    case FindingCode::kEnumViolation: return "EnumViolation";
    case FindingCode::kDateFormatViolation: return "DateFormatViolation";
    case FindingCode::kTypeMismatch: return "TypeMismatch";
    case FindingCode::kConditionUnsatisfied: return "ConditionUnsatisfied";
  }
  return "";
}

std::optional<FindingCode> finding_code_from_name(std::string_view name) {
  for (int i = 0; i <= static_cast<int>(FindingCode::kConditionUnsatisfied); ++i) {
    auto code = static_cast<FindingCode>(i);
    if (finding_code_name(code) == name) return code;
  }
  return std::nullopt;
}

Stage stage_of(FindingCode code) {
  switch (code) {
    case FindingCode::kMissingRequired: return Stage::kMissingAttribute;
    case FindingCode::kNotGrounded: return Stage::kGrounding;
    case FindingCode::kConditionUnsatisfied: return Stage::kCondition;
    default: return Stage::kRuleCompliance;
  }
}

bool ValidationReport::passed() const {
  for (const StageResult& s : stages) {
    if (!s.passed) return false;
  }
  return true;
}

std::vector<Finding> ValidationReport::findings() const {
  std::vector<Finding> all;
  for (const StageResult& s : stages) all.insert(all.end(), s.findings.begin(), s.findings.end());
  return all;
}

StageResult make_stage(Stage stage, std::vector<Finding> findings) {
  const bool passed = findings.empty();
  return {stage, passed, std::move(findings)};
}

std::string string_form(const Json& value) {
  if (value.is_string()) return value.get<std::string>();
  return canonical_dump(value);
}

bool text_grounded(std::string_view value, std::string_view source) {
  const std::u32string needle = text::normalize_needle(value);
  if (needle.empty()) return true;
  return text::normalize_haystack(source).find(needle) != std::u32string::npos;
}

bool number_grounded(const Json& number, std::string_view source) {
  const std::string digits = number_digits(number);
  if (digits.empty()) return true;
  const std::u32string src = text::utf8_decode(source);
  std::string stream;
  stream.reserve(src.size());
  for (size_t i = 0; i < src.size(); ++i) {
    const char32_t c = src[i];
    if (is_digit_separator(c) && i > 0 && i + 1 < src.size() && src[i - 1] >= U'0' &&
        src[i - 1] <= U'9' && src[i + 1] >= U'0' && src[i + 1] <= U'9') {
      continue;
    }
    // Non-ASCII codepoints only need to break digit runs.
    stream.push_back(c < 0x80 ? static_cast<char>(c) : ' ');
  }
  return stream.find(digits) != std::string::npos;
}

bool date_grounded(std::string_view value, const DateSpec& spec, std::string_view source) {
  std::vector<dates::Format> formats;
  for (const std::string& f : spec.allowed_formats) {
    if (auto parsed = dates::parse_format(f, spec.delimiter)) formats.push_back(*parsed);
  }
  const std::u32string wanted = text::case_fold(text::utf8_decode(text::trim(value)));
  for (const dates::Date& d : dates::find_dates(source, formats)) {
    for (const dates::Format& f : formats) {
      if (auto rendered = dates::render(d, f)) {
        if (text::case_fold(text::utf8_decode(*rendered)) == wanted) return true;
      }
    }
  }
  return false;
}

std::vector<Finding> check_missing_attributes(const ExtractionCandidate& candidate,
                                              const SchemaDoc& schema) {
  std::vector<Finding> out;
  collect_missing(schema.root(), candidate.values, "", out);
  return out;
}

std::vector<Finding> check_grounding(const ExtractionCandidate& candidate,
                                     const SchemaDoc& schema) {
  std::vector<Finding> out;
  for_each_leaf(schema.root(), candidate.values, "",
                [&](const AttributeSpec& node, const Json& value, const std::string& path) {
                  bool grounded = true;
                  if (value.is_string()) {
                    const auto& s = value.get_ref<const std::string&>();
                    grounded = text_grounded(s, candidate.source_text) ||
                               (node.date_spec &&
                                date_grounded(s, *node.date_spec, candidate.source_text));
                  } else if (value.is_number()) {
                    grounded = number_grounded(value, candidate.source_text);
                  }
                  if (!grounded) {
                    out.push_back({Stage::kGrounding, path, FindingCode::kNotGrounded,
                                   "value " + value.dump() + " does not occur in the input text",
                                   std::optional<Json>(value)});
                  }
                });
  return out;
}

std::vector<Finding> check_rules(const ExtractionCandidate& candidate, const SchemaDoc& schema) {
  std::vector<Finding> out;
  for_each_leaf(
      schema.root(), candidate.values, "",
      [&](const AttributeSpec& node, const Json& value, const std::string& path) {
        if (value.is_null()) return;
        const auto add = [&](FindingCode code, std::string detail) {
          out.push_back({Stage::kRuleCompliance, path, code, std::move(detail), std::optional<Json>(value)});
        };
        if (!kind_matches(node.kind, value)) {
          add(FindingCode::kTypeMismatch, "expected " + std::string(kind_name(node.kind)) +
                                              ", got " + json_type_name(value));
        }
        if (node.enum_values) {
          bool member = false;
          for (const Json& e : *node.enum_values) member = member || e == value;
          if (!member) {
            add(FindingCode::kEnumViolation, "value " + value.dump() + " is not one of " +
                                                 Json(*node.enum_values).dump());
          }
        }
        const std::string form = string_form(value);
        if (node.compiled_pattern() && !node.compiled_pattern()->full_match(form)) {
          add(FindingCode::kPatternMismatch,
              "value " + quote(form) + " does not fully match pattern " + quote(*node.pattern));
        }
        if (node.min_length || node.max_length) {
          const auto len = static_cast<int64_t>(text::utf8_decode(form).size());
          if (node.min_length && len < *node.min_length) {
            add(FindingCode::kLengthViolation, "length " + std::to_string(len) +
                                                   " is below minLength " +
                                                   std::to_string(*node.min_length));
          } else if (node.max_length && len > *node.max_length) {
            add(FindingCode::kLengthViolation, "length " + std::to_string(len) +
                                                   " exceeds maxLength " +
                                                   std::to_string(*node.max_length));
          }
        }
        if (node.date_spec) {
          bool ok = false;
          for (const std::string& f : node.date_spec->allowed_formats) {
            auto fmt = dates::parse_format(f, node.date_spec->delimiter);
            ok = ok || (fmt && dates::matches(form, *fmt));
          }
          if (!ok) {
            add(FindingCode::kDateFormatViolation,
                "value " + quote(form) + " matches none of the allowed date formats " +
                    Json(node.date_spec->allowed_formats).dump() + " with delimiter " +
                    quote(node.date_spec->delimiter));
          }
        }
      });
  return out;
}

ValidationReport validate(const ExtractionCandidate& candidate, const SchemaDoc& schema) {
  check_shape(candidate.values, schema);
  ValidationReport report;
  report.stages.push_back(
      make_stage(Stage::kMissingAttribute, check_missing_attributes(candidate, schema)));
  report.stages.push_back(make_stage(Stage::kGrounding, check_grounding(candidate, schema)));
  report.stages.push_back(make_stage(Stage::kRuleCompliance, check_rules(candidate, schema)));
  return report;
}

namespace {

std::string demand_for(const Finding& f, const AttributeSpec* node) {
  std::string key = path_tokens(f.path).empty() ? "" : path_tokens(f.path).back();
  switch (f.code) {
    case FindingCode::kMissingRequired:
      return quote(key) + " is a required attribute and must appear in <attribute_values>";
    case FindingCode::kNotGrounded:
      return "every extracted value must appear in the input text exactly as written";
    case FindingCode::kTypeMismatch:
      return "the value must be of type " +
             std::string(node ? kind_name(node->kind) : std::string_view("?"));
    case FindingCode::kEnumViolation:
      return "the value must be one of " +
             (node && node->enum_values ? Json(*node->enum_values).dump() : std::string("[]"));
    case FindingCode::kPatternMismatch:
      return "the whole value must match the pattern " +
             quote(node && node->pattern ? *node->pattern : "");
    case FindingCode::kLengthViolation: {
      std::string d = "the value length must be";
      if (node && node->min_length) d += " at least " + std::to_string(*node->min_length);
      if (node && node->min_length && node->max_length) d += " and";
      if (node && node->max_length) d += " at most " + std::to_string(*node->max_length);
      return d + " characters";
    }
    case FindingCode::kDateFormatViolation:
      return "the value must be a date written as one of " +
             (node && node->date_spec ? Json(node->date_spec->allowed_formats).dump()
                                      : std::string("[]")) +
             " using the delimiter " +
             quote(node && node->date_spec ? node->date_spec->delimiter : "");
    case FindingCode::kConditionUnsatisfied:
      return "the value must satisfy the condition " +
             quote(node && node->condition ? *node->condition : "");
  }
  return "";
}

std::string correction_for(const Finding& f) {
  switch (f.code) {
    case FindingCode::kMissingRequired:
      return "Provide a value for " + f.path +
             " extracted from the input, or set it explicitly to null if the input does not "
             "contain it.";
    case FindingCode::kNotGrounded:
      return "Replace the value at " + f.path +
             " with the text exactly as it occurs in the input; do not expand, translate or "
             "invent values. Use null if the input does not contain it.";
    case FindingCode::kTypeMismatch:
      return "Emit the value at " + f.path + " with the schema's type.";
    case FindingCode::kEnumViolation:
      return "Choose one of the allowed values for " + f.path + ", or null if none applies.";
    case FindingCode::kPatternMismatch:
      return "Rewrite the value at " + f.path +
             " so that the whole value matches the pattern; remove any text the description "
             "does not ask for.";
    case FindingCode::kLengthViolation:
      return "Adjust the value at " + f.path + " to respect the length limits.";
    case FindingCode::kDateFormatViolation:
      return "Rewrite the date at " + f.path + " in one of the allowed formats.";
    case FindingCode::kConditionUnsatisfied:
      return "Extract only a value for " + f.path +
             " that satisfies the condition, or null if no value does.";
  }
  return "";
}

}  // namespace

ReflectionNote build_reflection(const ValidationReport& report, const SchemaDoc& schema) {
  if (report.passed()) {
    throw Error(ErrorCode::kNothingToReflect, "", "the report passed every stage");
  }
  const std::vector<Finding> findings = report.findings();
  std::ostringstream out;
  out << "Your previous answer failed validation with " << findings.size()
      << (findings.size() == 1 ? " issue" : " issues")
      << ". Correct every issue below and answer again in the same format.\n";
  size_t n = 0;
  for (const Finding& f : findings) {
    const AttributeSpec* node = spec_at(schema.root(), f.path);
    out << ++n << ". [" << stage_name(f.stage) << "] " << finding_code_name(f.code) << " at "
        << f.path << "\n";
    if (f.offending_value) {
      out << "   Observed: " << canonical_dump(*f.offending_value) << " (" << f.detail << ")\n";
    } else {
      out << "   Observed: " << f.detail << "\n";
    }
    out << "   Schema demands: " << demand_for(f, node) << "\n";
    if (node && node->description) out << "   Description: " << quote(*node->description) << "\n";
    if (node && node->condition && f.code != FindingCode::kConditionUnsatisfied) {
      out << "   Condition: " << quote(*node->condition) << "\n";
    }
    out << "   Correction: " << correction_for(f) << "\n";
  }
  return {out.str(), findings.size(), report_id(report)};
}

Json to_json(const Finding& f) {
  Json j = {{"stage", std::string(stage_name(f.stage))},
            {"path", f.path},
            {"code", std::string(finding_code_name(f.code))},
            {"detail", f.detail}};
  if (f.offending_value) j["value"] = *f.offending_value;
  return j;
}

Json to_json(const ValidationReport& report) {
  Json stages = Json::array();
  for (const StageResult& s : report.stages) {
    Json findings = Json::array();
    for (const Finding& f : s.findings) findings.push_back(to_json(f));
    stages.push_back({{"stage", std::string(stage_name(s.stage))},
                      {"status", s.passed ? "pass" : "fail"},
                      {"findings", std::move(findings)}});
  }
  return {{"overall", report.passed() ? "pass" : "fail"}, {"stages", std::move(stages)}};
}

std::string report_id(const ValidationReport& report) {
  return stable_hash(canonical_dump(to_json(report)));
}

}  // namespace sift
