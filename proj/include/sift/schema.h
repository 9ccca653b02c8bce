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

#ifndef SIFT_SCHEMA_H_
#define SIFT_SCHEMA_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nlohmann/json.hpp"
#include "sift/regex.h"

namespace sift {

using Json = nlohmann::json;

enum class Kind { kString, kNumber, kInteger, kBoolean, kObject, kArray };

std::string_view kind_name(Kind kind);

struct DateSpec {
  std::vector<std::string> allowed_formats;
  std::string delimiter;  // exactly one codepoint

  bool operator==(const DateSpec&) const = default;
};

// One node of the restricted schema dialect.
//
// Allowed keys are name, description, type, enum, properties, title,
// pattern, minLength, maxLength, condition, required, items,
// allowed_date_formats and delimiter. Keys matching if/else/anyOf/allOf in
// any letter case are rejected outright.
class AttributeSpec {
 public:
  AttributeSpec() = default;
  AttributeSpec(const AttributeSpec& other);
  AttributeSpec& operator=(const AttributeSpec& other);
  AttributeSpec(AttributeSpec&&) noexcept = default;
  AttributeSpec& operator=(AttributeSpec&&) noexcept = default;
  ~AttributeSpec() = default;

  // Property key under the parent object. Empty for the root and for array
  // item specs.
  std::string name;
  Kind kind = Kind::kString;
  std::optional<std::string> description;
  std::optional<std::string> title;
  std::optional<std::string> display_name;  // the dialect's "name" key
  std::optional<std::vector<Json>> enum_values;
  std::optional<std::string> pattern;
  std::optional<int64_t> min_length;
  std::optional<int64_t> max_length;
  // Natural-language constraint; stored verbatim and never evaluated here.
  std::optional<std::string> condition;
  std::optional<DateSpec> date_spec;
  // Object children, kept sorted by name.
  std::vector<AttributeSpec> properties;
  // Sorted, duplicate-free subset of property names.
  std::vector<std::string> required;

  const AttributeSpec* items() const { return items_.get(); }
  void set_items(AttributeSpec spec);
  void clear_items() { items_.reset(); }

  const AttributeSpec* property(std::string_view key) const;
  bool is_required(std::string_view key) const;

  // Compiled form of `pattern`; null when there is no pattern. Set by the
  // parser.
  const Regex* compiled_pattern() const { return compiled_.get(); }

  friend bool operator==(const AttributeSpec& a, const AttributeSpec& b);

 private:
  friend class SchemaParser;

  std::unique_ptr<AttributeSpec> items_;
  std::shared_ptr<const Regex> compiled_;
};

// A validated schema document. Immutable once built.
class SchemaDoc {
 public:
  const AttributeSpec& root() const { return *root_; }
  // Content hash of the canonical form; identifies the schema in reports.
  const std::string& version_tag() const { return version_tag_; }
  const std::optional<std::string>& task_hint() const { return task_hint_; }

  SchemaDoc with_task_hint(std::string hint) const;

  // Structural equality: compares the attribute trees only.
  friend bool operator==(const SchemaDoc& a, const SchemaDoc& b) {
    return *a.root_ == *b.root_;
  }

 private:
  friend class SchemaParser;
  SchemaDoc() = default;

  std::shared_ptr<const AttributeSpec> root_;
  std::string version_tag_;
  std::optional<std::string> task_hint_;
};

// Throws Error with MalformedDocument, ForbiddenKey, UnknownKey,
// InvalidPattern, InvalidBounds or InvalidSchema.
SchemaDoc parse_schema(std::string_view text);
SchemaDoc schema_from_json(const Json& doc);
// Validates a programmatically built tree by the same rules as the parser.
SchemaDoc make_schema(const AttributeSpec& root);

// Sorted keys, no insignificant whitespace, UTF-8 output, no trailing
// newline.
std::string canonical_serialize(const SchemaDoc& schema);
Json to_json(const AttributeSpec& spec);
inline Json to_json(const SchemaDoc& schema) { return to_json(schema.root()); }

// Canonical text of any JSON value, using the same rules as schemas.
std::string canonical_dump(const Json& value);

// JSON pointer helpers (RFC 6901 escaping).
std::string path_join(std::string_view base, std::string_view token);
std::string path_join(std::string_view base, size_t index);
std::vector<std::string> path_tokens(std::string_view pointer);

bool is_forbidden_key(std::string_view key);

// Hex FNV-1a 64 of the bytes.
std::string stable_hash(std::string_view bytes);

}  // namespace sift

#endif  // SIFT_SCHEMA_H_
