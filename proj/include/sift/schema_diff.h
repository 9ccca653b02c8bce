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

#ifndef SIFT_SCHEMA_DIFF_H_
#define SIFT_SCHEMA_DIFF_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sift/schema.h"

namespace sift {

enum class DiffCategory {
  kDescriptionEnhancement,
  kStructuralReorganization,
  kValidationRuleAddition,
  kPatternRuleAddition,
  kOther,
};

std::string_view diff_category_name(DiffCategory category);
std::optional<DiffCategory> diff_category_from_name(std::string_view name);

// Paths are attribute paths: "/" for the root, "/a/b" for nested
// properties and "/a/*" for the item spec of array "a".
struct SchemaChange {
  std::string path;
  DiffCategory category;
  std::optional<Json> before;
  std::optional<Json> after;

  bool operator==(const SchemaChange&) const = default;
};

struct SchemaDiff {
  std::vector<SchemaChange> changes;  // sorted by path, one entry per path

  bool empty() const { return changes.empty(); }
};

// Each changed path gets exactly one category. Added, removed or
// re-kinded subtrees are reported once at their top path. When a node has
// several local edits the category is picked in the order pattern,
// validation rule (enum, lengths, required, condition, date formats),
// description (description, title, name), other.
SchemaDiff diff_schemas(const SchemaDoc& before, const SchemaDoc& after);

// Share of each category over all changes; empty input gives an empty map.
std::map<DiffCategory, double> diff_category_histogram(const std::vector<SchemaDiff>& diffs);

Json to_json(const SchemaDiff& diff);

}  // namespace sift

#endif  // SIFT_SCHEMA_DIFF_H_
