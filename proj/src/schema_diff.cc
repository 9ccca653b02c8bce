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

#include "sift/schema_diff.h"

#include <algorithm>
#include <set>

namespace sift {
namespace {

bool is_container(Kind k) { return k == Kind::kObject || k == Kind::kArray; }

Json local_fragment(const AttributeSpec& spec) {
  Json j = to_json(spec);
  j.erase("properties");
  j.erase("items");
  return j;
}

void walk(const AttributeSpec* before, const AttributeSpec* after, const std::string& path,
          std::vector<SchemaChange>& out) {
  if (!before && !after) return;
  if (!before || !after) {
    out.push_back({path, DiffCategory::kStructuralReorganization,
                   before ? std::optional<Json>(to_json(*before)) : std::nullopt,
                   after ? std::optional<Json>(to_json(*after)) : std::nullopt});
    return;
  }
  if (before->kind != after->kind && (is_container(before->kind) || is_container(after->kind))) {
    out.push_back({path, DiffCategory::kStructuralReorganization, to_json(*before),
                   to_json(*after)});
    return;
  }

  std::optional<DiffCategory> category;
  if (before->pattern != after->pattern) {
    category = DiffCategory::kPatternRuleAddition;
  } else if (before->enum_values != after->enum_values ||
             before->min_length != after->min_length ||
             before->max_length != after->max_length || before->required != after->required ||
             before->condition != after->condition || before->date_spec != after->date_spec) {
    category = DiffCategory::kValidationRuleAddition;
  } else if (before->description != after->description || before->title != after->title ||
             before->display_name != after->display_name) {
    category = DiffCategory::kDescriptionEnhancement;
  } else if (before->kind != after->kind) {
    category = DiffCategory::kOther;
  }
  if (category) {
    out.push_back({path, *category, local_fragment(*before), local_fragment(*after)});
  }

  std::set<std::string> names;
  for (const AttributeSpec& p : before->properties) names.insert(p.name);
  for (const AttributeSpec& p : after->properties) names.insert(p.name);
  for (const std::string& name : names) {
    walk(before->property(name), after->property(name), path_join(path, name), out);
  }
  walk(before->items(), after->items(), path_join(path, "*"), out);
}

}  // namespace

std::string_view diff_category_name(DiffCategory category) {
  switch (category) {
    case DiffCategory::kDescriptionEnhancement: return "DescriptionEnhancement";
    case DiffCategory::kStructuralReorganization: return "StructuralReorganization";
    case DiffCategory::kValidationRuleAddition: return "ValidationRuleAddition";
    case DiffCategory::kPatternRuleAddition: return "PatternRuleAddition";
    case DiffCategory::kOther: return "Other";
  }
  return "Other";
}

std::optional<DiffCategory> diff_category_from_name(std::string_view name) {
  for (DiffCategory c : {DiffCategory::kDescriptionEnhancement,
                         DiffCategory::kStructuralReorganization,
                         DiffCategory::kValidationRuleAddition,
                         DiffCategory::kPatternRuleAddition, DiffCategory::kOther}) {
    if (diff_category_name(c) == name) return c;
  }
  return std::nullopt;
}

SchemaDiff diff_schemas(const SchemaDoc& before, const SchemaDoc& after) {
  SchemaDiff diff;
  walk(&before.root(), &after.root(), "/", diff.changes);
  std::sort(diff.changes.begin(), diff.changes.end(),
            [](const SchemaChange& a, const SchemaChange& b) { return a.path < b.path; });
  return diff;
}

std::map<DiffCategory, double> diff_category_histogram(const std::vector<SchemaDiff>& diffs) {
  std::map<DiffCategory, size_t> counts;
  size_t total = 0;
  for (const SchemaDiff& d : diffs) {
    for (const SchemaChange& c : d.changes) {
      ++counts[c.category];
      ++total;
    }
  }
  std::map<DiffCategory, double> out;
  for (const auto& [category, n] : counts) {
    out[category] = static_cast<double>(n) / static_cast<double>(total);
  }
  return out;
}

Json to_json(const SchemaDiff& diff) {
  Json arr = Json::array();
  for (const SchemaChange& c : diff.changes) {
    Json j = {{"path", c.path}, {"category", std::string(diff_category_name(c.category))}};
    j["before"] = c.before ? *c.before : Json();
    j["after"] = c.after ? *c.after : Json();
    arr.push_back(std::move(j));
  }
  return arr;
}

}  // namespace sift
