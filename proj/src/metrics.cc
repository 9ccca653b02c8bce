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


#include "sift/metrics.h"

#include <algorithm>
#include <cmath>

#include "sift/text.h"

namespace sift {
namespace {

bool absent(const Json* v) { return v == nullptr || v->is_null(); }

std::optional<double> as_number(const Json& v) {
  if (v.is_number()) return v.get<double>();
  if (!v.is_string()) return std::nullopt;
  const std::string s = text::trim(v.get<std::string>());
  if (s.empty()) return std::nullopt;
  try {
    const Json parsed = Json::parse(s);
    if (parsed.is_number()) return parsed.get<double>();
  } catch (const Json::parse_error&) {
  }
  return std::nullopt;
}

const Json* child(const Json* v, const std::string& key) {
  if (v && v->is_object()) {
    auto it = v->find(key);
    if (it != v->end()) return &*it;
  }
  return nullptr;
}

const Json* element(const Json* v, size_t i) {
  if (v && v->is_array() && i < v->size()) return &(*v)[i];
  return nullptr;
}

struct Walker {
  CompareResult result;

  void leaf(const Json* e, const Json* a, const std::string& path, bool required) {
    if (e == nullptr && a == nullptr) return;
    FieldStatus status;
    if (absent(e) && absent(a)) {
      status = FieldStatus::kMatch;
    } else if (absent(a)) {
      status = FieldStatus::kMissing;
    } else if (absent(e)) {
      status = FieldStatus::kSpurious;
    } else {
      status = leaf_equal(*e, *a) ? FieldStatus::kMatch : FieldStatus::kMismatch;
    }
    result.per_field[path.empty() ? "/" : path] = status;
    if (status == FieldStatus::kSpurious) result.correct = false;
    if (required && (status == FieldStatus::kMismatch || status == FieldStatus::kMissing)) {
      result.correct = false;
    }
  }

  void walk(const AttributeSpec& node, const Json* e, const Json* a, const std::string& path,
            bool required) {
    const bool e_obj = e && e->is_object();
    const bool a_obj = a && a->is_object();
    if (node.kind == Kind::kObject && (e_obj || a_obj) && (e_obj || absent(e)) &&
        (a_obj || absent(a))) {
      for (const AttributeSpec& p : node.properties) {
        const bool req = required && (node.required.empty() || node.is_required(p.name));
        walk(p, child(e, p.name), child(a, p.name), path_join(path, p.name), req);
      }
      return;
    }
    const bool e_arr = e && e->is_array();
    const bool a_arr = a && a->is_array();
    if (node.kind == Kind::kArray && node.items() && (e_arr || a_arr) && (e_arr || absent(e)) &&
        (a_arr || absent(a))) {
      const size_t n = std::max(e_arr ? e->size() : 0, a_arr ? a->size() : 0);
      if (n == 0) {
        leaf(e, a, path, required);
        return;
      }
      for (size_t i = 0; i < n; ++i) {
        walk(*node.items(), element(e, i), element(a, i), path_join(path, i), required);
      }
      return;
    }
    leaf(e, a, path, required);
  }
};

}  // namespace

std::string_view field_status_name(FieldStatus status) {
  switch (status) {
    case FieldStatus::kMatch: return "match";
    case FieldStatus::kMismatch: return "mismatch";
    case FieldStatus::kMissing: return "missing";
    case FieldStatus::kSpurious: return "spurious";
  }
  return "";
}

bool leaf_equal(const Json& expected, const Json& actual) {
  if (expected.is_null() || actual.is_null()) return expected.is_null() && actual.is_null();
  if (expected.is_number() || actual.is_number()) {
    const auto x = as_number(expected);
    const auto y = as_number(actual);
    return x && y && *x == *y;
  }
  if (expected.is_string() && actual.is_string()) {
    return text::trim(expected.get<std::string>()) == text::trim(actual.get<std::string>());
  }
  return expected == actual;
}

CompareResult strict_compare(const Json& expected, const Json& actual, const SchemaDoc& schema) {
  Walker w;
  w.walk(schema.root(), &expected, &actual, "", true);
  return w.result;
}

Json to_json(const CompareResult& r) {
  Json fields = Json::object();
  for (const auto& [path, status] : r.per_field) fields[path] = std::string(field_status_name(status));
  return {{"correct", r.correct}, {"per_field", std::move(fields)}};
}

}  // namespace sift
