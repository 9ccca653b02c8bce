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

#include "sift/candidate.h"

#include "sift/error.h"

namespace sift {

std::optional<std::string> find_shape_violation(const Json& value, const AttributeSpec& node,
                                                const std::string& path) {
  if (value.is_object()) {
    if (node.kind != Kind::kObject) {
      if (value.empty()) return std::nullopt;
      return path_join(path, value.begin().key());
    }
    for (const auto& [key, child] : value.items()) {
      const AttributeSpec* spec = node.property(key);
      const std::string child_path = path_join(path, key);
      if (!spec) return child_path;
      if (auto bad = find_shape_violation(child, *spec, child_path)) return bad;
    }
    return std::nullopt;
  }
  if (value.is_array()) {
    if (node.kind != Kind::kArray || !node.items()) {
      if (value.empty()) return std::nullopt;
      return path_join(path, size_t{0});
    }
    for (size_t i = 0; i < value.size(); ++i) {
      if (auto bad = find_shape_violation(value[i], *node.items(), path_join(path, i))) return bad;
    }
  }
  return std::nullopt;
}

void check_shape(const Json& values, const SchemaDoc& schema) {
  if (!values.is_object()) {
    throw Error(ErrorCode::kShapeViolation, "", "candidate root must be a JSON object");
  }
  if (auto bad = find_shape_violation(values, schema.root())) {
    throw Error(ErrorCode::kShapeViolation, *bad, "path is not defined by the schema");
  }
}

const AttributeSpec* spec_at(const AttributeSpec& root, std::string_view instance_path) {
  const AttributeSpec* node = &root;
  for (const std::string& token : path_tokens(instance_path)) {
    if (node->kind == Kind::kObject) {
      node = node->property(token);
    } else if (node->kind == Kind::kArray) {
      node = node->items();
    } else {
      return nullptr;
    }
    if (!node) return nullptr;
  }
  return node;
}

}  // namespace sift
