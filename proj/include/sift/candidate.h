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

#ifndef SIFT_CANDIDATE_H_
#define SIFT_CANDIDATE_H_

#include <optional>
#include <string>

#include "sift/schema.h"

namespace sift {

// A model's answer for one input: a JSON tree whose paths must all exist in
// the schema it was extracted against.
struct ExtractionCandidate {
  Json values = Json::object();
  std::string source_text;
  std::string schema_ref;  // SchemaDoc::version_tag()
};

// First candidate path with no counterpart in the schema, or nullopt.
//
// Object keys must be properties of an object-kinded node and array elements
// must sit under an array-kinded node. Scalars, nulls and empty containers
// never violate shape; a kind mismatch on them is a rule finding instead.
std::optional<std::string> find_shape_violation(const Json& value, const AttributeSpec& node,
                                                const std::string& path = "");

// Throws Error(ShapeViolation) unless `values` is an object whose paths all
// exist in the schema.
void check_shape(const Json& values, const SchemaDoc& schema);

// Schema node addressed by an instance path such as "/cars/0/model"; null
// when the path leaves the schema.
const AttributeSpec* spec_at(const AttributeSpec& root, std::string_view instance_path);

}  // namespace sift

#endif  // SIFT_CANDIDATE_H_
