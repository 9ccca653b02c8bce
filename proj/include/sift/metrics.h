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


#ifndef SIFT_METRICS_H_
#define SIFT_METRICS_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "sift/schema.h"

namespace sift {

enum class FieldStatus { kMatch, kMismatch, kMissing, kSpurious };

std::string_view field_status_name(FieldStatus status);

struct CompareResult {
  bool correct = true;
  // Leaf instance path -> status, for every leaf either side mentions.
  std::map<std::string, FieldStatus> per_field;
};

// Leaf equality: strings compare after trimming edge whitespace, case
// sensitive; numbers (and numeric strings against numbers) compare by
// value; null equals null and absent.
bool leaf_equal(const Json& expected, const Json& actual);

// Field-level comparison. A sample is correct when no required leaf is
// mismatched or missing and no leaf expected null carries a value. A leaf
// is required when every property on its path is required by its parent;
// an object with an empty `required` list counts all its properties as
// required.
CompareResult strict_compare(const Json& expected, const Json& actual, const SchemaDoc& schema);

Json to_json(const CompareResult& result);

}  // namespace sift

#endif  // SIFT_METRICS_H_
