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

#include <map>

#include "doctest.h"
#include "random_cases.h"
#include "sift/candidate.h"
#include "sift/metrics.h"
#include "test_util.h"

namespace sift {
namespace {

using testing::load_schema;
using testing::read_fixture;

SchemaDoc schema_of(const char* text) { return parse_schema(text); }

TEST_CASE("strict_compare matches the hand-scored five-sample fixture") {
  const Json fx = Json::parse(read_fixture("metrics/five_samples.json"));
  const SchemaDoc schema = schema_from_json(fx["schema"]);
  int correct = 0;
  for (const Json& s : fx["samples"]) {
    const CompareResult r = strict_compare(s["expected"], s["actual"], schema);
    CHECK(r.correct == s["correct"].get<bool>());
    std::map<std::string, std::string> got;
    for (const auto& [path, status] : r.per_field) got[path] = std::string(field_status_name(status));
    CHECK(Json(got).dump() == s["per_field"].dump());
    correct += r.correct ? 1 : 0;
  }
  CHECK(correct == 3);
}

TEST_CASE("price and model examples") {
  const SchemaDoc price = schema_of(R"j({"type":"object","properties":{"price":{"type":"string"}}})j");
  CHECK(strict_compare({{"price", "$19,995"}}, {{"price", "$19,995"}}, price).correct);

  const SchemaDoc model = load_schema("swde/model_optimized.json");
  const CompareResult r = strict_compare({{"model", "2010 Subaru Legacy"}},
                                         {{"model", "2010 Subaru Legacy 2.5 i 4dr Sedan"}}, model);
  CHECK_FALSE(r.correct);
  CHECK(r.per_field.at("/model") == FieldStatus::kMismatch);

  CHECK(strict_compare({{"model", nullptr}}, {{"model", nullptr}}, model).correct);
}

TEST_CASE("leaf equality") {
  CHECK(leaf_equal("  Livermore ", "Livermore"));
  CHECK_FALSE(leaf_equal("San Francisco", "San Fran"));
  CHECK_FALSE(leaf_equal("livermore", "Livermore"));
  CHECK(leaf_equal(12, 12.0));
  CHECK(leaf_equal("12.50", 12.5));
  CHECK(leaf_equal(nullptr, nullptr));
  CHECK_FALSE(leaf_equal("a  b", "a b"));
}

TEST_CASE("optional mismatch does not flip correctness, spurious does") {
  const SchemaDoc s = schema_of(
      R"j({"type":"object","required":["a"],"properties":{"a":{"type":"string"},"b":{"type":"string"}}})j");
  CHECK(strict_compare({{"a", "x"}, {"b", "y"}}, {{"a", "x"}, {"b", "z"}}, s).correct);
  CHECK(strict_compare({{"a", "x"}, {"b", "y"}}, {{"a", "x"}}, s).correct);
  CHECK_FALSE(strict_compare({{"a", "x"}, {"b", nullptr}}, {{"a", "x"}, {"b", "z"}}, s).correct);
  CHECK_FALSE(strict_compare({{"a", "x"}}, {{"a", nullptr}}, s).correct);
}

TEST_CASE("nested arrays compare per element") {
  const SchemaDoc s = load_schema("swde/auto_iter5.json");
  const Json e = Json::parse(R"j({"price":[{"price":"$19,995"},{"price":"$20,995"}]})j");
  const Json a = Json::parse(R"j({"price":[{"price":"$19,995"}]})j");
  const CompareResult r = strict_compare(e, a, s);
  CHECK_FALSE(r.correct);
  CHECK(r.per_field.at("/price/0/price") == FieldStatus::kMatch);
  CHECK(r.per_field.at("/price/1/price") == FieldStatus::kMissing);
  CHECK(strict_compare(Json::parse(R"j({"price":[]})j"), Json::parse(R"j({"price":[]})j"), s).correct);
}

TEST_CASE("equal trees are correct regardless of field order") {
  testing::CaseGenerator gen(77);
  for (int i = 0; i < 300; ++i) {
    const Json raw = gen.random_schema();
    const SchemaDoc schema = schema_from_json(raw);
    const Json v = gen.random_candidate(raw, gen.random_source());
    if (find_shape_violation(v, schema.root())) continue;
    const Json reordered = Json::parse(v.dump());  // object keys re-sorted
    const CompareResult r = strict_compare(v, reordered, schema);
    CHECK(r.correct);
    for (const auto& [path, status] : r.per_field) CHECK(status == FieldStatus::kMatch);
  }
}

TEST_CASE("compare result json") {
  const SchemaDoc s = load_schema("swde/model_optimized.json");
  const Json j = to_json(strict_compare({{"model", "x"}}, {{"model", "y"}}, s));
  CHECK(j["correct"] == false);
  CHECK(j["per_field"]["/model"] == "mismatch");
}

}  // namespace
}  // namespace sift
