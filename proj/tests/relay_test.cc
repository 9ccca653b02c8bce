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

#include "doctest.h"
#include "random_cases.h"
#include "sift/candidate.h"
#include "sift/relay.h"
#include "test_util.h"

namespace sift {
namespace {

using testing::load_schema;
using testing::read_fixture;

const char* const kFixtures[] = {"price_split", "rename", "model_split", "reservation"};

struct RelayFixture {
  SchemaDoc s_star;
  SchemaDoc s_user;
  std::vector<SamplePair> pairs;
  ScriptedPolicy policy;
  TransformProgram program;
};

RelayFixture relay_fixture(const std::string& name) {
  const std::string dir = "relay/" + name + "/";
  return {load_schema(dir + "s_star.json"), load_schema(dir + "s_user.json"),
          load_pairs(testing::fixture_path(dir + "pairs.jsonl")),
          ScriptedPolicy::from_json(Json::parse(read_fixture(dir + "policy.json"))),
          load_program(testing::fixture_path(dir + "program.json"))};
}

TransformProgram one_step(const Json& step) {
  return program_from_json(Json{{"steps", Json::array({step})}});
}

TEST_CASE("concat renders the price with thousands separators") {
  const RelayFixture f = relay_fixture("price_split");
  const Json out = apply_transform(f.program, {{"currency_symbol", "$"}, {"price_value", 19995}},
                                   f.s_user);
  CHECK(out == Json{{"price", "$19,995"}});
}

TEST_CASE("identity program returns the same tree") {
  const SchemaDoc s = load_schema("swde/auto_iter5.json");
  const Json v = Json::parse(
      R"j({"price":[{"price":"$19,995"}],"fuel_economy":[{"fuel":"20 city / 29 hwy"}],"engine_type":[]})j");
  CHECK(apply_transform({}, v, s) == v);

  testing::CaseGenerator gen(5);
  for (int i = 0; i < 200; ++i) {
    const Json raw = gen.random_schema();
    const SchemaDoc schema = schema_from_json(raw);
    const Json c = gen.random_candidate(raw, gen.random_source());
    if (find_shape_violation(c, schema.root())) continue;
    CHECK(apply_transform({}, c, schema) == c);
  }
}

TEST_CASE("split_regex fills groups") {
  const RelayFixture f = relay_fixture("model_split");
  const Json out = apply_transform(f.program, {{"model", "2010 Subaru Legacy"}}, f.s_user);
  CHECK(out == Json{{"year", "2010"}, {"rest", "Subaru Legacy"}});
  try {
    apply_transform(f.program, {{"model", "Subaru"}}, f.s_user);
    FAIL("expected StepFailure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kStepFailure);
    CHECK(e.path() == "/steps/0");
  }
  CHECK(apply_transform(f.program, {{"model", nullptr}}, f.s_user) ==
        Json{{"year", nullptr}, {"rest", nullptr}});
}

TEST_CASE("number formats") {
  CHECK(format_number(19995, "plain") == "19995");
  CHECK(format_number(19995, "thousands") == "19,995");
  CHECK(format_number(1250000, "thousands") == "1,250,000");
  CHECK(format_number(999, "thousands") == "999");
  CHECK(format_number(-1234567, "thousands") == "-1,234,567");
  CHECK(format_number(20500.5, "thousands") == "20,500.5");
  CHECK(format_number(19995.0, "plain") == "19995");
  CHECK(format_number(49.999, "fixed:2") == "50.00");
  CHECK(format_number(1234.5, "thousands_fixed:2") == "1,234.50");
  CHECK(format_number(2.5, "plain") == "2.5");
}

TEST_CASE("missing sources become null unless a constant set a default") {
  const SchemaDoc user = parse_schema(R"j({"type":"object","properties":{"a":{"type":"string"}}})j");
  const SchemaDoc star = parse_schema(R"j({"type":"object","properties":{"b":{"type":"string"}}})j");
  const TransformProgram rename = one_step({{"op", "move"}, {"src", "/b"}, {"dst", "/a"}});
  validate_program(rename, star, user);
  CHECK(apply_transform(rename, Json::object(), user) == Json{{"a", nullptr}});
  TransformProgram with_default = program_from_json(Json::parse(
      R"j({"steps":[{"op":"constant","dst":"/a","value":"none"},{"op":"move","src":"/b","dst":"/a"}]})j"));
  CHECK(apply_transform(with_default, Json::object(), user) == Json{{"a", "none"}});
  CHECK(apply_transform(with_default, Json{{"b", "x"}}, user) == Json{{"a", "x"}});
}

TEST_CASE("drop removes a passed-through path") {
  const SchemaDoc s = parse_schema(
      R"j({"type":"object","properties":{"a":{"type":"string"},"b":{"type":"string"}}})j");
  const TransformProgram p = one_step({{"op", "drop"}, {"src", "/b"}});
  CHECK(apply_transform(p, {{"a", "1"}, {"b", "2"}}, s) == Json{{"a", "1"}});
}

TEST_CASE("shape check on the result") {
  const SchemaDoc star = parse_schema(
      R"j({"type":"object","properties":{"o":{"type":"object","properties":{"x":{"type":"string"}}}}})j");
  const SchemaDoc user = parse_schema(R"j({"type":"object","properties":{"s":{"type":"string"}}})j");
  const TransformProgram p = one_step({{"op", "move"}, {"src", "/o"}, {"dst", "/s"}});
  try {
    apply_transform(p, Json::parse(R"j({"o":{"x":"1"}})j"), user);
    FAIL("expected StepFailure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kStepFailure);
    CHECK(e.path() == "/result");
  }
  const TransformProgram c =
      one_step({{"op", "concat"}, {"dst", "/s"}, {"template", "{/o}"}});
  CHECK_THROWS_AS(apply_transform(c, Json::parse(R"j({"o":{"x":"1"}})j"), user), Error);
  (void)star;
}

TEST_CASE("program validation") {
  const RelayFixture f = relay_fixture("price_split");
  const auto rejects = [&](const char* step) {
    try {
      validate_program(program_from_json(Json{{"steps", Json::array({Json::parse(step)})}}), f.s_star,
                       f.s_user);
    } catch (const Error& e) {
      return e.code() == ErrorCode::kProposalInvalid && e.path() == "/steps/0";
    }
    return false;
  };
  CHECK(rejects(R"j({"op":"move","src":"/nope","dst":"/price"})j"));
  CHECK(rejects(R"j({"op":"move","src":"/price_value","dst":"/nope"})j"));
  CHECK(rejects(R"j({"op":"concat","dst":"/price","template":"{/nope}"})j"));
  CHECK(rejects(R"j({"op":"concat","dst":"/price","template":"{/price_value|weird}"})j"));
  CHECK(rejects(R"j({"op":"concat","dst":"/price","template":"{/price_value"})j"));
  CHECK(rejects(R"j({"op":"split_regex","src":"/currency_symbol","pattern":"(a","groups":{"1":"/price"}})j"));
  CHECK(rejects(R"j({"op":"split_regex","src":"/currency_symbol","pattern":"(a)","groups":{"2":"/price"}})j"));
  CHECK(rejects(R"j({"op":"cast_number_to_string","src":"/price_value","dst":"/price","format":"fixed:x"})j"));
  CHECK(rejects(R"j({"op":"rename","src":"/price_value","dst":"/nope/price"})j"));
  CHECK_THROWS_AS(program_from_json(Json::parse(R"j({"steps":[{"op":"eval"}]})j")), Error);
  CHECK_THROWS_AS(program_from_json(Json::parse(R"j({"steps":[{"op":"move","src":"/a"}]})j")), Error);
  CHECK_THROWS_AS(program_from_json(Json::parse(R"j({"nosteps":1})j")), Error);
  CHECK_FALSE(rejects(R"j({"op":"concat","dst":"/price","template":"{{{/currency_symbol}}}"})j"));
}

TEST_CASE("program json round trip") {
  for (const char* name : kFixtures) {
    const RelayFixture f = relay_fixture(name);
    CHECK(program_from_json(to_json(f.program)) == f.program);
  }
}

TEST_CASE("sample pair generation") {
  const RelayFixture f = relay_fixture("price_split");
  ScriptedBackend b(f.policy);
  PairStats stats;
  const auto pairs = generate_sample_pairs(f.s_star, f.s_user, b, 8, 3, &stats);
  CHECK(pairs.size() == 8);
  CHECK(stats.skipped == 1);
  CHECK(pairs[0].expected_original == Json{{"price", "$19,995"}});
  CHECK(generate_sample_pairs(f.s_star, f.s_user, b, 3).size() == 3);
  try {
    generate_sample_pairs(f.s_star, f.s_user, b, 20, 2);
    FAIL("expected InsufficientPairs");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInsufficientPairs);
  }
}

TEST_CASE("proposals") {
  const RelayFixture f = relay_fixture("rename");
  ScriptedBackend b(f.policy);
  CHECK(propose_transform(f.s_star, f.s_user, f.pairs, b).steps ==
        std::vector<TransformStep>{{StepOp::kRename, "/vehicle_model", "/model", "", "", {}, nullptr, "plain"}});

  CountingBackend counting(std::make_shared<ScriptedBackend>(f.policy));
  const TransformProgram identity = propose_transform(f.s_user, f.s_user, f.pairs, counting);
  CHECK(identity.steps.empty());
  CHECK(counting.calls() == 0);

  const RelayFixture split = relay_fixture("model_split");
  ScriptedBackend sb(split.policy);
  try {
    propose_transform(split.s_star, split.s_user, split.pairs, sb);
    FAIL("expected ProposalInvalid");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kProposalInvalid);
  }
  CHECK_THROWS_AS(propose_transform(f.s_star, f.s_user, {}, b), Error);
}

TEST_CASE("repair adds the thousands format") {
  const RelayFixture f = relay_fixture("price_split");
  auto inner = std::make_shared<ScriptedBackend>(f.policy);
  CountingBackend b(inner);
  const TransformProgram first = propose_transform(f.s_star, f.s_user, f.pairs, b);
  CHECK(check_pairs(first, f.pairs, f.s_user).size() == 6);
  const TransformProgram fixed = verify_and_repair(first, f.s_star, f.s_user, f.pairs, b, 3);
  CHECK(b.calls() == 2);
  CHECK(fixed.steps == f.program.steps);

  CountingBackend again(inner);
  CHECK(verify_and_repair(fixed, f.s_star, f.s_user, f.pairs, again, 3) == fixed);
  CHECK(again.calls() == 0);

  try {
    verify_and_repair(first, f.s_star, f.s_user, f.pairs, b, 0);
    FAIL("expected VerificationFailed");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kVerificationFailed);
    CHECK(std::string(e.detail()).find("6 of 8 pair(s) still fail") != std::string::npos);
  }
}

TEST_CASE("identity law over identical schemas") {
  const RelayFixture f = relay_fixture("rename");
  std::vector<SamplePair> same;
  for (const SamplePair& p : f.pairs) same.push_back({p.expected_original, p.expected_original});
  CountingBackend b(std::make_shared<ScriptedBackend>(f.policy));
  CHECK(verify_and_repair({}, f.s_user, f.s_user, same, b, 0).steps.empty());
  CHECK(build_relay(f.s_user, f.s_user, b).steps.empty());
  CHECK(b.calls() == 0);
}

TEST_CASE("every fixture verifies and preserves shape") {
  for (const char* name : kFixtures) {
    CAPTURE(name);
    const RelayFixture f = relay_fixture(name);
    ScriptedBackend b(f.policy);
    const TransformProgram p = build_relay(f.s_star, f.s_user, b);
    CHECK(f.pairs.size() >= 8);
    CHECK(check_pairs(p, f.pairs, f.s_user).empty());

    const Json raw = Json::parse(read_fixture(std::string("relay/") + name + "/s_star.json"));
    testing::CaseGenerator gen(101);
    int checked = 0;
    while (checked < 500) {
      const Json c = gen.random_candidate(raw, gen.random_source());
      if (find_shape_violation(c, f.s_star.root())) continue;
      ++checked;
      try {
        const Json out = apply_transform(p, c, f.s_user);
        CHECK_FALSE(find_shape_violation(out, f.s_user.root()));
        CHECK(out.is_object());
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::kStepFailure);
      }
    }
  }
}

}  // namespace
}  // namespace sift
