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
#include "sift/prompts.h"
#include "sift/scope.h"
#include "test_util.h"

namespace sift {
namespace {

constexpr const char* kBaseline =
    "<response><thinking>The page title names the car.</thinking><attribute_values>{\"model\":"
    "\"2010 Subaru Legacy 2.5 i 4dr Sedan\"}</attribute_values></response>";
constexpr const char* kCorrected =
    "<response><thinking>Drop the trim.</thinking><attribute_values>{\"model\":\"2010 Subaru "
    "Legacy\"}</attribute_values></response>";

ScriptedPolicy correct_only_if_reflected() {
  ScriptedPolicy p;
  p.rules.push_back({"corrected", {"PatternMismatch at /model"}, {}, std::nullopt, kCorrected, 0});
  p.default_response = kBaseline;
  return p;
}

TEST_CASE("base prompt rendering") {
  const SchemaDoc s = parse_schema(
      R"({"type":"object","properties":{"price":{"type":"string","pattern":"^[$€¥][0-9,.]+(?:k|K)?$","minLength":2}},"required":["price"]})");
  const std::string p = render_base_prompt(s, "the old price is 29.99 USD");
  CHECK(p.rfind("You are an attribute extractor whose task is to extract the value for the given \n"
                "attributes from the user input.\n\n<attributes>\n" +
                    canonical_serialize(s) + "\n</attributes>",
                0) == 0);
  CHECK(p.find("Put your final answer within <attribute_values></attribute_values> XML tags.") !=
        std::string::npos);
  CHECK(p.find("in the following format:\n{\"price\":\"<string>\"}\n") != std::string::npos);
  CHECK(p.find("<response>\n<thinking></thinking>\n<attribute_values></attribute_values>\n</response>") !=
        std::string::npos);
  const std::string tail =
      "Below is the conversation with latest user message at the end:\nthe old price is 29.99 USD";
  CHECK(p.size() > tail.size());
  CHECK(p.substr(p.size() - tail.size()) == tail);
  CHECK(render_base_prompt(s, "the old price is 29.99 USD") == p);
  CHECK(p.find("$attribute") == std::string::npos);

  const SchemaDoc empty = parse_schema(R"({"type":"object","properties":{}})");
  const std::string e = render_base_prompt(empty, "hi");
  CHECK(e.find("<attributes>\n{\"properties\":{},\"type\":\"object\"}\n</attributes>") != std::string::npos);
  CHECK(e.find("format:\n{}\n") != std::string::npos);
}

TEST_CASE("value skeleton") {
  const SchemaDoc s = testing::load_schema("swde/auto_iter3.json");
  const Json sk = value_skeleton(s.root());
  CHECK(sk["price"].is_array());
  CHECK(sk["price"][0]["price"] == "<string>");
}

TEST_CASE("parse response") {
  const SchemaDoc s = testing::load_schema("swde/model_optimized.json");
  const ExtractionCandidate c = parse_response(kCorrected, s);
  CHECK(c.values == Json{{"model", "2010 Subaru Legacy"}});
  CHECK(c.schema_ref == s.version_tag());
  CHECK_THROWS_WITH_AS(parse_response("no tags here", s), doctest::Contains("MissingTags"), Error);
  CHECK_THROWS_WITH_AS(parse_response("<attribute_values>{model:</attribute_values>", s),
                       doctest::Contains("MalformedPayload"), Error);
  CHECK_THROWS_WITH_AS(parse_response(R"(<attribute_values>{"unknown_field":1}</attribute_values>)", s),
                       doctest::Contains("ShapeViolation at /unknown_field"), Error);
  // The final block wins over tags mentioned while thinking.
  const ExtractionCandidate last = parse_response(
      "<thinking>I will fill <attribute_values></attribute_values></thinking>"
      "<attribute_values>\n```json\n{\"model\": null}\n```\n</attribute_values>",
      s);
  CHECK(last.values == Json{{"model", nullptr}});
}

ExtractionRequest swde_request(bool reflection) {
  ExtractionRequest r(testing::read_fixture("swde/page_subaru.html"),
                      testing::load_schema("swde/model_optimized.json"));
  r.reflection_enabled = reflection;
  r.max_retries = 3;
  return r;
}

TEST_CASE("swde example converges only with reflection") {
  ScriptedBackend backend(correct_only_if_reflected());
  const ExtractionOutcome on = extract(swde_request(true), backend);
  REQUIRE(on.ok());
  CHECK(on.final->values == Json{{"model", "2010 Subaru Legacy"}});
  CHECK(on.retries_used == 1);
  REQUIRE(on.attempts.size() == 2);
  CHECK(on.attempts[0].report->findings().size() == 1);
  CHECK(on.attempts[0].reflection->text.find("PatternMismatch at /model") != std::string::npos);
  CHECK(on.attempts[1].prompt.find("Your previous answer:\n<attribute_values>{\"model\":\"2010 Subaru "
                                   "Legacy 2.5 i 4dr Sedan\"}</attribute_values>") != std::string::npos);
  CHECK(on.attempts[1].prompt.find("The page title names the car") == std::string::npos);

  const ExtractionOutcome off = extract(swde_request(false), backend);
  CHECK_FALSE(off.ok());
  REQUIRE(off.failure);
  CHECK(off.retries_used == 3);
  CHECK(off.attempts.size() == 4);
  CHECK(off.attempts[1].prompt.find("Your previous answer was invalid, try again.") != std::string::npos);
  CHECK(off.failure->last_report);
  CHECK_FALSE(off.attempts.back().retry_note);
}

TEST_CASE("conformant answers need no retry and stop calling") {
  ScriptedPolicy p;
  p.default_response = kCorrected;
  auto counting = std::make_shared<CountingBackend>(std::make_shared<ScriptedBackend>(p));
  const ExtractionOutcome o = extract(swde_request(true), *counting);
  CHECK(o.ok());
  CHECK(o.retries_used == 0);
  CHECK(counting->calls() == 1);
}

TEST_CASE("parse failures consume a retry and are named in the next prompt") {
  int call = 0;
  CallbackBackend b([&](const ChatRequest&) {
    return ++call == 1 ? std::string("I think the model is a Subaru.") : std::string(kCorrected);
  });
  const ExtractionOutcome o = extract(swde_request(true), b);
  REQUIRE(o.ok());
  CHECK(o.retries_used == 1);
  CHECK(o.attempts[0].parse_error->find("MissingTags") == 0);
  CHECK(o.attempts[1].prompt.find("MissingTags") != std::string::npos);
}

TEST_CASE("retry budget bounds the attempts") {
  ScriptedPolicy p;
  p.default_response = kBaseline;
  for (int budget : {0, 1, 2, 5}) {
    auto counting = std::make_shared<CountingBackend>(std::make_shared<ScriptedBackend>(p));
    ExtractionRequest r = swde_request(true);
    r.max_retries = budget;
    const ExtractionOutcome o = extract(r, *counting);
    CHECK_FALSE(o.ok());
    CHECK(o.attempts.size() == static_cast<size_t>(budget + 1));
    CHECK(counting->calls() == budget + 1);
  }
  ExtractionRequest r = swde_request(true);
  r.max_retries = kMaxRetriesCap + 1;
  ScriptedBackend b(p);
  CHECK_THROWS_AS(extract(r, b), Error);
}

TEST_CASE("reflection names every failing path") {
  const SchemaDoc s = parse_schema(
      R"({"type":"object","required":["a","b","c"],"properties":{"a":{"type":"string"},"b":{"type":"integer"},"c":{"type":"string","enum":["x"]},"d":{"type":"string","maxLength":2}}})");
  ScriptedPolicy p;
  p.default_response = R"(<attribute_values>{"b":"seven","c":"y","d":"long"}</attribute_values>)";
  ScriptedBackend backend(p);
  ExtractionRequest r("seven y long", s);
  r.max_retries = 1;
  const ExtractionOutcome o = extract(r, backend);
  REQUIRE(o.attempts.size() == 2);
  const std::string& next = o.attempts[1].prompt;
  for (const Finding& f : o.attempts[0].report->findings()) {
    CAPTURE(f.path);
    CHECK(next.find(" at " + f.path + "\n") != std::string::npos);
  }
}

TEST_CASE("transport failures surface as BackendUnavailable") {
  CallbackBackend b([](const ChatRequest&) -> std::string {
    throw Error(ErrorCode::kTransport, "http://x", "connection: refused");
  });
  CHECK_THROWS_WITH_AS(extract(swde_request(true), b), doctest::Contains("BackendUnavailable"), Error);
}

TEST_CASE("wall time covers recorded backend latency") {
  ScriptedPolicy p = correct_only_if_reflected();
  p.rules[0].latency_ms = 40;
  p.rules.push_back({"slow", {}, {}, std::nullopt, kBaseline, 25});
  ScriptedBackend b(p);
  const ExtractionOutcome o = extract(swde_request(true), b);
  double sum = 0;
  for (const Attempt& a : o.attempts) sum += a.latency_ms;
  CHECK(sum == 65);
  CHECK(o.wall_time_ms >= sum);
}

TEST_CASE("extract is a pure function of request and cassette") {
  auto sink = std::make_shared<MemoryCassetteSink>();
  RecordingBackend rec(std::make_shared<ScriptedBackend>(correct_only_if_reflected()), sink);
  const Json live = to_json(extract(swde_request(true), rec));
  for (int i = 0; i < 2; ++i) {
    ReplayBackend replay(sink->cassette());
    CHECK(to_json(extract(swde_request(true), replay)) == live);
  }
}

TEST_CASE("llm condition stage") {
  const SchemaDoc s = parse_schema(
      R"j({"type":"object","properties":{"fuel":{"type":"string","condition":"Must include numeric value with unit (MPG, MPGe)"},"other":{"type":"string"}}})j");
  ScriptedPolicy p;
  p.rules.push_back({"approve", {"Value: \"32 MPG highway\""}, {}, std::nullopt, "<verdict>yes</verdict>", 0});
  p.rules.push_back({"reject", {"Value: \"great mileage\""}, {}, std::nullopt, "<verdict>no</verdict>", 0});
  auto counting = std::make_shared<CountingBackend>(std::make_shared<ScriptedBackend>(p));

  CHECK(llm_condition_stage({{{"fuel", "32 MPG highway"}}, "", ""}, s, *counting).empty());
  const auto rejected = llm_condition_stage({{{"fuel", "great mileage"}}, "", ""}, s, *counting);
  REQUIRE(rejected.size() == 1);
  CHECK(rejected[0].path == "/fuel");
  CHECK(rejected[0].code == FindingCode::kConditionUnsatisfied);
  CHECK(rejected[0].detail == "condition unsatisfied");
  CHECK(counting->calls() == 2);

  CHECK(llm_condition_stage({{{"other", "x"}, {"fuel", nullptr}}, "", ""}, s, *counting).empty());
  CHECK(counting->calls() == 2);

  // Inside extract: the stage is appended, or skipped with a warning.
  ScriptedPolicy answer;
  answer.default_response = R"(<attribute_values>{"fuel":"great mileage"}</attribute_values>)";
  ScriptedBackend model(answer);
  ExtractionRequest r("it has great mileage", s);
  r.llm_condition_check = true;
  r.max_retries = 0;
  const ExtractionOutcome judged = extract(r, model, counting.get());
  CHECK_FALSE(judged.ok());
  REQUIRE(judged.attempts[0].report->stages.size() == 4);
  CHECK(judged.attempts[0].report->stages[3].stage == Stage::kCondition);
  const ExtractionOutcome skipped = extract(r, model, nullptr);
  CHECK(skipped.ok());
  CHECK(skipped.warnings.size() == 1);
}

TEST_CASE("template helpers") {
  CHECK(prompts::substitute("$a and $ab", {{"$a", "$ab"}, {"$ab", "X"}}) == "$ab and X");
  CHECK(*prompts::tagged_block("<t>1</t><t>2</t>", "t") == "2");
  CHECK(*prompts::tagged_block("x <t>{}\n<t>\nmore", "t", true) == "{}\n");
  CHECK_FALSE(prompts::tagged_block("<t>1", "t"));
}

}  // namespace
}  // namespace sift
