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


#ifndef SIFT_RELAY_H_
#define SIFT_RELAY_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sift/backend.h"
#include "sift/error.h"
#include "sift/schema.h"

namespace sift {

// Step paths are JSON pointers through object properties only. An array is
// moved as a whole value.
enum class StepOp { kRename, kMove, kConcat, kSplitRegex, kConstant, kCastNumberToString, kDrop };

std::string_view step_op_name(StepOp op);

struct TransformStep {
  StepOp op = StepOp::kMove;
  std::string src;  // rename, move, split_regex, cast_number_to_string, drop
  std::string dst;  // rename, move, concat, constant, cast_number_to_string
  // concat: literal text with {/path} or {/path|format} placeholders; "{{"
  // and "}}" stand for literal braces.
  std::string tmpl;
  std::string pattern;               // split_regex, matched against the whole value
  std::map<int, std::string> groups;  // split_regex: group number -> dst path
  Json literal;                      // constant
  // Number formats: plain, thousands, fixed:N, thousands_fixed:N.
  std::string format = "plain";

  bool operator==(const TransformStep&) const = default;
};

struct TransformProgram {
  std::vector<TransformStep> steps;
  std::string source_schema;  // version tag of S*
  std::string target_schema;  // version tag of S_user

  bool operator==(const TransformProgram&) const = default;
};

Json to_json(const TransformStep& step);
Json to_json(const TransformProgram& program);
// Throws ProposalInvalid on an unknown op, missing field or bad value.
TransformProgram program_from_json(const Json& doc);
TransformProgram load_program(const std::string& path);

// Throws ProposalInvalid (path "/steps/<i>") when a step names a path that
// is not in its schema, a bad pattern or group, or an unknown format.
void validate_program(const TransformProgram& program, const SchemaDoc& s_star,
                      const SchemaDoc& s_user);

std::string format_number(const Json& number, const std::string& format);

// Runs the program over `value` (a candidate for S*). The result starts as
// every source value whose path S_user also defines, then the steps apply
// in order. Missing or null sources write null unless the target already
// holds a value. Throws StepFailure (path "/steps/<i>", or "/result" for
// the final shape check against S_user).
Json apply_transform(const TransformProgram& program, const Json& value, const SchemaDoc& s_user);

struct SamplePair {
  Json optimized_output;
  Json expected_original;
};

Json to_json(const SamplePair& pair);
std::vector<SamplePair> load_pairs(const std::string& path);  // JSON Lines

struct PairStats {
  int rounds = 0;
  int skipped = 0;
};

inline constexpr int kDefaultPairCount = 8;

std::string render_pairs_prompt(const SchemaDoc& s_star, const SchemaDoc& s_user, int n, int round);
std::string render_proposal_prompt(const SchemaDoc& s_star, const SchemaDoc& s_user,
                                   const std::vector<SamplePair>& pairs);

std::vector<SamplePair> generate_sample_pairs(const SchemaDoc& s_star, const SchemaDoc& s_user,
                                              ModelBackend& backend, int n = kDefaultPairCount,
                                              int max_rounds = 3, PairStats* stats = nullptr);

// Identical schemas give the empty program without a backend call.
TransformProgram propose_transform(const SchemaDoc& s_star, const SchemaDoc& s_user,
                                   const std::vector<SamplePair>& pairs, ModelBackend& backend);

struct PairCheck {
  size_t index = 0;
  std::optional<Json> actual;  // nullopt when a step failed
  std::string problem;
};

// Pairs whose transformed output differs from the expected tree in any leaf.
std::vector<PairCheck> check_pairs(const TransformProgram& program,
                                   const std::vector<SamplePair>& pairs, const SchemaDoc& s_user);

// Re-prompts with the failing pairs until the program reproduces every
// pair, using at most `max_rounds` backend calls. Throws VerificationFailed.
TransformProgram verify_and_repair(const TransformProgram& program, const SchemaDoc& s_star,
                                   const SchemaDoc& s_user, const std::vector<SamplePair>& pairs,
                                   ModelBackend& backend, int max_rounds = 3);

// generate_sample_pairs, propose_transform, then verify_and_repair. An
// invalid proposal goes into the repair loop as a failing program.
TransformProgram build_relay(const SchemaDoc& s_star, const SchemaDoc& s_user, ModelBackend& backend,
                             int n_pairs = kDefaultPairCount, int max_rounds = 3);

}  // namespace sift

#endif  // SIFT_RELAY_H_
