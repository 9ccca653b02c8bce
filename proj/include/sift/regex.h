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

#ifndef SIFT_REGEX_H_
#define SIFT_REGEX_H_

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sift {

class RegexError : public std::runtime_error {
 public:
  RegexError(size_t offset, const std::string& what)
      : std::runtime_error(what + " (at offset " + std::to_string(offset) + ")"),
        offset_(offset) {}
  size_t offset() const { return offset_; }

 private:
  size_t offset_;
};

// Regular expressions evaluated by a Pike VM over Unicode codepoints.
// Matching time is O(pattern * input); there is no backtracking.
//
// Supported: literals, `.`, classes with ranges and negation, \d \w \s and
// their negations, \b \B, ^ $, groups, (?:...), alternation, * + ? {n}
// {n,} {n,m} and their lazy forms. Backreferences, lookaround, inline flags
// and possessive quantifiers are rejected at compile time.
class Regex {
 public:
  // Group 0 is the whole match. Unset groups are nullopt.
  using Groups = std::vector<std::optional<std::string>>;

  static Regex compile(std::string_view pattern);

  const std::string& source() const { return source_; }
  int group_count() const;

  // True when the whole input matches, as if the pattern were anchored at
  // both ends.
  bool full_match(std::string_view input) const;
  std::optional<Groups> full_match_groups(std::string_view input) const;
  // Leftmost-first match anywhere in the input.
  std::optional<Groups> search(std::string_view input) const;

  struct Program;

 private:
  Regex(std::string source, std::shared_ptr<const Program> program)
      : source_(std::move(source)), program_(std::move(program)) {}

  std::optional<Groups> run(std::string_view input, bool anchored) const;

  std::string source_;
  std::shared_ptr<const Program> program_;
};

}  // namespace sift

#endif  // SIFT_REGEX_H_
