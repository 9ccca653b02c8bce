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

#ifndef SIFT_TEXT_H_
#define SIFT_TEXT_H_

#include <string>
#include <string_view>

namespace sift::text {

// Invalid sequences decode to U+FFFD; decoding never fails.
std::u32string utf8_decode(std::string_view s);
std::string utf8_encode(std::u32string_view s);
void append_utf8(std::string& out, char32_t cp);

bool is_space(char32_t cp);
// Unicode general category P* (connector, dash, open, close, quotes, other).
// Currency and math symbols are not punctuation.
bool is_punctuation(char32_t cp);

// Unicode default case folding, codepoint by codepoint.
std::u32string case_fold(std::u32string_view s);

std::string trim(std::string_view s);
std::u32string collapse_whitespace(std::u32string_view s);

// Haystack side of grounding: fold case and collapse whitespace runs.
std::u32string normalize_haystack(std::string_view s);
// Needle side: as above plus leading/trailing punctuation stripped.
std::u32string normalize_needle(std::string_view s);

}  // namespace sift::text

#endif  // SIFT_TEXT_H_
