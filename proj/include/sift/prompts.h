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


#ifndef SIFT_PROMPTS_H_
#define SIFT_PROMPTS_H_

// Prompt templates, byte for byte. Placeholders are substituted by the
// engines: $task, $schema, $eval_samples, $attribute_schema,
// $attribute_val_format, and the literal token user_samples.
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sift::prompts {

extern const char* const kSchemaGeneratorTemplate;
extern const char* const kSyntheticDataTemplate;
extern const char* const kSchemaRefinerTemplate;
extern const char* const kScopeBaseTemplate;

// Replaces each placeholder in one left-to-right pass; substituted text is
// never rescanned.
std::string substitute(std::string_view tmpl,
                       const std::vector<std::pair<std::string, std::string>>& values);

// Payload of the last <tag>...</tag> block, or of the last <tag>...<tag>
// block when `lenient_close` allows a repeated opening tag as the closer.
std::optional<std::string> tagged_block(std::string_view text, std::string_view tag,
                                        bool lenient_close = false);

// First balanced {...} span, skipping braces inside JSON strings.
std::optional<std::string> first_json_object(std::string_view text);

}  // namespace sift::prompts

#endif  // SIFT_PROMPTS_H_
