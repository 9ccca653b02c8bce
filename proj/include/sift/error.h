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

#ifndef SIFT_ERROR_H_
#define SIFT_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace sift {

// Stable machine-readable error kinds. Names are part of the CLI output and
// of reflection text, so do not rename them.
enum class ErrorCode {
  kMalformedDocument,
  kForbiddenKey,
  kUnknownKey,
  kInvalidPattern,
  kInvalidBounds,
  kInvalidSchema,
  kShapeViolation,
  kNothingToReflect,
  kMissingTags,
  kMalformedPayload,
  kBackendUnavailable,
  kTransport,
  kCassetteMiss,
  kNoRuleMatched,
  kSinkWriteFailure,
  kGenerationFailed,
  kInsufficientGeneration,
  kBlockParseError,
  kRefinementFailed,
  kProposalInvalid,
  kInsufficientPairs,
  kStepFailure,
  kVerificationFailed,
  kLineParseError,
  kPrecondition,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string path, std::string detail);

  ErrorCode code() const { return code_; }
  // JSON-pointer style location, or a line/step reference. May be empty.
  const std::string& path() const { return path_; }
  const std::string& detail() const { return detail_; }

 private:
  ErrorCode code_;
  std::string path_;
  std::string detail_;
};

}  // namespace sift

#endif  // SIFT_ERROR_H_
