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

#include "sift/error.h"

namespace sift {
namespace {

std::string format_message(ErrorCode code, const std::string& path,
                           const std::string& detail) {
  std::string msg(error_code_name(code));
  if (!path.empty()) msg += " at " + path;
  if (!detail.empty()) msg += ": " + detail;
  return msg;
}

}  // namespace

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedDocument: return "MalformedDocument";
    case ErrorCode::kForbiddenKey: return "ForbiddenKey";
    case ErrorCode::kUnknownKey: return "UnknownKey";
    case ErrorCode::kInvalidPattern: return "InvalidPattern";
    case ErrorCode::kInvalidBounds: return "InvalidBounds";
    case ErrorCode::kInvalidSchema: return "InvalidSchema";
    case ErrorCode::kShapeViolation: return "ShapeViolation";
    case ErrorCode::kNothingToReflect: return "NothingToReflect";
    case ErrorCode::kMissingTags: return "MissingTags";
    case ErrorCode::kMalformedPayload: return "MalformedPayload";
    case ErrorCode::kBackendUnavailable: return "BackendUnavailable";
    case ErrorCode::kTransport: return "Transport";
    case ErrorCode::kCassetteMiss: return "CassetteMiss";
    case ErrorCode::kNoRuleMatched: return "NoRuleMatched";
    case ErrorCode::kSinkWriteFailure: return "SinkWriteFailure";
    case ErrorCode::kGenerationFailed: return "GenerationFailed";
    case ErrorCode::kInsufficientGeneration: return "InsufficientGeneration";
    case ErrorCode::kBlockParseError: return "BlockParseError";
    case ErrorCode::kRefinementFailed: return "RefinementFailed";
    case ErrorCode::kProposalInvalid: return "ProposalInvalid";
    case ErrorCode::kInsufficientPairs: return "InsufficientPairs";
    case ErrorCode::kStepFailure: return "StepFailure";
    case ErrorCode::kVerificationFailed: return "VerificationFailed";
    case ErrorCode::kLineParseError: return "LineParseError";
    case ErrorCode::kPrecondition: return "Precondition";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, std::string path, std::string detail)
    : std::runtime_error(format_message(code, path, detail)),
      code_(code),
      path_(std::move(path)),
      detail_(std::move(detail)) {}

}  // namespace sift
