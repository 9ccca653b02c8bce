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

#ifndef SIFT_TESTS_ARCHITECT_WORLD_H_
#define SIFT_TESTS_ARCHITECT_WORLD_H_

// Scripted model for the refinement loop. Each schema fixture
// scripted_iter{k} carries the marker "Loop fixture iteration k"; the
// extractor answers case j correctly iff (j mod 100) < thresholds[k], so
// accuracy on both train and hold-out cases is thresholds[k] / 100.

#include <atomic>
#include <regex>
#include <string>
#include <vector>

#include "sift/backend.h"
#include "sift/schema.h"
#include "test_util.h"

namespace sift::testing {

class LoopWorld {
 public:
  explicit LoopWorld(std::vector<int> thresholds) : thresholds_(std::move(thresholds)) {}

  static std::string fixture_name(int k) {
    return "architect/scripted_iter" + std::to_string(k) + ".json";
  }

  std::string operator()(const ChatRequest& req) {
    const std::string text = request_text(req);
    if (text.find("creating challenging datasets") != std::string::npos) return examples();
    if (text.find("schema refinement agent") != std::string::npos) {
      ++refine_calls;
      const int k = iteration_of(text);
      return "<refined_schema>\n" + read_fixture(fixture_name(k + 1)) + "\n<refined_schema>";
    }
    if (text.find("You are an attribute extractor") != std::string::npos) {
      static const std::regex kCase(R"(Record (\d+) reads token-(\d+), not token-(\d+)\.)");
      std::smatch m;
      if (!std::regex_search(text, m, kCase)) return "no case";
      const int j = std::stoi(m[1]);
      const int k = iteration_of(text);
      const bool right = (j % 100) < thresholds_[static_cast<size_t>(k)];
      return R"(<attribute_values>{"value":"token-)" + std::string(right ? m[2] : m[3]) +
             R"("}</attribute_values>)";
    }
    return "unrecognized prompt";
  }

  std::atomic<int> refine_calls{0};

 private:
  static int iteration_of(const std::string& text) {
    static const std::regex kMarker(R"(Loop fixture iteration (\d+))");
    std::smatch m;
    return std::regex_search(text, m, kMarker) ? std::stoi(m[1]) : -1;
  }

  // 200 cases per round: 100 training plus 100 for the initial hold-out.
  static std::string examples() {
    std::string out;
    for (int j = 0; j < 200; ++j) {
      const std::string t = std::to_string(j);
      out += "<example>\n<input_text>Record " + t + " reads token-" + t + ", not token-9" + t +
             ".</input_text>\n<ground_truth>{\"value\": \"token-" + t +
             "\"}</ground_truth>\n<challenge>decoy token</challenge>\n</example>\n";
    }
    return out;
  }

  std::vector<int> thresholds_;
};

}  // namespace sift::testing

#endif  // SIFT_TESTS_ARCHITECT_WORLD_H_
