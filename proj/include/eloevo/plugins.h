// Copyright 2026 The eloevo Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ELOEVO_PLUGINS_H_
#define ELOEVO_PLUGINS_H_

#include <chrono>
#include <string>
#include <string_view>
#include <vector>

#include "eloevo/evaluation.h"
#include "eloevo/mutator.h"

namespace eloevo {

// Evaluator plugin wire format.
//
// Request (plugin stdin, one UTF-8 JSON object):
//   {"artifact_dir": "...", "examples": [{"example_id": "...",
//                                         "payload_ref": "..."}, ...]}
// Reply (plugin stdout, one JSON object per line):
//   {"example_id": "...", "score": 0.5, "fingerprint": "...",
//    "diagnostics": "...", "agent_stdout": "..."}
// Only example_id and score are required. Exit code 0 means success.
std::string BuildEvaluatorRequest(const EvalRequest& request);

// Turns reply lines into outcomes aligned with the request. Malformed lines
// are skipped; requested ids with no valid line become failures.
std::vector<EvalOutcome> ParseEvaluatorReply(const EvalRequest& request,
                                             std::string_view stdout_text);

inline constexpr std::chrono::seconds kDefaultEvaluatorTimeout{600};
inline constexpr std::chrono::seconds kDefaultCreateTimeout{1800};
inline constexpr std::chrono::seconds kDefaultRefineTimeout{900};

// Launches the evaluator command once per batch.
class SubprocessEvaluator : public Evaluator {
 public:
  explicit SubprocessEvaluator(
      std::string command,
      std::chrono::milliseconds timeout = kDefaultEvaluatorTimeout)
      : command_(std::move(command)), timeout_(timeout) {}

  std::vector<EvalOutcome> Evaluate(const EvalRequest& request) override;

 private:
  std::string command_;
  std::chrono::milliseconds timeout_;
};

// Invokes `<command> <session_dir> <create|refine>`.
class SubprocessMutator : public Mutator {
 public:
  explicit SubprocessMutator(
      std::string command,
      std::chrono::milliseconds create_timeout = kDefaultCreateTimeout,
      std::chrono::milliseconds refine_timeout = kDefaultRefineTimeout)
      : command_(std::move(command)),
        create_timeout_(create_timeout),
        refine_timeout_(refine_timeout) {}

  absl::Status Run(const std::filesystem::path& session_dir,
                   MutationPhase phase) override;

 private:
  std::string command_;
  std::chrono::milliseconds create_timeout_;
  std::chrono::milliseconds refine_timeout_;
};

}  // namespace eloevo

#endif  // ELOEVO_PLUGINS_H_
