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

#include "eloevo/plugins.h"

#include <cmath>
#include <unordered_map>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "eloevo/subprocess.h"
#include "json.hpp"

namespace eloevo {
namespace {

using nlohmann::json;

std::string OptionalString(const json& line, const char* key) {
  auto it = line.find(key);
  if (it == line.end() || it->is_null()) return {};
  return it->is_string() ? it->get<std::string>() : it->dump();
}

std::string Tail(const std::string& text, size_t max_bytes) {
  if (text.size() <= max_bytes) return text;
  return text.substr(text.size() - max_bytes);
}

}  // namespace

std::string_view MutationPhaseName(MutationPhase phase) {
  return phase == MutationPhase::kCreate ? "create" : "refine";
}

absl::StatusOr<MutationPhase> ParseMutationPhase(std::string_view name) {
  if (name == "create") return MutationPhase::kCreate;
  if (name == "refine") return MutationPhase::kRefine;
  return absl::InvalidArgumentError(absl::StrCat("unknown phase: ", std::string(name)));
}

std::string BuildEvaluatorRequest(const EvalRequest& request) {
  json examples = json::array();
  for (const ExampleRef& example : request.examples) {
    examples.push_back(
        {{"example_id", example.example_id}, {"payload_ref", example.payload_ref}});
  }
  json doc = {{"artifact_dir", request.artifact_dir.string()},
              {"examples", std::move(examples)}};
  return doc.dump();
}

std::vector<EvalOutcome> ParseEvaluatorReply(const EvalRequest& request,
                                             std::string_view stdout_text) {
  std::unordered_map<std::string, EvalOutcome> reported;
  const absl::string_view text(stdout_text.data(), stdout_text.size());
  for (absl::string_view raw : absl::StrSplit(text, '\n')) {
    json line = json::parse(raw.begin(), raw.end(), nullptr,
                            /*allow_exceptions=*/false);
    if (!line.is_object()) continue;
    auto id = line.find("example_id");
    auto score = line.find("score");
    if (id == line.end() || !id->is_string() || score == line.end() ||
        !score->is_number()) {
      continue;
    }
    EvalOutcome outcome;
    outcome.agent_id = request.agent_id;
    outcome.example_id = id->get<std::string>();
    outcome.score = score->get<double>();
    if (auto fp = line.find("fingerprint"); fp != line.end() && !fp->is_null()) {
      outcome.fingerprint = fp->is_string() ? fp->get<std::string>() : fp->dump();
    }
    outcome.diagnostics = OptionalString(line, "diagnostics");
    outcome.agent_stdout = OptionalString(line, "agent_stdout");
    reported.try_emplace(outcome.example_id, std::move(outcome));
  }
  std::vector<EvalOutcome> outcomes;
  outcomes.reserve(request.examples.size());
  for (const ExampleRef& example : request.examples) {
    auto it = reported.find(example.example_id);
    if (it == reported.end() || !std::isfinite(it->second.score)) {
      outcomes.push_back(FailedOutcome(request.agent_id, example.example_id,
                                       "no valid result line from evaluator"));
    } else {
      outcomes.push_back(it->second);
    }
  }
  return outcomes;
}

std::vector<EvalOutcome> SubprocessEvaluator::Evaluate(const EvalRequest& request) {
  auto fail_all = [&request](const std::string& reason) {
    std::vector<EvalOutcome> outcomes;
    for (const ExampleRef& example : request.examples) {
      outcomes.push_back(
          FailedOutcome(request.agent_id, example.example_id, reason));
    }
    return outcomes;
  };
  absl::StatusOr<ProcessResult> result =
      RunProcess(ShellArgv(command_), BuildEvaluatorRequest(request), timeout_);
  if (!result.ok()) return fail_all(std::string(result.status().message()));
  if (result->timed_out) {
    return fail_all(absl::StrCat("evaluator timed out after ",
                                 timeout_.count(), " ms"));
  }
  if (result->exit_code != 0) {
    return fail_all(absl::StrCat("evaluator exited with status ",
                                 result->exit_code, "; stderr: ",
                                 Tail(result->stderr_text, 2048)));
  }
  return ParseEvaluatorReply(request, result->stdout_text);
}

absl::Status SubprocessMutator::Run(const std::filesystem::path& session_dir,
                                    MutationPhase phase) {
  const auto timeout =
      phase == MutationPhase::kCreate ? create_timeout_ : refine_timeout_;
  absl::StatusOr<ProcessResult> result = RunProcess(
      ShellArgv(command_, {session_dir.string(),
                           std::string(MutationPhaseName(phase))}),
      {}, timeout);
  if (!result.ok()) return result.status();
  if (result->timed_out) {
    return absl::DeadlineExceededError(
        absl::StrCat("mutator ", std::string(MutationPhaseName(phase)),
                     " phase timed out"));
  }
  if (result->exit_code != 0) {
    return absl::InternalError(absl::StrCat(
        "mutator ", std::string(MutationPhaseName(phase)), " phase exited with status ",
        result->exit_code, ": ", Tail(result->stderr_text, 2048)));
  }
  return absl::OkStatus();
}

}  // namespace eloevo
