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

#include "eloevo/synthetic.h"

#include <algorithm>

#include "absl/strings/str_cat.h"
#include "eloevo/random.h"
#include "eloevo/store.h"
#include "json.hpp"

namespace eloevo {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;

constexpr double kCreateMean = 0.01;
constexpr double kCreateStddev = 0.02;
constexpr double kRefineStep = 0.005;
constexpr double kRefineProbability = 0.5;

absl::StatusOr<Json> ReadJsonFile(const fs::path& path) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  Json doc = Json::parse(*text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) {
    return absl::DataLossError(absl::StrCat("malformed JSON in ", path.string()));
  }
  return doc;
}

}  // namespace

absl::StatusOr<SyntheticAgentSpec> ReadSyntheticArtifact(const fs::path& artifact_dir) {
  absl::StatusOr<Json> doc = ReadJsonFile(artifact_dir / "agent.json");
  if (!doc.ok()) return doc.status();
  auto acc = doc->find("true_accuracy");
  if (!doc->is_object() || acc == doc->end() || !acc->is_number()) {
    return absl::DataLossError("synthetic agent.json lacks true_accuracy");
  }
  SyntheticAgentSpec spec;
  spec.true_accuracy = acc->get<double>();
  if (auto like = doc->find("behaves_like"); like != doc->end() && like->is_string()) {
    spec.behaves_like = like->get<std::string>();
  }
  return spec;
}

absl::Status WriteSyntheticArtifact(const fs::path& artifact_dir,
                                    const SyntheticAgentSpec& spec) {
  Json doc = {{"true_accuracy", spec.true_accuracy}};
  if (spec.behaves_like) doc["behaves_like"] = *spec.behaves_like;
  return WriteFile(artifact_dir / "agent.json", doc.dump(2) + "\n");
}

double ChildAccuracy(double parent, double draw) {
  return std::clamp(parent + draw, 0.0, 1.0);
}

bool SyntheticSolves(uint64_t run_seed, const std::string& behaviour_id,
                     const std::string& example_id, double true_accuracy) {
  const uint64_t h = HashCombine(
      HashCombine(run_seed, StableHash(behaviour_id)), StableHash(example_id));
  return ToUnitInterval(h) < true_accuracy;
}

std::vector<EvalOutcome> SyntheticEvaluator::Evaluate(const EvalRequest& request) {
  std::vector<EvalOutcome> outcomes;
  absl::StatusOr<SyntheticAgentSpec> spec = ReadSyntheticArtifact(request.artifact_dir);
  for (const ExampleRef& example : request.examples) {
    if (!spec.ok()) {
      outcomes.push_back(FailedOutcome(request.agent_id, example.example_id,
                                       std::string(spec.status().message())));
      continue;
    }
    const bool solved =
        SyntheticSolves(run_seed_, spec->behaves_like.value_or(request.agent_id),
                        example.example_id, spec->true_accuracy);
    EvalOutcome outcome;
    outcome.agent_id = request.agent_id;
    outcome.example_id = example.example_id;
    outcome.score = solved ? 1.0 : 0.0;
    outcome.fingerprint = solved ? "1" : "0";
    outcome.diagnostics = solved ? "correct" : "incorrect";
    outcomes.push_back(std::move(outcome));
  }
  return outcomes;
}

double SyntheticMutator::Draw(const std::string& agent_id, MutationPhase phase,
                              int slot) const {
  uint64_t h = HashCombine(run_seed_, StableHash(agent_id));
  h = HashCombine(h, StableHash(MutationPhaseName(phase)));
  return ToUnitInterval(HashCombine(h, static_cast<uint64_t>(slot)));
}

absl::Status SyntheticMutator::Run(const fs::path& session_dir, MutationPhase phase) {
  absl::StatusOr<Json> session = ReadJsonFile(session_dir / "session.json");
  if (!session.ok()) return session.status();
  const std::string agent_id = session->value("agent_id", "");
  const std::string parent_id = session->value("parent_id", "");
  const fs::path artifact = session_dir / "artifact";

  if (phase == MutationPhase::kRefine) {
    absl::StatusOr<SyntheticAgentSpec> draft = ReadSyntheticArtifact(artifact);
    if (!draft.ok()) return draft.status();
    // A clone keeps reproducing its twin; leave it alone.
    if (draft->behaves_like || Draw(agent_id, phase, 0) >= kRefineProbability) {
      return absl::OkStatus();
    }
    draft->true_accuracy = std::min(1.0, draft->true_accuracy + kRefineStep);
    return WriteSyntheticArtifact(artifact, *draft);
  }

  absl::StatusOr<SyntheticAgentSpec> parent =
      ReadSyntheticArtifact(session_dir / "competitors" / parent_id);
  if (!parent.ok()) return parent.status();
  SyntheticAgentSpec child;
  std::string reasoning;
  if (Draw(agent_id, phase, 2) < clone_probability_) {
    child.true_accuracy = parent->true_accuracy;
    child.behaves_like = parent->behaves_like.value_or(parent_id);
    reasoning = absl::StrCat("Copied ", parent_id, " unchanged.\n");
  } else {
    const double draw = NormalFromUniforms(Draw(agent_id, phase, 0),
                                           Draw(agent_id, phase, 1), kCreateMean,
                                           kCreateStddev);
    child.true_accuracy = ChildAccuracy(parent->true_accuracy, draw);
    reasoning = absl::StrCat("Perturbed ", parent_id, " by ", draw, ".\n");
  }
  if (absl::Status s = WriteSyntheticArtifact(artifact, child); !s.ok()) return s;
  return WriteFile(session_dir / "reasoning.md", reasoning);
}

}  // namespace eloevo
