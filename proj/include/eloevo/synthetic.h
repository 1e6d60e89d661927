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

#ifndef ELOEVO_SYNTHETIC_H_
#define ELOEVO_SYNTHETIC_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "eloevo/evaluation.h"
#include "eloevo/mutator.h"

namespace eloevo {

// Built-in test doubles. A synthetic artifact is a single agent.json with a
// true accuracy; each (run seed, agent, example) triple maps to a fixed
// Bernoulli outcome, so runs are exactly reproducible.
struct SyntheticAgentSpec {
  double true_accuracy = 0.5;
  // Set on clones: the agent whose outcomes this one reproduces.
  std::optional<std::string> behaves_like;
};

absl::StatusOr<SyntheticAgentSpec> ReadSyntheticArtifact(
    const std::filesystem::path& artifact_dir);
absl::Status WriteSyntheticArtifact(const std::filesystem::path& artifact_dir,
                                    const SyntheticAgentSpec& spec);

// Parent accuracy plus a N(0.01, 0.02) draw, clipped to [0, 1].
double ChildAccuracy(double parent, double draw);

// The synthetic outcome of one example: 1 when the hashed uniform falls
// below the true accuracy.
bool SyntheticSolves(uint64_t run_seed, const std::string& behaviour_id,
                     const std::string& example_id, double true_accuracy);

class SyntheticEvaluator : public Evaluator {
 public:
  explicit SyntheticEvaluator(uint64_t run_seed) : run_seed_(run_seed) {}
  std::vector<EvalOutcome> Evaluate(const EvalRequest& request) override;

 private:
  uint64_t run_seed_;
};

class SyntheticMutator : public Mutator {
 public:
  // clone_probability > 0 makes some children exact behavioural copies of
  // their parent, to exercise clone detection.
  explicit SyntheticMutator(uint64_t run_seed, double clone_probability = 0.0)
      : run_seed_(run_seed), clone_probability_(clone_probability) {}
  absl::Status Run(const std::filesystem::path& session_dir,
                   MutationPhase phase) override;

  // Uniform in [0, 1) keyed on (run seed, agent, phase, slot).
  double Draw(const std::string& agent_id, MutationPhase phase, int slot) const;

 private:
  uint64_t run_seed_;
  double clone_probability_;
};

}  // namespace eloevo

#endif  // ELOEVO_SYNTHETIC_H_
