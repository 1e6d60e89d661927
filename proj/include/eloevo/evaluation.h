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

#ifndef ELOEVO_EVALUATION_H_
#define ELOEVO_EVALUATION_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "eloevo/agent.h"
#include "eloevo/budget.h"

namespace eloevo {

struct ExampleRef {
  std::string example_id;
  std::string payload_ref;

  friend bool operator==(const ExampleRef&, const ExampleRef&) = default;
};

// Result of running one agent on one example.
struct EvalOutcome {
  std::string agent_id;
  std::string example_id;
  double score = 0.0;
  // Identifies the agent's prediction; used for clone detection.
  std::optional<std::string> fingerprint;
  // Evaluator-side diagnostics (actionable side information).
  std::string diagnostics;
  // Print output captured from the agent itself.
  std::string agent_stdout;
  // The evaluator crashed, timed out or did not report this example.
  bool failed = false;

  friend bool operator==(const EvalOutcome&, const EvalOutcome&) = default;
};

// Builds the score-0 outcome recorded for a failed evaluation attempt.
EvalOutcome FailedOutcome(std::string agent_id, std::string example_id,
                          std::string reason);

absl::StatusOr<double> MeanScore(std::span<const EvalOutcome> outcomes);

struct EvalRequest {
  std::string agent_id;
  std::filesystem::path artifact_dir;
  // Distinct examples only.
  std::vector<ExampleRef> examples;
};

// Scores an agent on a batch of examples. Implementations must return one
// outcome per requested example, in request order, converting their own
// failures into FailedOutcome entries. Called concurrently from several
// threads when parallelism > 1.
class Evaluator {
 public:
  virtual ~Evaluator() = default;
  virtual std::vector<EvalOutcome> Evaluate(const EvalRequest& request) = 0;
};

struct BatchResult {
  // One per requested example, in input order (duplicates repeated).
  std::vector<EvalOutcome> outcomes;
  // Examples actually sent to the evaluator, i.e. the cache misses.
  std::vector<std::string> evaluated_ids;
  int64_t debited = 0;
};

// Runs evaluators against the budget ledger with a (agent_id, example_id)
// cache. Cache misses are debited exactly once each; hits are free.
class EvaluationService {
 public:
  // Called for every freshly evaluated outcome, serially and in request
  // order, before the batch returns.
  using Sink =
      std::function<absl::Status(const EvalOutcome&, int iteration, Phase)>;

  EvaluationService(Evaluator& evaluator, BudgetLedger& ledger,
                    int parallelism = 1);

  void set_sink(Sink sink) { sink_ = std::move(sink); }

  absl::StatusOr<BatchResult> EvaluateBatch(const AgentRecord& agent,
                                            std::span<const ExampleRef> examples,
                                            int iteration, Phase phase);

  // Evaluates several agents on their example lists. The budget check
  // covers the union of all misses; on failure nothing is debited or run.
  absl::StatusOr<std::vector<BatchResult>> EvaluateBatches(
      std::span<const std::pair<AgentRecord, std::vector<ExampleRef>>> batches,
      int iteration, Phase phase);

  // Number of distinct (agent, example) pairs that would be debited.
  int64_t CountUncached(const std::string& agent_id,
                        std::span<const ExampleRef> examples) const;

  const EvalOutcome* Lookup(const std::string& agent_id,
                            const std::string& example_id) const;

  // Drops every cached outcome of the agent, e.g. after its artifact changed.
  void Invalidate(const std::string& agent_id);

  const BudgetLedger& ledger() const { return ledger_; }

 private:
  using Key = std::pair<std::string, std::string>;

  Evaluator& evaluator_;
  BudgetLedger& ledger_;
  int parallelism_;
  Sink sink_;
  std::map<Key, EvalOutcome> cache_;
  // Serializes ledger debits and cache writes.
  mutable std::mutex mu_;
};

}  // namespace eloevo

#endif  // ELOEVO_EVALUATION_H_
