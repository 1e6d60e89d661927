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

#ifndef ELOEVO_ENGINE_H_
#define ELOEVO_ENGINE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "eloevo/agent.h"
#include "eloevo/budget.h"
#include "eloevo/evaluation.h"
#include "eloevo/mutator.h"
#include "eloevo/random.h"
#include "eloevo/rating.h"
#include "eloevo/reports.h"

namespace eloevo {

class RunStore;

enum class EngineMode {
  kDefault,        // winner, new agent and a third drawn from the top two
  kKingOfTheHill,  // champion and challenger; ties keep the champion
};

std::string_view EngineModeName(EngineMode mode);
absl::StatusOr<EngineMode> ParseEngineMode(std::string_view name);

struct EngineConfig {
  EngineMode mode = EngineMode::kDefault;
  // Examples per iteration.
  int sample_size = 20;
  // Deep Focus test rounds: 0 disables it, 1 enables it.
  int deep_focus_rounds = 1;
  double k_factor = kDefaultKFactor;
  double clone_penalty = kDefaultClonePenalty;
  // Total evaluations.
  int64_t budget = 1500;
  uint64_t rng_seed = 0;
  // Concurrent evaluator batches.
  int parallelism = 1;
  ReportKind report_kind = ReportKind::kBinary;
  ReportOptions report_options;
  // Optional documents copied into every mutator session.
  std::filesystem::path strategy_document;
  std::filesystem::path objective_document;
  std::filesystem::path background_document;

  friend bool operator==(const EngineConfig& a, const EngineConfig& b) {
    return a.mode == b.mode && a.sample_size == b.sample_size &&
           a.deep_focus_rounds == b.deep_focus_rounds &&
           a.k_factor == b.k_factor && a.clone_penalty == b.clone_penalty &&
           a.budget == b.budget && a.rng_seed == b.rng_seed &&
           a.parallelism == b.parallelism && a.report_kind == b.report_kind &&
           a.report_options.divergence_cap == b.report_options.divergence_cap &&
           a.report_options.excerpt_bytes == b.report_options.excerpt_bytes &&
           a.strategy_document == b.strategy_document &&
           a.objective_document == b.objective_document &&
           a.background_document == b.background_document;
  }
};

int CompetitorCount(EngineMode mode);

// Rejects n < 1, k not in {0, 1}, non-positive k-factor or parallelism,
// negative clone penalty, and budgets below n * CompetitorCount(mode).
absl::Status ValidateConfig(const EngineConfig& config);

// Debits an iteration can cost with no cache hits.
int64_t WorstCaseIterationCost(const EngineConfig& config, int competitors,
                               bool deep_focus);

struct IterationRecord {
  int index = 0;
  std::vector<std::string> example_ids;
  // The pool was smaller than the sample size.
  bool sampled_with_replacement = false;
  // Slot order: previous winner, new agent, third.
  std::vector<std::string> competitor_ids;
  std::map<std::string, double> mean_scores;
  RatingMap elo_before;
  RatingMap elo_after;
  std::string winner_id;
  // New agents flagged as clones in this iteration.
  std::vector<std::string> clone_ids;
  std::string report_ref;
  // Deep Focus report of the new agent that entered in this iteration.
  std::optional<std::string> deep_focus_ref;

  friend bool operator==(const IterationRecord&, const IterationRecord&) = default;
};

// Draws n examples uniformly. Distinct within the iteration when the pool
// allows it, otherwise with replacement (reported via with_replacement).
std::vector<ExampleRef> SampleExamples(std::span<const ExampleRef> pool, int n,
                                       Rng& rng, bool* with_replacement = nullptr);

// An argmax of the mean scores, uniformly random among tied maxima.
absl::StatusOr<std::string> PickWinner(const ScoreMap& mean_scores, Rng& rng);

// Slot 1 the winner, slot 2 the new agent (if any), slot 3 a uniform pick
// from the two highest-rated non-clone agents other than those two.
std::vector<std::string> SelectCompetitors(
    std::span<const AgentRecord> population, const std::string& winner_id,
    const std::optional<std::string>& new_agent_id, Rng& rng);

struct CloneCheck {
  bool clone = false;
  std::string twin_id;
  // Fingerprints were missing; no verdict.
  bool skipped = false;
  std::string warning;
};

// True iff the new agent's fingerprint vector equals one competitor's over
// the iteration's examples.
CloneCheck DetectClone(std::span<const EvalOutcome> new_outcomes,
                       const AgentOutcomes& competitor_outcomes);

// King-of-the-Hill: the challenger takes over only on a strictly higher
// mean score.
bool ChallengerDethrones(double champion_mean, double challenger_mean);

// Highest-rated non-clone agent; rating ties go to the earliest created
// (then earliest listed). Null when there is none.
const AgentRecord* BestAgent(std::span<const AgentRecord> agents);

std::string AgentIdFor(size_t ordinal);

struct RunResult {
  AgentRecord best;
  std::vector<AgentRecord> agents;
  std::vector<IterationRecord> iterations;
  BudgetLedger ledger;
};

// The evolution loop. Each iteration samples fresh examples, evaluates the
// competitors, applies the Elo round, picks a winner, writes the
// comparative report and, while the next iteration is still affordable in
// the worst case, evolves the next agent. Everything is persisted to the
// store as it happens.
class Engine {
 public:
  Engine(EngineConfig config, std::vector<ExampleRef> pool,
         Evaluator& evaluator, Mutator& mutator, RunStore& store);

  // seed.artifact_dir is the source directory of the seed artifact; it is
  // copied into the store.
  absl::StatusOr<RunResult> Run(const AgentRecord& seed);

 private:
  struct Round {
    AgentOutcomes outcomes;
    ScoreMap means;
  };

  absl::StatusOr<Round> Evaluate(int iteration, Phase phase,
                                 const std::vector<std::string>& agent_ids,
                                 std::span<const ExampleRef> examples);
  // Runs one tournament iteration and returns the winner.
  absl::StatusOr<std::string> PlayIteration(
      int index, const std::vector<std::string>& competitors,
      const std::optional<std::string>& new_agent,
      const std::optional<std::string>& deep_focus_ref);
  // Creates the next agent; nullopt when the mutator failed.
  absl::StatusOr<std::optional<std::string>> Evolve(
      int iteration, const std::vector<std::string>& next,
      std::optional<std::string>& deep_focus_ref);
  absl::Status PrepareSession(const std::filesystem::path& session,
                              const std::string& agent_id, int iteration,
                              const std::vector<std::string>& next);
  // Returns the Deep Focus report locator, or nullopt when skipped.
  absl::StatusOr<std::optional<std::string>> DeepFocus(
      const std::string& draft_id, const IterationRecord& previous,
      const std::filesystem::path& session, int iteration);
  absl::Status Warn(int iteration, const std::string& message);
  absl::Status WriteOutcomeFiles(const std::filesystem::path& dir,
                                 const AgentOutcomes& outcomes) const;
  absl::Status PersistAgents() const;

  AgentRecord& Agent(const std::string& id);
  std::vector<std::pair<std::string, double>> Standings() const;
  AgentRecord Portable(const AgentRecord& agent) const;

  EngineConfig config_;
  std::vector<ExampleRef> pool_;
  std::map<std::string, ExampleRef> pool_by_id_;
  Mutator& mutator_;
  RunStore& store_;
  Rng rng_;
  BudgetLedger ledger_;
  EvaluationService evaluation_;
  std::vector<AgentRecord> agents_;
  std::vector<IterationRecord> iterations_;
  std::map<int, AgentOutcomes> outcomes_by_iteration_;
  size_t next_ordinal_ = 0;
};

}  // namespace eloevo

#endif  // ELOEVO_ENGINE_H_
