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

#ifndef ELOEVO_NOISELAB_H_
#define ELOEVO_NOISELAB_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "eloevo/rating.h"

namespace eloevo::noiselab {

// How a shared top score counts when asking whether an agent ranks first.
enum class TopTieMode {
  kStrict,     // only a strictly highest score counts
  kShare,      // a k-way tie for first counts as 1/k (random tie-break)
  kInclusive,  // any tie for first counts
};

std::string_view TopTieModeName(TopTieMode mode);
absl::StatusOr<TopTieMode> ParseTopTieMode(std::string_view name);

// Memoryless baseline contrasted with Elo accumulation.
enum class SingleElimRule {
  // Every round is a knockout among all agents on a fresh n-task sample; a
  // tie at the top eliminates the tied agents and leaves no champion. No
  // information carries across rounds, so the final round decides.
  kKnockout,
  // A champion (uniformly random at the start) defends against challengers
  // taken in rotation; a strictly higher or equal challenger score dethrones.
  kChampionDefense,
};

std::string_view SingleElimRuleName(SingleElimRule rule);
absl::StatusOr<SingleElimRule> ParseSingleElimRule(std::string_view name);
std::string DescribeSingleElimRule(SingleElimRule rule);

struct NoiseLabConfig {
  std::vector<double> accuracies = {0.70, 0.69, 0.68};
  // Tasks per round.
  int n = 20;
  int rounds = 1;
  double k_factor = kDefaultKFactor;
  int64_t trials = 50000;
  uint64_t rng_seed = 1;
  // Threads for Monte Carlo; results do not depend on it.
  int workers = 1;
};

absl::Status Validate(const NoiseLabConfig& config);

struct Estimate {
  double p = 0.0;
  double standard_error = 0.0;
  int64_t successes = 0;
  int64_t trials = 0;
};

// P[Bin(n, p) = k].
double BinomialPmf(int n, int k, double p);

// P[Bin(n, p1) = Bin(n, p2)] for two independent agents.
absl::StatusOr<double> ExactTieProbability(int n, double p1, double p2);

// Probability that the highest score among all agents is shared by two or
// more of them.
absl::StatusOr<double> ExactTopTieProbability(int n,
                                              std::span<const double> accuracies);

// Probability that the first-listed agent ranks first on n tasks, by exact
// summation over the joint binomial outcomes.
absl::StatusOr<double> ExactTop1Probability(int n,
                                            std::span<const double> accuracies,
                                            TopTieMode mode = TopTieMode::kStrict);

// Index of the agent with the highest true accuracy (first on ties).
size_t TrueBest(std::span<const double> accuracies);

// Monte Carlo: each trial plays `rounds` rounds of binomial scores with the
// batch pairwise Elo update; success iff the true-best agent ends with the
// strictly highest rating.
absl::StatusOr<Estimate> EloRankingAccuracy(const NoiseLabConfig& config);

// Monte Carlo of the single-elimination baseline; success iff the true-best
// agent is the final champion.
absl::StatusOr<Estimate> SingleElimAccuracy(
    const NoiseLabConfig& config, SingleElimRule rule = SingleElimRule::kKnockout);

struct Split {
  int rounds = 0;
  int n = 0;
};

// Parses "<rounds>x<n>", e.g. "10x60".
absl::StatusOr<Split> ParseSplit(std::string_view text);

struct SweepRow {
  int rounds = 0;
  int n = 0;
  Estimate single_elim;
  Estimate elo;
};

// One row per split; every split must satisfy rounds * n == budget.
// `base` supplies accuracies, k-factor, trials, seed and workers.
absl::StatusOr<std::vector<SweepRow>> BudgetSweep(
    int64_t budget, std::span<const Split> splits, const NoiseLabConfig& base,
    SingleElimRule rule = SingleElimRule::kKnockout);

std::string RenderSweepText(std::span<const SweepRow> rows, SingleElimRule rule);
// Columns: rounds,n,single_elim,single_elim_se,elo,elo_se
std::string RenderSweepCsv(std::span<const SweepRow> rows);

}  // namespace eloevo::noiselab

#endif  // ELOEVO_NOISELAB_H_
