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

#ifndef ELOEVO_RATING_H_
#define ELOEVO_RATING_H_

#include <map>
#include <span>
#include <string>

#include "absl/status/statusor.h"

namespace eloevo {

inline constexpr double kInitialRating = 1500.0;
inline constexpr double kDefaultKFactor = 32.0;
inline constexpr double kDefaultClonePenalty = 200.0;

// Relative tolerance under which two mean scores count as equal.
inline constexpr double kTieRelativeTolerance = 1e-9;

enum class MatchOutcome { kLoss, kTie, kWin };

// 0, 0.5 or 1.
double OutcomeValue(MatchOutcome outcome);
MatchOutcome Reverse(MatchOutcome outcome);

class KFactor {
 public:
  static absl::StatusOr<KFactor> Create(double value);
  static KFactor Default() { return KFactor(kDefaultKFactor); }

  double value() const { return value_; }

 private:
  explicit KFactor(double value) : value_(value) {}
  double value_;
};

struct RatingPair {
  double a;
  double b;
};

using RatingMap = std::map<std::string, double>;
using ScoreMap = std::map<std::string, double>;

// Logistic expected score of a against b on the 400-point scale.
absl::StatusOr<double> ExpectedScore(double rating_a, double rating_b);

// Single pairwise update. The same delta is added to a and subtracted from
// b, so the pair's rating mass is unchanged.
absl::StatusOr<RatingPair> UpdatePair(double rating_a, double rating_b,
                                      MatchOutcome outcome_a, KFactor k);

// Win/tie/loss of a against b by mean score. Exact equality or a relative
// difference within kTieRelativeTolerance is a tie.
MatchOutcome CompareMeans(double mean_a, double mean_b);

// Decomposes one round into every unordered pair of competitors. Expected
// scores come from the pre-round ratings and all deltas are applied at once,
// so the result does not depend on competitor order. Agents in `ratings`
// that are absent from `mean_scores` pass through unchanged.
absl::StatusOr<RatingMap> ApplyRound(const RatingMap& ratings,
                                     const ScoreMap& mean_scores, KFactor k);

// Index-based form of ApplyRound for hot loops. Pair deltas depend only on
// the pair's values, so up to three agents the result is exactly invariant
// under reordering; beyond that only up to summation order.
void ApplyRoundInPlace(std::span<double> ratings, std::span<const double> scores,
                       double k);

}  // namespace eloevo

#endif  // ELOEVO_RATING_H_
