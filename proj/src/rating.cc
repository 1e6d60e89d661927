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

#include "eloevo/rating.h"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace eloevo {
namespace {

double Expected(double rating_a, double rating_b) {
  return 1.0 / (1.0 + std::pow(10.0, (rating_b - rating_a) / 400.0));
}

absl::Status CheckFinite(double rating) {
  if (!std::isfinite(rating)) {
    return absl::InvalidArgumentError(
        absl::StrCat("invalid rating: ", rating));
  }
  return absl::OkStatus();
}

}  // namespace

double OutcomeValue(MatchOutcome outcome) {
  switch (outcome) {
    case MatchOutcome::kLoss:
      return 0.0;
    case MatchOutcome::kTie:
      return 0.5;
    case MatchOutcome::kWin:
      return 1.0;
  }
  return 0.0;
}

MatchOutcome Reverse(MatchOutcome outcome) {
  switch (outcome) {
    case MatchOutcome::kLoss:
      return MatchOutcome::kWin;
    case MatchOutcome::kWin:
      return MatchOutcome::kLoss;
    case MatchOutcome::kTie:
      break;
  }
  return MatchOutcome::kTie;
}

absl::StatusOr<KFactor> KFactor::Create(double value) {
  if (!std::isfinite(value) || value <= 0.0) {
    return absl::InvalidArgumentError(
        absl::StrCat("k-factor must be positive and finite, got ", value));
  }
  return KFactor(value);
}

absl::StatusOr<double> ExpectedScore(double rating_a, double rating_b) {
  if (auto s = CheckFinite(rating_a); !s.ok()) return s;
  if (auto s = CheckFinite(rating_b); !s.ok()) return s;
  return Expected(rating_a, rating_b);
}

absl::StatusOr<RatingPair> UpdatePair(double rating_a, double rating_b,
                                      MatchOutcome outcome_a, KFactor k) {
  absl::StatusOr<double> expected = ExpectedScore(rating_a, rating_b);
  if (!expected.ok()) return expected.status();
  const double delta = k.value() * (OutcomeValue(outcome_a) - *expected);
  return RatingPair{rating_a + delta, rating_b - delta};
}

MatchOutcome CompareMeans(double mean_a, double mean_b) {
  if (mean_a == mean_b) return MatchOutcome::kTie;
  const double scale = std::max(std::abs(mean_a), std::abs(mean_b));
  if (std::abs(mean_a - mean_b) <= kTieRelativeTolerance * scale) {
    return MatchOutcome::kTie;
  }
  return mean_a > mean_b ? MatchOutcome::kWin : MatchOutcome::kLoss;
}

void ApplyRoundInPlace(std::span<double> ratings, std::span<const double> scores,
                       double k) {
  const size_t count = ratings.size();
  std::vector<double> delta(count, 0.0);
  for (size_t a = 0; a < count; ++a) {
    for (size_t b = a + 1; b < count; ++b) {
      // Orient each pair by value, not position, so relabeling the agents
      // reproduces the same deltas bit for bit.
      size_t lo = a;
      size_t hi = b;
      if (std::pair(ratings[hi], scores[hi]) < std::pair(ratings[lo], scores[lo])) {
        std::swap(lo, hi);
      }
      const double outcome = OutcomeValue(CompareMeans(scores[lo], scores[hi]));
      const double d = k * (outcome - Expected(ratings[lo], ratings[hi]));
      delta[lo] += d;
      delta[hi] -= d;
    }
  }
  for (size_t i = 0; i < count; ++i) ratings[i] += delta[i];
}

absl::StatusOr<RatingMap> ApplyRound(const RatingMap& ratings,
                                     const ScoreMap& mean_scores, KFactor k) {
  if (mean_scores.size() < 2) {
    return absl::InvalidArgumentError(absl::StrCat(
        "a rating round needs at least 2 agents, got ", mean_scores.size()));
  }
  // ScoreMap iterates in key order, which is the canonical pair order.
  std::vector<double> current;
  std::vector<double> scores;
  current.reserve(mean_scores.size());
  scores.reserve(mean_scores.size());
  for (const auto& [agent, score] : mean_scores) {
    auto it = ratings.find(agent);
    if (it == ratings.end()) {
      return absl::NotFoundError(absl::StrCat("no rating for agent ", agent));
    }
    if (auto s = CheckFinite(it->second); !s.ok()) return s;
    if (!std::isfinite(score)) {
      return absl::InvalidArgumentError(
          absl::StrCat("non-finite mean score for agent ", agent));
    }
    current.push_back(it->second);
    scores.push_back(score);
  }
  ApplyRoundInPlace(current, scores, k.value());
  RatingMap updated = ratings;
  size_t i = 0;
  for (const auto& entry : mean_scores) updated[entry.first] = current[i++];
  return updated;
}

}  // namespace eloevo
