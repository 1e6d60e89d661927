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

#include "eloevo/noiselab.h"

#include <cmath>
#include <vector>

#include "gtest/gtest.h"

namespace eloevo::noiselab {
namespace {

// Brute force over every joint score vector; an independent oracle for the
// exact routines on small n.
struct BruteForce {
  double pair_tie = 0, top_tie = 0, strict = 0, share = 0, inclusive = 0;
};

BruteForce Enumerate(int n, const std::vector<double>& acc) {
  BruteForce out;
  std::vector<int> s(acc.size(), 0);
  while (true) {
    double p = 1;
    for (size_t i = 0; i < acc.size(); ++i) {
      p *= std::tgamma(n + 1) / (std::tgamma(s[i] + 1) * std::tgamma(n - s[i] + 1)) *
           std::pow(acc[i], s[i]) * std::pow(1 - acc[i], n - s[i]);
    }
    int top = 0, at_top = 0;
    for (int v : s) top = std::max(top, v);
    for (int v : s) at_top += v == top;
    if (s[0] == s[1]) out.pair_tie += p;
    if (at_top > 1) out.top_tie += p;
    if (s[0] == top) {
      out.inclusive += p;
      out.share += p / at_top;
      if (at_top == 1) out.strict += p;
    }
    size_t i = 0;
    while (i < s.size() && ++s[i] > n) s[i++] = 0;
    if (i == s.size()) break;
  }
  return out;
}

TEST(BinomialTest, PmfSumsToOne) {
  double total = 0;
  for (int k = 0; k <= 30; ++k) total += BinomialPmf(30, k, 0.37);
  EXPECT_NEAR(total, 1.0, 1e-14);
  EXPECT_NEAR(BinomialPmf(2, 1, 0.5), 0.5, 1e-15);
  EXPECT_EQ(BinomialPmf(5, 0, 0.0), 1.0);
  EXPECT_EQ(BinomialPmf(5, 5, 1.0), 1.0);
}

TEST(ExactTest, PairwiseTie) {
  EXPECT_NEAR(*ExactTieProbability(1, 1.0, 1.0), 1.0, 1e-15);
  EXPECT_NEAR(*ExactTieProbability(2, 0.5, 0.5), 0.375, 1e-15);
  EXPECT_NEAR(*ExactTieProbability(20, 0.70, 0.69), 0.1361, 5e-5);
  EXPECT_FALSE(ExactTieProbability(0, 0.5, 0.5).ok());
  EXPECT_FALSE(ExactTieProbability(3, 1.5, 0.5).ok());
}

TEST(ExactTest, HeadlineNumbers) {
  const std::vector<double> acc = {0.70, 0.69, 0.68};
  EXPECT_NEAR(*ExactTopTieProbability(20, acc), 0.197, 0.0005);
  EXPECT_NEAR(*ExactTop1Probability(20, acc, TopTieMode::kInclusive), 0.450, 0.003);
  EXPECT_NEAR(*ExactTop1Probability(20, acc, TopTieMode::kStrict), 0.3053, 1e-4);
  EXPECT_NEAR(*ExactTop1Probability(20, acc, TopTieMode::kShare), 0.3741, 1e-4);
}

TEST(ExactTest, Degenerate) {
  EXPECT_NEAR(*ExactTop1Probability(7, std::vector<double>{1.0, 0.0, 0.0}), 1.0, 1e-15);
  EXPECT_NEAR(*ExactTop1Probability(1, std::vector<double>{0.5, 0.5}), 0.25, 1e-15);
  EXPECT_FALSE(ExactTop1Probability(5, std::vector<double>{0.5}).ok());
}

TEST(ExactTest, MatchesBruteForce) {
  for (int n : {1, 3, 6}) {
    for (const std::vector<double>& acc :
         {std::vector<double>{0.7, 0.6}, std::vector<double>{0.55, 0.5, 0.8},
          std::vector<double>{0.3, 0.3, 0.3, 0.9}}) {
      BruteForce b = Enumerate(n, acc);
      EXPECT_NEAR(*ExactTieProbability(n, acc[0], acc[1]), b.pair_tie, 1e-12);
      EXPECT_NEAR(*ExactTopTieProbability(n, acc), b.top_tie, 1e-12);
      EXPECT_NEAR(*ExactTop1Probability(n, acc, TopTieMode::kStrict), b.strict, 1e-12);
      EXPECT_NEAR(*ExactTop1Probability(n, acc, TopTieMode::kShare), b.share, 1e-12);
      EXPECT_NEAR(*ExactTop1Probability(n, acc, TopTieMode::kInclusive), b.inclusive,
                  1e-12);
    }
  }
}

TEST(MonteCarloTest, DegenerateAccuraciesAlwaysSucceed) {
  NoiseLabConfig config;
  config.accuracies = {1.0, 0.0, 0.0};
  config.rounds = 5;
  config.n = 4;
  config.trials = 500;
  EXPECT_EQ(EloRankingAccuracy(config)->p, 1.0);
  EXPECT_EQ(SingleElimAccuracy(config, SingleElimRule::kKnockout)->p, 1.0);
  EXPECT_EQ(SingleElimAccuracy(config, SingleElimRule::kChampionDefense)->p, 1.0);
}

TEST(MonteCarloTest, SeedDeterministicAcrossWorkers) {
  NoiseLabConfig config;
  config.rounds = 10;
  config.n = 10;
  config.trials = 4000;
  config.rng_seed = 9;
  Estimate one = *EloRankingAccuracy(config);
  config.workers = 3;
  Estimate three = *EloRankingAccuracy(config);
  EXPECT_EQ(one.successes, three.successes);
  config.rng_seed = 10;
  EXPECT_NE(EloRankingAccuracy(config)->successes, one.successes);
}

TEST(MonteCarloTest, KnockoutSingleRoundMatchesExactStrictTop1) {
  NoiseLabConfig config;
  config.trials = 200000;
  Estimate e = *SingleElimAccuracy(config, SingleElimRule::kKnockout);
  const double exact = *ExactTop1Probability(20, config.accuracies, TopTieMode::kStrict);
  EXPECT_NEAR(e.p, exact, 4 * e.standard_error);
}

TEST(MonteCarloTest, StandardErrorAndRange) {
  NoiseLabConfig config;
  config.trials = 1000;
  Estimate e = *EloRankingAccuracy(config);
  EXPECT_GE(e.p, 0.0);
  EXPECT_LE(e.p, 1.0);
  EXPECT_NEAR(e.standard_error, std::sqrt(e.p * (1 - e.p) / 1000), 1e-12);
}

TEST(ConfigTest, ValidateRejectsBadInput) {
  NoiseLabConfig config;
  config.n = 0;
  EXPECT_FALSE(Validate(config).ok());
  config = {};
  config.accuracies = {0.5};
  EXPECT_FALSE(Validate(config).ok());
  config = {};
  config.trials = 0;
  EXPECT_FALSE(Validate(config).ok());
}

TEST(SweepTest, SplitParsingAndValidation) {
  EXPECT_EQ(ParseSplit("10x60")->rounds, 10);
  EXPECT_EQ(ParseSplit("10x60")->n, 60);
  EXPECT_FALSE(ParseSplit("10*60").ok());
  EXPECT_FALSE(ParseSplit("0x60").ok());
  NoiseLabConfig base;
  base.trials = 100;
  std::vector<Split> bad = {{7, 80}};
  EXPECT_FALSE(BudgetSweep(600, bad, base).ok());
}

TEST(SweepTest, SmallBudgetShape) {
  NoiseLabConfig base;
  base.trials = 2000;
  std::vector<Split> splits = {{2, 2}, {4, 1}};
  auto rows = BudgetSweep(4, splits, base);
  ASSERT_TRUE(rows.ok());
  ASSERT_EQ(rows->size(), 2u);
  for (const SweepRow& row : *rows) {
    for (double p : {row.elo.p, row.single_elim.p}) {
      EXPECT_GE(p, 0.0);
      EXPECT_LE(p, 1.0);
    }
  }
  const std::string csv = RenderSweepCsv(*rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "rounds,n,single_elim,single_elim_se,elo,elo_se");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
  EXPECT_NE(RenderSweepText(*rows, SingleElimRule::kKnockout).find("knockout"),
            std::string::npos);
}

TEST(NamesTest, RoundTrip) {
  for (SingleElimRule r : {SingleElimRule::kKnockout, SingleElimRule::kChampionDefense}) {
    EXPECT_EQ(*ParseSingleElimRule(SingleElimRuleName(r)), r);
  }
  for (TopTieMode m : {TopTieMode::kStrict, TopTieMode::kShare, TopTieMode::kInclusive}) {
    EXPECT_EQ(*ParseTopTieMode(TopTieModeName(m)), m);
  }
}

}  // namespace
}  // namespace eloevo::noiselab
