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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <deque>
#include <thread>

#include "absl/strings/str_cat.h"
#include "eloevo/random.h"

namespace eloevo::noiselab {
namespace {

absl::Status ValidateAccuracies(std::span<const double> accuracies,
                                size_t min_count) {
  if (accuracies.size() < min_count) {
    return absl::InvalidArgumentError(
        absl::StrCat("need at least ", min_count, " accuracies"));
  }
  for (double p : accuracies) {
    if (!(p >= 0.0 && p <= 1.0)) {
      return absl::InvalidArgumentError(
          absl::StrCat("accuracy out of [0,1]: ", p));
    }
  }
  return absl::OkStatus();
}

std::vector<long double> PascalRow(int n) {
  std::vector<long double> row(static_cast<size_t>(n) + 1, 0.0L);
  row[0] = 1.0L;
  for (int i = 1; i <= n; ++i) {
    for (int k = i; k > 0; --k) row[k] += row[k - 1];
  }
  return row;
}

// pmf[k] for k = 0..n.
std::vector<long double> Pmf(int n, double p) {
  std::vector<long double> row = PascalRow(n);
  const long double q = 1.0L - static_cast<long double>(p);
  for (int k = 0; k <= n; ++k) {
    row[k] *= std::pow(static_cast<long double>(p), k) * std::pow(q, n - k);
  }
  return row;
}

// Probabilities that agent `focus` has a strictly unique top score, and the
// tie-share and inclusive variants.
struct TopOdds {
  long double strict = 0;
  long double share = 0;
  long double inclusive = 0;
};

TopOdds FocusTopOdds(int n, std::span<const double> accuracies, size_t focus) {
  std::vector<std::vector<long double>> pmf;
  std::vector<std::vector<long double>> cdf;  // cdf[j][k] = P(X_j <= k)
  for (double p : accuracies) {
    pmf.push_back(Pmf(n, p));
    std::vector<long double> c(pmf.back().size());
    long double running = 0;
    for (size_t k = 0; k < c.size(); ++k) c[k] = running += pmf.back()[k];
    cdf.push_back(std::move(c));
  }
  TopOdds odds;
  for (int k = 0; k <= n; ++k) {
    // ties[t]: P(exactly t other agents score k and all others score <= k).
    std::vector<long double> ties(accuracies.size(), 0.0L);
    ties[0] = 1.0L;
    size_t seen = 0;
    for (size_t j = 0; j < accuracies.size(); ++j) {
      if (j == focus) continue;
      const long double below = k > 0 ? cdf[j][k - 1] : 0.0L;
      const long double equal = pmf[j][k];
      for (size_t t = seen + 1; t > 0; --t) {
        ties[t] = ties[t] * below + ties[t - 1] * equal;
      }
      ties[0] *= below;
      ++seen;
    }
    const long double self = pmf[focus][k];
    odds.strict += self * ties[0];
    for (size_t t = 0; t <= seen; ++t) {
      odds.share += self * ties[t] / static_cast<long double>(t + 1);
      odds.inclusive += self * ties[t];
    }
  }
  return odds;
}

// Inverse-CDF binomial sampler over a precomputed table.
class BinomialTable {
 public:
  BinomialTable(int n, double p) {
    std::vector<long double> pmf = Pmf(n, p);
    long double running = 0;
    for (long double m : pmf) cdf_.push_back(static_cast<double>(running += m));
    cdf_.back() = 1.0;
  }

  int Sample(Rng& rng) const {
    const double u = rng.Uniform();
    return static_cast<int>(std::upper_bound(cdf_.begin(), cdf_.end(), u) -
                            cdf_.begin());
  }

 private:
  std::vector<double> cdf_;
};

// Runs `trials` independent trials split across workers. Each trial draws
// from its own stream derived from (seed, trial index).
template <typename Trial>
Estimate RunTrials(const NoiseLabConfig& config, const Trial& trial) {
  const int workers = std::max(1, config.workers);
  std::vector<int64_t> successes(static_cast<size_t>(workers), 0);
  auto work = [&](int w) {
    const int64_t begin = config.trials * w / workers;
    const int64_t end = config.trials * (w + 1) / workers;
    for (int64_t t = begin; t < end; ++t) {
      Rng rng(HashCombine(config.rng_seed, static_cast<uint64_t>(t)));
      if (trial(rng)) ++successes[static_cast<size_t>(w)];
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) threads.emplace_back(work, w);
    for (std::thread& t : threads) t.join();
  }
  Estimate estimate;
  estimate.trials = config.trials;
  for (int64_t s : successes) estimate.successes += s;
  estimate.p = static_cast<double>(estimate.successes) /
               static_cast<double>(config.trials);
  estimate.standard_error = std::sqrt(estimate.p * (1.0 - estimate.p) /
                                      static_cast<double>(config.trials));
  return estimate;
}

std::vector<BinomialTable> Tables(const NoiseLabConfig& config) {
  std::vector<BinomialTable> tables;
  for (double p : config.accuracies) tables.emplace_back(config.n, p);
  return tables;
}

std::string Fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
  return buf;
}

}  // namespace

std::string_view TopTieModeName(TopTieMode mode) {
  switch (mode) {
    case TopTieMode::kStrict:
      return "strict";
    case TopTieMode::kShare:
      return "share";
    case TopTieMode::kInclusive:
      return "inclusive";
  }
  return "strict";
}

absl::StatusOr<TopTieMode> ParseTopTieMode(std::string_view name) {
  for (TopTieMode mode :
       {TopTieMode::kStrict, TopTieMode::kShare, TopTieMode::kInclusive}) {
    if (name == TopTieModeName(mode)) return mode;
  }
  return absl::InvalidArgumentError(absl::StrCat("unknown tie mode: ", std::string(name)));
}

std::string_view SingleElimRuleName(SingleElimRule rule) {
  return rule == SingleElimRule::kKnockout ? "knockout" : "champion-defense";
}

absl::StatusOr<SingleElimRule> ParseSingleElimRule(std::string_view name) {
  if (name == "knockout") return SingleElimRule::kKnockout;
  if (name == "champion-defense") return SingleElimRule::kChampionDefense;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown single-elimination rule: ", std::string(name)));
}

std::string DescribeSingleElimRule(SingleElimRule rule) {
  if (rule == SingleElimRule::kKnockout) {
    return "knockout: each round eliminates all but the strict top scorer on "
           "a fresh sample (a tie at the top leaves no champion); rounds are "
           "memoryless, the last round's champion is ranked #1";
  }
  return "champion-defense: random initial champion defends against "
         "challengers in rotation; a challenger scoring >= the champion takes "
         "the title; the final champion is ranked #1";
}

absl::Status Validate(const NoiseLabConfig& config) {
  if (absl::Status s = ValidateAccuracies(config.accuracies, 2); !s.ok()) return s;
  if (config.n < 1) return absl::InvalidArgumentError("n must be >= 1");
  if (config.rounds < 1) return absl::InvalidArgumentError("rounds must be >= 1");
  if (config.trials < 1) return absl::InvalidArgumentError("trials must be >= 1");
  if (absl::StatusOr<KFactor> k = KFactor::Create(config.k_factor); !k.ok()) {
    return k.status();
  }
  return absl::OkStatus();
}

double BinomialPmf(int n, int k, double p) {
  if (n < 0 || k < 0 || k > n) return 0.0;
  return static_cast<double>(Pmf(n, p)[static_cast<size_t>(k)]);
}

absl::StatusOr<double> ExactTieProbability(int n, double p1, double p2) {
  const double ps[] = {p1, p2};
  if (absl::Status s = ValidateAccuracies(ps, 2); !s.ok()) return s;
  if (n < 1) return absl::InvalidArgumentError("n must be >= 1");
  const std::vector<long double> a = Pmf(n, p1);
  const std::vector<long double> b = Pmf(n, p2);
  long double sum = 0;
  for (int k = 0; k <= n; ++k) sum += a[k] * b[k];
  return static_cast<double>(sum);
}

absl::StatusOr<double> ExactTopTieProbability(int n,
                                              std::span<const double> accuracies) {
  if (absl::Status s = ValidateAccuracies(accuracies, 2); !s.ok()) return s;
  if (n < 1) return absl::InvalidArgumentError("n must be >= 1");
  long double unique = 0;
  for (size_t a = 0; a < accuracies.size(); ++a) {
    unique += FocusTopOdds(n, accuracies, a).strict;
  }
  return static_cast<double>(std::clamp(1.0L - unique, 0.0L, 1.0L));
}

absl::StatusOr<double> ExactTop1Probability(int n,
                                            std::span<const double> accuracies,
                                            TopTieMode mode) {
  if (absl::Status s = ValidateAccuracies(accuracies, 2); !s.ok()) return s;
  if (n < 1) return absl::InvalidArgumentError("n must be >= 1");
  const TopOdds odds = FocusTopOdds(n, accuracies, 0);
  switch (mode) {
    case TopTieMode::kStrict:
      return static_cast<double>(odds.strict);
    case TopTieMode::kShare:
      return static_cast<double>(odds.share);
    case TopTieMode::kInclusive:
      return static_cast<double>(odds.inclusive);
  }
  return static_cast<double>(odds.strict);
}

size_t TrueBest(std::span<const double> accuracies) {
  return static_cast<size_t>(
      std::max_element(accuracies.begin(), accuracies.end()) - accuracies.begin());
}

absl::StatusOr<Estimate> EloRankingAccuracy(const NoiseLabConfig& config) {
  if (absl::Status s = Validate(config); !s.ok()) return s;
  const std::vector<BinomialTable> tables = Tables(config);
  const size_t agents = config.accuracies.size();
  const size_t best = TrueBest(config.accuracies);
  return RunTrials(config, [&](Rng& rng) {
    std::vector<double> ratings(agents, kInitialRating);
    std::vector<double> scores(agents);
    for (int r = 0; r < config.rounds; ++r) {
      for (size_t a = 0; a < agents; ++a) scores[a] = tables[a].Sample(rng);
      ApplyRoundInPlace(ratings, scores, config.k_factor);
    }
    for (size_t a = 0; a < agents; ++a) {
      if (a != best && ratings[a] >= ratings[best]) return false;
    }
    return true;
  });
}

absl::StatusOr<Estimate> SingleElimAccuracy(const NoiseLabConfig& config,
                                            SingleElimRule rule) {
  if (absl::Status s = Validate(config); !s.ok()) return s;
  const std::vector<BinomialTable> tables = Tables(config);
  const size_t agents = config.accuracies.size();
  const size_t best = TrueBest(config.accuracies);
  constexpr size_t kNone = static_cast<size_t>(-1);

  if (rule == SingleElimRule::kKnockout) {
    return RunTrials(config, [&](Rng& rng) {
      std::vector<int> scores(agents);
      size_t champion = kNone;
      for (int r = 0; r < config.rounds; ++r) {
        for (size_t a = 0; a < agents; ++a) scores[a] = tables[a].Sample(rng);
        const int top = *std::max_element(scores.begin(), scores.end());
        champion = kNone;
        if (std::count(scores.begin(), scores.end(), top) == 1) {
          champion = static_cast<size_t>(
              std::find(scores.begin(), scores.end(), top) - scores.begin());
        }
      }
      return champion == best;
    });
  }

  return RunTrials(config, [&](Rng& rng) {
    size_t champion = rng.UniformIndex(agents);
    std::deque<size_t> queue;
    for (size_t a = 0; a < agents; ++a) {
      if (a != champion) queue.push_back(a);
    }
    // Random initial rotation order (Fisher-Yates).
    for (size_t i = queue.size(); i > 1; --i) {
      std::swap(queue[i - 1], queue[rng.UniformIndex(i)]);
    }
    for (int r = 0; r < config.rounds; ++r) {
      const size_t challenger = queue.front();
      queue.pop_front();
      const int defend = tables[champion].Sample(rng);
      const int attack = tables[challenger].Sample(rng);
      if (attack >= defend) {
        queue.push_back(champion);
        champion = challenger;
      } else {
        queue.push_back(challenger);
      }
    }
    return champion == best;
  });
}

absl::StatusOr<Split> ParseSplit(std::string_view text) {
  const size_t x = text.find_first_of("xX");
  Split split;
  auto parse = [](std::string_view part, int& out) {
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), out);
    return ec == std::errc() && ptr == part.data() + part.size() && out > 0;
  };
  if (x == std::string_view::npos || !parse(text.substr(0, x), split.rounds) ||
      !parse(text.substr(x + 1), split.n)) {
    return absl::InvalidArgumentError(
        absl::StrCat("bad split '", std::string(text), "', expected <rounds>x<n>"));
  }
  return split;
}

absl::StatusOr<std::vector<SweepRow>> BudgetSweep(int64_t budget,
                                                  std::span<const Split> splits,
                                                  const NoiseLabConfig& base,
                                                  SingleElimRule rule) {
  for (const Split& split : splits) {
    if (static_cast<int64_t>(split.rounds) * split.n != budget) {
      return absl::InvalidArgumentError(
          absl::StrCat("split ", split.rounds, "x", split.n, " uses ",
                       static_cast<int64_t>(split.rounds) * split.n,
                       " evaluations per agent, budget is ", budget));
    }
  }
  std::vector<SweepRow> rows;
  for (const Split& split : splits) {
    NoiseLabConfig config = base;
    config.rounds = split.rounds;
    config.n = split.n;
    absl::StatusOr<Estimate> single = SingleElimAccuracy(config, rule);
    if (!single.ok()) return single.status();
    absl::StatusOr<Estimate> elo = EloRankingAccuracy(config);
    if (!elo.ok()) return elo.status();
    rows.push_back({split.rounds, split.n, *single, *elo});
  }
  return rows;
}

std::string RenderSweepText(std::span<const SweepRow> rows, SingleElimRule rule) {
  std::string out = absl::StrCat("# single_elim rule: ", DescribeSingleElimRule(rule),
                                 "\n# elo: batch pairwise updates, success iff the "
                                 "true-best agent holds the strictly highest rating\n");
  char line[160];
  std::snprintf(line, sizeof(line), "%6s %6s %12s %8s %8s %8s\n", "rounds", "n",
                "single_elim", "se", "elo", "se");
  out += line;
  for (const SweepRow& row : rows) {
    std::snprintf(line, sizeof(line), "%6d %6d %12.4f %8.4f %8.4f %8.4f\n",
                  row.rounds, row.n, row.single_elim.p,
                  row.single_elim.standard_error, row.elo.p,
                  row.elo.standard_error);
    out += line;
  }
  return out;
}

std::string RenderSweepCsv(std::span<const SweepRow> rows) {
  std::string out = "rounds,n,single_elim,single_elim_se,elo,elo_se\n";
  for (const SweepRow& row : rows) {
    absl::StrAppend(&out, row.rounds, ",", row.n, ",", Fixed(row.single_elim.p, 6),
                    ",", Fixed(row.single_elim.standard_error, 6), ",",
                    Fixed(row.elo.p, 6), ",", Fixed(row.elo.standard_error, 6),
                    "\n");
  }
  return out;
}

}  // namespace eloevo::noiselab
