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

#include "eloevo/evaluation.h"

#include <atomic>
#include <cmath>
#include <string>
#include <vector>

#include "eloevo/budget.h"
#include "gtest/gtest.h"

namespace eloevo {
namespace {

// Scores example "eK" as K mod 2 and counts invocations.
class ParityEvaluator : public Evaluator {
 public:
  std::vector<EvalOutcome> Evaluate(const EvalRequest& request) override {
    ++calls;
    std::vector<EvalOutcome> out;
    for (const ExampleRef& e : request.examples) {
      evaluated += 1;
      EvalOutcome o;
      o.agent_id = request.agent_id;
      o.example_id = e.example_id;
      o.score = std::stoi(e.example_id.substr(1)) % 2;
      o.fingerprint = std::to_string(static_cast<int>(o.score));
      out.push_back(o);
    }
    return out;
  }
  std::atomic<int> calls = 0;
  std::atomic<int> evaluated = 0;
};

// Replies out of order, drops one example and returns NaN for another.
class SloppyEvaluator : public Evaluator {
 public:
  std::vector<EvalOutcome> Evaluate(const EvalRequest& request) override {
    std::vector<EvalOutcome> out;
    for (auto it = request.examples.rbegin(); it != request.examples.rend(); ++it) {
      if (it->example_id == "e1") continue;
      EvalOutcome o;
      o.agent_id = request.agent_id;
      o.example_id = it->example_id;
      o.score = it->example_id == "e2" ? NAN : 1.0;
      out.push_back(o);
    }
    return out;
  }
};

std::vector<ExampleRef> Examples(int count, int first = 0) {
  std::vector<ExampleRef> out;
  for (int i = first; i < first + count; ++i) out.push_back({"e" + std::to_string(i), ""});
  return out;
}

AgentRecord Agent(const std::string& id) {
  AgentRecord a;
  a.agent_id = id;
  return a;
}

TEST(BudgetLedgerTest, Remaining) {
  BudgetLedger ledger(1500);
  EXPECT_EQ(ledger.Remaining(), 1500);
  ASSERT_TRUE(ledger.Debit(0, Phase::kTournament, 80).ok());
  EXPECT_EQ(ledger.Remaining(), 1420);
  ASSERT_TRUE(ledger.Debit(1, Phase::kTournament, 1420).ok());
  EXPECT_EQ(ledger.Remaining(), 0);
}

TEST(BudgetLedgerTest, OverdraftFailsWithoutSideEffects) {
  BudgetLedger ledger(10);
  ASSERT_TRUE(ledger.Debit(0, Phase::kTournament, 6).ok());
  EXPECT_EQ(ledger.Debit(0, Phase::kTournament, 5).code(),
            absl::StatusCode::kResourceExhausted);
  EXPECT_EQ(ledger.spent(), 6);
  EXPECT_EQ(ledger.entries().size(), 1u);
}

TEST(BudgetLedgerTest, EntriesMergeAndSkipZero) {
  BudgetLedger ledger(100);
  ASSERT_TRUE(ledger.Debit(0, Phase::kTournament, 3).ok());
  ASSERT_TRUE(ledger.Debit(0, Phase::kTournament, 4).ok());
  ASSERT_TRUE(ledger.Debit(1, Phase::kDeepFocus, 0).ok());
  ASSERT_TRUE(ledger.Debit(1, Phase::kDeepFocus, 2).ok());
  ASSERT_EQ(ledger.entries().size(), 2u);
  EXPECT_EQ(ledger.entries()[0], (LedgerEntry{0, Phase::kTournament, 7}));
  EXPECT_EQ(ledger.entries()[1], (LedgerEntry{1, Phase::kDeepFocus, 2}));
}

TEST(BudgetLedgerTest, RestoreChecksConservation) {
  EXPECT_TRUE(BudgetLedger::Restore(10, 5, {{0, Phase::kTournament, 5}}).ok());
  EXPECT_EQ(BudgetLedger::Restore(10, 6, {{0, Phase::kTournament, 5}}).status().code(),
            absl::StatusCode::kDataLoss);
  EXPECT_FALSE(BudgetLedger::Restore(4, 5, {{0, Phase::kTournament, 5}}).ok());
}

TEST(BudgetLedgerTest, PhaseNames) {
  EXPECT_EQ(PhaseName(Phase::kDeepFocus), "deep_focus");
  EXPECT_EQ(*ParsePhase("tournament"), Phase::kTournament);
  EXPECT_FALSE(ParsePhase("other").ok());
}

TEST(MeanScoreTest, Examples) {
  auto mean = [](std::vector<double> scores) {
    std::vector<EvalOutcome> list;
    for (double s : scores) list.push_back({.score = s});
    return MeanScore(list);
  };
  EXPECT_DOUBLE_EQ(*mean({1, 0, 1, 0}), 0.5);
  EXPECT_DOUBLE_EQ(*mean(std::vector<double>(20, 1.0)), 1.0);
  EXPECT_NEAR(*mean({0.9, 1.0, 0.0}), 0.633333333333, 1e-12);
  EXPECT_EQ(mean({}).status().code(), absl::StatusCode::kInvalidArgument);
}

TEST(EvaluationServiceTest, DebitsMissesOnceAndCachesHits) {
  ParityEvaluator evaluator;
  BudgetLedger ledger(1500);
  EvaluationService service(evaluator, ledger);
  auto first = service.EvaluateBatch(Agent("A"), Examples(20), 0, Phase::kTournament);
  ASSERT_TRUE(first.ok());
  EXPECT_EQ(first->outcomes.size(), 20u);
  EXPECT_EQ(first->debited, 20);
  EXPECT_EQ(ledger.spent(), 20);

  auto again = service.EvaluateBatch(Agent("A"), Examples(20), 1, Phase::kTournament);
  ASSERT_TRUE(again.ok());
  EXPECT_EQ(again->outcomes, first->outcomes);
  EXPECT_EQ(again->debited, 0);
  EXPECT_TRUE(again->evaluated_ids.empty());
  EXPECT_EQ(ledger.spent(), 20);
  EXPECT_EQ(evaluator.calls, 1);
}

TEST(EvaluationServiceTest, InsufficientBudgetRunsNothing) {
  ParityEvaluator evaluator;
  BudgetLedger ledger(5);
  EvaluationService service(evaluator, ledger);
  auto result = service.EvaluateBatch(Agent("A"), Examples(20), 0, Phase::kTournament);
  EXPECT_EQ(result.status().code(), absl::StatusCode::kResourceExhausted);
  EXPECT_EQ(ledger.spent(), 0);
  EXPECT_EQ(evaluator.calls, 0);
}

TEST(EvaluationServiceTest, PartialOverlapDebitsOnlyMisses) {
  ParityEvaluator evaluator;
  BudgetLedger ledger(100);
  EvaluationService service(evaluator, ledger);
  ASSERT_TRUE(service.EvaluateBatch(Agent("A"), Examples(10), 0, Phase::kTournament).ok());
  EXPECT_EQ(service.CountUncached("A", Examples(10, 5)), 5);
  auto r = service.EvaluateBatch(Agent("A"), Examples(10, 5), 1, Phase::kTournament);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->debited, 5);
  EXPECT_EQ(r->evaluated_ids.front(), "e10");
  EXPECT_EQ(evaluator.evaluated, 15);
}

TEST(EvaluationServiceTest, DuplicateExamplesDebitOnce) {
  ParityEvaluator evaluator;
  BudgetLedger ledger(100);
  EvaluationService service(evaluator, ledger);
  std::vector<ExampleRef> examples = {{"e1", ""}, {"e2", ""}, {"e1", ""}};
  auto r = service.EvaluateBatch(Agent("A"), examples, 0, Phase::kTournament);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->outcomes.size(), 3u);
  EXPECT_EQ(r->debited, 2);
  EXPECT_EQ(r->outcomes[0], r->outcomes[2]);
}

TEST(EvaluationServiceTest, BatchesShareOneBudgetCheck) {
  ParityEvaluator evaluator;
  BudgetLedger ledger(50);
  EvaluationService service(evaluator, ledger, /*parallelism=*/3);
  std::vector<std::pair<AgentRecord, std::vector<ExampleRef>>> batches = {
      {Agent("A"), Examples(20)}, {Agent("B"), Examples(20)}, {Agent("C"), Examples(20)}};
  EXPECT_EQ(service.EvaluateBatches(batches, 0, Phase::kTournament).status().code(),
            absl::StatusCode::kResourceExhausted);
  EXPECT_EQ(evaluator.calls, 0);
  batches.pop_back();
  auto r = service.EvaluateBatches(batches, 0, Phase::kTournament);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(ledger.spent(), 40);
  EXPECT_EQ((*r)[1].outcomes[3].agent_id, "B");
}

TEST(EvaluationServiceTest, SinkSeesFreshOutcomesInOrder) {
  ParityEvaluator evaluator;
  BudgetLedger ledger(100);
  EvaluationService service(evaluator, ledger, 2);
  std::vector<std::string> seen;
  service.set_sink([&seen](const EvalOutcome& o, int iteration, Phase phase) {
    seen.push_back(o.agent_id + "/" + o.example_id + "@" + std::to_string(iteration) +
                   std::string(PhaseName(phase)));
    return absl::OkStatus();
  });
  std::vector<std::pair<AgentRecord, std::vector<ExampleRef>>> batches = {
      {Agent("A"), Examples(2)}, {Agent("B"), Examples(2)}};
  ASSERT_TRUE(service.EvaluateBatches(batches, 3, Phase::kDeepFocus).ok());
  ASSERT_TRUE(service.EvaluateBatches(batches, 4, Phase::kTournament).ok());
  EXPECT_EQ(seen, (std::vector<std::string>{"A/e0@3deep_focus", "A/e1@3deep_focus",
                                            "B/e0@3deep_focus", "B/e1@3deep_focus"}));
}

TEST(EvaluationServiceTest, MissingAndNonFiniteRepliesBecomeFailures) {
  SloppyEvaluator evaluator;
  BudgetLedger ledger(100);
  EvaluationService service(evaluator, ledger);
  auto r = service.EvaluateBatch(Agent("A"), Examples(3), 0, Phase::kTournament);
  ASSERT_TRUE(r.ok());
  ASSERT_EQ(r->outcomes.size(), 3u);
  EXPECT_EQ(r->outcomes[0].example_id, "e0");
  EXPECT_EQ(r->outcomes[0].score, 1.0);
  for (int i : {1, 2}) {
    EXPECT_TRUE(r->outcomes[i].failed);
    EXPECT_EQ(r->outcomes[i].score, 0.0);
    EXPECT_NE(r->outcomes[i].diagnostics.find("evaluation failed"), std::string::npos);
  }
  // Failed attempts are still debited.
  EXPECT_EQ(ledger.spent(), 3);
}

TEST(EvaluationServiceTest, InvalidateForcesReevaluation) {
  ParityEvaluator evaluator;
  BudgetLedger ledger(100);
  EvaluationService service(evaluator, ledger);
  ASSERT_TRUE(service.EvaluateBatch(Agent("A"), Examples(4), 0, Phase::kTournament).ok());
  ASSERT_TRUE(service.EvaluateBatch(Agent("B"), Examples(4), 0, Phase::kTournament).ok());
  service.Invalidate("A");
  EXPECT_EQ(service.Lookup("A", "e0"), nullptr);
  EXPECT_NE(service.Lookup("B", "e0"), nullptr);
  EXPECT_EQ(service.CountUncached("A", Examples(4)), 4);
}

}  // namespace
}  // namespace eloevo
