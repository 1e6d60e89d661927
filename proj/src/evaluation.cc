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

#include <algorithm>
#include <cmath>
#include <future>
#include <set>
#include <unordered_map>

#include "absl/strings/str_cat.h"

namespace eloevo {
namespace {

std::vector<ExampleRef> DistinctMisses(
    const std::string& agent_id, std::span<const ExampleRef> examples,
    const std::function<bool(const std::string&, const std::string&)>& cached,
    std::set<std::pair<std::string, std::string>>& claimed) {
  std::vector<ExampleRef> misses;
  for (const ExampleRef& example : examples) {
    if (cached(agent_id, example.example_id)) continue;
    if (!claimed.emplace(agent_id, example.example_id).second) continue;
    misses.push_back(example);
  }
  return misses;
}

// Aligns an evaluator's reply with the request. Anything missing, foreign
// or non-finite becomes a failure outcome.
std::vector<EvalOutcome> Normalize(const EvalRequest& request,
                                   std::vector<EvalOutcome> reply) {
  std::unordered_map<std::string, EvalOutcome> by_id;
  for (EvalOutcome& outcome : reply) {
    by_id.try_emplace(outcome.example_id, std::move(outcome));
  }
  std::vector<EvalOutcome> aligned;
  aligned.reserve(request.examples.size());
  for (const ExampleRef& example : request.examples) {
    auto it = by_id.find(example.example_id);
    if (it == by_id.end()) {
      aligned.push_back(FailedOutcome(request.agent_id, example.example_id,
                                      "evaluator returned no result"));
      continue;
    }
    EvalOutcome outcome = std::move(it->second);
    outcome.agent_id = request.agent_id;
    if (!std::isfinite(outcome.score)) {
      outcome = FailedOutcome(request.agent_id, example.example_id,
                              "evaluator returned a non-finite score");
    }
    aligned.push_back(std::move(outcome));
  }
  return aligned;
}

}  // namespace

EvalOutcome FailedOutcome(std::string agent_id, std::string example_id,
                          std::string reason) {
  EvalOutcome outcome;
  outcome.agent_id = std::move(agent_id);
  outcome.example_id = std::move(example_id);
  outcome.score = 0.0;
  outcome.diagnostics = absl::StrCat("evaluation failed: ", reason);
  outcome.failed = true;
  return outcome;
}

absl::StatusOr<double> MeanScore(std::span<const EvalOutcome> outcomes) {
  if (outcomes.empty()) {
    return absl::InvalidArgumentError("mean score of an empty outcome list");
  }
  double sum = 0.0;
  for (const EvalOutcome& outcome : outcomes) sum += outcome.score;
  return sum / static_cast<double>(outcomes.size());
}

EvaluationService::EvaluationService(Evaluator& evaluator,
                                     BudgetLedger& ledger, int parallelism)
    : evaluator_(evaluator),
      ledger_(ledger),
      parallelism_(std::max(1, parallelism)) {}

absl::StatusOr<BatchResult> EvaluationService::EvaluateBatch(
    const AgentRecord& agent, std::span<const ExampleRef> examples,
    int iteration, Phase phase) {
  std::vector<std::pair<AgentRecord, std::vector<ExampleRef>>> batches;
  batches.emplace_back(agent,
                       std::vector<ExampleRef>(examples.begin(), examples.end()));
  absl::StatusOr<std::vector<BatchResult>> results =
      EvaluateBatches(batches, iteration, phase);
  if (!results.ok()) return results.status();
  return std::move(results->front());
}

absl::StatusOr<std::vector<BatchResult>> EvaluationService::EvaluateBatches(
    std::span<const std::pair<AgentRecord, std::vector<ExampleRef>>> batches,
    int iteration, Phase phase) {
  std::vector<EvalRequest> requests;
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto cached = [this](const std::string& agent, const std::string& example) {
      return cache_.contains({agent, example});
    };
    std::set<std::pair<std::string, std::string>> claimed;
    int64_t needed = 0;
    for (const auto& [agent, examples] : batches) {
      EvalRequest request{agent.agent_id, agent.artifact_dir,
                          DistinctMisses(agent.agent_id, examples, cached,
                                         claimed)};
      needed += static_cast<int64_t>(request.examples.size());
      requests.push_back(std::move(request));
    }
    if (needed > ledger_.Remaining()) {
      return absl::ResourceExhaustedError(
          absl::StrCat("budget exhausted: batch needs ", needed,
                       " evaluations, remaining ", ledger_.Remaining()));
    }
  }

  // Evaluator calls run outside the lock, at most parallelism_ at a time.
  std::vector<std::vector<EvalOutcome>> fresh(requests.size());
  for (size_t start = 0; start < requests.size();
       start += static_cast<size_t>(parallelism_)) {
    const size_t end =
        std::min(requests.size(), start + static_cast<size_t>(parallelism_));
    std::vector<std::future<std::vector<EvalOutcome>>> running;
    for (size_t i = start; i < end; ++i) {
      if (requests[i].examples.empty()) {
        running.emplace_back();
        continue;
      }
      const EvalRequest& request = requests[i];
      if (end - start == 1) {
        fresh[i] = Normalize(request, evaluator_.Evaluate(request));
        running.emplace_back();
      } else {
        running.push_back(std::async(std::launch::async, [this, &request] {
          return Normalize(request, evaluator_.Evaluate(request));
        }));
      }
    }
    for (size_t i = start; i < end; ++i) {
      auto& future = running[i - start];
      if (future.valid()) fresh[i] = future.get();
    }
  }

  std::lock_guard<std::mutex> lock(mu_);
  std::vector<BatchResult> results(batches.size());
  for (size_t i = 0; i < batches.size(); ++i) {
    BatchResult& result = results[i];
    const int64_t count = static_cast<int64_t>(fresh[i].size());
    if (absl::Status s = ledger_.Debit(iteration, phase, count); !s.ok()) {
      return s;
    }
    result.debited = count;
    for (EvalOutcome& outcome : fresh[i]) {
      result.evaluated_ids.push_back(outcome.example_id);
      if (sink_) {
        if (absl::Status s = sink_(outcome, iteration, phase); !s.ok()) return s;
      }
      Key key{outcome.agent_id, outcome.example_id};
      cache_.emplace(std::move(key), std::move(outcome));
    }
    const std::string& agent_id = batches[i].first.agent_id;
    for (const ExampleRef& example : batches[i].second) {
      result.outcomes.push_back(cache_.at({agent_id, example.example_id}));
    }
  }
  return results;
}

int64_t EvaluationService::CountUncached(
    const std::string& agent_id, std::span<const ExampleRef> examples) const {
  std::lock_guard<std::mutex> lock(mu_);
  std::set<std::string> misses;
  for (const ExampleRef& example : examples) {
    if (!cache_.contains({agent_id, example.example_id})) {
      misses.insert(example.example_id);
    }
  }
  return static_cast<int64_t>(misses.size());
}

const EvalOutcome* EvaluationService::Lookup(
    const std::string& agent_id, const std::string& example_id) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = cache_.find({agent_id, example_id});
  return it == cache_.end() ? nullptr : &it->second;
}

void EvaluationService::Invalidate(const std::string& agent_id) {
  std::lock_guard<std::mutex> lock(mu_);
  for (auto it = cache_.begin(); it != cache_.end();) {
    if (it->first.first == agent_id) {
      it = cache_.erase(it);
    } else {
      ++it;
    }
  }
}

}  // namespace eloevo
