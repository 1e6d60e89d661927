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

#ifndef ELOEVO_BUDGET_H_
#define ELOEVO_BUDGET_H_

#include <cstdint>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace eloevo {

enum class Phase { kTournament, kDeepFocus };

std::string_view PhaseName(Phase phase);
absl::StatusOr<Phase> ParsePhase(std::string_view name);

struct LedgerEntry {
  int iteration = 0;
  Phase phase = Phase::kTournament;
  int64_t debit = 0;

  friend bool operator==(const LedgerEntry&, const LedgerEntry&) = default;
};

// Authoritative count of (agent, example) evaluations against budget B.
// Debits are recorded per (iteration, phase); zero-count debits (cache hits)
// leave no entry.
class BudgetLedger {
 public:
  explicit BudgetLedger(int64_t total = 0) : total_(total) {}

  int64_t total() const { return total_; }
  int64_t spent() const { return spent_; }
  int64_t Remaining() const { return total_ - spent_; }
  const std::vector<LedgerEntry>& entries() const { return entries_; }

  // Fails without side effects when count exceeds Remaining().
  absl::Status Debit(int iteration, Phase phase, int64_t count);

  // Rebuilds a ledger from persisted entries, checking conservation.
  static absl::StatusOr<BudgetLedger> Restore(int64_t total, int64_t spent,
                                              std::vector<LedgerEntry> entries);

  friend bool operator==(const BudgetLedger&, const BudgetLedger&) = default;

 private:
  int64_t total_ = 0;
  int64_t spent_ = 0;
  std::vector<LedgerEntry> entries_;
};

}  // namespace eloevo

#endif  // ELOEVO_BUDGET_H_
