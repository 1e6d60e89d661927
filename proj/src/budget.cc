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

#include "eloevo/budget.h"

#include "absl/strings/str_cat.h"

namespace eloevo {

std::string_view PhaseName(Phase phase) {
  return phase == Phase::kTournament ? "tournament" : "deep_focus";
}

absl::StatusOr<Phase> ParsePhase(std::string_view name) {
  if (name == "tournament") return Phase::kTournament;
  if (name == "deep_focus") return Phase::kDeepFocus;
  return absl::InvalidArgumentError(absl::StrCat("unknown phase: ", std::string(name)));
}

absl::Status BudgetLedger::Debit(int iteration, Phase phase, int64_t count) {
  if (count < 0) {
    return absl::InvalidArgumentError("negative debit");
  }
  if (count > Remaining()) {
    return absl::ResourceExhaustedError(
        absl::StrCat("budget exhausted: need ", count, ", remaining ",
                     Remaining(), " of ", total_));
  }
  if (count == 0) return absl::OkStatus();
  spent_ += count;
  if (!entries_.empty() && entries_.back().iteration == iteration &&
      entries_.back().phase == phase) {
    entries_.back().debit += count;
  } else {
    entries_.push_back({iteration, phase, count});
  }
  return absl::OkStatus();
}

absl::StatusOr<BudgetLedger> BudgetLedger::Restore(
    int64_t total, int64_t spent, std::vector<LedgerEntry> entries) {
  int64_t sum = 0;
  for (const LedgerEntry& e : entries) sum += e.debit;
  if (total < 0 || sum != spent || spent > total) {
    return absl::DataLossError(absl::StrCat("inconsistent ledger: total ",
                                            total, ", spent ", spent,
                                            ", sum of debits ", sum));
  }
  BudgetLedger ledger(total);
  ledger.spent_ = spent;
  ledger.entries_ = std::move(entries);
  return ledger;
}

}  // namespace eloevo
