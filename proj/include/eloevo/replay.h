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

#ifndef ELOEVO_REPLAY_H_
#define ELOEVO_REPLAY_H_

#include <filesystem>
#include <string>

#include "absl/status/statusor.h"

namespace eloevo {

struct ReplayReport {
  bool ok = false;
  int iterations = 0;
  // First divergence between the event log and the stored snapshots.
  std::string divergence;
};

// Rebuilds the run from the event log alone (cache, ledger, ratings, clone
// flags, mean scores, winners) and checks every stored snapshot against it.
// A missing or unreadable log is a DataLoss error naming the bad record; a
// readable log that disagrees with the snapshots is a failed report.
absl::StatusOr<ReplayReport> Replay(const std::filesystem::path& root);

}  // namespace eloevo

#endif  // ELOEVO_REPLAY_H_
