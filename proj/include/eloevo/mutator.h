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

#ifndef ELOEVO_MUTATOR_H_
#define ELOEVO_MUTATOR_H_

#include <filesystem>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace eloevo {

enum class MutationPhase { kCreate, kRefine };

std::string_view MutationPhaseName(MutationPhase phase);
absl::StatusOr<MutationPhase> ParseMutationPhase(std::string_view name);

// Produces new agents inside a session directory prepared by the engine.
// Create must leave files under session_dir/artifact and a reasoning.md;
// refine may rewrite session_dir/artifact after reading the Deep Focus
// report. A non-OK status is a mutation failure.
class Mutator {
 public:
  virtual ~Mutator() = default;
  virtual absl::Status Run(const std::filesystem::path& session_dir,
                           MutationPhase phase) = 0;
};

}  // namespace eloevo

#endif  // ELOEVO_MUTATOR_H_
