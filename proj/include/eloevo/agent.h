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

#ifndef ELOEVO_AGENT_H_
#define ELOEVO_AGENT_H_

#include <filesystem>
#include <string>
#include <vector>

#include "eloevo/rating.h"

namespace eloevo {

// A candidate artifact in the population.
struct AgentRecord {
  std::string agent_id;
  std::filesystem::path artifact_dir;
  std::vector<std::string> parent_ids;
  int created_iteration = 0;
  double rating = kInitialRating;
  bool clone = false;

  friend bool operator==(const AgentRecord&, const AgentRecord&) = default;
};

}  // namespace eloevo

#endif  // ELOEVO_AGENT_H_
