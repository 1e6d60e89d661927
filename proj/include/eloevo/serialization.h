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

#ifndef ELOEVO_SERIALIZATION_H_
#define ELOEVO_SERIALIZATION_H_

#include <vector>

#include "absl/status/statusor.h"
#include "eloevo/agent.h"
#include "eloevo/budget.h"
#include "eloevo/engine.h"
#include "eloevo/evaluation.h"
#include "eloevo/reports.h"
#include "json.hpp"

// JSON forms of the persisted records. Parsers return DataLossError on
// missing or mistyped fields.
namespace eloevo {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

Json ToJson(const ExampleRef& example);
absl::StatusOr<ExampleRef> ExampleFromJson(const Json& j);
// Accepts a bare array of examples or {"examples": [...]}; ids must be
// non-empty and unique.
absl::StatusOr<std::vector<ExampleRef>> PoolFromJson(const Json& j);

Json ToJson(const EvalOutcome& outcome);
absl::StatusOr<EvalOutcome> OutcomeFromJson(const Json& j);

// artifact_dir is written as given; callers pass store-relative paths.
Json ToJson(const AgentRecord& agent);
absl::StatusOr<AgentRecord> AgentFromJson(const Json& j);

Json ToJson(const IterationRecord& record);
absl::StatusOr<IterationRecord> IterationFromJson(const Json& j);

Json ToJson(const EngineConfig& config);
absl::StatusOr<EngineConfig> EngineConfigFromJson(const Json& j);

Json ToJson(const BudgetLedger& ledger);
absl::StatusOr<BudgetLedger> LedgerFromJson(const Json& j);

// Diagnostics entries are written as locators only.
Json ToJson(const ComparativeReport& report);

}  // namespace eloevo

#endif  // ELOEVO_SERIALIZATION_H_
