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

#ifndef ELOEVO_REPORTS_H_
#define ELOEVO_REPORTS_H_

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "eloevo/evaluation.h"

namespace eloevo {

enum class ReportKind { kBinary, kContinuous };

std::string_view ReportKindName(ReportKind kind);
absl::StatusOr<ReportKind> ParseReportKind(std::string_view name);

// Binary tasks: a score at or above this counts as solved. Evaluators emit
// 0.9 for answers that were right but over a cost cap.
inline constexpr double kSolvedThreshold = 0.9;

struct ReportOptions {
  // Longest divergence list shown per category, and the top_deltas length.
  size_t divergence_cap = 10;
  // Per-example byte cap for inlined diagnostics and agent_stdout.
  size_t excerpt_bytes = 4096;
};

struct ScoreDelta {
  std::string example_id;
  std::map<std::string, double> scores;
  // Max over agent pairs of |score difference|.
  double delta = 0.0;
};

struct DiagnosticsEntry {
  // Relative to the directory the report is written into.
  std::string locator;
  std::string diagnostics;
  std::string agent_stdout;
};

using AgentOutcomes = std::vector<std::pair<std::string, std::vector<EvalOutcome>>>;

// Where competitors diverge on one shared example set.
struct ComparativeReport {
  int iteration = 0;
  ReportKind kind = ReportKind::kBinary;
  // Competitor order as given.
  std::vector<std::string> agents;
  std::map<std::string, double> per_agent_means;
  // (agent, rating), best first. Filled by the caller when known.
  std::vector<std::pair<std::string, double>> standings;
  // Binary kind. unique_solved[a]: a solved it and no other competitor did.
  // unique_failed[a]: a missed it while at least one other competitor solved
  // it. Lists are complete; the divergence cap applies when rendering.
  std::map<std::string, std::vector<std::string>> unique_solved;
  std::map<std::string, std::vector<std::string>> unique_failed;
  // Continuous kind. Nonzero deltas only, largest first, at most
  // divergence_cap entries.
  std::vector<ScoreDelta> top_deltas;
  std::map<std::pair<std::string, std::string>, DiagnosticsEntry>
      diagnostics_index;
};

// Makes an id safe to use as a single path component.
std::string FileSafeName(std::string_view id);

// Locator of the diagnostics file for (agent, example).
std::string DiagnosticsLocator(std::string_view agent_id,
                               std::string_view example_id);

// All agents must cover the same example ids in the same order.
absl::StatusOr<ComparativeReport> BuildReport(int iteration,
                                              const AgentOutcomes& outcomes,
                                              ReportKind kind,
                                              const ReportOptions& options = {});

// Deterministic text rendering: standings, means, divergence and inlined
// diagnostics excerpts of the divergent examples.
std::string RenderText(const ComparativeReport& report,
                       const ReportOptions& options = {});

// Keeps at most max_bytes (backing off to a UTF-8 boundary) and appends a
// truncation marker when anything was dropped.
std::string Excerpt(std::string_view text, size_t max_bytes);

}  // namespace eloevo

#endif  // ELOEVO_REPORTS_H_
