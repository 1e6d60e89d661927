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

#include "eloevo/reports.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"

namespace eloevo {
namespace {

std::string Fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
  return buf;
}

void AppendIndented(std::string& out, std::string_view text) {
  if (text.empty()) {
    out += "    (empty)\n";
    return;
  }
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    absl::StrAppend(&out, "    ", std::string(text.substr(start, end - start)), "\n");
    if (end == text.size()) break;
    start = end + 1;
  }
}

void AppendList(std::string& out, std::string_view label,
                const std::vector<std::string>& ids, size_t cap) {
  absl::StrAppend(&out, "  ", std::string(label), " (", ids.size(), "): ");
  if (ids.empty()) {
    out += "-\n";
    return;
  }
  const size_t shown = std::min(cap, ids.size());
  out += absl::StrJoin(ids.begin(), ids.begin() + static_cast<long>(shown), ", ");
  if (shown < ids.size()) absl::StrAppend(&out, ", ... ", ids.size() - shown, " more");
  out += "\n";
}

}  // namespace

std::string_view ReportKindName(ReportKind kind) {
  return kind == ReportKind::kBinary ? "binary" : "continuous";
}

absl::StatusOr<ReportKind> ParseReportKind(std::string_view name) {
  if (name == "binary") return ReportKind::kBinary;
  if (name == "continuous") return ReportKind::kContinuous;
  return absl::InvalidArgumentError(absl::StrCat("unknown report kind: ", std::string(name)));
}

std::string FileSafeName(std::string_view id) {
  std::string out;
  out.reserve(id.size());
  for (char c : id) {
    const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                      (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.';
    out.push_back(keep ? c : '_');
  }
  if (out.empty() || out == "." || out == "..") out.insert(0, "_");
  return out;
}

std::string DiagnosticsLocator(std::string_view agent_id,
                               std::string_view example_id) {
  return absl::StrCat("diagnostics/", FileSafeName(agent_id), "/",
                      FileSafeName(example_id), ".txt");
}

std::string Excerpt(std::string_view text, size_t max_bytes) {
  if (text.size() <= max_bytes) return std::string(text);
  size_t cut = max_bytes;
  // Do not split a multi-byte UTF-8 sequence.
  while (cut > 0 && (static_cast<unsigned char>(text[cut]) & 0xC0) == 0x80) --cut;
  return absl::StrCat(std::string(text.substr(0, cut)), " [... truncated ",
                      text.size() - cut, " bytes]");
}

absl::StatusOr<ComparativeReport> BuildReport(int iteration,
                                              const AgentOutcomes& outcomes,
                                              ReportKind kind,
                                              const ReportOptions& options) {
  if (outcomes.empty()) {
    return absl::InvalidArgumentError("report needs at least one agent");
  }
  std::vector<std::string> ids;
  for (const EvalOutcome& o : outcomes.front().second) ids.push_back(o.example_id);
  for (const auto& [agent, list] : outcomes) {
    bool aligned = list.size() == ids.size();
    for (size_t i = 0; aligned && i < list.size(); ++i) {
      aligned = list[i].example_id == ids[i];
    }
    if (!aligned) {
      return absl::FailedPreconditionError(absl::StrCat(
          "agent ", agent, " was not evaluated on the same examples as ",
          outcomes.front().first));
    }
  }

  ComparativeReport report;
  report.iteration = iteration;
  report.kind = kind;

  // Columns of first occurrences; repeated ids carry the same cached result.
  std::vector<size_t> columns;
  {
    std::set<std::string> seen;
    for (size_t i = 0; i < ids.size(); ++i) {
      if (seen.insert(ids[i]).second) columns.push_back(i);
    }
  }

  for (const auto& [agent, list] : outcomes) {
    report.agents.push_back(agent);
    report.per_agent_means[agent] =
        list.empty() ? 0.0 : *MeanScore(std::span<const EvalOutcome>(list));
    report.unique_solved[agent];
    report.unique_failed[agent];
    for (const EvalOutcome& o : list) {
      report.diagnostics_index.try_emplace(
          {agent, o.example_id},
          DiagnosticsEntry{DiagnosticsLocator(agent, o.example_id),
                           o.diagnostics, o.agent_stdout});
    }
  }

  if (kind == ReportKind::kBinary) {
    for (size_t column : columns) {
      std::vector<bool> solved;
      int solvers = 0;
      for (const auto& entry : outcomes) {
        solved.push_back(entry.second[column].score >= kSolvedThreshold);
        solvers += solved.back() ? 1 : 0;
      }
      for (size_t a = 0; a < outcomes.size(); ++a) {
        const std::string& agent = outcomes[a].first;
        if (solved[a] && solvers == 1) {
          report.unique_solved[agent].push_back(ids[column]);
        } else if (!solved[a] && solvers > 0) {
          report.unique_failed[agent].push_back(ids[column]);
        }
      }
    }
  } else {
    std::vector<ScoreDelta> deltas;
    for (size_t column : columns) {
      ScoreDelta d;
      d.example_id = ids[column];
      double lo = 0.0, hi = 0.0;
      bool first = true;
      for (const auto& [agent, list] : outcomes) {
        const double s = list[column].score;
        d.scores[agent] = s;
        lo = first ? s : std::min(lo, s);
        hi = first ? s : std::max(hi, s);
        first = false;
      }
      d.delta = hi - lo;
      if (d.delta > 0.0) deltas.push_back(std::move(d));
    }
    std::stable_sort(deltas.begin(), deltas.end(),
                     [](const ScoreDelta& x, const ScoreDelta& y) {
                       return x.delta > y.delta;
                     });
    if (deltas.size() > options.divergence_cap) deltas.resize(options.divergence_cap);
    report.top_deltas = std::move(deltas);
  }
  return report;
}

std::string RenderText(const ComparativeReport& report,
                       const ReportOptions& options) {
  std::string out;
  absl::StrAppend(&out, "Comparative report: iteration ", report.iteration, " (",
                  std::string(ReportKindName(report.kind)), ")\n\n");

  out += "== Standings ==\n";
  if (report.standings.empty()) {
    out += "  (not available)\n";
  } else {
    int rank = 1;
    for (const auto& [agent, rating] : report.standings) {
      absl::StrAppend(&out, "  ", rank++, ". ", agent, "  ", Fixed(rating, 2), "\n");
    }
  }

  out += "\n== Mean scores ==\n";
  for (const std::string& agent : report.agents) {
    absl::StrAppend(&out, "  ", agent, "  ",
                    Fixed(report.per_agent_means.at(agent), 6), "\n");
  }

  out += "\n== Divergence ==\n";
  std::vector<std::pair<std::string, std::string>> excerpts;
  bool any = false;
  if (report.kind == ReportKind::kBinary) {
    for (const std::string& agent : report.agents) {
      const auto& solved = report.unique_solved.at(agent);
      const auto& failed = report.unique_failed.at(agent);
      if (solved.empty() && failed.empty()) continue;
      any = true;
      absl::StrAppend(&out, "-- ", agent, " --\n");
      AppendList(out, "uniquely solved", solved, options.divergence_cap);
      AppendList(out, "missed, solved by another", failed, options.divergence_cap);
      for (const auto* list : {&solved, &failed}) {
        for (size_t i = 0; i < std::min(options.divergence_cap, list->size()); ++i) {
          excerpts.emplace_back(agent, (*list)[i]);
        }
      }
    }
  } else if (!report.top_deltas.empty()) {
    any = true;
    out += "  largest score deltas:\n";
    for (const ScoreDelta& d : report.top_deltas) {
      std::vector<std::string> parts;
      for (const std::string& agent : report.agents) {
        parts.push_back(absl::StrCat(agent, "=", Fixed(d.scores.at(agent), 6)));
      }
      absl::StrAppend(&out, "  ", d.example_id, "  delta ", Fixed(d.delta, 6),
                      "  (", absl::StrJoin(parts, ", "), ")\n");
      for (const std::string& agent : report.agents) {
        excerpts.emplace_back(agent, d.example_id);
      }
    }
  }
  if (!any) out += "  no divergence\n";

  if (!excerpts.empty()) {
    out += "\n== Diagnostics ==\n";
    std::set<std::pair<std::string, std::string>> done;
    for (const auto& key : excerpts) {
      if (!done.insert(key).second) continue;
      auto it = report.diagnostics_index.find(key);
      if (it == report.diagnostics_index.end()) continue;
      const DiagnosticsEntry& entry = it->second;
      absl::StrAppend(&out, "[", key.first, " / ", key.second, "] ", entry.locator,
                      "\n  diagnostics:\n");
      AppendIndented(out, Excerpt(entry.diagnostics, options.excerpt_bytes));
      out += "  agent_stdout:\n";
      AppendIndented(out, Excerpt(entry.agent_stdout, options.excerpt_bytes));
    }
  }
  return out;
}

}  // namespace eloevo
