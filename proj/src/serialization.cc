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

#include "eloevo/serialization.h"

#include <set>
#include <tuple>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace eloevo {
namespace {

// Wraps nlohmann's exceptions for the *FromJson parsers.
template <typename Fn>
auto Parse(std::string_view what, Fn&& fn) -> absl::StatusOr<decltype(fn())> {
  try {
    return fn();
  } catch (const nlohmann::json::exception& e) {
    return absl::DataLossError(absl::StrCat("malformed ", std::string(what), ": ", e.what()));
  }
}

RatingMap RatingsFrom(const Json& j) {
  RatingMap out;
  for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = it->get<double>();
  return out;
}

}  // namespace

Json ToJson(const ExampleRef& example) {
  return {{"example_id", example.example_id}, {"payload_ref", example.payload_ref}};
}

absl::StatusOr<ExampleRef> ExampleFromJson(const Json& j) {
  return Parse("example", [&] {
    ExampleRef e;
    e.example_id = j.at("example_id").get<std::string>();
    e.payload_ref = j.value("payload_ref", std::string());
    return e;
  });
}

absl::StatusOr<std::vector<ExampleRef>> PoolFromJson(const Json& j) {
  const Json* list = &j;
  if (j.is_object()) {
    auto it = j.find("examples");
    if (it == j.end()) return absl::DataLossError("pool has no 'examples' array");
    list = &*it;
  }
  if (!list->is_array()) return absl::DataLossError("pool must be an array");
  std::vector<ExampleRef> pool;
  std::set<std::string> ids;
  for (const Json& item : *list) {
    absl::StatusOr<ExampleRef> e = ExampleFromJson(item);
    if (!e.ok()) return e.status();
    if (e->example_id.empty()) return absl::DataLossError("empty example_id in pool");
    if (!ids.insert(e->example_id).second) {
      return absl::DataLossError(
          absl::StrCat("duplicate example_id in pool: ", e->example_id));
    }
    pool.push_back(*std::move(e));
  }
  return pool;
}

Json ToJson(const EvalOutcome& o) {
  Json j = {{"agent_id", o.agent_id},
            {"example_id", o.example_id},
            {"score", o.score},
            {"fingerprint", nullptr},
            {"diagnostics", o.diagnostics},
            {"agent_stdout", o.agent_stdout},
            {"failed", o.failed}};
  if (o.fingerprint) j["fingerprint"] = *o.fingerprint;
  return j;
}

absl::StatusOr<EvalOutcome> OutcomeFromJson(const Json& j) {
  return Parse("outcome", [&] {
    EvalOutcome o;
    o.agent_id = j.at("agent_id").get<std::string>();
    o.example_id = j.at("example_id").get<std::string>();
    o.score = j.at("score").get<double>();
    if (auto it = j.find("fingerprint"); it != j.end() && !it->is_null()) {
      o.fingerprint = it->get<std::string>();
    }
    o.diagnostics = j.value("diagnostics", std::string());
    o.agent_stdout = j.value("agent_stdout", std::string());
    o.failed = j.value("failed", false);
    return o;
  });
}

Json ToJson(const AgentRecord& a) {
  return {{"agent_id", a.agent_id},
          {"artifact_dir", a.artifact_dir.generic_string()},
          {"parent_ids", a.parent_ids},
          {"created_iteration", a.created_iteration},
          {"rating", a.rating},
          {"clone", a.clone}};
}

absl::StatusOr<AgentRecord> AgentFromJson(const Json& j) {
  return Parse("agent", [&] {
    AgentRecord a;
    a.agent_id = j.at("agent_id").get<std::string>();
    a.artifact_dir = j.at("artifact_dir").get<std::string>();
    a.parent_ids = j.at("parent_ids").get<std::vector<std::string>>();
    a.created_iteration = j.at("created_iteration").get<int>();
    a.rating = j.at("rating").get<double>();
    a.clone = j.at("clone").get<bool>();
    return a;
  });
}

Json ToJson(const IterationRecord& r) {
  Json j = {{"index", r.index},
            {"example_ids", r.example_ids},
            {"sampled_with_replacement", r.sampled_with_replacement},
            {"competitor_ids", r.competitor_ids},
            {"mean_scores", r.mean_scores},
            {"elo_before", r.elo_before},
            {"elo_after", r.elo_after},
            {"winner_id", r.winner_id},
            {"clone_ids", r.clone_ids},
            {"report_ref", r.report_ref},
            {"deep_focus_ref", nullptr}};
  if (r.deep_focus_ref) j["deep_focus_ref"] = *r.deep_focus_ref;
  return j;
}

absl::StatusOr<IterationRecord> IterationFromJson(const Json& j) {
  return Parse("iteration record", [&] {
    IterationRecord r;
    r.index = j.at("index").get<int>();
    r.example_ids = j.at("example_ids").get<std::vector<std::string>>();
    r.sampled_with_replacement = j.at("sampled_with_replacement").get<bool>();
    r.competitor_ids = j.at("competitor_ids").get<std::vector<std::string>>();
    r.mean_scores = RatingsFrom(j.at("mean_scores"));
    r.elo_before = RatingsFrom(j.at("elo_before"));
    r.elo_after = RatingsFrom(j.at("elo_after"));
    r.winner_id = j.at("winner_id").get<std::string>();
    r.clone_ids = j.at("clone_ids").get<std::vector<std::string>>();
    r.report_ref = j.at("report_ref").get<std::string>();
    if (const Json& df = j.at("deep_focus_ref"); !df.is_null()) {
      r.deep_focus_ref = df.get<std::string>();
    }
    return r;
  });
}

Json ToJson(const EngineConfig& c) {
  return {{"mode", EngineModeName(c.mode)},
          {"sample_size", c.sample_size},
          {"deep_focus", c.deep_focus_rounds},
          {"k_factor", c.k_factor},
          {"clone_penalty", c.clone_penalty},
          {"budget", c.budget},
          {"seed", c.rng_seed},
          {"parallelism", c.parallelism},
          {"report_kind", ReportKindName(c.report_kind)},
          {"divergence_cap", c.report_options.divergence_cap},
          {"excerpt_bytes", c.report_options.excerpt_bytes},
          {"strategy", c.strategy_document.generic_string()},
          {"objective", c.objective_document.generic_string()},
          {"background", c.background_document.generic_string()}};
}

absl::StatusOr<EngineConfig> EngineConfigFromJson(const Json& j) {
  absl::StatusOr<EngineConfig> parsed = Parse("engine config", [&] {
    EngineConfig c;
    c.sample_size = j.at("sample_size").get<int>();
    c.deep_focus_rounds = j.at("deep_focus").get<int>();
    c.k_factor = j.at("k_factor").get<double>();
    c.clone_penalty = j.at("clone_penalty").get<double>();
    c.budget = j.at("budget").get<int64_t>();
    c.rng_seed = j.at("seed").get<uint64_t>();
    c.parallelism = j.at("parallelism").get<int>();
    c.report_options.divergence_cap = j.at("divergence_cap").get<size_t>();
    c.report_options.excerpt_bytes = j.at("excerpt_bytes").get<size_t>();
    c.strategy_document = j.value("strategy", std::string());
    c.objective_document = j.value("objective", std::string());
    c.background_document = j.value("background", std::string());
    return c;
  });
  if (!parsed.ok()) return parsed;
  if (absl::StatusOr<EngineMode> m =
          ParseEngineMode(j.value("mode", std::string()));
      m.ok()) {
    parsed->mode = *m;
  } else {
    return absl::DataLossError(m.status().message());
  }
  if (absl::StatusOr<ReportKind> k =
          ParseReportKind(j.value("report_kind", std::string()));
      k.ok()) {
    parsed->report_kind = *k;
  } else {
    return absl::DataLossError(k.status().message());
  }
  return parsed;
}

Json ToJson(const BudgetLedger& ledger) {
  Json entries = Json::array();
  for (const LedgerEntry& e : ledger.entries()) {
    entries.push_back({{"iteration", e.iteration},
                       {"phase", PhaseName(e.phase)},
                       {"debit", e.debit}});
  }
  return {{"total", ledger.total()},
          {"spent", ledger.spent()},
          {"per_phase", std::move(entries)}};
}

absl::StatusOr<BudgetLedger> LedgerFromJson(const Json& j) {
  struct Raw {
    int64_t total = 0;
    int64_t spent = 0;
    std::vector<std::tuple<int, std::string, int64_t>> entries;
  };
  absl::StatusOr<Raw> raw = Parse("ledger", [&] {
    Raw r;
    r.total = j.at("total").get<int64_t>();
    r.spent = j.at("spent").get<int64_t>();
    for (const Json& e : j.at("per_phase")) {
      r.entries.emplace_back(e.at("iteration").get<int>(),
                             e.at("phase").get<std::string>(),
                             e.at("debit").get<int64_t>());
    }
    return r;
  });
  if (!raw.ok()) return raw.status();
  std::vector<LedgerEntry> entries;
  for (const auto& [iteration, phase_name, debit] : raw->entries) {
    absl::StatusOr<Phase> phase = ParsePhase(phase_name);
    if (!phase.ok()) return absl::DataLossError(phase.status().message());
    entries.push_back({iteration, *phase, debit});
  }
  return BudgetLedger::Restore(raw->total, raw->spent, std::move(entries));
}

Json ToJson(const ComparativeReport& r) {
  Json index = Json::array();
  for (const auto& [key, entry] : r.diagnostics_index) {
    index.push_back({{"agent_id", key.first},
                     {"example_id", key.second},
                     {"locator", entry.locator}});
  }
  Json deltas = Json::array();
  for (const ScoreDelta& d : r.top_deltas) {
    deltas.push_back(
        {{"example_id", d.example_id}, {"scores", d.scores}, {"delta", d.delta}});
  }
  Json standings = Json::array();
  for (const auto& [agent, rating] : r.standings) {
    standings.push_back({{"agent_id", agent}, {"rating", rating}});
  }
  return {{"iteration", r.iteration},
          {"kind", ReportKindName(r.kind)},
          {"agents", r.agents},
          {"per_agent_means", r.per_agent_means},
          {"standings", std::move(standings)},
          {"unique_solved", r.unique_solved},
          {"unique_failed", r.unique_failed},
          {"top_deltas", std::move(deltas)},
          {"diagnostics_index", std::move(index)}};
}

}  // namespace eloevo
