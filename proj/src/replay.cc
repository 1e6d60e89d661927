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

#include "eloevo/replay.h"

#include <map>
#include <set>
#include <utility>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "eloevo/budget.h"
#include "eloevo/engine.h"
#include "eloevo/serialization.h"
#include "eloevo/store.h"

namespace eloevo {
namespace {

namespace fs = std::filesystem;

// Collects the first divergence and stops checking after it.
class Checker {
 public:
  bool failed() const { return !divergence_.empty(); }
  const std::string& divergence() const { return divergence_; }

  void Expect(bool condition, const std::string& what) {
    if (!condition && divergence_.empty()) divergence_ = what;
  }

 private:
  std::string divergence_;
};

std::string Describe(const RatingMap& ratings) {
  std::vector<std::string> parts;
  for (const auto& [id, r] : ratings) parts.push_back(absl::StrCat(id, "=", r));
  return absl::StrJoin(parts, ", ");
}

absl::Status Integrity(size_t line, const std::string& what) {
  return absl::DataLossError(
      absl::StrCat("events.jsonl record ", line + 1, ": ", what));
}

}  // namespace

absl::StatusOr<ReplayReport> Replay(const fs::path& root) {
  absl::StatusOr<std::unique_ptr<RunStore>> store = RunStore::Open(root);
  if (!store.ok()) return store.status();
  absl::StatusOr<std::vector<Json>> events = (*store)->ReadEvents();
  if (!events.ok()) return events.status();
  if (events->empty() || events->front().value("event", "") != "run_started") {
    return absl::DataLossError("events.jsonl does not start with run_started");
  }

  std::optional<EngineConfig> config;
  std::optional<BudgetLedger> ledger;
  std::vector<AgentRecord> agents;
  std::map<std::string, AgentRecord*> by_id;
  std::map<std::pair<std::string, std::string>, EvalOutcome> cache;
  std::vector<IterationRecord> records;
  std::optional<Json> completed;
  Checker check;

  auto agent = [&](const std::string& id) -> AgentRecord* {
    auto it = by_id.find(id);
    return it == by_id.end() ? nullptr : it->second;
  };

  for (size_t line = 0; line < events->size() && !check.failed(); ++line) {
    const Json& e = (*events)[line];
    const std::string kind = e.value("event", "");
    try {
      if (kind == "run_started") {
        if (config) return Integrity(line, "second run_started");
        absl::StatusOr<EngineConfig> c = EngineConfigFromJson(e.at("config"));
        if (!c.ok()) return Integrity(line, std::string(c.status().message()));
        config = *c;
        ledger.emplace(config->budget);
      } else if (kind == "agent_created") {
        absl::StatusOr<AgentRecord> a = AgentFromJson(e.at("agent"));
        if (!a.ok()) return Integrity(line, std::string(a.status().message()));
        if (by_id.count(a->agent_id)) return Integrity(line, "duplicate agent");
        a->rating = kInitialRating;
        a->clone = false;
        agents.reserve(agents.size() + 1);
        agents.push_back(*a);
        by_id.clear();
        for (AgentRecord& r : agents) by_id[r.agent_id] = &r;
        check.Expect(fs::is_directory(root / agents.back().artifact_dir),
                     absl::StrCat("agent ", a->agent_id, ": artifact missing"));
      } else if (kind == "evaluation") {
        absl::StatusOr<EvalOutcome> o = OutcomeFromJson(e.at("outcome"));
        if (!o.ok()) return Integrity(line, std::string(o.status().message()));
        absl::StatusOr<Phase> phase = ParsePhase(e.at("phase").get<std::string>());
        if (!phase.ok()) return Integrity(line, "bad phase");
        if (agent(o->agent_id) == nullptr) return Integrity(line, "unknown agent");
        const auto key = std::make_pair(o->agent_id, o->example_id);
        check.Expect(!cache.count(key),
                     absl::StrCat("pair (", o->agent_id, ", ", o->example_id,
                                  ") evaluated twice"));
        absl::Status debit = ledger->Debit(e.at("iteration").get<int>(), *phase, 1);
        check.Expect(debit.ok(), absl::StrCat("budget exceeded at record ", line + 1));
        cache[key] = *o;
      } else if (kind == "agent_revised") {
        const std::string id = e.at("agent_id").get<std::string>();
        for (auto it = cache.begin(); it != cache.end();) {
          it = it->first.first == id ? cache.erase(it) : std::next(it);
        }
      } else if (kind == "batch") {
        const std::string id = e.at("agent_id").get<std::string>();
        const auto evaluated = e.at("evaluated_ids").get<std::vector<std::string>>();
        check.Expect(e.at("debited").get<int64_t>() ==
                         static_cast<int64_t>(evaluated.size()),
                     absl::StrCat("batch of ", id, ": debit mismatch"));
        for (const std::string& ex : e.at("example_ids").get<std::vector<std::string>>()) {
          check.Expect(cache.count({id, ex}) > 0,
                       absl::StrCat("batch of ", id, ": no outcome for ", ex));
        }
      } else if (kind == "clone_detected") {
        AgentRecord* a = agent(e.at("agent_id").get<std::string>());
        if (a == nullptr) return Integrity(line, "unknown agent");
        a->rating -= config->clone_penalty;
        a->clone = true;
        check.Expect(a->rating == e.at("rating_after").get<double>(),
                     absl::StrCat("clone penalty of ", a->agent_id, " diverges"));
      } else if (kind == "iteration_completed") {
        absl::StatusOr<IterationRecord> r = IterationFromJson(e.at("record"));
        if (!r.ok()) return Integrity(line, std::string(r.status().message()));
        const std::string at = absl::StrCat("iteration ", r->index, ": ");
        check.Expect(r->index == static_cast<int>(records.size()),
                     at + "out of sequence");
        ScoreMap means;
        RatingMap before;
        for (const std::string& id : r->competitor_ids) {
          AgentRecord* a = agent(id);
          if (a == nullptr) return Integrity(line, "unknown competitor " + id);
          std::vector<EvalOutcome> outcomes;
          for (const std::string& ex : r->example_ids) {
            auto it = cache.find({id, ex});
            if (it == cache.end()) {
              check.Expect(false, at + "no outcome for " + id + " on " + ex);
              break;
            }
            outcomes.push_back(it->second);
          }
          if (check.failed()) break;
          absl::StatusOr<double> mean = MeanScore(outcomes);
          check.Expect(mean.ok(), at + "no examples");
          if (mean.ok()) means[id] = *mean;
          before[id] = a->rating;
        }
        if (check.failed()) break;
        check.Expect(means == r->mean_scores, at + "mean scores diverge");
        check.Expect(before == r->elo_before,
                     at + "ratings before the round diverge: replayed " + Describe(before));
        RatingMap after = before;
        if (before.size() >= 2) {
          absl::StatusOr<RatingMap> applied =
              ApplyRound(before, means, *KFactor::Create(config->k_factor));
          check.Expect(applied.ok(), at + "round cannot be applied");
          if (applied.ok()) after = *applied;
        }
        check.Expect(after == r->elo_after,
                     at + "ratings after the round diverge: replayed " + Describe(after));
        for (const auto& [id, rating] : after) agent(id)->rating = rating;

        // Winner: the champion rule in KotH, an argmax among non-clones
        // otherwise.
        AgentRecord* winner = agent(r->winner_id);
        check.Expect(winner != nullptr && !winner->clone && means.count(r->winner_id),
                     at + "winner is not an eligible competitor");
        if (!check.failed()) {
          if (config->mode == EngineMode::kKingOfTheHill && r->competitor_ids.size() >= 2) {
            const std::string& champ = r->competitor_ids[0];
            const std::string& chall = r->competitor_ids[1];
            const bool dethroned = !agent(chall)->clone &&
                                   ChallengerDethrones(means[champ], means[chall]);
            check.Expect(r->winner_id == (dethroned ? chall : champ),
                         at + "winner breaks the champion rule");
          } else {
            for (const auto& [id, mean] : means) {
              check.Expect(agent(id)->clone ||
                               CompareMeans(mean, means[r->winner_id]) != MatchOutcome::kWin,
                           at + "winner does not have the top mean");
            }
          }
        }
        if (!records.empty()) {
          check.Expect(!r->competitor_ids.empty() &&
                           r->competitor_ids[0] == records.back().winner_id,
                       at + "slot 1 is not the previous winner");
          std::set<std::string> known_clones;
          for (const AgentRecord& a : agents) {
            if (a.clone && std::find(r->clone_ids.begin(), r->clone_ids.end(),
                                     a.agent_id) == r->clone_ids.end()) {
              known_clones.insert(a.agent_id);
            }
          }
          for (const std::string& id : r->competitor_ids) {
            check.Expect(!known_clones.count(id), at + "clone " + id + " re-selected");
          }
        }

        absl::StatusOr<Json> elo = (*store)->ReadJson(
            fs::path("iterations") / std::to_string(r->index) / "elo.json");
        check.Expect(elo.ok(), at + "elo snapshot missing");
        if (elo.ok()) {
          RatingMap snap_before, snap_after;
          const Json snap_b = elo->value("before", Json::object());
          const Json snap_a = elo->value("after", Json::object());
          for (const auto& [id, v] : snap_b.items()) snap_before[id] = v.get<double>();
          for (const auto& [id, v] : snap_a.items()) snap_after[id] = v.get<double>();
          check.Expect(snap_before == before && snap_after == after,
                       at + "elo snapshot diverges from the replayed round");
        }
        check.Expect(fs::is_regular_file(root / r->report_ref), at + "report missing");
        records.push_back(*r);
      } else if (kind == "run_completed") {
        completed = e;
      } else if (kind == "deep_focus" || kind == "warning" ||
                 kind == "mutation_failed") {
        // Informational.
      } else {
        return Integrity(line, absl::StrCat("unknown event '", kind, "'"));
      }
    } catch (const Json::exception& ex) {
      return Integrity(line, ex.what());
    }
  }

  if (!check.failed()) {
    absl::StatusOr<Json> stored = (*store)->ReadJson("ledger.json");
    check.Expect(stored.ok(), "ledger.json missing");
    if (stored.ok()) {
      absl::StatusOr<BudgetLedger> l = LedgerFromJson(*stored);
      check.Expect(l.ok() && *l == *ledger, "ledger.json diverges from the event log");
    }
  }
  if (!check.failed()) {
    check.Expect(completed.has_value(), "run_completed event missing");
  }
  if (!check.failed()) {
    const AgentRecord* best = BestAgent(agents);
    check.Expect(best != nullptr &&
                     completed->value("best_agent_id", "") == best->agent_id,
                 "best agent diverges");
    check.Expect(completed->value("spent", int64_t{-1}) == ledger->spent(),
                 "spent budget diverges");
    for (const AgentRecord& a : agents) {
      absl::StatusOr<Json> doc =
          (*store)->ReadJson(fs::path("agents") / a.agent_id / "agent.json");
      absl::StatusOr<AgentRecord> stored =
          doc.ok() ? AgentFromJson(*doc) : absl::StatusOr<AgentRecord>(doc.status());
      check.Expect(stored.ok() && stored->rating == a.rating && stored->clone == a.clone,
                   "agent " + a.agent_id + " metadata diverges");
    }
  }

  ReplayReport report;
  report.ok = !check.failed();
  report.iterations = static_cast<int>(records.size());
  report.divergence = check.divergence();
  return report;
}

}  // namespace eloevo
