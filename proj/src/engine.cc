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

#include "eloevo/engine.h"

#include <algorithm>
#include <cstdio>
#include <set>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "eloevo/serialization.h"
#include "eloevo/store.h"

namespace eloevo {
namespace {

namespace fs = std::filesystem;

constexpr std::string_view kDefaultStrategy =
    R"(# Strategy

Read the standings, the comparative report and the per-example diagnostics
in this directory. Then write a new agent under artifact/ that you expect to
score higher than every agent so far on examples you have not seen.

You may refine one agent, combine ideas from several, or start over. Explain
what you saw and why you expect your agent to do better in reasoning.md.
)";

std::string OutcomeText(const EvalOutcome& o) {
  return absl::StrCat("agent: ", o.agent_id, "\nexample: ", o.example_id,
                      "\nscore: ", Json(o.score).dump(),
                      "\nfingerprint: ", o.fingerprint.value_or("(none)"),
                      "\nfailed: ", o.failed ? "true" : "false",
                      "\n--- diagnostics ---\n", o.diagnostics,
                      "\n--- agent_stdout ---\n", o.agent_stdout, "\n");
}

}  // namespace

std::string_view EngineModeName(EngineMode mode) {
  return mode == EngineMode::kDefault ? "default" : "koth";
}

absl::StatusOr<EngineMode> ParseEngineMode(std::string_view name) {
  if (name == "default") return EngineMode::kDefault;
  if (name == "koth") return EngineMode::kKingOfTheHill;
  return absl::InvalidArgumentError(absl::StrCat("unknown mode: ", std::string(name)));
}

int CompetitorCount(EngineMode mode) {
  return mode == EngineMode::kDefault ? 3 : 2;
}

absl::Status ValidateConfig(const EngineConfig& config) {
  if (config.sample_size < 1) {
    return absl::InvalidArgumentError("sample size must be >= 1");
  }
  if (config.deep_focus_rounds != 0 && config.deep_focus_rounds != 1) {
    return absl::InvalidArgumentError("deep focus rounds must be 0 or 1");
  }
  if (absl::StatusOr<KFactor> k = KFactor::Create(config.k_factor); !k.ok()) {
    return k.status();
  }
  if (!(config.clone_penalty >= 0.0)) {
    return absl::InvalidArgumentError("clone penalty must be >= 0");
  }
  if (config.parallelism < 1) {
    return absl::InvalidArgumentError("parallelism must be >= 1");
  }
  const int64_t minimum =
      static_cast<int64_t>(config.sample_size) * CompetitorCount(config.mode);
  if (config.budget < minimum) {
    return absl::FailedPreconditionError(
        absl::StrCat("budget ", config.budget, " is below one iteration (",
                     minimum, " evaluations)"));
  }
  return absl::OkStatus();
}

int64_t WorstCaseIterationCost(const EngineConfig& config, int competitors,
                               bool deep_focus) {
  const int64_t n = config.sample_size;
  return n * competitors + (deep_focus && config.deep_focus_rounds == 1 ? n : 0);
}

std::vector<ExampleRef> SampleExamples(std::span<const ExampleRef> pool, int n,
                                       Rng& rng, bool* with_replacement) {
  std::vector<ExampleRef> sample;
  if (pool.empty() || n <= 0) return sample;
  const size_t count = static_cast<size_t>(n);
  const bool replace = count > pool.size();
  if (with_replacement != nullptr) *with_replacement = replace;
  if (replace) {
    for (size_t i = 0; i < count; ++i) sample.push_back(pool[rng.UniformIndex(pool.size())]);
    return sample;
  }
  std::vector<size_t> index(pool.size());
  for (size_t i = 0; i < index.size(); ++i) index[i] = i;
  for (size_t i = 0; i < count; ++i) {
    std::swap(index[i], index[i + rng.UniformIndex(index.size() - i)]);
    sample.push_back(pool[index[i]]);
  }
  return sample;
}

absl::StatusOr<std::string> PickWinner(const ScoreMap& mean_scores, Rng& rng) {
  if (mean_scores.empty()) {
    return absl::InvalidArgumentError("no competitors to pick a winner from");
  }
  double best = mean_scores.begin()->second;
  for (const auto& entry : mean_scores) best = std::max(best, entry.second);
  std::vector<std::string> winners;
  for (const auto& [agent, mean] : mean_scores) {
    if (CompareMeans(mean, best) == MatchOutcome::kTie) winners.push_back(agent);
  }
  if (winners.size() == 1) return winners.front();
  return winners[rng.UniformIndex(winners.size())];
}

std::vector<std::string> SelectCompetitors(
    std::span<const AgentRecord> population, const std::string& winner_id,
    const std::optional<std::string>& new_agent_id, Rng& rng) {
  std::vector<std::string> slots = {winner_id};
  if (new_agent_id) slots.push_back(*new_agent_id);
  std::vector<const AgentRecord*> pool;
  for (const AgentRecord& agent : population) {
    if (agent.clone || agent.agent_id == winner_id ||
        (new_agent_id && agent.agent_id == *new_agent_id)) {
      continue;
    }
    pool.push_back(&agent);
  }
  // Population order is creation order, so stability breaks rating ties
  // toward older agents.
  std::stable_sort(pool.begin(), pool.end(),
                   [](const AgentRecord* a, const AgentRecord* b) {
                     return a->rating > b->rating;
                   });
  if (pool.size() > 2) pool.resize(2);
  if (pool.size() == 1) slots.push_back(pool.front()->agent_id);
  if (pool.size() == 2) slots.push_back(pool[rng.UniformIndex(2)]->agent_id);
  return slots;
}

CloneCheck DetectClone(std::span<const EvalOutcome> new_outcomes,
                       const AgentOutcomes& competitor_outcomes) {
  CloneCheck check;
  auto has_fingerprints = [](std::span<const EvalOutcome> list) {
    return !list.empty() && std::all_of(list.begin(), list.end(), [](const EvalOutcome& o) {
      return o.fingerprint.has_value();
    });
  };
  if (!has_fingerprints(new_outcomes)) {
    check.skipped = true;
    check.warning = "clone check skipped: new agent outcomes lack fingerprints";
    return check;
  }
  std::vector<std::string> unchecked;
  for (const auto& [agent, outcomes] : competitor_outcomes) {
    if (!has_fingerprints(outcomes) || outcomes.size() != new_outcomes.size()) {
      unchecked.push_back(agent);
      continue;
    }
    bool same = true;
    for (size_t i = 0; same && i < outcomes.size(); ++i) {
      same = outcomes[i].example_id == new_outcomes[i].example_id &&
             outcomes[i].fingerprint == new_outcomes[i].fingerprint;
    }
    if (same) {
      check.clone = true;
      check.twin_id = agent;
      return check;
    }
  }
  if (!unchecked.empty()) {
    check.skipped = unchecked.size() == competitor_outcomes.size();
    check.warning = absl::StrCat("clone check incomplete: no fingerprints for ",
                                 absl::StrJoin(unchecked, ", "));
  }
  return check;
}

bool ChallengerDethrones(double champion_mean, double challenger_mean) {
  return CompareMeans(challenger_mean, champion_mean) == MatchOutcome::kWin;
}

const AgentRecord* BestAgent(std::span<const AgentRecord> agents) {
  const AgentRecord* best = nullptr;
  for (const AgentRecord& agent : agents) {
    if (agent.clone) continue;
    if (best == nullptr || agent.rating > best->rating ||
        (agent.rating == best->rating &&
         agent.created_iteration < best->created_iteration)) {
      best = &agent;
    }
  }
  return best;
}

std::string AgentIdFor(size_t ordinal) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "agent_%03zu", ordinal);
  return buf;
}

Engine::Engine(EngineConfig config, std::vector<ExampleRef> pool,
               Evaluator& evaluator, Mutator& mutator, RunStore& store)
    : config_(std::move(config)),
      pool_(std::move(pool)),
      mutator_(mutator),
      store_(store),
      rng_(config_.rng_seed),
      ledger_(config_.budget),
      evaluation_(evaluator, ledger_, config_.parallelism) {
  for (const ExampleRef& example : pool_) pool_by_id_.emplace(example.example_id, example);
  evaluation_.set_sink([this](const EvalOutcome& outcome, int iteration, Phase phase) {
    return store_.AppendEvent({{"event", "evaluation"},
                               {"iteration", iteration},
                               {"phase", PhaseName(phase)},
                               {"outcome", ToJson(outcome)}});
  });
}

AgentRecord& Engine::Agent(const std::string& id) {
  for (AgentRecord& agent : agents_) {
    if (agent.agent_id == id) return agent;
  }
  // Ids always come from agents_.
  std::abort();
}

AgentRecord Engine::Portable(const AgentRecord& agent) const {
  AgentRecord copy = agent;
  copy.artifact_dir = store_.Relative(agent.artifact_dir);
  return copy;
}

std::vector<std::pair<std::string, double>> Engine::Standings() const {
  std::vector<std::pair<std::string, double>> standings;
  for (const AgentRecord& agent : agents_) {
    if (!agent.clone) standings.emplace_back(agent.agent_id, agent.rating);
  }
  std::stable_sort(standings.begin(), standings.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return standings;
}

absl::Status Engine::Warn(int iteration, const std::string& message) {
  return store_.AppendEvent(
      {{"event", "warning"}, {"iteration", iteration}, {"message", message}});
}

absl::Status Engine::PersistAgents() const {
  for (const AgentRecord& agent : agents_) {
    absl::Status s = store_.WriteJson(
        fs::path("agents") / agent.agent_id / "agent.json", ToJson(Portable(agent)));
    if (!s.ok()) return s;
  }
  return absl::OkStatus();
}

absl::Status Engine::WriteOutcomeFiles(const fs::path& dir,
                                       const AgentOutcomes& outcomes) const {
  for (const auto& [agent, list] : outcomes) {
    for (const EvalOutcome& outcome : list) {
      absl::Status s = WriteFile(dir / DiagnosticsLocator(agent, outcome.example_id),
                                 OutcomeText(outcome));
      if (!s.ok()) return s;
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<Engine::Round> Engine::Evaluate(
    int iteration, Phase phase, const std::vector<std::string>& agent_ids,
    std::span<const ExampleRef> examples) {
  std::vector<std::pair<AgentRecord, std::vector<ExampleRef>>> batches;
  for (const std::string& id : agent_ids) {
    batches.emplace_back(Agent(id),
                         std::vector<ExampleRef>(examples.begin(), examples.end()));
  }
  absl::StatusOr<std::vector<BatchResult>> results =
      evaluation_.EvaluateBatches(batches, iteration, phase);
  if (!results.ok()) return results.status();
  Round round;
  for (size_t i = 0; i < agent_ids.size(); ++i) {
    BatchResult& result = (*results)[i];
    std::vector<std::string> example_ids;
    for (const ExampleRef& e : examples) example_ids.push_back(e.example_id);
    absl::Status s = store_.AppendEvent({{"event", "batch"},
                                         {"iteration", iteration},
                                         {"phase", PhaseName(phase)},
                                         {"agent_id", agent_ids[i]},
                                         {"example_ids", example_ids},
                                         {"evaluated_ids", result.evaluated_ids},
                                         {"debited", result.debited}});
    if (!s.ok()) return s;
    absl::StatusOr<double> mean = MeanScore(result.outcomes);
    if (!mean.ok()) return mean.status();
    round.means[agent_ids[i]] = *mean;
    round.outcomes.emplace_back(agent_ids[i], std::move(result.outcomes));
  }
  return round;
}

absl::StatusOr<std::string> Engine::PlayIteration(
    int index, const std::vector<std::string>& competitors,
    const std::optional<std::string>& new_agent,
    const std::optional<std::string>& deep_focus_ref) {
  IterationRecord record;
  record.index = index;
  record.competitor_ids = competitors;
  record.deep_focus_ref = deep_focus_ref;

  const std::vector<ExampleRef> sample = SampleExamples(
      pool_, config_.sample_size, rng_, &record.sampled_with_replacement);
  for (const ExampleRef& e : sample) record.example_ids.push_back(e.example_id);
  if (record.sampled_with_replacement) {
    absl::Status s = Warn(index, absl::StrCat("pool of ", pool_.size(),
                                              " is smaller than the sample size ",
                                              config_.sample_size,
                                              "; sampling with replacement"));
    if (!s.ok()) return s;
  }

  absl::StatusOr<Round> round = Evaluate(index, Phase::kTournament, competitors, sample);
  if (!round.ok()) return round.status();

  if (new_agent && competitors.size() >= 2) {
    AgentOutcomes others;
    const std::vector<EvalOutcome>* mine = nullptr;
    for (const auto& entry : round->outcomes) {
      if (entry.first == *new_agent) {
        mine = &entry.second;
      } else {
        others.push_back(entry);
      }
    }
    const CloneCheck check = DetectClone(*mine, others);
    if (!check.warning.empty()) {
      if (absl::Status s = Warn(index, check.warning); !s.ok()) return s;
    }
    if (check.clone) {
      AgentRecord& agent = Agent(*new_agent);
      const double before = agent.rating;
      agent.rating -= config_.clone_penalty;
      agent.clone = true;
      record.clone_ids.push_back(agent.agent_id);
      absl::Status s = store_.AppendEvent({{"event", "clone_detected"},
                                           {"iteration", index},
                                           {"agent_id", agent.agent_id},
                                           {"twin_id", check.twin_id},
                                           {"penalty", config_.clone_penalty},
                                           {"rating_before", before},
                                           {"rating_after", agent.rating}});
      if (!s.ok()) return s;
    }
  }

  record.mean_scores = round->means;
  for (const std::string& id : competitors) record.elo_before[id] = Agent(id).rating;
  record.elo_after = record.elo_before;
  if (competitors.size() >= 2) {
    absl::StatusOr<RatingMap> after =
        ApplyRound(record.elo_before, round->means, *KFactor::Create(config_.k_factor));
    if (!after.ok()) return after.status();
    record.elo_after = *std::move(after);
    for (const auto& [id, rating] : record.elo_after) Agent(id).rating = rating;
  }

  if (config_.mode == EngineMode::kKingOfTheHill && competitors.size() >= 2) {
    const std::string& champion = competitors[0];
    const std::string& challenger = competitors[1];
    record.winner_id = !Agent(challenger).clone &&
                               ChallengerDethrones(round->means.at(champion),
                                                   round->means.at(challenger))
                           ? challenger
                           : champion;
  } else {
    ScoreMap eligible;
    for (const auto& [id, mean] : round->means) {
      if (!Agent(id).clone) eligible[id] = mean;
    }
    absl::StatusOr<std::string> winner = PickWinner(eligible, rng_);
    if (!winner.ok()) return winner.status();
    record.winner_id = *winner;
  }

  absl::StatusOr<ComparativeReport> report =
      BuildReport(index, round->outcomes, config_.report_kind, config_.report_options);
  if (!report.ok()) return report.status();
  report->standings = Standings();

  const fs::path dir = fs::path("iterations") / std::to_string(index);
  Json examples = Json::array();
  for (const ExampleRef& e : sample) examples.push_back(ToJson(e));
  Json outcomes = Json::object();
  for (const auto& [id, list] : round->outcomes) {
    Json items = Json::array();
    for (const EvalOutcome& o : list) items.push_back(ToJson(o));
    outcomes[id] = std::move(items);
  }
  record.report_ref = (dir / "report.txt").generic_string();
  for (absl::Status s :
       {store_.WriteJson(dir / "examples.json", examples),
        store_.WriteJson(dir / "outcomes.json", outcomes),
        store_.WriteJson(dir / "report.json", ToJson(*report)),
        store_.WriteText(dir / "report.txt", RenderText(*report, config_.report_options)),
        store_.WriteJson(dir / "elo.json",
                         {{"before", record.elo_before}, {"after", record.elo_after}}),
        WriteOutcomeFiles(store_.root() / dir, round->outcomes)}) {
    if (!s.ok()) return s;
  }
  if (absl::Status s = store_.AppendEvent(
          {{"event", "iteration_completed"}, {"record", ToJson(record)}});
      !s.ok()) {
    return s;
  }
  if (absl::Status s = store_.WriteJson("ledger.json", ToJson(ledger_)); !s.ok()) {
    return s;
  }
  outcomes_by_iteration_[index] = round->outcomes;
  iterations_.push_back(std::move(record));
  return iterations_.back().winner_id;
}

absl::Status Engine::PrepareSession(const fs::path& session,
                                    const std::string& agent_id, int iteration,
                                    const std::vector<std::string>& next) {
  std::error_code ec;
  fs::create_directories(session, ec);
  if (ec) return absl::InternalError(absl::StrCat("cannot create ", session.string()));
  const IterationRecord& source = iterations_.at(static_cast<size_t>(iteration));

  Json standings = Json::array();
  std::vector<const AgentRecord*> ranked;
  for (const AgentRecord& agent : agents_) ranked.push_back(&agent);
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const AgentRecord* a, const AgentRecord* b) {
                     return a->rating > b->rating;
                   });
  for (const AgentRecord* agent : ranked) {
    standings.push_back({{"agent_id", agent->agent_id},
                         {"rating", agent->rating},
                         {"clone", agent->clone},
                         {"created_iteration", agent->created_iteration}});
  }

  Json info = {{"agent_id", agent_id},
               {"iteration", iteration + 1},
               {"source_iteration", iteration},
               {"run_seed", config_.rng_seed},
               {"parent_id", next.front()},
               {"competitors", next},
               {"report_kind", ReportKindName(config_.report_kind)}};

  const fs::path source_dir = store_.IterationDir(iteration);
  absl::StatusOr<std::string> report_text = ReadFile(source_dir / "report.txt");
  if (!report_text.ok()) return report_text.status();
  absl::StatusOr<std::string> report_json = ReadFile(source_dir / "report.json");
  if (!report_json.ok()) return report_json.status();

  std::string strategy(kDefaultStrategy);
  if (!config_.strategy_document.empty()) {
    absl::StatusOr<std::string> text = ReadFile(config_.strategy_document);
    if (!text.ok()) return text.status();
    strategy = *std::move(text);
  }

  for (absl::Status s : {WriteFile(session / "session.json", info.dump(2) + "\n"),
                         WriteFile(session / "elo_standings.json", standings.dump(2) + "\n"),
                         WriteFile(session / "report.txt", *report_text),
                         WriteFile(session / "report.json", *report_json),
                         WriteFile(session / "strategy.md", strategy)}) {
    if (!s.ok()) return s;
  }
  for (const auto& [doc, name] : {std::pair{&config_.objective_document, "objective.md"},
                                  std::pair{&config_.background_document, "background.md"}}) {
    if (doc->empty()) continue;
    absl::StatusOr<std::string> text = ReadFile(*doc);
    if (!text.ok()) return text.status();
    if (absl::Status s = WriteFile(session / name, *text); !s.ok()) return s;
  }

  std::set<std::string> shown(source.competitor_ids.begin(), source.competitor_ids.end());
  shown.insert(next.begin(), next.end());
  for (const std::string& id : shown) {
    absl::Status s = CopyTree(Agent(id).artifact_dir, session / "competitors" / id,
                              /*read_only=*/true);
    if (!s.ok()) return s;
  }
  return WriteOutcomeFiles(session, outcomes_by_iteration_.at(iteration));
}

absl::StatusOr<std::optional<std::string>> Engine::Evolve(
    int iteration, const std::vector<std::string>& next,
    std::optional<std::string>& deep_focus_ref) {
  const std::string id = AgentIdFor(next_ordinal_++);
  const fs::path session = store_.SessionDir(id);
  if (absl::Status s = PrepareSession(session, id, iteration, next); !s.ok()) return s;

  absl::Status created = mutator_.Run(session, MutationPhase::kCreate);
  std::error_code ec;
  if (created.ok() && (!fs::is_directory(session / "artifact", ec) ||
                       fs::is_empty(session / "artifact", ec) ||
                       !fs::is_regular_file(session / "reasoning.md", ec))) {
    created = absl::FailedPreconditionError(
        "mutator did not write artifact/ and reasoning.md");
  }
  if (!created.ok()) {
    absl::Status s = store_.AppendEvent({{"event", "mutation_failed"},
                                         {"iteration", iteration},
                                         {"agent_id", id},
                                         {"reason", std::string(created.message())}});
    if (!s.ok()) return s;
    return std::optional<std::string>();
  }

  AgentRecord agent;
  agent.agent_id = id;
  agent.artifact_dir = store_.ArtifactDir(id);
  agent.parent_ids = next;
  agent.created_iteration = iteration + 1;
  if (absl::Status s = CopyTree(session / "artifact", agent.artifact_dir); !s.ok()) return s;
  agents_.push_back(agent);
  for (absl::Status s :
       {store_.AppendEvent({{"event", "agent_created"}, {"agent", ToJson(Portable(agent))}}),
        store_.WriteJson(fs::path("agents") / id / "agent.json", ToJson(Portable(agent)))}) {
    if (!s.ok()) return s;
  }

  if (config_.deep_focus_rounds == 1 && iteration >= 1) {
    absl::StatusOr<std::optional<std::string>> ref = DeepFocus(
        id, iterations_.at(static_cast<size_t>(iteration - 1)), session, iteration + 1);
    if (!ref.ok()) return ref.status();
    deep_focus_ref = *ref;
  }
  return std::optional<std::string>(id);
}

absl::StatusOr<std::optional<std::string>> Engine::DeepFocus(
    const std::string& draft_id, const IterationRecord& previous,
    const fs::path& session, int iteration) {
  if (config_.deep_focus_rounds == 0) return std::optional<std::string>();
  if (ledger_.Remaining() < config_.sample_size) {
    absl::Status s = Warn(iteration, "Deep Focus skipped: remaining budget below sample size");
    if (!s.ok()) return s;
    return std::optional<std::string>();
  }
  std::vector<ExampleRef> examples;
  for (const std::string& id : previous.example_ids) examples.push_back(pool_by_id_.at(id));
  std::vector<std::string> agents = {draft_id};
  agents.insert(agents.end(), previous.competitor_ids.begin(), previous.competitor_ids.end());

  const int64_t spent_before = ledger_.spent();
  absl::StatusOr<Round> round = Evaluate(iteration, Phase::kDeepFocus, agents, examples);
  if (!round.ok()) return round.status();
  absl::StatusOr<ComparativeReport> report = BuildReport(
      previous.index, round->outcomes, config_.report_kind, config_.report_options);
  if (!report.ok()) return report.status();
  report->standings = Standings();
  const fs::path df_dir = session / "deep_focus";
  for (absl::Status s :
       {WriteFile(session / "deep_focus_report.txt",
                  RenderText(*report, config_.report_options)),
        WriteFile(session / "deep_focus_report.json", ToJson(*report).dump(2) + "\n"),
        WriteOutcomeFiles(df_dir, round->outcomes)}) {
    if (!s.ok()) return s;
  }

  bool revised = false;
  absl::StatusOr<uint64_t> before = HashTree(session / "artifact");
  absl::Status refined = mutator_.Run(session, MutationPhase::kRefine);
  if (!refined.ok()) {
    absl::Status s = Warn(iteration, absl::StrCat("refine phase failed, draft kept: ",
                                                  refined.message()));
    if (!s.ok()) return s;
  } else {
    absl::StatusOr<uint64_t> after = HashTree(session / "artifact");
    std::error_code ec;
    if (!after.ok() || fs::is_empty(session / "artifact", ec)) {
      absl::Status s = Warn(iteration, "refine phase left no artifact, draft kept");
      if (!s.ok()) return s;
    } else if (!before.ok() || *after != *before) {
      AgentRecord& draft = Agent(draft_id);
      if (absl::Status s = CopyTree(session / "artifact", draft.artifact_dir); !s.ok()) {
        return s;
      }
      evaluation_.Invalidate(draft_id);
      revised = true;
      absl::Status s = store_.AppendEvent({{"event", "agent_revised"},
                                           {"iteration", iteration},
                                           {"agent_id", draft_id}});
      if (!s.ok()) return s;
    }
  }
  const std::string locator = store_.Relative(session / "deep_focus_report.txt");
  absl::Status s = store_.AppendEvent({{"event", "deep_focus"},
                                       {"iteration", iteration},
                                       {"agent_id", draft_id},
                                       {"source_iteration", previous.index},
                                       {"debited", ledger_.spent() - spent_before},
                                       {"revised", revised},
                                       {"report_ref", locator}});
  if (!s.ok()) return s;
  return std::optional<std::string>(locator);
}

absl::StatusOr<RunResult> Engine::Run(const AgentRecord& seed) {
  if (absl::Status s = ValidateConfig(config_); !s.ok()) return s;
  if (pool_.empty()) return absl::InvalidArgumentError("example pool is empty");
  if (!agents_.empty()) return absl::FailedPreconditionError("engine already ran");

  AgentRecord first;
  first.agent_id = AgentIdFor(next_ordinal_++);
  first.artifact_dir = store_.ArtifactDir(first.agent_id);
  if (absl::Status s = CopyTree(seed.artifact_dir, first.artifact_dir); !s.ok()) return s;
  agents_.push_back(first);
  for (absl::Status s :
       {store_.AppendEvent({{"event", "run_started"},
                            {"schema_version", kSchemaVersion},
                            {"config", ToJson(config_)},
                            {"pool_size", pool_.size()},
                            {"seed_agent", first.agent_id}}),
        store_.AppendEvent({{"event", "agent_created"}, {"agent", ToJson(Portable(first))}}),
        PersistAgents()}) {
    if (!s.ok()) return s;
  }

  std::vector<std::string> competitors = {first.agent_id};
  std::optional<std::string> new_agent;
  std::optional<std::string> deep_focus_ref;
  for (int i = 0;; ++i) {
    absl::StatusOr<std::string> winner =
        PlayIteration(i, competitors, new_agent, deep_focus_ref);
    if (!winner.ok()) return winner.status();

    std::vector<std::string> next =
        config_.mode == EngineMode::kKingOfTheHill
            ? std::vector<std::string>{*winner}
            : SelectCompetitors(agents_, *winner, std::nullopt, rng_);
    const bool deep_focus = config_.deep_focus_rounds == 1 && i >= 1;
    const int64_t cost = WorstCaseIterationCost(
        config_, static_cast<int>(next.size()) + 1, deep_focus);
    if (ledger_.Remaining() < cost) break;

    deep_focus_ref.reset();
    absl::StatusOr<std::optional<std::string>> created = Evolve(i, next, deep_focus_ref);
    if (!created.ok()) return created.status();
    new_agent = *created;
    if (new_agent) next.insert(next.begin() + 1, *new_agent);
    competitors = std::move(next);
  }

  const AgentRecord* best = BestAgent(agents_);
  Json ratings = Json::object();
  for (const AgentRecord& agent : agents_) ratings[agent.agent_id] = agent.rating;
  for (absl::Status s :
       {PersistAgents(), store_.WriteJson("ledger.json", ToJson(ledger_)),
        store_.AppendEvent({{"event", "run_completed"},
                            {"best_agent_id", best->agent_id},
                            {"iterations", iterations_.size()},
                            {"spent", ledger_.spent()},
                            {"ratings", ratings}})}) {
    if (!s.ok()) return s;
  }
  return RunResult{*best, agents_, iterations_, ledger_};
}

}  // namespace eloevo
