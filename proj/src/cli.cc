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

#include "eloevo/cli.h"

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "eloevo/engine.h"
#include "eloevo/noiselab.h"
#include "eloevo/plugins.h"
#include "eloevo/replay.h"
#include "eloevo/serialization.h"
#include "eloevo/store.h"
#include "eloevo/synthetic.h"

namespace eloevo {
namespace {

namespace fs = std::filesystem;

constexpr std::string_view kBuiltinSynthetic = "builtin:synthetic";

std::string Fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
  return buf;
}

absl::string_view View(std::string_view s) { return {s.data(), s.size()}; }

absl::StatusOr<std::vector<double>> ParseAccuracies(std::string_view text) {
  std::vector<double> out;
  for (absl::string_view part : absl::StrSplit(View(text), ',')) {
    double value = 0.0;
    if (!absl::SimpleAtod(part, &value) || !(value >= 0.0 && value <= 1.0)) {
      return absl::InvalidArgumentError(
          absl::StrCat("bad accuracy '", part, "', expected a value in [0, 1]"));
    }
    out.push_back(value);
  }
  return out;
}

absl::StatusOr<Json> ReadJsonFile(const fs::path& path) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  Json doc = Json::parse(*text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) {
    return absl::InvalidArgumentError(absl::StrCat(path.string(), ": not valid JSON"));
  }
  return doc;
}

// True when the first word of a shell command names an executable.
bool Resolvable(const std::string& command) {
  const std::string word = command.substr(0, command.find_first_of(" \t"));
  if (word.empty()) return false;
  if (word.find('/') != std::string::npos) return access(word.c_str(), X_OK) == 0;
  const char* path = getenv("PATH");
  for (absl::string_view dir : absl::StrSplit(path ? path : "/usr/bin:/bin", ':')) {
    const fs::path candidate = fs::path(std::string(dir)) / word;
    if (access(candidate.c_str(), X_OK) == 0) return true;
  }
  return false;
}

struct RunFlags {
  std::string config_path;
  std::string pool_path;
  std::string evaluator = std::string(kBuiltinSynthetic);
  std::string mutator = std::string(kBuiltinSynthetic);
  std::string run_dir;
  std::string seed_artifact;
  double seed_accuracy = 0.5;
  double clone_probability = 0.0;
  int64_t budget = 0;
  int sample_size = 0;
  std::string mode;
  int deep_focus = 0;
  uint64_t seed = 0;
  double k_factor = 0;
  double clone_penalty = 0;
  int parallelism = 0;
  double evaluator_timeout = 0;
  CLI::Option* budget_opt = nullptr;
  CLI::Option* sample_size_opt = nullptr;
  CLI::Option* mode_opt = nullptr;
  CLI::Option* deep_focus_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* k_factor_opt = nullptr;
  CLI::Option* clone_penalty_opt = nullptr;
  CLI::Option* parallelism_opt = nullptr;
  CLI::Option* evaluator_timeout_opt = nullptr;
};

// Defaults, then the config file, then flags. Unknown keys are rejected.
absl::StatusOr<EngineConfig> LoadConfig(const RunFlags& flags) {
  Json merged = ToJson(EngineConfig{});
  if (!flags.config_path.empty()) {
    absl::StatusOr<Json> file = ReadJsonFile(flags.config_path);
    if (!file.ok()) return file.status();
    if (!file->is_object()) return absl::InvalidArgumentError("config must be an object");
    for (const auto& [key, value] : file->items()) {
      if (key == "schema_version") {
        if (value != kSchemaVersion) {
          return absl::InvalidArgumentError(
              absl::StrCat("unsupported schema_version ", value.dump()));
        }
        continue;
      }
      if (!merged.contains(key)) {
        return absl::InvalidArgumentError(absl::StrCat("unknown config key '", key, "'"));
      }
      if (value.type() != merged[key].type() &&
          !(value.is_number() && merged[key].is_number())) {
        return absl::InvalidArgumentError(absl::StrCat("config key '", key,
                                                       "' has the wrong type"));
      }
      merged[key] = value;
    }
  }
  if (flags.budget_opt->count()) merged["budget"] = flags.budget;
  if (flags.sample_size_opt->count()) merged["sample_size"] = flags.sample_size;
  if (flags.mode_opt->count()) merged["mode"] = flags.mode;
  if (flags.deep_focus_opt->count()) merged["deep_focus"] = flags.deep_focus;
  if (flags.seed_opt->count()) merged["seed"] = flags.seed;
  if (flags.k_factor_opt->count()) merged["k_factor"] = flags.k_factor;
  if (flags.clone_penalty_opt->count()) merged["clone_penalty"] = flags.clone_penalty;
  if (flags.parallelism_opt->count()) merged["parallelism"] = flags.parallelism;
  absl::StatusOr<EngineConfig> config = EngineConfigFromJson(merged);
  if (!config.ok()) return absl::InvalidArgumentError(config.status().message());
  if (absl::Status s = ValidateConfig(*config); !s.ok()) {
    return absl::InvalidArgumentError(s.message());
  }
  return config;
}

int CmdRun(const RunFlags& flags, std::ostream& out, std::ostream& err) {
  absl::StatusOr<EngineConfig> config = LoadConfig(flags);
  if (!config.ok()) {
    err << "usage error: " << config.status().message() << "\n";
    return kExitUsage;
  }
  if (!(flags.clone_probability >= 0.0 && flags.clone_probability <= 1.0) ||
      !(flags.seed_accuracy >= 0.0 && flags.seed_accuracy <= 1.0)) {
    err << "usage error: probabilities must lie in [0, 1]\n";
    return kExitUsage;
  }

  absl::StatusOr<Json> pool_doc = ReadJsonFile(flags.pool_path);
  absl::StatusOr<std::vector<ExampleRef>> pool =
      pool_doc.ok() ? PoolFromJson(*pool_doc) : pool_doc.status();
  if (pool.ok() && pool->empty()) pool = absl::InvalidArgumentError("pool is empty");
  if (!pool.ok()) {
    err << "startup error: pool " << flags.pool_path << ": " << pool.status().message()
        << "\n";
    return kExitStartup;
  }

  const bool synthetic_eval = flags.evaluator == kBuiltinSynthetic;
  const bool synthetic_mut = flags.mutator == kBuiltinSynthetic;
  for (const auto& [name, command, builtin] :
       {std::tuple{"evaluator", &flags.evaluator, synthetic_eval},
        std::tuple{"mutator", &flags.mutator, synthetic_mut}}) {
    if (!builtin && !Resolvable(*command)) {
      err << "startup error: " << name << " command not found: " << *command << "\n";
      return kExitStartup;
    }
  }
  if (flags.seed_artifact.empty() && !synthetic_eval) {
    err << "startup error: --seed-artifact is required with external plugins\n";
    return kExitStartup;
  }
  if (!flags.seed_artifact.empty() && !fs::is_directory(flags.seed_artifact)) {
    err << "startup error: seed artifact is not a directory: " << flags.seed_artifact
        << "\n";
    return kExitStartup;
  }

  absl::StatusOr<std::unique_ptr<RunStore>> store = RunStore::Create(flags.run_dir);
  if (!store.ok()) {
    err << "startup error: " << store.status().message() << "\n";
    return kExitStartup;
  }
  Json config_doc = ToJson(*config);
  config_doc["schema_version"] = kSchemaVersion;
  Json pool_json = Json::array();
  for (const ExampleRef& e : *pool) pool_json.push_back(ToJson(e));
  for (absl::Status s : {(*store)->WriteJson("config.json", config_doc),
                         (*store)->WriteJson("pool.json", pool_json)}) {
    if (!s.ok()) {
      err << "error: " << s.message() << "\n";
      return kExitFailure;
    }
  }

  // The synthetic seed is staged next to the store and removed afterwards.
  AgentRecord seed;
  fs::path staged;
  if (flags.seed_artifact.empty()) {
    staged = fs::path(flags.run_dir).parent_path() /
             absl::StrCat(".eloevo-seed-", getpid());
    absl::Status s = WriteSyntheticArtifact(staged, {flags.seed_accuracy, std::nullopt});
    if (!s.ok()) {
      err << "startup error: " << s.message() << "\n";
      return kExitStartup;
    }
    seed.artifact_dir = staged;
  } else {
    seed.artifact_dir = flags.seed_artifact;
  }

  std::unique_ptr<Evaluator> evaluator;
  if (synthetic_eval) {
    evaluator = std::make_unique<SyntheticEvaluator>(config->rng_seed);
  } else if (flags.evaluator_timeout_opt->count()) {
    evaluator = std::make_unique<SubprocessEvaluator>(
        flags.evaluator, std::chrono::milliseconds(
                             static_cast<int64_t>(flags.evaluator_timeout * 1000)));
  } else {
    evaluator = std::make_unique<SubprocessEvaluator>(flags.evaluator);
  }
  std::unique_ptr<Mutator> mutator;
  if (synthetic_mut) {
    mutator = std::make_unique<SyntheticMutator>(config->rng_seed, flags.clone_probability);
  } else {
    mutator = std::make_unique<SubprocessMutator>(flags.mutator);
  }

  Engine engine(*config, *pool, *evaluator, *mutator, **store);
  absl::StatusOr<RunResult> result = engine.Run(seed);
  if (!staged.empty()) {
    std::error_code ec;
    fs::remove_all(staged, ec);
  }
  if (!result.ok()) {
    err << "error: " << result.status().message() << "\n";
    return kExitFailure;
  }

  std::vector<const AgentRecord*> ranked;
  for (const AgentRecord& a : result->agents) ranked.push_back(&a);
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const AgentRecord* a, const AgentRecord* b) {
                     return a->rating > b->rating;
                   });
  out << "Final standings:\n";
  for (const AgentRecord* a : ranked) {
    out << "  " << a->agent_id << "  " << Fixed(a->rating, 1)
        << (a->clone ? "  (clone)" : "") << "\n";
  }
  out << "Iterations: " << result->iterations.size() << "\n";
  out << "Evaluations: " << result->ledger.spent() << " of " << result->ledger.total()
      << "\n";
  out << "Best agent: " << result->best.agent_id << " (rating "
      << Fixed(result->best.rating, 1) << ")\n";
  out << "Best agent artifact: "
      << (*store)->ArtifactDir(result->best.agent_id).generic_string() << "\n";
  return kExitOk;
}

struct NoiseFlags {
  std::string acc = "0.70,0.69,0.68";
  int n = 20;
  int rounds = 1;
  int64_t budget = 600;
  std::string splits = "10x60,20x30,30x20,60x10";
  int64_t trials = 50000;
  uint64_t seed = 1;
  double k_factor = kDefaultKFactor;
  int workers = 1;
  std::string rule = "knockout";
  bool csv = false;
};

int CmdNoiseExact(const NoiseFlags& flags, std::ostream& out, std::ostream& err) {
  absl::StatusOr<std::vector<double>> acc = ParseAccuracies(flags.acc);
  if (!acc.ok() || acc->size() < 2) {
    err << "usage error: --acc needs at least two accuracies\n";
    return kExitUsage;
  }
  absl::StatusOr<double> pair = noiselab::ExactTieProbability(flags.n, (*acc)[0], (*acc)[1]);
  absl::StatusOr<double> top_tie = noiselab::ExactTopTieProbability(flags.n, *acc);
  if (!pair.ok() || !top_tie.ok()) {
    err << "usage error: " << (pair.ok() ? top_tie.status() : pair.status()).message()
        << "\n";
    return kExitUsage;
  }
  out << "n = " << flags.n << ", accuracies = " << flags.acc << "\n";
  out << "tie (highest score shared by two or more agents): " << Fixed(*top_tie, 4)
      << "\n";
  out << "pairwise tie, agents 1 and 2: " << Fixed(*pair, 4) << "\n";
  for (noiselab::TopTieMode mode :
       {noiselab::TopTieMode::kInclusive, noiselab::TopTieMode::kShare,
        noiselab::TopTieMode::kStrict}) {
    absl::StatusOr<double> top1 = noiselab::ExactTop1Probability(flags.n, *acc, mode);
    if (!top1.ok()) {
      err << "error: " << top1.status().message() << "\n";
      return kExitFailure;
    }
    out << "top1 (" << noiselab::TopTieModeName(mode) << "): " << Fixed(*top1, 4) << "\n";
  }
  return kExitOk;
}

absl::StatusOr<noiselab::NoiseLabConfig> BaseConfig(const NoiseFlags& flags) {
  absl::StatusOr<std::vector<double>> acc = ParseAccuracies(flags.acc);
  if (!acc.ok()) return acc.status();
  noiselab::NoiseLabConfig config;
  config.accuracies = *acc;
  config.n = flags.n;
  config.rounds = flags.rounds;
  config.k_factor = flags.k_factor;
  config.trials = flags.trials;
  config.rng_seed = flags.seed;
  config.workers = flags.workers;
  if (absl::Status s = noiselab::Validate(config); !s.ok()) return s;
  return config;
}

int CmdNoiseSweep(const NoiseFlags& flags, std::ostream& out, std::ostream& err) {
  absl::StatusOr<noiselab::NoiseLabConfig> base = BaseConfig(flags);
  absl::StatusOr<noiselab::SingleElimRule> rule = noiselab::ParseSingleElimRule(flags.rule);
  std::vector<noiselab::Split> splits;
  absl::Status status = base.ok() ? rule.status() : base.status();
  for (absl::string_view text : absl::StrSplit(View(flags.splits), ',')) {
    if (!status.ok()) break;
    absl::StatusOr<noiselab::Split> split =
        noiselab::ParseSplit(std::string_view(text.data(), text.size()));
    status = split.status();
    if (split.ok()) splits.push_back(*split);
  }
  if (!status.ok()) {
    err << "usage error: " << status.message() << "\n";
    return kExitUsage;
  }
  absl::StatusOr<std::vector<noiselab::SweepRow>> rows =
      noiselab::BudgetSweep(flags.budget, splits, *base, *rule);
  if (!rows.ok()) {
    err << "usage error: " << rows.status().message() << "\n";
    return kExitUsage;
  }
  out << (flags.csv ? noiselab::RenderSweepCsv(*rows)
                    : noiselab::RenderSweepText(*rows, *rule));
  return kExitOk;
}

int CmdNoiseMc(const NoiseFlags& flags, std::ostream& out, std::ostream& err) {
  absl::StatusOr<noiselab::NoiseLabConfig> config = BaseConfig(flags);
  absl::StatusOr<noiselab::SingleElimRule> rule = noiselab::ParseSingleElimRule(flags.rule);
  if (!config.ok() || !rule.ok()) {
    err << "usage error: " << (config.ok() ? rule.status() : config.status()).message()
        << "\n";
    return kExitUsage;
  }
  absl::StatusOr<noiselab::Estimate> elo = noiselab::EloRankingAccuracy(*config);
  absl::StatusOr<noiselab::Estimate> single = noiselab::SingleElimAccuracy(*config, *rule);
  if (!elo.ok() || !single.ok()) {
    err << "error: " << (elo.ok() ? single.status() : elo.status()).message() << "\n";
    return kExitFailure;
  }
  out << config->rounds << " rounds x " << config->n << " tasks, " << config->trials
      << " trials, seed " << config->rng_seed << "\n";
  out << "elo: " << Fixed(elo->p, 4) << " (se " << Fixed(elo->standard_error, 4) << ")\n";
  out << "single elimination (" << noiselab::SingleElimRuleName(*rule)
      << "): " << Fixed(single->p, 4) << " (se " << Fixed(single->standard_error, 4)
      << ")\n";
  return kExitOk;
}

int CmdReplay(const std::string& dir, std::ostream& out, std::ostream& err) {
  absl::StatusOr<ReplayReport> report = Replay(dir);
  if (!report.ok()) {
    err << "integrity error: " << report.status().message() << "\n";
    return kExitFailure;
  }
  if (!report->ok) {
    out << "replay FAILED: " << report->divergence << "\n";
    return kExitFailure;
  }
  out << "replay OK (" << report->iterations << " iterations)\n";
  return kExitOk;
}

int CmdReport(const std::string& dir, std::optional<int> iteration, std::ostream& out,
              std::ostream& err) {
  absl::StatusOr<std::unique_ptr<RunStore>> store = RunStore::Open(dir);
  if (!store.ok()) {
    err << "integrity error: " << store.status().message() << "\n";
    return kExitFailure;
  }
  if (!iteration) {
    int last = -1;
    while (fs::is_directory((*store)->IterationDir(last + 1))) ++last;
    if (last < 0) {
      err << "error: the run has no iterations\n";
      return kExitFailure;
    }
    iteration = last;
  }
  absl::StatusOr<std::string> text =
      (*store)->ReadText(fs::path("iterations") / std::to_string(*iteration) / "report.txt");
  if (!text.ok()) {
    err << "error: " << text.status().message() << "\n";
    return kExitFailure;
  }
  out << *text;
  return kExitOk;
}

}  // namespace

int Main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app("Budgeted evolutionary search with Elo tournaments", "eloevo");
  app.require_subcommand(1);

  RunFlags run;
  CLI::App* run_cmd = app.add_subcommand("run", "Run the evolution loop");
  run_cmd->add_option("--config", run.config_path, "Engine configuration (JSON)");
  run_cmd->add_option("--pool", run.pool_path, "Example pool (JSON)")->required();
  run_cmd->add_option("--evaluator", run.evaluator,
                      "Evaluator command or builtin:synthetic");
  run_cmd->add_option("--mutator", run.mutator, "Mutator command or builtin:synthetic");
  run_cmd->add_option("--run-dir", run.run_dir, "New run directory")->required();
  run_cmd->add_option("--seed-artifact", run.seed_artifact, "Seed artifact directory");
  run_cmd->add_option("--seed-accuracy", run.seed_accuracy,
                      "True accuracy of the synthetic seed agent");
  run_cmd->add_option("--synthetic-clone-probability", run.clone_probability,
                      "Chance that the synthetic mutator copies its parent");
  run.budget_opt = run_cmd->add_option("--budget", run.budget, "Total evaluations");
  run.sample_size_opt =
      run_cmd->add_option("--sample-size", run.sample_size, "Examples per iteration");
  run.mode_opt = run_cmd->add_option("--mode", run.mode, "default or koth")
                     ->check(CLI::IsMember({"default", "koth"}));
  run.deep_focus_opt = run_cmd->add_option("--deep-focus", run.deep_focus, "0 or 1")
                           ->check(CLI::IsMember({0, 1}));
  run.seed_opt = run_cmd->add_option("--seed", run.seed, "Random seed");
  run.k_factor_opt = run_cmd->add_option("--k-factor", run.k_factor, "Elo K-factor");
  run.clone_penalty_opt =
      run_cmd->add_option("--clone-penalty", run.clone_penalty, "Clone rating penalty");
  run.parallelism_opt =
      run_cmd->add_option("--parallelism", run.parallelism, "Concurrent batches");
  run.evaluator_timeout_opt = run_cmd->add_option(
      "--evaluator-timeout", run.evaluator_timeout, "Seconds per evaluator batch");

  NoiseFlags noise;
  CLI::App* noise_cmd = app.add_subcommand("noiselab", "Ranking-noise statistics");
  noise_cmd->require_subcommand(1);
  auto add_common = [&noise](CLI::App* cmd) {
    cmd->add_option("--acc", noise.acc, "Comma-separated true accuracies");
    cmd->add_option("--n", noise.n, "Tasks per round");
  };
  auto add_mc = [&noise](CLI::App* cmd) {
    cmd->add_option("--trials", noise.trials, "Monte Carlo trials");
    cmd->add_option("--seed", noise.seed, "Random seed");
    cmd->add_option("--k-factor", noise.k_factor, "Elo K-factor");
    cmd->add_option("--workers", noise.workers, "Threads");
    cmd->add_option("--rule", noise.rule, "knockout or champion-defense");
  };
  CLI::App* exact_cmd = noise_cmd->add_subcommand("exact", "Exact tie and top-1 odds");
  add_common(exact_cmd);
  CLI::App* sweep_cmd = noise_cmd->add_subcommand("sweep", "Fixed-budget split table");
  sweep_cmd->add_option("--acc", noise.acc, "Comma-separated true accuracies");
  sweep_cmd->add_option("--budget", noise.budget, "Total evaluations per agent");
  sweep_cmd->add_option("--splits", noise.splits, "Comma-separated <rounds>x<n>");
  sweep_cmd->add_flag("--csv", noise.csv, "CSV output");
  add_mc(sweep_cmd);
  CLI::App* mc_cmd = noise_cmd->add_subcommand("mc", "One Monte Carlo configuration");
  add_common(mc_cmd);
  mc_cmd->add_option("--rounds", noise.rounds, "Rounds");
  add_mc(mc_cmd);

  std::string dir;
  CLI::App* replay_cmd = app.add_subcommand("replay", "Verify a run directory");
  replay_cmd->add_option("dir", dir, "Run directory")->required();
  std::optional<int> iteration;
  CLI::App* report_cmd = app.add_subcommand("report", "Print an iteration report");
  report_cmd->add_option("dir", dir, "Run directory")->required();
  report_cmd->add_option("--iteration", iteration, "Iteration (default: last)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help requests exit 0; everything else is a usage error.
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (run_cmd->parsed()) return CmdRun(run, out, err);
  if (exact_cmd->parsed()) return CmdNoiseExact(noise, out, err);
  if (sweep_cmd->parsed()) return CmdNoiseSweep(noise, out, err);
  if (mc_cmd->parsed()) return CmdNoiseMc(noise, out, err);
  if (replay_cmd->parsed()) return CmdReplay(dir, out, err);
  return CmdReport(dir, iteration, out, err);
}

}  // namespace eloevo
