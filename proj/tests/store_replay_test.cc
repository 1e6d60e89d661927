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

#include <filesystem>
#include <fstream>
#include <string>

#include "eloevo/engine.h"
#include "eloevo/replay.h"
#include "eloevo/serialization.h"
#include "eloevo/store.h"
#include "eloevo/synthetic.h"
#include "gtest/gtest.h"

namespace eloevo {
namespace {

namespace fs = std::filesystem;

fs::path Fresh(const std::string& name) {
  fs::path dir = fs::path(::testing::TempDir()) / ("store_" + name);
  fs::remove_all(dir);
  return dir;
}

// A finished synthetic run in `root`.
void MakeRun(const fs::path& root, uint64_t seed, int64_t budget = 600,
             EngineMode mode = EngineMode::kDefault) {
  auto store = RunStore::Create(root);
  ASSERT_TRUE(store.ok()) << store.status();
  const fs::path seed_dir = root.string() + "_seed";
  ASSERT_TRUE(WriteSyntheticArtifact(seed_dir, {0.5, std::nullopt}).ok());
  std::vector<ExampleRef> pool;
  for (int i = 0; i < 150; ++i) pool.push_back({"p" + std::to_string(i), ""});
  EngineConfig config;
  config.budget = budget;
  config.rng_seed = seed;
  config.mode = mode;
  SyntheticEvaluator evaluator(seed);
  SyntheticMutator mutator(seed, 0.2);
  Engine engine(config, pool, evaluator, mutator, **store);
  AgentRecord agent;
  agent.artifact_dir = seed_dir;
  ASSERT_TRUE(engine.Run(agent).ok());
}

std::string Slurp(const fs::path& path) { return *ReadFile(path); }

TEST(RunStoreTest, CreateRequiresEmptyDirectory) {
  fs::path root = Fresh("create");
  auto first = RunStore::Create(root);
  ASSERT_TRUE(first.ok());
  EXPECT_TRUE(fs::exists(root / "events.jsonl"));
  EXPECT_FALSE(RunStore::Create(root).ok());
}

TEST(RunStoreTest, EventsRoundTrip) {
  fs::path root = Fresh("events");
  {
    auto store = *RunStore::Create(root);
    ASSERT_TRUE(store->AppendEvent({{"event", "a"}, {"x", 1}}).ok());
    ASSERT_TRUE(store->AppendEvent({{"event", "b"}, {"text", "line\nbreak"}}).ok());
  }
  auto store = *RunStore::Open(root);
  auto events = *store->ReadEvents();
  ASSERT_EQ(events.size(), 2u);
  EXPECT_EQ(events[1]["text"], "line\nbreak");
  EXPECT_FALSE(store->AppendEvent({{"event", "c"}}).ok());
}

TEST(RunStoreTest, OpenWithoutLogIsDataLoss) {
  fs::path root = Fresh("nolog");
  fs::create_directories(root);
  EXPECT_EQ(RunStore::Open(root).status().code(), absl::StatusCode::kDataLoss);
}

TEST(RunStoreTest, CorruptLineNamed) {
  fs::path root = Fresh("corrupt");
  { ASSERT_TRUE(RunStore::Create(root).ok()); }
  std::ofstream(root / "events.jsonl") << "{\"event\":\"a\"}\n{oops\n";
  auto events = (*RunStore::Open(root))->ReadEvents();
  EXPECT_EQ(events.status().code(), absl::StatusCode::kDataLoss);
  EXPECT_NE(events.status().message().find("2"), absl::string_view::npos);
}

TEST(FileHelpersTest, CopyAndHashTree) {
  fs::path root = Fresh("tree");
  ASSERT_TRUE(WriteFile(root / "src" / "a.txt", "alpha").ok());
  ASSERT_TRUE(WriteFile(root / "src" / "sub" / "b.txt", "beta").ok());
  ASSERT_TRUE(CopyTree(root / "src", root / "dst", /*read_only=*/true).ok());
  EXPECT_EQ(Slurp(root / "dst" / "sub" / "b.txt"), "beta");
  EXPECT_EQ(*HashTree(root / "src"), *HashTree(root / "dst"));
  // Copying over a read-only tree works.
  ASSERT_TRUE(WriteFile(root / "src" / "a.txt", "changed").ok());
  ASSERT_TRUE(CopyTree(root / "src", root / "dst").ok());
  EXPECT_EQ(Slurp(root / "dst" / "a.txt"), "changed");
  ASSERT_TRUE(WriteFile(root / "src" / "a.txt", "again").ok());
  EXPECT_NE(*HashTree(root / "src"), *HashTree(root / "dst"));
  EXPECT_FALSE(CopyTree(root / "missing", root / "x").ok());
}

TEST(SerializationTest, RoundTrips) {
  IterationRecord r;
  r.index = 3;
  r.example_ids = {"a", "b"};
  r.competitor_ids = {"x", "y"};
  r.mean_scores = {{"x", 0.1 + 0.2}, {"y", 1.0 / 3}};
  r.elo_before = {{"x", 1500}, {"y", 1500}};
  r.elo_after = {{"x", 1484.0000000001}, {"y", 1515.9999999999}};
  r.winner_id = "y";
  r.report_ref = "iterations/3/report.txt";
  r.deep_focus_ref = "sessions/y/deep_focus_report.txt";
  EXPECT_EQ(*IterationFromJson(Json::parse(ToJson(r).dump())), r);

  EngineConfig c;
  c.mode = EngineMode::kKingOfTheHill;
  c.budget = 999;
  c.report_kind = ReportKind::kContinuous;
  c.strategy_document = "doc.md";
  EXPECT_EQ(*EngineConfigFromJson(Json::parse(ToJson(c).dump())), c);

  EvalOutcome o{.agent_id = "a", .example_id = "e", .score = 0.9,
                .fingerprint = "f", .diagnostics = "d", .agent_stdout = "s",
                .failed = true};
  EXPECT_EQ(*OutcomeFromJson(ToJson(o)), o);

  BudgetLedger ledger(100);
  ASSERT_TRUE(ledger.Debit(0, Phase::kTournament, 20).ok());
  ASSERT_TRUE(ledger.Debit(1, Phase::kDeepFocus, 20).ok());
  EXPECT_EQ(*LedgerFromJson(ToJson(ledger)), ledger);
  EXPECT_EQ(LedgerFromJson(Json{{"total", 1}}).status().code(),
            absl::StatusCode::kDataLoss);
}

TEST(SerializationTest, PoolForms) {
  EXPECT_EQ(PoolFromJson(Json::parse(R"([{"example_id":"a"}])"))->size(), 1u);
  EXPECT_EQ(PoolFromJson(Json::parse(R"({"examples":[{"example_id":"a","payload_ref":"x"}]})"))
                ->front()
                .payload_ref,
            "x");
  EXPECT_FALSE(PoolFromJson(Json::parse(R"([{"example_id":"a"},{"example_id":"a"}])")).ok());
  EXPECT_FALSE(PoolFromJson(Json::parse(R"([{"example_id":""}])")).ok());
  EXPECT_FALSE(PoolFromJson(Json::parse(R"({"items":[]})")).ok());
}

TEST(ReplayTest, UntouchedStorePasses) {
  fs::path root = Fresh("replay_ok");
  MakeRun(root, 17);
  auto report = Replay(root);
  ASSERT_TRUE(report.ok()) << report.status();
  EXPECT_TRUE(report->ok) << report->divergence;
  EXPECT_GT(report->iterations, 3);
}

TEST(ReplayTest, KingOfTheHillStorePasses) {
  fs::path root = Fresh("replay_koth");
  MakeRun(root, 4, 600, EngineMode::kKingOfTheHill);
  auto report = Replay(root);
  ASSERT_TRUE(report.ok()) << report.status();
  EXPECT_TRUE(report->ok) << report->divergence;
}

TEST(ReplayTest, EditedEloSnapshotDiverges) {
  fs::path root = Fresh("replay_tamper");
  MakeRun(root, 17);
  const fs::path elo = root / "iterations" / "2" / "elo.json";
  Json doc = Json::parse(Slurp(elo));
  doc["after"].begin().value() = doc["after"].begin().value().get<double>() + 0.25;
  ASSERT_TRUE(WriteFile(elo, doc.dump(2)).ok());
  auto report = Replay(root);
  ASSERT_TRUE(report.ok());
  EXPECT_FALSE(report->ok);
  EXPECT_NE(report->divergence.find("iteration 2"), std::string::npos) << report->divergence;
}

TEST(ReplayTest, EditedLedgerDiverges) {
  fs::path root = Fresh("replay_ledger");
  MakeRun(root, 17);
  Json doc = Json::parse(Slurp(root / "ledger.json"));
  doc["per_phase"][0]["debit"] = doc["per_phase"][0]["debit"].get<int>() - 1;
  doc["spent"] = doc["spent"].get<int>() - 1;
  ASSERT_TRUE(WriteFile(root / "ledger.json", doc.dump()).ok());
  auto report = Replay(root);
  ASSERT_TRUE(report.ok());
  EXPECT_FALSE(report->ok);
  EXPECT_NE(report->divergence.find("ledger"), std::string::npos);
}

TEST(ReplayTest, EditedScoreDiverges) {
  fs::path root = Fresh("replay_score");
  MakeRun(root, 17);
  std::string log = Slurp(root / "events.jsonl");
  const size_t pos = log.find("\"score\":1.0");
  ASSERT_NE(pos, std::string::npos);
  log.replace(pos, 11, "\"score\":0.0");
  ASSERT_TRUE(WriteFile(root / "events.jsonl", log).ok());
  auto report = Replay(root);
  ASSERT_TRUE(report.ok());
  EXPECT_FALSE(report->ok);
}

TEST(ReplayTest, EmptyDirectoryIsIntegrityError) {
  fs::path root = Fresh("replay_empty");
  fs::create_directories(root);
  EXPECT_EQ(Replay(root).status().code(), absl::StatusCode::kDataLoss);
}

TEST(ReplayTest, TruncatedRecordIsIntegrityError) {
  fs::path root = Fresh("replay_truncated");
  MakeRun(root, 17);
  std::string log = Slurp(root / "events.jsonl");
  log.resize(log.size() - 20);
  ASSERT_TRUE(WriteFile(root / "events.jsonl", log).ok());
  auto report = Replay(root);
  EXPECT_EQ(report.status().code(), absl::StatusCode::kDataLoss);
}

TEST(ReplayTest, SameSeedSameLog) {
  fs::path a = Fresh("det_a"), b = Fresh("det_b");
  MakeRun(a, 23);
  MakeRun(b, 23);
  EXPECT_EQ(Slurp(a / "events.jsonl"), Slurp(b / "events.jsonl"));
  fs::path c = Fresh("det_c");
  MakeRun(c, 24);
  EXPECT_NE(Slurp(a / "events.jsonl"), Slurp(c / "events.jsonl"));
}

}  // namespace
}  // namespace eloevo
