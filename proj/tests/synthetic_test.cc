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

#include "eloevo/synthetic.h"

#include <cmath>
#include <filesystem>
#include <string>

#include "eloevo/random.h"
#include "eloevo/store.h"
#include "gtest/gtest.h"
#include "json.hpp"

namespace eloevo {
namespace {

namespace fs = std::filesystem;

fs::path Session(const std::string& name, double parent_accuracy) {
  fs::path dir = fs::path(::testing::TempDir()) / ("synthetic_" + name);
  fs::remove_all(dir);
  EXPECT_TRUE(WriteFile(dir / "session.json",
                        R"({"agent_id": "agent_004", "parent_id": "agent_002"})")
                  .ok());
  EXPECT_TRUE(WriteSyntheticArtifact(dir / "competitors" / "agent_002",
                                     {parent_accuracy, std::nullopt})
                  .ok());
  return dir;
}

TEST(ChildAccuracyTest, RuleAndClipping) {
  EXPECT_NEAR(ChildAccuracy(0.50, 0.013), 0.513, 1e-12);
  EXPECT_EQ(ChildAccuracy(0.999, 0.02), 1.0);
  EXPECT_EQ(ChildAccuracy(0.01, -0.05), 0.0);
}

TEST(SyntheticEvaluatorTest, DeterministicAndFingerprinted) {
  fs::path dir = fs::path(::testing::TempDir()) / "synthetic_eval";
  fs::remove_all(dir);
  ASSERT_TRUE(WriteSyntheticArtifact(dir, {0.6, std::nullopt}).ok());
  EvalRequest request{"agent_001", dir, {}};
  for (int i = 0; i < 2000; ++i) request.examples.push_back({"e" + std::to_string(i), ""});
  SyntheticEvaluator evaluator(7);
  auto first = evaluator.Evaluate(request);
  EXPECT_EQ(first, SyntheticEvaluator(7).Evaluate(request));
  double sum = 0;
  for (const EvalOutcome& o : first) {
    sum += o.score;
    EXPECT_EQ(o.fingerprint, o.score == 1.0 ? "1" : "0");
  }
  EXPECT_NEAR(sum / first.size(), 0.6, 0.04);
  EXPECT_NE(first, SyntheticEvaluator(8).Evaluate(request));
}

TEST(SyntheticEvaluatorTest, ClonesReproduceTheirTwin) {
  fs::path base = fs::path(::testing::TempDir()) / "synthetic_twin";
  fs::remove_all(base);
  ASSERT_TRUE(WriteSyntheticArtifact(base / "a", {0.6, std::nullopt}).ok());
  ASSERT_TRUE(WriteSyntheticArtifact(base / "b", {0.6, std::string("agent_a")}).ok());
  std::vector<ExampleRef> examples;
  for (int i = 0; i < 50; ++i) examples.push_back({"e" + std::to_string(i), ""});
  SyntheticEvaluator evaluator(1);
  auto a = evaluator.Evaluate({"agent_a", base / "a", examples});
  auto b = evaluator.Evaluate({"agent_b", base / "b", examples});
  for (size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].fingerprint, b[i].fingerprint);
}

TEST(SyntheticEvaluatorTest, MissingArtifactFails) {
  SyntheticEvaluator evaluator(1);
  auto out = evaluator.Evaluate({"x", "/nonexistent", {{"e", ""}}});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_TRUE(out[0].failed);
}

TEST(SyntheticMutatorTest, CreateFollowsTheDraw) {
  fs::path session = Session("create", 0.5);
  SyntheticMutator mutator(7);
  ASSERT_TRUE(mutator.Run(session, MutationPhase::kCreate).ok());
  const double draw = NormalFromUniforms(mutator.Draw("agent_004", MutationPhase::kCreate, 0),
                                         mutator.Draw("agent_004", MutationPhase::kCreate, 1),
                                         0.01, 0.02);
  auto child = ReadSyntheticArtifact(session / "artifact");
  ASSERT_TRUE(child.ok());
  EXPECT_DOUBLE_EQ(child->true_accuracy, ChildAccuracy(0.5, draw));
  EXPECT_TRUE(fs::exists(session / "reasoning.md"));

  fs::path again = Session("create_again", 0.5);
  ASSERT_TRUE(SyntheticMutator(7).Run(again, MutationPhase::kCreate).ok());
  EXPECT_EQ(ReadSyntheticArtifact(again / "artifact")->true_accuracy, child->true_accuracy);
}

TEST(SyntheticMutatorTest, DrawDistribution) {
  SyntheticMutator mutator(3);
  double sum = 0, sq = 0;
  const int count = 20000;
  for (int i = 0; i < count; ++i) {
    const std::string id = "agent_" + std::to_string(i);
    const double d = NormalFromUniforms(mutator.Draw(id, MutationPhase::kCreate, 0),
                                        mutator.Draw(id, MutationPhase::kCreate, 1), 0.01,
                                        0.02);
    sum += d;
    sq += d * d;
  }
  const double mean = sum / count;
  EXPECT_NEAR(mean, 0.01, 0.001);
  EXPECT_NEAR(std::sqrt(sq / count - mean * mean), 0.02, 0.001);
}

TEST(SyntheticMutatorTest, RefineAddsStepHalfTheTime) {
  int refined = 0;
  for (int seed = 0; seed < 400; ++seed) {
    fs::path session = Session("refine", 0.5);
    SyntheticMutator mutator(seed);
    ASSERT_TRUE(mutator.Run(session, MutationPhase::kCreate).ok());
    const double before = ReadSyntheticArtifact(session / "artifact")->true_accuracy;
    ASSERT_TRUE(mutator.Run(session, MutationPhase::kRefine).ok());
    const double after = ReadSyntheticArtifact(session / "artifact")->true_accuracy;
    if (after != before) {
      EXPECT_NEAR(after - before, std::min(0.005, 1.0 - before), 1e-12);
      ++refined;
    }
  }
  EXPECT_NEAR(refined / 400.0, 0.5, 0.1);
}

TEST(SyntheticMutatorTest, CloneCopiesParentBehaviour) {
  fs::path session = Session("clone", 0.62);
  ASSERT_TRUE(SyntheticMutator(1, /*clone_probability=*/1.0)
                  .Run(session, MutationPhase::kCreate)
                  .ok());
  auto child = ReadSyntheticArtifact(session / "artifact");
  EXPECT_EQ(child->true_accuracy, 0.62);
  EXPECT_EQ(child->behaves_like, "agent_002");
}

}  // namespace
}  // namespace eloevo
