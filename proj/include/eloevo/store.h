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

#ifndef ELOEVO_STORE_H_
#define ELOEVO_STORE_H_

#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "json.hpp"

namespace eloevo {

// Run directory layout:
//   config.json              run configuration (schema_version)
//   pool.json                example pool
//   events.jsonl             append-only event log, one JSON object per line
//   ledger.json              budget ledger
//   agents/<id>/agent.json   agent metadata; agents/<id>/artifact/ its files
//   iterations/<i>/          examples, outcomes, report, elo snapshot,
//                            per-example diagnostics
//   sessions/<id>/           mutator session workspaces
//   .lock                    held by the single writer
class RunStore {
 public:
  // Creates the directory (which must be absent or empty) and takes the
  // writer lock.
  static absl::StatusOr<std::unique_ptr<RunStore>> Create(
      const std::filesystem::path& root);
  // Read-only access; fails with DataLossError when there is no event log.
  static absl::StatusOr<std::unique_ptr<RunStore>> Open(
      const std::filesystem::path& root);

  ~RunStore();
  RunStore(const RunStore&) = delete;
  RunStore& operator=(const RunStore&) = delete;

  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path AgentDir(std::string_view agent_id) const;
  std::filesystem::path ArtifactDir(std::string_view agent_id) const;
  std::filesystem::path SessionDir(std::string_view agent_id) const;
  std::filesystem::path IterationDir(int index) const;
  // Path relative to the root, '/'-separated.
  std::string Relative(const std::filesystem::path& path) const;

  absl::Status AppendEvent(const nlohmann::json& event);
  absl::Status WriteJson(const std::filesystem::path& relative,
                         const nlohmann::json& doc) const;
  absl::Status WriteText(const std::filesystem::path& relative,
                         std::string_view text) const;
  absl::StatusOr<nlohmann::json> ReadJson(
      const std::filesystem::path& relative) const;
  absl::StatusOr<std::string> ReadText(const std::filesystem::path& relative) const;
  absl::StatusOr<std::vector<nlohmann::json>> ReadEvents() const;

 private:
  explicit RunStore(std::filesystem::path root) : root_(std::move(root)) {}

  std::filesystem::path root_;
  int lock_fd_ = -1;
  std::ofstream events_;
};

// Filesystem helpers shared by the engine and plugins.
absl::Status WriteFile(const std::filesystem::path& path, std::string_view text);
absl::StatusOr<std::string> ReadFile(const std::filesystem::path& path);
absl::Status CopyTree(const std::filesystem::path& from,
                      const std::filesystem::path& to, bool read_only = false);
// Stable hash of relative file names and contents under a directory.
absl::StatusOr<uint64_t> HashTree(const std::filesystem::path& dir);

}  // namespace eloevo

#endif  // ELOEVO_STORE_H_
