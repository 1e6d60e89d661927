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

#include "eloevo/store.h"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <sstream>
#include <system_error>

#include "absl/strings/str_cat.h"
#include "eloevo/random.h"

namespace eloevo {

namespace fs = std::filesystem;

absl::Status WriteFile(const fs::path& path, std::string_view text) {
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  if (ec) {
    return absl::InternalError(
        absl::StrCat("cannot create ", path.parent_path().string(), ": ", ec.message()));
  }
  // Read-only copies may already exist at this path.
  fs::remove(path, ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) return absl::InternalError(absl::StrCat("cannot write ", path.string()));
  return absl::OkStatus();
}

absl::StatusOr<std::string> ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot read ", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

absl::Status CopyTree(const fs::path& from, const fs::path& to, bool read_only) {
  std::error_code ec;
  if (!fs::is_directory(from, ec)) {
    return absl::NotFoundError(absl::StrCat("not a directory: ", from.string()));
  }
  if (fs::exists(to, ec)) {
    // Make read-only files removable again.
    for (const auto& entry : fs::recursive_directory_iterator(to, ec)) {
      fs::permissions(entry.path(), fs::perms::owner_write, fs::perm_options::add, ec);
    }
    fs::remove_all(to, ec);
  }
  fs::create_directories(to, ec);
  fs::copy(from, to, fs::copy_options::recursive, ec);
  if (ec) {
    return absl::InternalError(absl::StrCat("copy ", from.string(), " -> ",
                                            to.string(), ": ", ec.message()));
  }
  if (read_only) {
    for (const auto& entry : fs::recursive_directory_iterator(to, ec)) {
      if (entry.is_regular_file()) {
        fs::permissions(entry.path(),
                        fs::perms::owner_write | fs::perms::group_write |
                            fs::perms::others_write,
                        fs::perm_options::remove, ec);
      }
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<uint64_t> HashTree(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    return absl::NotFoundError(absl::StrCat("not a directory: ", dir.string()));
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir, ec)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  uint64_t h = 0;
  for (const fs::path& file : files) {
    absl::StatusOr<std::string> text = ReadFile(file);
    if (!text.ok()) return text.status();
    h = HashCombine(h, StableHash(fs::relative(file, dir).generic_string()));
    h = HashCombine(h, StableHash(*text));
  }
  return h;
}

absl::StatusOr<std::unique_ptr<RunStore>> RunStore::Create(const fs::path& root) {
  std::error_code ec;
  if (fs::exists(root, ec) && !fs::is_empty(root, ec)) {
    return absl::AlreadyExistsError(
        absl::StrCat("run directory is not empty: ", root.string()));
  }
  fs::create_directories(root, ec);
  if (ec) {
    return absl::InternalError(
        absl::StrCat("cannot create ", root.string(), ": ", ec.message()));
  }
  std::unique_ptr<RunStore> store(new RunStore(fs::absolute(root).lexically_normal()));
  const fs::path lock = store->root_ / ".lock";
  store->lock_fd_ = ::open(lock.c_str(), O_CREAT | O_RDWR | O_CLOEXEC, 0644);
  if (store->lock_fd_ < 0 || ::flock(store->lock_fd_, LOCK_EX | LOCK_NB) != 0) {
    return absl::UnavailableError(
        absl::StrCat("run directory is locked by another writer: ", root.string()));
  }
  store->events_.open(store->root_ / "events.jsonl", std::ios::binary | std::ios::app);
  if (!store->events_) {
    return absl::InternalError("cannot open event log");
  }
  return store;
}

absl::StatusOr<std::unique_ptr<RunStore>> RunStore::Open(const fs::path& root) {
  std::error_code ec;
  if (!fs::is_regular_file(root / "events.jsonl", ec)) {
    return absl::DataLossError(
        absl::StrCat("not a run directory (no events.jsonl): ", root.string()));
  }
  return std::unique_ptr<RunStore>(
      new RunStore(fs::absolute(root).lexically_normal()));
}

RunStore::~RunStore() {
  if (lock_fd_ >= 0) ::close(lock_fd_);
}

fs::path RunStore::AgentDir(std::string_view agent_id) const {
  return root_ / "agents" / std::string(agent_id);
}

fs::path RunStore::ArtifactDir(std::string_view agent_id) const {
  return AgentDir(agent_id) / "artifact";
}

fs::path RunStore::SessionDir(std::string_view agent_id) const {
  return root_ / "sessions" / std::string(agent_id);
}

fs::path RunStore::IterationDir(int index) const {
  return root_ / "iterations" / std::to_string(index);
}

std::string RunStore::Relative(const fs::path& path) const {
  return path.lexically_relative(root_).generic_string();
}

absl::Status RunStore::AppendEvent(const nlohmann::json& event) {
  if (!events_.is_open()) return absl::FailedPreconditionError("store is read-only");
  events_ << event.dump() << '\n';
  events_.flush();
  if (!events_) return absl::InternalError("cannot append to event log");
  return absl::OkStatus();
}

absl::Status RunStore::WriteJson(const fs::path& relative,
                                 const nlohmann::json& doc) const {
  return WriteFile(root_ / relative, doc.dump(2) + "\n");
}

absl::Status RunStore::WriteText(const fs::path& relative,
                                 std::string_view text) const {
  return WriteFile(root_ / relative, text);
}

absl::StatusOr<nlohmann::json> RunStore::ReadJson(const fs::path& relative) const {
  absl::StatusOr<std::string> text = ReadFile(root_ / relative);
  if (!text.ok()) return absl::DataLossError(text.status().message());
  nlohmann::json doc = nlohmann::json::parse(*text, nullptr, false);
  if (doc.is_discarded()) {
    return absl::DataLossError(absl::StrCat("malformed JSON in ", relative.string()));
  }
  return doc;
}

absl::StatusOr<std::string> RunStore::ReadText(const fs::path& relative) const {
  return ReadFile(root_ / relative);
}

absl::StatusOr<std::vector<nlohmann::json>> RunStore::ReadEvents() const {
  absl::StatusOr<std::string> text = ReadFile(root_ / "events.jsonl");
  if (!text.ok()) return absl::DataLossError(text.status().message());
  std::vector<nlohmann::json> events;
  std::istringstream lines(*text);
  std::string line;
  int number = 0;
  while (std::getline(lines, line)) {
    ++number;
    if (line.empty()) continue;
    nlohmann::json event = nlohmann::json::parse(line, nullptr, false);
    if (event.is_discarded() || !event.is_object() || !event.contains("event")) {
      return absl::DataLossError(
          absl::StrCat("corrupted event log at line ", number, ": ", line));
    }
    events.push_back(std::move(event));
  }
  return events;
}

}  // namespace eloevo
