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

#ifndef ELOEVO_SUBPROCESS_H_
#define ELOEVO_SUBPROCESS_H_

#include <chrono>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace eloevo {

struct ProcessResult {
  // Exit status, or 128 + signal number when the child was killed.
  int exit_code = -1;
  bool timed_out = false;
  std::string stdout_text;
  std::string stderr_text;
};

// Runs argv[0] (resolved through PATH) with the given stdin contents and a
// wall-clock timeout. On timeout the child's whole process group is killed.
// Returns an error only if the process could not be started.
absl::StatusOr<ProcessResult> RunProcess(
    const std::vector<std::string>& argv, std::string_view stdin_data,
    std::chrono::milliseconds timeout,
    const std::filesystem::path& working_dir = {});

// argv running `command` through /bin/sh with `args` as positional
// parameters, so a plugin command may carry its own flags.
std::vector<std::string> ShellArgv(std::string_view command,
                                   const std::vector<std::string>& args = {});

}  // namespace eloevo

#endif  // ELOEVO_SUBPROCESS_H_
