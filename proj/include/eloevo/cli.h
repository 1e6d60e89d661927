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

#ifndef ELOEVO_CLI_H_
#define ELOEVO_CLI_H_

#include <ostream>

namespace eloevo {

// Exit codes of the eloevo command.
inline constexpr int kExitOk = 0;
// Runtime failure, failed replay.
inline constexpr int kExitFailure = 1;
// Malformed flags or configuration.
inline constexpr int kExitUsage = 2;
// Inputs or plugins that cannot be resolved before a run starts.
inline constexpr int kExitStartup = 3;

// Entry point of the eloevo command: run, noiselab, replay and report.
int Main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace eloevo

#endif  // ELOEVO_CLI_H_
