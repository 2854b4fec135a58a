// Copyright 2026 The Actionable Authors.
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

#ifndef ACTIONABLE_CLI_H_
#define ACTIONABLE_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace actionable {

inline constexpr const char *kToolVersion = "0.1.0";

// Exit statuses of the `actionable` executable.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitInvalidArgs = 2,
  kExitIo = 3,
  kExitNoPositives = 4,
  kExitBackend = 5,
};

// Runs one command line (args[0] is the program name).
int RunCli(const std::vector<std::string> &args, std::ostream &out,
           std::ostream &err);

}  // namespace actionable

#endif  // ACTIONABLE_CLI_H_
