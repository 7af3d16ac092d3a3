// Copyright 2026 The Leakgame Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LEAKGAME_CLI_H_
#define LEAKGAME_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace leakgame {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,
  kExitNotCertified = 2,
  kExitIo = 3,
};

// Runs the command line `args` (program name excluded). Reports go to `out`,
// diagnostics to `err`. Standard input is read for the path "-".
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace leakgame

#endif  // LEAKGAME_CLI_H_
