// Copyright 2026 The RiskCast Authors
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

// Command-line front end. RunCli is separate from main() so tests can drive
// every subcommand in-process.

#ifndef RISKCAST_TOOLS_CLI_H_
#define RISKCAST_TOOLS_CLI_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace riskcast::cli {

inline constexpr std::uint64_t kDefaultSeed = 7;

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitSchema = 3,
  kExitNumerical = 4,
  kExitIo = 5,
  kExitOther = 6,
};

// argv[0] is the program name. Output goes to `out`, diagnostics and
// warnings to `err`.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace riskcast::cli

#endif  // RISKCAST_TOOLS_CLI_H_
