// Copyright 2026 The rpkg Authors.
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

#ifndef RPKG_CLI_H_
#define RPKG_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace rpkg {

// Exit codes of the rpkg command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // build or I/O failure
inline constexpr int kExitUsage = 2;    // invalid usage or input

// Entry point for `rpkg <build|search|eval|serve|stats|manifest> ...`.
// args[0] is the program name.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace rpkg

#endif  // RPKG_CLI_H_
