// Copyright 2026 The MABN Authors.
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


// Entry point of the mabn command-line tool.

#ifndef MABN_TOOLS_CLI_H_
#define MABN_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace mabn::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;

// Environment variable naming the default output directory of `run` and
// `reproduce`.
inline constexpr const char* kOutputDirEnv = "MABN_OUTPUT_DIR";

// `args` excludes the program name. Returns 0 on success, 2 for usage or
// configuration errors and 1 for runtime failures.
int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out,
                       std::ostream& err);

}  // namespace mabn::cli

#endif  // MABN_TOOLS_CLI_H_
