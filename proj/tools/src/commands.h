// Copyright 2026 The advtrain Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ADVTRAIN_TOOLS_COMMANDS_H_
#define ADVTRAIN_TOOLS_COMMANDS_H_

#include <ostream>
#include <string>
#include <vector>

namespace advtrain::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntimeError = 1;
inline constexpr int kExitConfigError = 2;

// Environment variable naming the default output directory. An --out-dir
// flag takes precedence; it in turn overrides the config file.
inline constexpr const char* kOutDirEnv = "ADVTRAIN_OUT_DIR";

// Entry point of the `advtrain` tool. `args` excludes the program name.
// Human-readable summaries go to `out`, structured errors to `err`.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace advtrain::cli

#endif  // ADVTRAIN_TOOLS_COMMANDS_H_
