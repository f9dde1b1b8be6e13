// Copyright 2026 The lqrgaifo Authors
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

// Command-line front end over the C API.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lqrgaifo_cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitIo = 4;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Command {
  std::string verb;
  std::optional<std::string> config_path;
  std::vector<std::string> overrides;  // key=value, in order
  std::vector<std::uint64_t> seeds;    // replaces the config seed list when non-empty
  std::optional<std::string> out_dir;
  std::optional<int> count;
  std::optional<std::string> controller;
  std::vector<std::string> demos;
  std::vector<std::string> inputs;
  bool help = false;
  std::string help_text;
};

const std::vector<std::string>& verbs();

// Throws UsageError on an unknown verb or flag or a malformed value. Keys of
// --set overrides are checked when the command runs.
Command parse_args(int argc, const char* const* argv);

// Executes the command and returns the process exit status.
int run(const Command& command, std::ostream& out, std::ostream& err);

// parse_args + run with usage errors mapped to kExitUsage.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lqrgaifo_cli
