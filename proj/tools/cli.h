// Copyright 2026 The mctele Authors
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

#ifndef MCTELE_TOOLS_CLI_H
#define MCTELE_TOOLS_CLI_H

#include <iosfwd>
#include <string>
#include <vector>

namespace mctele::cli {

/// Entry point of the `mctele` tool. `args` excludes the program name.
/// Returns 0 on success, 1 on a usage error, 2 when verification fails.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct ConfigEntry {
  std::string key;
  std::string value;
  int line = 0;
};

/// Reads `key = value` lines. Blank lines and lines starting with `#` are
/// skipped; a leading `--` on the key is dropped. Throws UsageError naming
/// the file and line for anything else.
std::vector<ConfigEntry> read_config(const std::string& path);

}  // namespace mctele::cli

#endif  // MCTELE_TOOLS_CLI_H
