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

#ifndef MCTELE_TOOLS_OUTPUT_H
#define MCTELE_TOOLS_OUTPUT_H

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <string>
#include <vector>

#include "commands.h"

namespace mctele::cli {

/// Echo of the channel flags for metadata lines.
std::string channel_echo(const ChannelOptions& options);

/// Opens `path` for writing up front so an unwritable path fails before any
/// work. An empty path means standard output.
class OutputFile {
 public:
  explicit OutputFile(const std::string& path);
  std::ostream& stream(std::ostream& fallback);

 private:
  std::string path_;
  std::ofstream file_;
};

/// Left-aligned text table that can also be dumped as CSV.
class Table {
 public:
  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}

  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  void print(std::ostream& out) const {
    std::vector<std::size_t> width(header_.size());
    for (std::size_t c = 0; c < header_.size(); ++c) {
      width[c] = header_[c].size();
      for (const auto& row : rows_) {
        width[c] = std::max(width[c], row[c].size());
      }
    }
    const auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t c = 0; c + 1 < cells.size(); ++c) {
        out << std::left << std::setw(static_cast<int>(width[c]) + 2) << cells[c];
      }
      out << cells.back();
      out << '\n';
    };
    line(header_);
    for (const auto& row : rows_) {
      line(row);
    }
  }

  void write_csv(std::ostream& out) const {
    const auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t c = 0; c < cells.size(); ++c) {
        out << (c ? "," : "") << cells[c];
      }
      out << '\n';
    };
    line(header_);
    for (const auto& row : rows_) {
      line(row);
    }
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace mctele::cli

#endif  // MCTELE_TOOLS_OUTPUT_H
