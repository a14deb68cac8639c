// Copyright 2026 The chipsim Authors
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

#pragma once

#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

namespace chipsim {

/// Malformed input file. The message names the source and line.
class InputError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Minimal comma-separated reader: no quoting, surrounding whitespace trimmed,
/// blank lines and lines starting with '#' skipped. The first remaining line
/// must equal `header`.
class CsvReader {
  public:
    CsvReader(std::istream &in, std::string source, std::vector<std::string> header);

    /// Next data row, or false at end of input. Every row must have as many
    /// fields as the header.
    bool next(std::vector<std::string> &fields);
    int line() const { return line_; }

    [[noreturn]] void fail(const std::string &message) const;
    double to_double(const std::string &field, const char *name) const;
    unsigned long long to_count(const std::string &field, const char *name) const;

  private:
    std::istream &in_;
    std::string source_;
    size_t width_;
    int line_ = 0;
};

}  // namespace chipsim
