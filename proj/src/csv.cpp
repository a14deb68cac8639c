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

#include "chipsim/csv.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>

namespace chipsim {

namespace {

std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string &line) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

bool skipped(const std::string &line) {
    const std::string t = trim(line);
    return t.empty() || t.front() == '#';
}

}  // namespace

CsvReader::CsvReader(std::istream &in, std::string source, std::vector<std::string> header)
    : in_(in), source_(std::move(source)), width_(header.size()) {
    std::string line;
    while (std::getline(in_, line)) {
        ++line_;
        if (skipped(line)) {
            continue;
        }
        if (split(line) != header) {
            std::string expected;
            for (size_t k = 0; k < header.size(); ++k) {
                expected += (k ? "," : "") + header[k];
            }
            fail("expected header \"" + expected + "\"");
        }
        return;
    }
    fail("missing header");
}

bool CsvReader::next(std::vector<std::string> &fields) {
    std::string line;
    while (std::getline(in_, line)) {
        ++line_;
        if (skipped(line)) {
            continue;
        }
        fields = split(line);
        if (fields.size() != width_) {
            fail("expected " + std::to_string(width_) + " fields, found " + std::to_string(fields.size()));
        }
        return true;
    }
    return false;
}

void CsvReader::fail(const std::string &message) const {
    throw InputError(source_ + ":" + std::to_string(line_) + ": " + message);
}

double CsvReader::to_double(const std::string &field, const char *name) const {
    errno = 0;
    char *end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (field.empty() || end != field.c_str() + field.size() || errno == ERANGE || !std::isfinite(v)) {
        fail(std::string("invalid number for ") + name + ": \"" + field + "\"");
    }
    return v;
}

unsigned long long CsvReader::to_count(const std::string &field, const char *name) const {
    if (field.empty() || field.find_first_not_of("0123456789") != std::string::npos) {
        fail(std::string("invalid count for ") + name + ": \"" + field + "\"");
    }
    errno = 0;
    const unsigned long long v = std::strtoull(field.c_str(), nullptr, 10);
    if (errno == ERANGE) {
        fail(std::string("count out of range for ") + name);
    }
    return v;
}

}  // namespace chipsim
