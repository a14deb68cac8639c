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

#include <iosfwd>
#include <string>
#include <vector>

#include "CLI11.hpp"

namespace chipsim::cli {

/// Reads `--config` files written as JSON objects. Keys are long flag names
/// without dashes; nested objects hold the options of a subcommand, e.g.
/// {"seed": 3, "jobs": 2, "benchmark-random": {"n": 100}}.
class JsonConfig : public CLI::Config {
  public:
    std::string to_config(const CLI::App *app, bool default_also, bool write_description,
                          std::string prefix) const override;
    std::vector<CLI::ConfigItem> from_config(std::istream &input) const override;
};

}  // namespace chipsim::cli
