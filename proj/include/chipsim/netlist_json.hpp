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

#include <string>

#include "json.hpp"

#include "chipsim/optics.hpp"

namespace chipsim {

// {"modes": 6, "elements": [{"type":"coupler","i":0,"j":1,"eta":0.5},
//                           {"type":"phase","i":1,"phi":0.0,"heater":1}, ...]}
// "heater" is optional and defaults to 0 (fixed element).
nlohmann::json netlist_to_json(const Netlist &n);
Netlist netlist_from_json(const nlohmann::json &j);

Netlist load_netlist(const std::string &path);
void save_netlist(const Netlist &n, const std::string &path);

}  // namespace chipsim
