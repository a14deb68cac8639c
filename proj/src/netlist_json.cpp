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

#include "chipsim/netlist_json.hpp"

#include <fstream>
#include <stdexcept>

namespace chipsim {

nlohmann::json netlist_to_json(const Netlist &n) {
    nlohmann::json elements = nlohmann::json::array();
    for (const auto &e : n.elements) {
        if (const auto *c = std::get_if<Coupler>(&e)) {
            elements.push_back({{"type", "coupler"}, {"i", c->i}, {"j", c->j}, {"eta", c->eta}});
        } else {
            const auto &p = std::get<Phase>(e);
            nlohmann::json o = {{"type", "phase"}, {"i", p.i}, {"phi", p.phi}};
            if (p.heater != 0) {
                o["heater"] = p.heater;
            }
            elements.push_back(std::move(o));
        }
    }
    return {{"modes", n.modes}, {"elements", std::move(elements)}};
}

Netlist netlist_from_json(const nlohmann::json &j) {
    Netlist n;
    try {
        n.modes = j.at("modes").get<int>();
        const auto &elements = j.at("elements");
        if (!elements.is_array()) {
            throw std::invalid_argument("netlist: \"elements\" must be an array");
        }
        for (size_t k = 0; k < elements.size(); ++k) {
            const auto &o = elements[k];
            const auto type = o.at("type").get<std::string>();
            if (type == "coupler") {
                n.elements.emplace_back(
                    Coupler{o.at("i").get<int>(), o.at("j").get<int>(), o.at("eta").get<double>()});
            } else if (type == "phase") {
                n.elements.emplace_back(
                    Phase{o.at("i").get<int>(), o.at("phi").get<double>(), o.value("heater", 0)});
            } else {
                throw std::invalid_argument("netlist: element " + std::to_string(k) +
                                            " has unknown type \"" + type + "\"");
            }
        }
    } catch (const nlohmann::json::exception &e) {
        throw std::invalid_argument(std::string("netlist: malformed JSON: ") + e.what());
    }
    n.validate();
    return n;
}

Netlist load_netlist(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open netlist file " + path);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error &e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
    return netlist_from_json(j);
}

void save_netlist(const Netlist &n, const std::string &path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write netlist file " + path);
    }
    out << netlist_to_json(n).dump(2) << '\n';
}

}  // namespace chipsim
