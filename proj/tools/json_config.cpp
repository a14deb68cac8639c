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

#include "json_config.hpp"

#include <istream>

#include "json.hpp"

namespace chipsim::cli {

namespace {

using nlohmann::json;

std::string scalar_text(const json &v) {
    if (v.is_string()) {
        return v.get<std::string>();
    }
    if (v.is_boolean()) {
        return v.get<bool>() ? "true" : "false";
    }
    if (v.is_number() ) {
        return v.dump();
    }
    throw CLI::ConversionError("config value must be a string, number, boolean or array of those");
}

void collect(const json &object, std::vector<std::string> parents, std::vector<CLI::ConfigItem> &out) {
    for (const auto &[key, value] : object.items()) {
        if (value.is_object()) {
            auto nested = parents;
            nested.push_back(key);
            collect(value, nested, out);
            continue;
        }
        CLI::ConfigItem item;
        item.parents = parents;
        item.name = key;
        if (value.is_array()) {
            for (const auto &e : value) {
                item.inputs.push_back(scalar_text(e));
            }
        } else {
            item.inputs.push_back(scalar_text(value));
        }
        out.push_back(std::move(item));
    }
}

void dump_app(const CLI::App *app, bool default_also, json &out) {
    for (const CLI::Option *opt : app->get_options()) {
        if (opt->get_lnames().empty() || !opt->get_configurable()) {
            continue;
        }
        const std::string &name = opt->get_lnames().front();
        if (opt->count() > 0) {
            const auto &results = opt->results();
            out[name] = results.size() == 1 ? json(results.front()) : json(results);
        } else if (default_also && !opt->get_default_str().empty()) {
            out[name] = opt->get_default_str();
        }
    }
    for (const CLI::App *sub : app->get_subcommands({})) {
        json nested = json::object();
        dump_app(sub, default_also, nested);
        if (!nested.empty()) {
            out[sub->get_name()] = std::move(nested);
        }
    }
}

}  // namespace

std::string JsonConfig::to_config(const CLI::App *app, bool default_also, bool, std::string) const {
    json out = json::object();
    dump_app(app, default_also, out);
    return out.dump(2) + "\n";
}

std::vector<CLI::ConfigItem> JsonConfig::from_config(std::istream &input) const {
    json j;
    try {
        j = json::parse(input);
    } catch (const json::parse_error &e) {
        throw CLI::ConversionError(std::string("config file: ") + e.what());
    }
    if (!j.is_object()) {
        throw CLI::ConversionError("config file: top level must be a JSON object");
    }
    std::vector<CLI::ConfigItem> items;
    collect(j, {}, items);
    return items;
}

}  // namespace chipsim::cli
