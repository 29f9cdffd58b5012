// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "jamloc/montecarlo.hpp"

namespace jamloc {

/// A scenario plus the optional sweep used by the custom `run` command.
struct RunConfig {
    ScenarioConfig scenario;
    std::optional<SweepSpec> sweep;
};

/// Strict JSON -> config. Every key is optional (defaults fill in) but unknown keys, wrong types and
/// invalid values raise ConfigError naming the field. A run manifest is accepted too; its embedded
/// "config" object is used.
RunConfig config_from_json(const nlohmann::json& j);

/// Parses JSON text; syntax errors are reported with line and column.
RunConfig parse_config(const std::string& text);

/// Reads and parses a config file. Throws IoError if the file cannot be read.
RunConfig load_config_file(const std::string& path);

/// Fully resolved config, angles in degrees. config_from_json(config_to_json(c)) reproduces c.
nlohmann::json config_to_json(const RunConfig& c);

}  // namespace jamloc
