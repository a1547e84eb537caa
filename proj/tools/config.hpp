#pragma once

#include <json.hpp>

#include <filesystem>
#include <string>

namespace popcent::cli {

/// Reads the TOML subset used by run configs: bare keys, [table] headers,
/// strings, integers, floats, booleans and (possibly multi-line) arrays.
nlohmann::json parse_toml(const std::string &text);

/// ".json" files are parsed as JSON, everything else as TOML.
nlohmann::json load_config(const std::filesystem::path &path);

} // namespace popcent::cli
