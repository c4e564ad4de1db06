#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "nhl/lattice.hpp"

namespace nhl::cli {

enum class Command { Spectrum, PhaseScan, EpFind, Evolve, Reflect, Emit, Currents };
std::string_view to_string(Command c);
Command command_from_string(std::string_view s);
// Key of the command's parameter block ("phase-scan" -> "phase_scan").
std::string block_key(Command c);

// The published schema, embedded at build time.
const nlohmann::json& run_config_schema();

// Validates `doc` against the subset of JSON Schema used by the published
// schema: type, enum, required, properties, additionalProperties=false,
// items, minimum, exclusiveMinimum and local $ref. Returns one message per
// violation, prefixed with a JSON pointer to the offending value.
std::vector<std::string> validate(const nlohmann::json& schema, const nlohmann::json& doc);

// TOML subset: comments, [table] and [a.b] headers, key = value with
// numbers, "strings", booleans, arrays and inline tables { re = 1, im = 0 }.
nlohmann::json parse_toml_subset(std::string_view text);

struct RunConfig {
  Command command;
  ModelSpec model;
  nlohmann::json params;  // the command's block, {} when omitted
  nlohmann::json source;  // the validated document, echoed into outputs
};

// Schema validation followed by semantic checks (parameter key matches the
// family, no block for another command, grid size limit, ...). Throws
// InvalidArgument listing every problem found.
RunConfig parse_run_config(const nlohmann::json& doc);

// JSON unless the extension is .toml.
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace nhl::cli
