#pragma once

// Deterministic text serialization. Every double goes out with 17
// significant digits so that files round-trip exactly and hash stably.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace nhl::cli {

std::string fmt_double(double x);

// Pretty JSON with sorted keys (nlohmann objects are already ordered) and
// %.17g numbers. Non-finite numbers are written as null.
std::string dump_json(const nlohmann::json& j, int indent = 2);

// A table with a provenance header. CSV: "# " + one-line meta JSON, then
// the column row and data rows. JSON: {"meta", "columns", "rows"}.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::json>> rows;  // numbers or strings
};

enum class TableFormat { Csv, Json };
TableFormat table_format_from_string(std::string_view s);
std::string_view extension(TableFormat f);

std::string render_table(const Table& t, const nlohmann::json& meta, TableFormat f);

// Writes through a temporary file in the same directory and renames it into
// place, so an interrupted run never leaves a half-written output behind.
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace nhl::cli
