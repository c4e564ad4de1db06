#pragma once

#include <filesystem>
#include <vector>

#include <nlohmann/json.hpp>

#include "nhl_cli/config.hpp"
#include "nhl_cli/output.hpp"

namespace nhl::cli {

struct RunOptions {
  std::filesystem::path out_dir = ".";
  int threads = 1;
  TableFormat format = TableFormat::Csv;
};

// Provenance block written into every output file.
nlohmann::json output_meta(const RunConfig& cfg);

// Runs the configured command and writes its files into opts.out_dir
// (created if missing). Returns the written paths in write order.
std::vector<std::filesystem::path> run_command(const RunConfig& cfg, const RunOptions& opts);

}  // namespace nhl::cli
