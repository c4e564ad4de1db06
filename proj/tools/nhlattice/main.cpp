#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "nhl/errors.hpp"
#include "nhl_cli/commands.hpp"
#include "nhl_cli/config.hpp"
#include "nhl_cli/output.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitInvalidRun = 4;

int fail(const fs::path& out_dir, const std::string& kind, const std::string& message, int code) {
  const json err = {{"error", {{"kind", kind}, {"message", message}, {"exit_code", code}}}};
  std::cerr << nhl::cli::dump_json(err, -1);
  try {
    fs::create_directories(out_dir);
    nhl::cli::write_file(out_dir / "error.json", nhl::cli::dump_json(err));
  } catch (const std::exception&) {
    // stderr already carries the error
  }
  return code;
}

int thread_count(int flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("NH_LATTICE_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
    throw nhl::InvalidArgument("NH_LATTICE_THREADS must be a positive integer");
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// --out as given on the command line, for errors raised before CLI11 has
// assigned any option values.
std::string raw_out_dir(int argc, char** argv) {
  std::string out = ".";
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if ((a == "--out" || a == "-o") && i + 1 < argc)
      out = argv[++i];
    else if (a.rfind("--out=", 0) == 0)
      out = a.substr(6);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-Hermitian tight-binding lattice toolkit"};
  app.set_version_flag("--version", std::string(NHL_VERSION));

  std::string command;
  std::string config_path;
  std::string out_dir = ".";
  std::string format = "csv";
  int threads = 0;
  bool print_schema = false;

  app.add_option("command", command,
                 "Optional command name; must match the config's \"command\" when given")
      ->check(CLI::IsMember({"spectrum", "phase-scan", "ep-find", "evolve", "reflect", "emit",
                             "currents"}));
  app.add_option("--config,-c", config_path, "Run configuration (.json or .toml)")
      ->check(CLI::ExistingFile);
  app.add_option("--out,-o", out_dir, "Output directory (created if missing)");
  app.add_option("--threads,-j", threads, "Worker threads for sweeps (default: NH_LATTICE_THREADS, then all cores)")
      ->check(CLI::PositiveNumber);
  app.add_option("--format", format, "Table output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--print-schema", print_schema, "Print the run-config JSON schema and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(raw_out_dir(argc, argv), "usage", e.what(), kExitConfig);
  }

  if (print_schema) {
    std::cout << nhl::cli::dump_json(nhl::cli::run_config_schema());
    return 0;
  }

  try {
    if (config_path.empty()) throw nhl::InvalidArgument("--config is required");
    const nhl::cli::RunConfig cfg = nhl::cli::load_run_config(config_path);
    if (!command.empty() && command != nhl::cli::to_string(cfg.command))
      throw nhl::InvalidArgument("command '" + command + "' does not match the config command '" +
                                 std::string(nhl::cli::to_string(cfg.command)) + "'");
    nhl::cli::RunOptions opts;
    opts.out_dir = out_dir;
    opts.threads = thread_count(threads);
    opts.format = nhl::cli::table_format_from_string(format);
    for (const auto& p : nhl::cli::run_command(cfg, opts)) std::cout << p.string() << '\n';
    return 0;
  } catch (const nhl::InvalidArgument& e) {
    return fail(out_dir, "invalid_argument", e.what(), kExitConfig);
  } catch (const nhl::InvalidRunError& e) {
    return fail(out_dir, "invalid_run", e.what(), kExitInvalidRun);
  } catch (const nhl::NumericalError& e) {
    return fail(out_dir, "numerical", e.what(), kExitNumerical);
  } catch (const json::exception& e) {
    return fail(out_dir, "config_parse", e.what(), kExitConfig);
  } catch (const fs::filesystem_error& e) {
    return fail(out_dir, "io", e.what(), kExitConfig);
  } catch (const std::exception& e) {
    return fail(out_dir, "internal", e.what(), kExitNumerical);
  }
}
