#include "cli_run.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

#include "cli_commands.hpp"
#include "cli_config.hpp"
#include "decosim/common.hpp"

namespace decosim::cli {

namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

int run_main(const CliOptions& options) {
  // Configuration stage: any failure here exits 1 with no output files.
  ResolvedConfig cfg;
  try {
    std::ifstream in(options.config_path);
    if (!in) {
      std::cerr << "error: cannot open config file '" << options.config_path << "'\n";
      return 1;
    }
    json document;
    try {
      in >> document;
    } catch (const json::parse_error& e) {
      std::cerr << "error: config is not valid JSON: " << e.what() << "\n";
      return 1;
    }
    cfg = resolve_config(document);
    if (cfg.command == "influence" && cfg.bath.temperature != 0.0) {
      throw SchemaError("influence: bath.temperature must be 0 for the discretized "
                        "imaginary influence phase");
    }
    if (options.threads < 1) throw SchemaError("--threads must be at least 1");
  } catch (const SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  if (options.verbose) {
    std::cerr << "decosim: running '" << cfg.command << "' -> " << cfg.csv_name << "\n";
  }

  // Computation stage: failures exit 2; files are only written on success.
  CommandResult result;
  try {
    result = run_command(cfg, options.threads);
  } catch (const std::exception& e) {
    std::cerr << "error [" << cfg.command << "]: " << e.what() << "\n";
    return 2;
  }

  try {
    const fs::path dir(options.out_dir);
    fs::create_directories(dir);
    json sidecar = cfg.resolved;
    sidecar["metadata"] = {{"generator", "decosim 0.1.0"},
                           {"flags", design_flags()},
                           {"result", result.metadata}};
    write_file(dir / cfg.csv_name, result.csv);
    write_file(dir / sidecar_name(cfg.csv_name), sidecar.dump(2) + "\n");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  if (options.verbose) std::cerr << "decosim: done\n";
  return 0;
}

}  // namespace decosim::cli
