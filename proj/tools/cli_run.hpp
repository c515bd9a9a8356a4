#pragma once

#include <string>

namespace decosim::cli {

struct CliOptions {
  std::string config_path;
  std::string out_dir = ".";
  int threads = 1;
  bool verbose = false;
};

// Full run: load + validate the config, execute the command, write the CSV
// and its JSON sidecar. Nothing is written on failure.
// Exit status: 0 success, 1 config/schema error, 2 numerical failure.
int run_main(const CliOptions& options);

}  // namespace decosim::cli
