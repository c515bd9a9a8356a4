#include <CLI11.hpp>

#include "cli_run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"decosim: phase decoherence and zero-temperature dissipation for an "
               "oscillator coupled to an ohmic environment"};
  decosim::cli::CliOptions options;
  app.add_option("--config", options.config_path, "JSON experiment configuration")->required();
  app.add_option("--out-dir", options.out_dir, "directory for the CSV and its sidecar");
  app.add_option("--threads", options.threads, "worker threads for parameter sweeps");
  app.add_flag("--verbose", options.verbose, "progress messages on stderr");
  CLI11_PARSE(app, argc, argv);
  return decosim::cli::run_main(options);
}
