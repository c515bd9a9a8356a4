#pragma once

#include <json.hpp>
#include <string>

#include "cli_config.hpp"

namespace decosim::cli {

struct CommandResult {
  std::string csv;
  json metadata;  // command-specific summary merged into the sidecar
};

// Executes the resolved command; throws decosim exceptions on failure.
CommandResult run_command(const ResolvedConfig& cfg, int threads);

// Static design-decision flags echoed into every sidecar.
json design_flags();

}  // namespace decosim::cli
