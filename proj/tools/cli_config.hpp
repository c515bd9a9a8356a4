#pragma once

// Config parsing and strict schema validation for the batch front end.
// Configs are JSON documents with required top-level keys `command`,
// `system`, `bath`, `output`, an optional per-command section named after the
// command, an optional `seed`, and an optional `metadata` object which is
// ignored on input (this is what lets a result sidecar be re-run verbatim).
// Unknown keys anywhere are rejected.

#include <json.hpp>
#include <stdexcept>
#include <string>

#include "decosim/bath.hpp"
#include "decosim/oscillator.hpp"

namespace decosim::cli {

using nlohmann::json;

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ResolvedConfig {
  std::string command;
  OscillatorSystem system;
  BathSpec bath;
  std::string csv_name;
  uint64_t seed = 0;
  json section;   // per-command options with defaults filled in
  json resolved;  // full config with defaults materialized (sidecar payload)
};

// Parses and validates a config document. Throws SchemaError on unknown or
// missing keys, wrong types, or out-of-range values.
ResolvedConfig resolve_config(const json& document);

// Sidecar path derived from the CSV name: foo.csv -> foo.meta.json.
std::string sidecar_name(const std::string& csv_name);

}  // namespace decosim::cli
