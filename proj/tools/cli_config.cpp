#include "cli_config.hpp"

#include <set>

namespace decosim::cli {

namespace {

void require_object(const json& j, const std::string& context) {
  if (!j.is_object()) throw SchemaError(context + ": expected an object");
}

void check_keys(const json& obj, const std::set<std::string>& required,
                const std::set<std::string>& optional, const std::string& context) {
  for (const auto& [key, value] : obj.items()) {
    if (!required.count(key) && !optional.count(key)) {
      throw SchemaError(context + ": unknown key '" + key + "'");
    }
  }
  for (const std::string& key : required) {
    if (!obj.contains(key)) throw SchemaError(context + ": missing required key '" + key + "'");
  }
}

double get_number(const json& obj, const std::string& key, double fallback,
                  const std::string& context) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) throw SchemaError(context + "." + key + ": expected a number");
  return obj[key].get<double>();
}

long get_integer(const json& obj, const std::string& key, long fallback,
                 const std::string& context) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer()) {
    throw SchemaError(context + "." + key + ": expected an integer");
  }
  return obj[key].get<long>();
}

std::string get_string(const json& obj, const std::string& key, const std::string& fallback,
                       const std::string& context) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_string()) throw SchemaError(context + "." + key + ": expected a string");
  return obj[key].get<std::string>();
}

std::vector<double> get_number_list(const json& obj, const std::string& key,
                                    std::vector<double> fallback, const std::string& context) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_array() || obj[key].empty()) {
    throw SchemaError(context + "." + key + ": expected a non-empty array");
  }
  std::vector<double> out;
  for (const auto& v : obj[key]) {
    if (!v.is_number()) throw SchemaError(context + "." + key + ": expected numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::vector<long> get_integer_list(const json& obj, const std::string& key,
                                   std::vector<long> fallback, const std::string& context) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_array() || obj[key].empty()) {
    throw SchemaError(context + "." + key + ": expected a non-empty array");
  }
  std::vector<long> out;
  for (const auto& v : obj[key]) {
    if (!v.is_number_integer()) throw SchemaError(context + "." + key + ": expected integers");
    out.push_back(v.get<long>());
  }
  return out;
}

json resolve_state(const json& section, const std::string& context,
                   const std::set<std::string>& allowed_types, const std::string& default_type) {
  json state = section.contains("state") ? section["state"] : json::object();
  require_object(state, context + ".state");
  check_keys(state, {}, {"type", "n", "alpha"}, context + ".state");
  json out;
  out["type"] = get_string(state, "type", default_type, context + ".state");
  if (!allowed_types.count(out["type"].get<std::string>())) {
    throw SchemaError(context + ".state.type: unsupported value '" +
                      out["type"].get<std::string>() + "'");
  }
  out["n"] = get_integer(state, "n", 0, context + ".state");
  out["alpha"] = get_number(state, "alpha", 1.0, context + ".state");
  return out;
}

json resolve_section(const std::string& command, const json& section) {
  require_object(section, command);
  json out;
  if (command == "kernel") {
    check_keys(section, {}, {"tau_min", "tau_max", "n_points"}, command);
    out["tau_min"] = get_number(section, "tau_min", -5.0, command);
    out["tau_max"] = get_number(section, "tau_max", 5.0, command);
    out["n_points"] = get_integer(section, "n_points", 51, command);
    if (out["n_points"].get<long>() < 2) throw SchemaError("kernel.n_points: need >= 2");
    if (!(out["tau_max"].get<double>() > out["tau_min"].get<double>())) {
      throw SchemaError("kernel: tau_max must exceed tau_min");
    }
  } else if (command == "influence") {
    check_keys(section, {}, {"path_type", "delta", "amplitude", "t_final", "n_steps_list"},
               command);
    out["path_type"] = get_string(section, "path_type", "constant_separation", command);
    const std::string type = out["path_type"].get<std::string>();
    if (type != "constant_separation" && type != "random_smooth") {
      throw SchemaError("influence.path_type: unsupported value '" + type + "'");
    }
    out["delta"] = get_number(section, "delta", 1.0, command);
    out["amplitude"] = get_number(section, "amplitude", 1.0, command);
    out["t_final"] = get_number(section, "t_final", 1.0, command);
    if (!(out["t_final"].get<double>() > 0.0)) throw SchemaError("influence.t_final: must be > 0");
    out["n_steps_list"] = get_integer_list(section, "n_steps_list", {1024, 2048, 4096}, command);
    for (long n : out["n_steps_list"].get<std::vector<long>>()) {
      if (n < 2) throw SchemaError("influence.n_steps_list: entries must be >= 2");
    }
  } else if (command == "tdec") {
    check_keys(section, {}, {"delta_x_list", "optical"}, command);
    out["delta_x_list"] = get_number_list(section, "delta_x_list", {1.0}, command);
    json optical = section.contains("optical") ? section["optical"] : json::object();
    require_object(optical, "tdec.optical");
    check_keys(optical, {}, {"gain_per_cm", "n_photons_list", "light_speed_cm_s"},
               "tdec.optical");
    json opt_out;
    opt_out["gain_per_cm"] = get_number(optical, "gain_per_cm", 1.0, "tdec.optical");
    opt_out["light_speed_cm_s"] =
        get_number(optical, "light_speed_cm_s", 2.998e10, "tdec.optical");
    opt_out["n_photons_list"] =
        get_integer_list(optical, "n_photons_list", {1, 10, 100}, "tdec.optical");
    out["optical"] = opt_out;
  } else if (command == "evolve") {
    check_keys(section, {},
               {"state", "t_final", "n_samples", "rel_tol", "abs_tol", "max_step",
                "population_columns", "coherence_points"},
               command);
    out["state"] = resolve_state(section, command, {"fock", "coherent", "cat"}, "cat");
    out["t_final"] = get_number(section, "t_final", 10.0, command);
    out["n_samples"] = get_integer(section, "n_samples", 101, command);
    out["rel_tol"] = get_number(section, "rel_tol", 1e-9, command);
    out["abs_tol"] = get_number(section, "abs_tol", 1e-11, command);
    out["max_step"] = get_number(section, "max_step", 0.0, command);
    out["population_columns"] = get_integer(section, "population_columns", 4, command);
    if (!(out["t_final"].get<double>() > 0.0)) throw SchemaError("evolve.t_final: must be > 0");
    if (out["n_samples"].get<long>() < 2) throw SchemaError("evolve.n_samples: need >= 2");
    if (section.contains("coherence_points")) {
      const json& pts = section["coherence_points"];
      if (!pts.is_array() || pts.size() != 2 || !pts[0].is_number() || !pts[1].is_number()) {
        throw SchemaError("evolve.coherence_points: expected [x_a, x_b]");
      }
      out["coherence_points"] = pts;
    }
  } else if (command == "energyloss") {
    check_keys(section, {}, {"state", "t_list", "rel_tol", "abs_tol", "population_columns"},
               command);
    out["state"] = resolve_state(section, command, {"fock", "coherent", "cat"}, "fock");
    out["t_list"] = get_number_list(section, "t_list", {0.01}, command);
    out["rel_tol"] = get_number(section, "rel_tol", 1e-9, command);
    out["abs_tol"] = get_number(section, "abs_tol", 1e-11, command);
    out["population_columns"] = get_integer(section, "population_columns", 4, command);
    for (double t : out["t_list"].get<std::vector<double>>()) {
      if (!(t > 0.0)) throw SchemaError("energyloss.t_list: entries must be > 0");
    }
  } else if (command == "histories") {
    check_keys(section, {}, {"dim", "env_dim", "state", "hamiltonian", "slots", "epsilon"},
               command);
    out["dim"] = get_integer(section, "dim", 2, command);
    out["env_dim"] = get_integer(section, "env_dim", 1, command);
    out["state"] = resolve_state(section, command, {"uniform", "fock", "coherent", "cat"},
                                 "uniform");
    out["hamiltonian"] = get_string(section, "hamiltonian", "oscillator", command);
    const std::string ham = out["hamiltonian"].get<std::string>();
    if (ham != "oscillator" && ham != "zero") {
      throw SchemaError("histories.hamiltonian: unsupported value '" + ham + "'");
    }
    out["epsilon"] = get_number(section, "epsilon", 0.1, command);
    if (!(out["epsilon"].get<double>() > 0.0)) throw SchemaError("histories.epsilon: must be > 0");
    json slots = json::array();
    if (section.contains("slots")) {
      if (!section["slots"].is_array() || section["slots"].empty()) {
        throw SchemaError("histories.slots: expected a non-empty array");
      }
      for (const auto& slot : section["slots"]) {
        require_object(slot, "histories.slots[]");
        check_keys(slot, {}, {"time", "basis"}, "histories.slots[]");
        json s;
        s["time"] = get_number(slot, "time", 0.0, "histories.slots[]");
        s["basis"] = get_string(slot, "basis", "energy", "histories.slots[]");
        const std::string basis = s["basis"].get<std::string>();
        if (basis != "energy" && basis != "fourier") {
          throw SchemaError("histories.slots[].basis: unsupported value '" + basis + "'");
        }
        slots.push_back(s);
      }
    } else {
      slots.push_back({{"time", 0.0}, {"basis", "energy"}});
      slots.push_back({{"time", 0.0}, {"basis", "fourier"}});
    }
    out["slots"] = slots;
    if (out["dim"].get<long>() < 2) throw SchemaError("histories.dim: need >= 2");
    if (out["env_dim"].get<long>() < 1) throw SchemaError("histories.env_dim: need >= 1");
  } else if (command == "hjcheck") {
    check_keys(section, {}, {"case", "convention", "grid", "dt", "wavenumber"}, command);
    out["case"] = get_string(section, "case", "ground_state", command);
    const std::string what = out["case"].get<std::string>();
    if (what != "ground_state" && what != "plane_wave" && what != "random_smooth") {
      throw SchemaError("hjcheck.case: unsupported value '" + what + "'");
    }
    out["convention"] = get_string(section, "convention", "standard_madelung", command);
    const std::string conv = out["convention"].get<std::string>();
    if (conv != "standard_madelung" && conv != "as_printed") {
      throw SchemaError("hjcheck.convention: unsupported value '" + conv + "'");
    }
    json grid = section.contains("grid") ? section["grid"] : json::object();
    require_object(grid, "hjcheck.grid");
    check_keys(grid, {}, {"x_min", "x_max", "n_points"}, "hjcheck.grid");
    json grid_out;
    grid_out["x_min"] = get_number(grid, "x_min", -8.0, "hjcheck.grid");
    grid_out["x_max"] = get_number(grid, "x_max", 8.0, "hjcheck.grid");
    grid_out["n_points"] = get_integer(grid, "n_points", 2048, "hjcheck.grid");
    out["grid"] = grid_out;
    out["dt"] = get_number(section, "dt", 1e-3, command);
    out["wavenumber"] = get_number(section, "wavenumber", 1.3, command);
    if (!(out["dt"].get<double>() > 0.0)) throw SchemaError("hjcheck.dt: must be > 0");
  } else if (command == "oracle") {
    check_keys(section, {},
               {"system_dim", "state", "n_modes", "mode_dim", "coupling_scale", "t_final",
                "n_samples"},
               command);
    out["system_dim"] = get_integer(section, "system_dim", 4, command);
    out["state"] = resolve_state(section, command, {"cat_like", "fock", "coherent"}, "cat_like");
    out["n_modes"] = get_integer(section, "n_modes", 4, command);
    out["mode_dim"] = get_integer(section, "mode_dim", 3, command);
    out["coupling_scale"] = get_number(section, "coupling_scale", 1.0, command);
    out["t_final"] = get_number(section, "t_final", 1.5, command);
    out["n_samples"] = get_integer(section, "n_samples", 16, command);
    if (out["system_dim"].get<long>() < 2) throw SchemaError("oracle.system_dim: need >= 2");
    if (out["n_modes"].get<long>() < 1) throw SchemaError("oracle.n_modes: need >= 1");
    if (out["mode_dim"].get<long>() < 2) throw SchemaError("oracle.mode_dim: need >= 2");
    if (out["n_samples"].get<long>() < 2) throw SchemaError("oracle.n_samples: need >= 2");
    if (!(out["t_final"].get<double>() > 0.0)) throw SchemaError("oracle.t_final: must be > 0");
  } else {
    throw SchemaError("command: unsupported value '" + command + "'");
  }
  return out;
}

}  // namespace

ResolvedConfig resolve_config(const json& document) {
  require_object(document, "config");
  if (!document.contains("command") || !document["command"].is_string()) {
    throw SchemaError("config: missing string key 'command'");
  }
  const std::string command = document["command"].get<std::string>();
  check_keys(document, {"command", "system", "bath", "output"}, {command, "seed", "metadata"},
             "config");

  ResolvedConfig cfg;
  cfg.command = command;

  const json& system = document["system"];
  require_object(system, "system");
  check_keys(system, {}, {"mass", "omega", "dim"}, "system");
  const double mass = get_number(system, "mass", 1.0, "system");
  const double omega = get_number(system, "omega", 1.0, "system");
  const long dim = get_integer(system, "dim", 32, "system");
  try {
    cfg.system = OscillatorSystem(mass, omega, static_cast<int>(dim));
  } catch (const DomainError& e) {
    throw SchemaError(std::string("system: ") + e.what());
  }

  const json& bath = document["bath"];
  require_object(bath, "bath");
  check_keys(bath, {}, {"eta", "omega_cut", "temperature"}, "bath");
  try {
    cfg.bath = BathSpec(get_number(bath, "eta", 1.0, "bath"),
                        get_number(bath, "omega_cut", 10.0, "bath"),
                        get_number(bath, "temperature", 0.0, "bath"));
  } catch (const DomainError& e) {
    throw SchemaError(std::string("bath: ") + e.what());
  }

  const json& output = document["output"];
  require_object(output, "output");
  check_keys(output, {"csv"}, {}, "output");
  if (!output["csv"].is_string() || output["csv"].get<std::string>().empty()) {
    throw SchemaError("output.csv: expected a non-empty string");
  }
  cfg.csv_name = output["csv"].get<std::string>();

  if (document.contains("seed")) {
    if (!document["seed"].is_number_unsigned() && !document["seed"].is_number_integer()) {
      throw SchemaError("seed: expected a non-negative integer");
    }
    const long seed = document["seed"].get<long>();
    if (seed < 0) throw SchemaError("seed: expected a non-negative integer");
    cfg.seed = static_cast<uint64_t>(seed);
  }

  cfg.section = resolve_section(command, document.contains(command) ? document[command]
                                                                    : json::object());

  cfg.resolved = {{"command", command},
                  {"system", {{"mass", mass}, {"omega", omega}, {"dim", dim}}},
                  {"bath",
                   {{"eta", cfg.bath.eta},
                    {"omega_cut", cfg.bath.omega_cut},
                    {"temperature", cfg.bath.temperature}}},
                  {"output", {{"csv", cfg.csv_name}}},
                  {"seed", cfg.seed},
                  {command, cfg.section}};
  return cfg;
}

std::string sidecar_name(const std::string& csv_name) {
  const auto dot = csv_name.rfind('.');
  const std::string stem = dot == std::string::npos ? csv_name : csv_name.substr(0, dot);
  return stem + ".meta.json";
}

}  // namespace decosim::cli
