#include "cli_commands.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <thread>

#include "cli_csv.hpp"
#include "decosim/histories.hpp"
#include "decosim/influence.hpp"
#include "decosim/master.hpp"
#include "decosim/numeric.hpp"
#include "decosim/validation.hpp"

namespace decosim::cli {

namespace {

const UnitSystem kUnits;
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void parallel_for(long n, int threads, const std::function<void(long)>& body) {
  const int workers = static_cast<int>(std::max<long>(1, std::min<long>(threads, n)));
  if (workers == 1) {
    for (long i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<long> next{0};
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (long i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

StateVector build_state(const json& state, int dim) {
  const std::string type = state["type"].get<std::string>();
  const long n = state["n"].get<long>();
  const double alpha = state["alpha"].get<double>();
  if (type == "fock") return fock_state(static_cast<int>(n), dim);
  if (type == "coherent") return coherent_state(alpha, dim);
  if (type == "cat") return cat_state(alpha, dim);
  if (type == "uniform") {
    Eigen::VectorXcd v = Eigen::VectorXcd::Constant(dim, 1.0 / std::sqrt(double(dim)));
    return StateVector(std::move(v));
  }
  if (type == "cat_like") {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
    v(0) = v(dim - 1) = 1.0 / std::sqrt(2.0);
    return StateVector(std::move(v));
  }
  throw DomainError("unsupported state type '" + type + "'");
}

PathPair build_paths(const json& section, uint64_t seed, long n_steps) {
  const std::string type = section["path_type"].get<std::string>();
  const double t_final = section["t_final"].get<double>();
  if (type == "constant_separation") {
    return PathPair::constant_separation(section["delta"].get<double>(), t_final,
                                         static_cast<int>(n_steps));
  }
  // random_smooth: a few seeded low-order modes; the same seed gives the same
  // underlying curves on every grid.
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const double amplitude = section["amplitude"].get<double>();
  std::array<double, 4> cx{}, cy{};
  for (double& c : cx) c = amplitude * dist(gen);
  for (double& c : cy) c = amplitude * dist(gen);
  Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(n_steps + 1, 0.0, t_final);
  Eigen::VectorXd x(n_steps + 1), y(n_steps + 1);
  for (long i = 0; i <= n_steps; ++i) {
    const double u = t(i) / t_final;
    x(i) = cx[0] + cx[1] * std::sin(kPi * u) + cx[2] * std::cos(2.0 * kPi * u) + cx[3] * u * u;
    y(i) = cy[0] + cy[1] * std::sin(kPi * u) + cy[2] * std::cos(2.0 * kPi * u) + cy[3] * u * u;
  }
  return PathPair(std::move(t), std::move(x), std::move(y));
}

std::vector<double> sample_times(double t_final, long n_samples) {
  std::vector<double> times(n_samples);
  for (long i = 0; i < n_samples; ++i) times[i] = t_final * i / (n_samples - 1);
  return times;
}

CommandResult run_kernel(const ResolvedConfig& cfg, int threads) {
  const double tau_min = cfg.section["tau_min"].get<double>();
  const double tau_max = cfg.section["tau_max"].get<double>();
  const long n_points = cfg.section["n_points"].get<long>();

  std::vector<std::array<double, 4>> rows(n_points);
  parallel_for(n_points, threads, [&](long i) {
    const double tau = tau_min + (tau_max - tau_min) * i / (n_points - 1);
    rows[i] = {tau, alpha_real_finite_temp(tau, cfg.bath, kUnits), alpha_imag(tau, cfg.bath),
               alpha_real_zero_temp(tau, cfg.bath)};
  });

  CsvBuilder csv({"tau", "alpha_real_finite_temp", "alpha_imag", "alpha_real_zero_temp"});
  for (const auto& r : rows) csv.row({r[0], r[1], r[2], r[3]});
  return {csv.str(), {{"n_rows", n_points}}};
}

CommandResult run_influence(const ResolvedConfig& cfg, int threads) {
  const auto n_steps_list = cfg.section["n_steps_list"].get<std::vector<long>>();
  struct Row {
    long n_steps;
    Complex w;
    double w_imag_discrete, w_imag_asymptotic, exponent, ratio;
  };
  std::vector<Row> rows(n_steps_list.size());
  parallel_for(static_cast<long>(n_steps_list.size()), threads, [&](long i) {
    const PathPair paths = build_paths(cfg.section, cfg.seed, n_steps_list[i]);
    const Complex w = influence_phase(paths, cfg.bath, kUnits);
    const double wi = w_imag_discrete(paths, cfg.bath);
    const auto asym = w_imag_asymptotic(paths, cfg.bath, kUnits);
    rows[i] = {n_steps_list[i], w,    wi, asym.w_imag, asym.exponent,
               asym.w_imag != 0.0 ? wi / asym.w_imag : kNan};
  });

  CsvBuilder csv({"n_steps", "w_real", "w_imag", "w_imag_discrete", "w_imag_asymptotic",
                  "exponent_asymptotic", "ratio_discrete_to_asymptotic"});
  for (const auto& r : rows) {
    csv.row({r.n_steps, r.w.real(), r.w.imag(), r.w_imag_discrete, r.w_imag_asymptotic,
             r.exponent, r.ratio});
  }
  json meta;
  meta["n_rows"] = rows.size();
  if (!rows.empty()) meta["ratio_discrete_to_asymptotic_finest"] = rows.back().ratio;
  return {csv.str(), meta};
}

CommandResult run_tdec(const ResolvedConfig& cfg, int) {
  CsvBuilder csv({"kind", "delta_x", "temperature", "omega_cut", "eta", "n_photons",
                  "gain_per_cm", "t_d", "ratio_to_zero_temp"});
  for (double dx : cfg.section["delta_x_list"].get<std::vector<double>>()) {
    const auto zero = decoherence_time_zero_temp(dx, cfg.bath, kUnits);
    csv.row({std::string("zero_temp"), dx, 0.0, cfg.bath.omega_cut, cfg.bath.eta, kNan, kNan,
             zero.t_d, kNan});
    if (cfg.bath.temperature > 0.0) {
      const auto thermal = decoherence_time_thermal(dx, cfg.bath, kUnits);
      csv.row({std::string("thermal"), dx, cfg.bath.temperature, cfg.bath.omega_cut,
               cfg.bath.eta, kNan, kNan, thermal.t_d, thermal.ratio_to_zero_temp.value()});
    }
  }
  const json& optical = cfg.section["optical"];
  for (long n : optical["n_photons_list"].get<std::vector<long>>()) {
    const OpticalSpec spec(static_cast<double>(n), optical["gain_per_cm"].get<double>(),
                           optical["light_speed_cm_s"].get<double>());
    csv.row({std::string("optical"), kNan, kNan, kNan, kNan, static_cast<double>(n),
             spec.gain_per_cm, optical_decoherence_time_seconds(spec), kNan});
  }
  return {csv.str(), json::object()};
}

std::pair<double, double> coherence_points(const ResolvedConfig& cfg, const json& section) {
  if (section.contains("coherence_points")) {
    return {section["coherence_points"][0].get<double>(),
            section["coherence_points"][1].get<double>()};
  }
  const json& state = section["state"];
  const std::string type = state["type"].get<std::string>();
  if (type == "cat" || type == "coherent") {
    const double alpha = state["alpha"].get<double>();
    const double x0 = std::sqrt(2.0) * std::abs(alpha) * cfg.system.length_scale(kUnits);
    if (x0 > 0.0) return {x0, -x0};
  }
  const double len = cfg.system.length_scale(kUnits);
  return {len, -len};
}

CommandResult run_evolve(const ResolvedConfig& cfg, int) {
  const json& s = cfg.section;
  const SystemModel model{cfg.system};
  const DensityMatrix rho0 = DensityMatrix::pure(build_state(s["state"], cfg.system.dim));
  const EvolutionControl ctrl(s["rel_tol"].get<double>(), s["abs_tol"].get<double>(),
                              s["max_step"].get<double>());
  const auto times = sample_times(s["t_final"].get<double>(), s["n_samples"].get<long>());
  const Trajectory traj = evolve(rho0, model, cfg.bath, times, ctrl, kUnits);

  const auto [xa, xb] = coherence_points(cfg, s);
  const long pops = std::min<long>(s["population_columns"].get<long>(), cfg.system.dim);
  const Eigen::MatrixXcd h = hamiltonian(cfg.system, kUnits);

  std::vector<std::string> header = {"time", "trace_drift", "purity", "energy",
                                     "coherence_abs"};
  for (long n = 0; n < pops; ++n) header.push_back("pop_" + std::to_string(n));
  CsvBuilder csv(header);
  for (const TrajectorySample& sample : traj.samples) {
    std::vector<Cell> row = {sample.time,
                             sample.state.matrix().trace().real() - 1.0,
                             sample.state.purity(),
                             (h * sample.state.matrix()).trace().real(),
                             std::abs(density_position_point(sample.state, cfg.system, xa, xb,
                                                             kUnits))};
    const Eigen::VectorXd p = sample.state.populations();
    for (long n = 0; n < pops; ++n) row.push_back(p(n));
    csv.row(row);
  }
  json meta;
  meta["accepted_steps"] = traj.n_accepted_steps;
  meta["rejected_steps"] = traj.n_rejected_steps;
  meta["coherence_points"] = {xa, xb};
  return {csv.str(), meta};
}

CommandResult run_energyloss(const ResolvedConfig& cfg, int) {
  const json& s = cfg.section;
  const SystemModel model{cfg.system};
  const DensityMatrix rho0 = DensityMatrix::pure(build_state(s["state"], cfg.system.dim));
  const EvolutionControl ctrl(s["rel_tol"].get<double>(), s["abs_tol"].get<double>());
  const long pops = std::min<long>(s["population_columns"].get<long>(), cfg.system.dim);

  std::vector<std::string> header = {"t", "delta_e_first_order", "delta_e_full_evolution",
                                     "abs_difference", "first_order_warning"};
  for (long n = 0; n < pops; ++n) header.push_back("delta_rho_first_" + std::to_string(n));
  CsvBuilder csv(header);
  for (double t : s["t_list"].get<std::vector<double>>()) {
    const auto first = delta_rho_first_order(rho0, model, cfg.bath, t, kUnits);
    const Trajectory traj = evolve(rho0, model, cfg.bath, {0.0, t}, ctrl, kUnits);
    const auto full = energy_change_full(traj, cfg.system, kUnits);
    std::vector<Cell> row = {t, first.delta_e, full.delta_e,
                             std::abs(first.delta_e - full.delta_e),
                             static_cast<long>(first.first_order_warning)};
    for (long n = 0; n < pops; ++n) row.push_back(first.delta_rho_diag(n));
    csv.row(row);
  }
  return {csv.str(), json::object()};
}

CommandResult run_histories(const ResolvedConfig& cfg, int) {
  const json& s = cfg.section;
  const int dim = static_cast<int>(s["dim"].get<long>());
  const int env_dim = static_cast<int>(s["env_dim"].get<long>());

  Eigen::MatrixXcd fourier(dim, dim);
  for (int j = 0; j < dim; ++j) {
    for (int k = 0; k < dim; ++k) {
      fourier(j, k) = std::exp(Complex(0.0, 2.0 * kPi * j * k / dim)) / std::sqrt(double(dim));
    }
  }

  std::vector<HistorySlot> slots;
  for (const auto& slot : s["slots"]) {
    const std::string basis = slot["basis"].get<std::string>();
    std::vector<Projector> members;
    for (int k = 0; k < dim; ++k) {
      Eigen::VectorXcd column = basis == "energy"
                                    ? Eigen::VectorXcd(Eigen::VectorXcd::Unit(dim, k))
                                    : Eigen::VectorXcd(fourier.col(k));
      members.push_back(make_projector(StateVector(std::move(column)), env_dim));
    }
    slots.push_back({slot["time"].get<double>(), ProjectorFamily(std::move(members))});
  }
  const HistorySet set(std::move(slots));

  const OscillatorSystem sys(cfg.system.mass, cfg.system.omega, dim);
  const int joint_dim = dim * env_dim;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(joint_dim, joint_dim);
  if (s["hamiltonian"].get<std::string>() == "oscillator") {
    h = kron(hamiltonian(sys, kUnits), Eigen::MatrixXcd::Identity(env_dim, env_dim));
  }

  const StateVector sys_state = build_state(s["state"], dim);
  Eigen::VectorXcd joint = Eigen::VectorXcd::Zero(joint_dim);
  for (int i = 0; i < dim; ++i) joint(i * env_dim) = sys_state.amplitudes()(i);
  const DensityMatrix rho0 = DensityMatrix::pure(StateVector(std::move(joint)));

  const Eigen::MatrixXcd d = decoherence_functional_matrix(set, rho0, h, kUnits);
  const auto verdict = classify_decoherent(d, s["epsilon"].get<double>());

  CsvBuilder csv({"left_index", "right_index", "re", "im", "abs"});
  for (long a = 0; a < d.rows(); ++a) {
    for (long b = 0; b < d.cols(); ++b) {
      csv.row({a, b, d(a, b).real(), d(a, b).imag(), std::abs(d(a, b))});
    }
  }
  json meta;
  meta["epsilon"] = s["epsilon"].get<double>();
  meta["decoherent"] = verdict.decoherent;
  meta["max_offdiag_magnitude"] = verdict.max_offdiag_magnitude;
  meta["max_offdiag_ratio"] = verdict.max_offdiag_ratio;
  meta["n_histories"] = set.n_histories();
  return {csv.str(), meta};
}

CommandResult run_hjcheck(const ResolvedConfig& cfg, int) {
  const json& s = cfg.section;
  const GridSpec grid(s["grid"]["x_min"].get<double>(), s["grid"]["x_max"].get<double>(),
                      static_cast<int>(s["grid"]["n_points"].get<long>()));
  const double dt = s["dt"].get<double>();
  const std::string what = s["case"].get<std::string>();
  const HJConvention convention = s["convention"].get<std::string>() == "as_printed"
                                      ? HJConvention::as_printed
                                      : HJConvention::standard_madelung;

  GridWavefunction a(grid, Eigen::VectorXcd::Zero(grid.n_points), false);
  GridWavefunction b = a;
  std::function<double(double)> potential = [](double) { return 0.0; };

  if (what == "ground_state") {
    const OscillatorSystem sys(cfg.system.mass, cfg.system.omega, std::max(cfg.system.dim, 2));
    const GridWavefunction psi = eigenfunction_grid(sys, 0, grid, kUnits);
    a = psi;
    const Complex rotation = std::exp(Complex(0.0, -0.5 * sys.omega * dt));
    b = GridWavefunction(grid, rotation * psi.values, true);
    const double m = sys.mass, w = sys.omega;
    potential = [m, w](double x) { return 0.5 * m * w * w * x * x; };
  } else if (what == "plane_wave") {
    const double k = s["wavenumber"].get<double>();
    const Eigen::VectorXd x = grid.points();
    Eigen::VectorXcd va(grid.n_points), vb(grid.n_points);
    const double phase_t = -kUnits.hbar * k * k * dt / (2.0 * cfg.system.mass);
    for (int i = 0; i < grid.n_points; ++i) {
      va(i) = std::exp(Complex(0.0, k * x(i)));
      vb(i) = std::exp(Complex(0.0, k * x(i) + phase_t));
    }
    a = GridWavefunction(grid, std::move(va), false);
    b = GridWavefunction(grid, std::move(vb), false);
  } else {  // random_smooth, static two slices
    std::mt19937_64 gen(cfg.seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const double c1 = dist(gen), c2 = dist(gen), c3 = 0.5 * dist(gen);
    const Eigen::VectorXd x = grid.points();
    Eigen::VectorXcd v(grid.n_points);
    for (int i = 0; i < grid.n_points; ++i) {
      const double envelope =
          std::exp(-0.5 * x(i) * x(i)) * (1.0 + 0.3 * c1 * std::sin(2.0 * x(i) + c2));
      v(i) = envelope * std::exp(Complex(0.0, c3 * x(i) * x(i)));
    }
    const double norm = std::sqrt(trapezoid(v.cwiseAbs2(), grid.spacing()));
    a = GridWavefunction(grid, v / norm, true);
    b = a;
  }

  const ResidualReport report =
      hamilton_jacobi_residual(a, b, dt, potential, cfg.system.mass, kUnits, convention);

  CsvBuilder csv({"x", "lhs", "rhs", "residual"});
  for (int i = 0; i < grid.n_points; ++i) {
    csv.row({report.x(i), report.lhs(i), report.rhs(i), report.residual(i)});
  }
  json meta;
  meta["interior_max_abs_residual"] = report.interior_max_abs;
  meta["n_evaluated"] = report.n_evaluated;
  meta["case"] = what;
  meta["convention"] = s["convention"].get<std::string>();
  return {csv.str(), meta};
}

CommandResult run_oracle(const ResolvedConfig& cfg, int) {
  const json& s = cfg.section;
  const int sys_dim = static_cast<int>(s["system_dim"].get<long>());
  const OscillatorSystem sys(cfg.system.mass, cfg.system.omega, sys_dim);
  const BathModeSet modes = BathModeSet::ohmic(
      static_cast<int>(s["n_modes"].get<long>()), static_cast<int>(s["mode_dim"].get<long>()),
      cfg.bath.eta, cfg.bath.omega_cut, s["coupling_scale"].get<double>());

  const StateVector state = build_state(s["state"], sys_dim);
  const Eigen::VectorXcd psi0 = joint_with_bath_ground(state, modes);
  const auto times = sample_times(s["t_final"].get<double>(), s["n_samples"].get<long>());
  const JointTrajectory traj = exact_system_bath(hamiltonian(sys, kUnits), modes,
                                                 position_operator(sys, kUnits), psi0, times,
                                                 kUnits);

  std::vector<std::string> header = {"time", "purity", "joint_norm", "coherence_abs"};
  for (int n = 0; n < sys_dim; ++n) header.push_back("pop_" + std::to_string(n));
  CsvBuilder csv(header);
  for (size_t i = 0; i < traj.times.size(); ++i) {
    std::vector<Cell> row = {traj.times[i], traj.purity(i), traj.joint_norm(i),
                             std::abs(traj.reduced[i](0, sys_dim - 1))};
    for (int n = 0; n < sys_dim; ++n) row.push_back(traj.reduced[i](n, n).real());
    csv.row(row);
  }
  json meta;
  meta["joint_dim"] = sys_dim * modes.env_dim();
  return {csv.str(), meta};
}

}  // namespace

json design_flags() {
  return {{"influence_phase_domain", "ordered_s_le_t"},
          {"influence_imag_domain", "full_square"},
          {"action_phase_uses_hbar", true},
          {"unitary_term", "-i*(E_n-E_m)/hbar*rho_nm"},
          {"first_order_shift", "finite_interval_linear_in_t"},
          {"projector_evolution", "unitary_heisenberg"},
          {"optical_mapping", "1/(light_speed*gain*n_photons)"},
          {"friction_kernel_in_master_equation", false},
          {"kernel_series_switchover_real", 1e-4},
          {"kernel_series_switchover_imag", 1e-2}};
}

CommandResult run_command(const ResolvedConfig& cfg, int threads) {
  if (cfg.command == "kernel") return run_kernel(cfg, threads);
  if (cfg.command == "influence") return run_influence(cfg, threads);
  if (cfg.command == "tdec") return run_tdec(cfg, threads);
  if (cfg.command == "evolve") return run_evolve(cfg, threads);
  if (cfg.command == "energyloss") return run_energyloss(cfg, threads);
  if (cfg.command == "histories") return run_histories(cfg, threads);
  if (cfg.command == "hjcheck") return run_hjcheck(cfg, threads);
  if (cfg.command == "oracle") return run_oracle(cfg, threads);
  throw DomainError("unsupported command '" + cfg.command + "'");
}

}  // namespace decosim::cli
