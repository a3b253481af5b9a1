#include "experiments.hpp"

#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <map>
#include <thread>

#include "ioncool/chain.hpp"
#include "ioncool/doppler.hpp"
#include "ioncool/eit.hpp"
#include "ioncool/resistive.hpp"
#include "ioncool/sideband.hpp"
#include "ioncool/species.hpp"

namespace ioncool::cli {

namespace {

constexpr double kTwoPi = 2.0 * kPi;

Table time_table(std::vector<std::string> columns) {
  Table t;
  t.columns = std::move(columns);
  return t;
}

// ------------------------------------------------------------------ Doppler

Outcome run_doppler(const Params& p, int) {
  const SpeciesParams& species = find_species(p.text("species"));
  const DopplerResult r = doppler_cool_trajectory(p.number("T0_k"), p.number("detuning_linewidths") * species.linewidth,
                                                  p.number("saturation"), species, p.number("duration_s"),
                                                  p.integer("samples"));
  Outcome out;
  Table t = time_table({"t_s", "T_K"});
  for (std::size_t i = 0; i < r.times.size(); ++i) t.add_row({r.times[i], r.temperatures[i]});
  out.tables.emplace_back("trajectory.csv", std::move(t));
  out.summary = {{"equilibrium_T_K", r.equilibrium_T},
                 {"doppler_limit_T_K", r.doppler_limit_T},
                 {"ratio_to_limit", r.equilibrium_T / r.doppler_limit_T},
                 {"converged", r.converged ? 1.0 : 0.0}};
  if (!r.converged) {
    if (p.boolean("require_convergence"))
      throw NumericalError("doppler: no equilibrium within duration_s; final T = " + format_double(r.equilibrium_T) +
                           " K");
    out.warnings.push_back("equilibrium not reached within duration_s");
  }
  return out;
}

Outcome run_doppler_limit(const Params& p, int) {
  const double t = doppler_limit(find_species(p.text("species")));
  Outcome out;
  Json doc = Json::object();
  doc["T_K"] = t;
  out.documents.emplace_back("doppler_limit.json", std::move(doc));
  out.summary = {{"T_K", t}};
  return out;
}

// ------------------------------------------------------------------ resistive

Outcome run_resistive(const Params& p, int) {
  const ResistiveConfig cfg{p.number("mass_amu") * kAtomicMass, p.number("charge_e") * kElementaryCharge,
                            p.number("half_gap_m"), p.number("resistance_ohm"), p.number("initial_energy_j")};
  const double tau = resistive_time_constant(cfg);
  const double duration = p.given("duration_s") ? p.number("duration_s") : 5.0 * tau;
  Outcome out;
  Table t = time_table({"t_s", "E_J"});
  for (double time : linspace(0.0, duration, p.integer("samples"))) t.add_row({time, resistive_energy(cfg, time)});
  out.tables.emplace_back("energy.csv", std::move(t));
  out.summary = {{"tau_s", tau}, {"final_energy_j", resistive_energy(cfg, duration)}};
  return out;
}

// ------------------------------------------------------------------ sideband cooling

Outcome run_sideband(const Params& p, int) {
  SidebandCoolConfig cfg;
  cfg.trap = TrapParams{kTwoPi * p.number("nu_hz"), kAtomicMass};
  cfg.drive = LaserDrive{kTwoPi * p.number("rabi_hz"), -cfg.trap.nu + kTwoPi * p.number("sideband_detuning_hz"),
                         p.number("phase_rad"), p.number("eta")};
  cfg.repump_rate = p.number("repump_rate_per_s");
  cfg.heating_rate = p.number("heating_rate_quanta_per_s");
  cfg.recoil_ldp = p.number("recoil_eta");
  cfg.initial_nbar = p.number("initial_nbar");
  cfg.duration = p.number("duration_s");
  cfg.fock_cutoff = p.integer("fock_cutoff");
  cfg.samples = p.integer("samples");
  cfg.model = p.text("model") == "rwa" ? SidebandModel::rwa : SidebandModel::first_order;

  const SidebandResult r = sideband_cool(cfg);
  const Trajectory& traj = r.trajectory;
  Outcome out;
  Table pops = time_table({"t_s", "nbar", "P_e", "P_g0"});
  std::vector<std::string> fock_cols{"t_s"};
  for (int n = 0; n <= cfg.fock_cutoff; ++n) fock_cols.push_back("P" + std::to_string(n));
  Table fock = time_table(std::move(fock_cols));
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    pops.add_row({traj.times[i], traj["nbar"][i], traj["P_e"][i], traj["P_g0"][i]});
    std::vector<double> row{traj.times[i]};
    for (int n = 0; n <= cfg.fock_cutoff; ++n) row.push_back(traj["P" + std::to_string(n)][i]);
    fock.add_row(std::move(row));
  }
  out.tables.emplace_back("populations.csv", std::move(pops));
  out.tables.emplace_back("fock.csv", std::move(fock));
  out.summary = {{"initial_nbar", traj["nbar"].front()},
                 {"final_nbar", traj["nbar"].back()},
                 {"final_P_g0", traj["P_g0"].back()},
                 {"lamb_dicke_factor", r.lamb_dicke_factor}};
  if (r.lamb_dicke_warning)
    out.warnings.push_back("outside the Lamb-Dicke regime: eta sqrt(2 nbar + 1) = " +
                           format_double(r.lamb_dicke_factor));
  return out;
}

// ------------------------------------------------------------------ EIT

Outcome run_eit(const Params& p, int threads) {
  const EITConfig cfg{p.number("omega1_gamma"), p.number("omega3_gamma"), p.number("delta1_gamma"), 0.0, 1.0,
                      p.number("beta")};
  const double lo = p.number("delta3_min_gamma"), hi = p.number("delta3_max_gamma");
  if (!(hi > lo)) throw ConfigError("parameters.delta3_max_gamma", "must exceed delta3_min_gamma");
  const std::vector<double> grid = linspace(lo, hi, p.integer("points"));
  const Spectrum s = eit_absorption_spectrum(cfg, grid, threads);

  Outcome out;
  Table t = time_table({"delta3", "absorption_norm"});
  std::size_t lowest = 0, highest = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    t.add_row({grid[i], s.normalized[i]});
    if (s.normalized[i] < s.normalized[lowest]) lowest = i;
    if (s.normalized[i] > s.normalized[highest]) highest = i;
  }
  out.tables.emplace_back("spectrum.csv", std::move(t));
  out.summary = {{"peak_absorption", s.peak},
                 {"delta3_at_max", grid[highest]},
                 {"delta3_at_min", grid[lowest]},
                 {"min_absorption_norm", s.normalized[lowest]}};

  const double nu = p.number("nu_gamma");
  if (nu > 0.0) {
    const double carrier = p.given("carrier_detuning_gamma") ? p.number("carrier_detuning_gamma") : cfg.delta1;
    EitAssessment a;
    try {
      a = eit_cooling_assess(s, nu, carrier);
    } catch (const NumericalError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError("parameters.nu_gamma", e.what());
    }
    Json doc = Json::object();
    doc["nu_gamma"] = nu;
    doc["carrier_detuning_gamma"] = carrier;
    doc["red"] = a.red;
    doc["carrier"] = a.carrier;
    doc["blue"] = a.blue;
    doc["ratio"] = a.ratio;
    out.documents.emplace_back("assessment.json", std::move(doc));
    out.summary.emplace_back("red_to_carrier_blue_ratio", a.ratio);
  }
  return out;
}

// ------------------------------------------------------------------ MAGIC

Outcome run_magic(const Params& p, int) {
  const TrapParams trap{kTwoPi * p.number("nu_hz"), p.number("mass_amu") * kAtomicMass};
  // Hz/mm to rad/s per m.
  const double gradient = kTwoPi * p.number("freq_gradient_hz_per_mm") * 1e3;
  const double kappa = magic_kappa(trap, gradient);
  const GradientShift shift = magic_gradient_shift(trap, gradient);
  const MagicParams m = effective_ldp(p.number("eta"), kappa);

  Outcome out;
  Json doc = Json::object();
  doc["z0_m"] = trap.z0();
  doc["kappa"] = kappa;
  doc["kappa_from_shift"] = shift.kappa;
  doc["force_n"] = shift.force;
  doc["shift_m"] = shift.shift;
  doc["eta"] = m.eta;
  doc["eta_eff_re"] = m.eta_eff().real();
  doc["eta_eff_im"] = m.eta_eff().imag();
  doc["eta_eff_abs"] = m.eta_prime;
  doc["theta_rad"] = m.theta;
  doc["red_sideband_rabi_hz_n1"] = m.eta_prime * p.number("rabi_hz");
  out.documents.emplace_back("magic.json", std::move(doc));
  out.summary = {{"kappa", kappa}, {"eta_eff_abs", m.eta_prime}, {"theta_rad", m.theta}};
  return out;
}

// ------------------------------------------------------------------ chains

ChainModes chain_from(const Params& p) {
  return chain_normal_modes(p.integer("ions"), kTwoPi * p.number("nu_hz"), p.number("mass_amu") * kAtomicMass,
                            p.number("charge_e") * kElementaryCharge);
}

std::vector<int> pairing_from(const Params& p, const ChainModes& modes) {
  if (p.text("pairing") == "participation") return participation_assignment(modes);
  std::vector<int> identity(modes.ions());
  for (int i = 0; i < modes.ions(); ++i) identity[i] = i;
  return identity;
}

Outcome run_chain(const Params& p, int) {
  const ChainModes modes = chain_from(p);
  const std::vector<int> pairing = pairing_from(p, modes);
  const std::vector<double> offsets = design_simultaneous_gradient(modes, pairing);
  const int n = modes.ions();

  Outcome out;
  std::vector<std::string> cols{"mode", "frequency_hz", "frequency_ratio"};
  for (int i = 0; i < n; ++i) cols.push_back("b_" + std::to_string(i + 1));
  Table mt = time_table(std::move(cols));
  for (int q = 0; q < n; ++q) {
    std::vector<double> row{static_cast<double>(q + 1), modes.frequencies[q] / kTwoPi,
                            modes.frequencies[q] / modes.frequencies[0]};
    for (int i = 0; i < n; ++i) row.push_back(modes.mode_vectors(i, q));
    mt.add_row(std::move(row));
  }
  Table it = time_table({"ion", "position_m", "paired_mode", "offset_hz"});
  for (int i = 0; i < n; ++i)
    it.add_row({static_cast<double>(i + 1), modes.equilibrium_positions[i], static_cast<double>(pairing[i] + 1),
                offsets[i] / kTwoPi});
  out.tables.emplace_back("modes.csv", std::move(mt));
  out.tables.emplace_back("ions.csv", std::move(it));
  out.summary.emplace_back("length_scale_m", modes.length_scale);
  for (int q = 0; q < n; ++q)
    out.summary.emplace_back("frequency_ratio_" + std::to_string(q + 1), modes.frequencies[q] / modes.frequencies[0]);
  return out;
}

Outcome run_multimode(const Params& p, int) {
  if (p.integer("ions") > 4) throw ConfigError("parameters.ions", "at most 4 ions are supported");
  const ChainModes modes = chain_from(p);
  const int n = modes.ions();
  const std::vector<int> pairing = pairing_from(p, modes);

  MultimodeConfig cfg;
  cfg.modes = modes;
  cfg.eta_eff = mode_couplings(modes, p.number("eta_com"));
  cfg.rabi = kTwoPi * p.number("rabi_hz");
  cfg.linewidth = p.number("linewidth_per_s");
  if (p.text("gradient") == "designed") {
    cfg.offsets = design_simultaneous_gradient(modes, pairing);
    cfg.drive_detuning = -modes.frequencies[pairing[0]];
  } else {
    const int drive_mode = p.integer("drive_mode");
    if (drive_mode > n) throw ConfigError("parameters.drive_mode", "exceeds the number of modes");
    cfg.offsets.assign(n, 0.0);
    cfg.drive_detuning = -modes.frequencies[drive_mode - 1];
  }
  cfg.heating_rates.assign(n, p.number("heating_rate_quanta_per_s"));
  cfg.initial_nbar.assign(n, p.number("initial_nbar"));
  cfg.duration = p.number("duration_s");
  cfg.samples = p.integer("samples");
  const MultimodeResult r = multimode_cool_sim(cfg);

  Outcome out;
  std::vector<std::string> cols{"t_s"};
  for (int q = 0; q < n; ++q) cols.push_back("nbar_" + std::to_string(q + 1));
  Table t = time_table(std::move(cols));
  for (std::size_t i = 0; i < r.trajectory.times.size(); ++i) {
    std::vector<double> row{r.trajectory.times[i]};
    for (int q = 0; q < n; ++q) row.push_back(r.trajectory["nbar_" + std::to_string(q + 1)][i]);
    t.add_row(std::move(row));
  }
  Table rates = time_table({"mode", "frequency_hz", "cooling_rate_per_s", "heating_rate_per_s"});
  for (int q = 0; q < n; ++q)
    rates.add_row({static_cast<double>(q + 1), modes.frequencies[q] / kTwoPi, r.cooling_rates[q], r.heating_rates[q]});
  out.tables.emplace_back("nbar.csv", std::move(t));
  out.tables.emplace_back("rates.csv", std::move(rates));
  for (int q = 0; q < n; ++q)
    out.summary.emplace_back("final_nbar_" + std::to_string(q + 1),
                             r.trajectory["nbar_" + std::to_string(q + 1)].back());
  return out;
}

// ------------------------------------------------------------------ Rabi flopping

Outcome run_rabi(const Params& p, int) {
  const int cutoff = p.integer("fock_cutoff");
  const int n0 = p.integer("initial_n");
  const std::string line = p.text("transition");
  if (n0 > cutoff || (line == "blue" && n0 + 1 > cutoff))
    throw ConfigError("parameters.initial_n", "does not fit below fock_cutoff");

  const HilbertSpace space(2, cutoff);
  const LaserDrive drive{kTwoPi * p.number("rabi_hz"), 0.0, 0.0, p.number("eta")};
  Sideband branch = Sideband::carrier;
  Operator h = carrier_hamiltonian(drive, space);
  if (line == "red") {
    branch = Sideband::red;
    h = red_sideband_hamiltonian(drive, space);
  } else if (line == "blue") {
    branch = Sideband::blue;
    h = blue_sideband_hamiltonian(drive, space);
  }
  const std::vector<Observable> obs{{"P_e", level_projector(space, kExcited)}, {"nbar", number_operator(space)}};
  const TimeGrid grid{0.0, p.number("duration_s"), p.integer("samples")};
  const QuantumState psi0 = QuantumState::basis(space, kGround, n0);
  const double gamma = p.number("decay_rate_per_s");
  const Trajectory traj =
      gamma > 0.0 ? lindblad_evolve(h, {CollapseChannel::with_rate(internal_operators(space).sigma_minus, gamma, "decay")},
                                    psi0, grid, obs)
                  : evolve_schrodinger(h, psi0, grid, obs);

  Outcome out;
  Table t = time_table({"t_s", "P_e", "nbar"});
  for (std::size_t i = 0; i < traj.times.size(); ++i) t.add_row({traj.times[i], traj["P_e"][i], traj["nbar"][i]});
  out.tables.emplace_back("rabi.csv", std::move(t));
  // Static sideband Hamiltonians carry no Debye-Waller factor, so the
  // carrier flops at the bare Rabi frequency.
  const double coupling = branch == Sideband::carrier ? drive.rabi : rabi_coupling(n0, branch, drive);
  out.summary = {{"coupling_hz", coupling / kTwoPi}, {"final_P_e", traj["P_e"].back()}};
  return out;
}

using Runner = std::function<Outcome(const Params&, int)>;

const std::map<std::string, Runner>& runners() {
  static const std::map<std::string, Runner> table{
      {"doppler", run_doppler},     {"doppler-limit", run_doppler_limit}, {"resistive", run_resistive},
      {"sideband-cool", run_sideband}, {"eit-spectrum", run_eit},          {"magic", run_magic},
      {"chain-modes", run_chain},   {"multimode-cool", run_multimode},   {"rabi-flop", run_rabi},
  };
  return table;
}

}  // namespace

Outcome run_experiment(const Params& params, int threads) {
  return runners().at(params.spec().name)(params, threads);
}

Outcome run_config(const RunConfig& config, int threads) {
  if (!config.grid) return run_experiment(*config.params, threads);

  const Sweep& sweep = *config.grid;
  const std::size_t n = sweep.values.size();
  std::vector<Outcome> results(n);
  std::vector<std::exception_ptr> errors(n);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      try {
        results[i] = run_experiment(config.params->with(sweep.parameter, sweep.values[i]), 1);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), n);
  if (workers <= 1) {
    work(0, n);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w * chunk, std::min(n, (w + 1) * chunk));
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  Outcome out;
  Table t;
  t.columns.push_back(sweep.parameter);
  for (const auto& [key, value] : results.front().summary) t.columns.push_back(key);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row{sweep.values[i]};
    for (const auto& [key, value] : results[i].summary) row.push_back(value);
    t.add_row(std::move(row));
    for (const auto& w : results[i].warnings)
      out.warnings.push_back(sweep.parameter + "=" + format_double(sweep.values[i]) + ": " + w);
  }
  out.tables.emplace_back("sweep.csv", std::move(t));
  out.summary = {{"points", static_cast<double>(n)}};
  return out;
}

int threads_from_env() {
  const char* raw = std::getenv("IONCOOL_THREADS");
  if (raw == nullptr || *raw == '\0') return 1;
  char* end = nullptr;
  const long value = std::strtol(raw, &end, 10);
  if (*end != '\0' || value < 1 || value > 1024)
    throw ConfigError("IONCOOL_THREADS", "expected a positive integer, got '" + std::string(raw) + "'");
  return static_cast<int>(value);
}

}  // namespace ioncool::cli
