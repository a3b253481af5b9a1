#include "ioncool/sideband.hpp"

#include <cmath>
#include <sstream>

namespace ioncool {

std::vector<CollapseChannel> sideband_channels(const SidebandCoolConfig& cfg, const HilbertSpace& space) {
  const SpinOperators spin = internal_operators(space);
  const LadderOperators ladder = ladder_operators(space);
  std::vector<CollapseChannel> channels;
  if (cfg.recoil_ldp > 0.0) {
    // Emission along +-z with equal weight: sigma_- exp(+-i eta_r (a + a^dagger)).
    const Operator kick = displacement_operator(cfg.recoil_ldp, space);
    channels.push_back(CollapseChannel::with_rate(kick * spin.sigma_minus, 0.5 * cfg.repump_rate, "decay+"));
    channels.push_back(
        CollapseChannel::with_rate(kick.adjoint() * spin.sigma_minus, 0.5 * cfg.repump_rate, "decay-"));
  } else {
    channels.push_back(CollapseChannel::with_rate(spin.sigma_minus, cfg.repump_rate, "decay"));
  }
  if (cfg.heating_rate > 0.0) {
    channels.push_back(CollapseChannel::with_rate(ladder.a_dagger, cfg.heating_rate, "heating_up"));
    channels.push_back(CollapseChannel::with_rate(ladder.a, cfg.heating_rate, "heating_down"));
  }
  return channels;
}

SidebandResult sideband_cool(const SidebandCoolConfig& cfg) {
  cfg.drive.validate();
  cfg.trap.validate();
  if (!(cfg.repump_rate >= 0.0) || !(cfg.heating_rate >= 0.0))
    throw Error("sideband_cool: rates must be non-negative");
  if (!(cfg.duration > 0.0)) throw Error("sideband_cool: duration must be positive");

  const HilbertSpace space(2, cfg.fock_cutoff);
  SidebandResult result;
  result.lamb_dicke_factor = cfg.drive.ldp * std::sqrt(2.0 * cfg.initial_nbar + 1.0);
  result.lamb_dicke_warning = result.lamb_dicke_factor > kLambDickeWarningThreshold;

  const QuantumState rho0 = thermal_state(cfg.initial_nbar, space, kGround);
  const double residual = cfg.drive.detuning + cfg.trap.nu;

  std::optional<HamiltonianSource> hamiltonian;
  if (cfg.model == SidebandModel::rwa) {
    Operator h = red_sideband_hamiltonian(cfg.drive, space);
    if (residual != 0.0) h -= Complex{residual, 0.0} * level_projector(space, kExcited);
    hamiltonian.emplace(std::move(h));
  } else {
    const LaserDrive drive = cfg.drive;
    const TrapParams trap = cfg.trap;
    hamiltonian.emplace(space, [=](double t) {
      return full_interaction_hamiltonian(drive, trap, t, ExpansionOrder::first_order, space);
    });
  }

  const int nmax = cfg.fock_cutoff;
  const double initial_edge = phonon_statistics(rho0).populations.back();
  const double overflow_limit = std::max(kTruncationOverflow, initial_edge + 1e-10);

  Trajectory& traj = result.trajectory;
  traj.times = linspace(0.0, cfg.duration, cfg.samples);
  traj.add_series("nbar");
  traj.add_series("P_e");
  traj.add_series("P_g0");
  for (int n = 0; n <= nmax; ++n) traj.add_series("P" + std::to_string(n));
  // References are taken only after every series exists.
  auto& nbar = traj.series[0].second;
  auto& p_e = traj.series[1].second;
  auto& p_g0 = traj.series[2].second;
  std::vector<std::vector<double>*> pops;
  for (int n = 0; n <= nmax; ++n) pops.push_back(&traj.series[3 + n].second);

  EvolveOptions options;
  options.rtol = cfg.rtol;
  options.on_sample = [&](std::size_t i, double t, const Matrix& rho) {
    const PhononStatistics stats = phonon_statistics(space, rho);
    nbar[i] = stats.n_bar;
    double excited = 0.0;
    for (int n = 0; n <= nmax; ++n) excited += rho(space.index(kExcited, n), space.index(kExcited, n)).real();
    p_e[i] = excited;
    p_g0[i] = rho(space.index(kGround, 0), space.index(kGround, 0)).real();
    for (int n = 0; n <= nmax; ++n) (*pops[n])[i] = stats.populations[n];
    if (stats.populations.back() > overflow_limit) {
      std::ostringstream msg;
      msg << "sideband_cool: truncation overflow, P(n_max=" << nmax << ") = " << stats.populations.back()
          << " at t=" << t << "; increase fock_cutoff";
      throw NumericalError(msg.str());
    }
  };

  Trajectory evolved = lindblad_evolve(*hamiltonian, sideband_channels(cfg, space), rho0,
                                       TimeGrid{0.0, cfg.duration, cfg.samples}, {}, options);
  traj.final_state = std::move(evolved.final_state);
  return result;
}

}  // namespace ioncool
