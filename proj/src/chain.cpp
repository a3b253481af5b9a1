#include "ioncool/chain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "ioncool/hamiltonians.hpp"
#include "ioncool/integrator.hpp"

namespace ioncool {

namespace {

// Dimensionless potential V(u) = sum u_i^2 / 2 + sum_{i<j} 1 / |u_i - u_j|.
Eigen::VectorXd gradient(const Eigen::VectorXd& u) {
  const Eigen::Index n = u.size();
  Eigen::VectorXd g = u;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double d = u(i) - u(j);
      g(i) -= (d > 0 ? 1.0 : -1.0) / (d * d);
    }
  return g;
}

Eigen::MatrixXd hessian(const Eigen::VectorXd& u) {
  const Eigen::Index n = u.size();
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double c = 2.0 / std::pow(std::abs(u(i) - u(j)), 3);
      h(i, i) += c;
      h(i, j) -= c;
    }
  return h;
}

bool ordered(const Eigen::VectorXd& u) {
  for (Eigen::Index i = 1; i < u.size(); ++i)
    if (!(u(i) > u(i - 1))) return false;
  return true;
}

}  // namespace

ChainModes chain_normal_modes(int ions, double nu, double mass, double charge) {
  if (ions < 1) throw Error("chain_normal_modes: need at least one ion");
  if (!(nu > 0.0) || !(mass > 0.0) || !(charge > 0.0))
    throw Error("chain_normal_modes: nu, mass and charge must be positive");

  Eigen::VectorXd u(ions);
  const double spacing = ions > 1 ? 1.26 * std::pow(2.0 / ions, 0.56) : 0.0;
  for (int i = 0; i < ions; ++i) u(i) = spacing * (i - 0.5 * (ions - 1));

  bool converged = ions == 1;
  for (int iter = 0; iter < 200 && !converged; ++iter) {
    const Eigen::VectorXd g = gradient(u);
    if (g.cwiseAbs().maxCoeff() < 1e-13) {
      converged = true;
      break;
    }
    const Eigen::VectorXd step = hessian(u).ldlt().solve(g);
    double scale = 1.0;
    Eigen::VectorXd trial = u - step;
    // Damped Newton; near the minimum rounding noise may stall the descent test.
    while ((!ordered(trial) || (gradient(trial).norm() >= g.norm() && g.norm() > 1e-10)) && scale > 1e-6) {
      scale *= 0.5;
      trial = u - scale * step;
    }
    if (scale <= 1e-6) break;
    u = trial;
    if (scale * step.cwiseAbs().maxCoeff() < 1e-15) {
      converged = gradient(u).cwiseAbs().maxCoeff() < 1e-9;
      break;
    }
  }
  if (!converged) {
    std::ostringstream msg;
    msg << "chain_normal_modes: Newton iteration did not converge for " << ions << " ions";
    throw NumericalError(msg.str());
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hessian(u));
  ChainModes out;
  out.length_scale =
      std::cbrt(charge * charge / (4.0 * kPi * kVacuumPermittivity * mass * nu * nu));
  out.mode_vectors = solver.eigenvectors();
  for (int p = 0; p < ions; ++p) {
    out.frequencies.push_back(nu * std::sqrt(solver.eigenvalues()(p)));
    // Sign convention: the first largest-magnitude component is positive.
    Eigen::Index pivot = 0;
    for (Eigen::Index i = 1; i < ions; ++i)
      if (std::abs(out.mode_vectors(i, p)) > std::abs(out.mode_vectors(pivot, p)) + 1e-12) pivot = i;
    if (out.mode_vectors(pivot, p) < 0) out.mode_vectors.col(p) *= -1.0;
  }
  for (int i = 0; i < ions; ++i) out.equilibrium_positions.push_back(u(i) * out.length_scale);
  return out;
}

std::vector<int> participation_assignment(const ChainModes& modes) {
  const int n = modes.ions();
  std::vector<int> mode_of_ion(n, -1);
  std::vector<bool> mode_used(n, false);
  for (int round = 0; round < n; ++round) {
    int best_ion = -1, best_mode = -1;
    double best = -1.0;
    for (int i = 0; i < n; ++i) {
      if (mode_of_ion[i] >= 0) continue;
      for (int p = 0; p < n; ++p) {
        if (mode_used[p]) continue;
        const double w = std::abs(modes.mode_vectors(i, p));
        if (w > best + 1e-12) {
          best = w;
          best_ion = i;
          best_mode = p;
        }
      }
    }
    mode_of_ion[best_ion] = best_mode;
    mode_used[best_mode] = true;
  }
  return mode_of_ion;
}

std::vector<double> design_simultaneous_gradient(const ChainModes& modes, std::span<const int> mode_of_ion) {
  const int n = modes.ions();
  std::vector<int> pairing(n);
  if (mode_of_ion.empty()) {
    std::iota(pairing.begin(), pairing.end(), 0);
  } else {
    if (static_cast<int>(mode_of_ion.size()) != n)
      throw Error("design_simultaneous_gradient: pairing size differs from the ion count");
    pairing.assign(mode_of_ion.begin(), mode_of_ion.end());
    std::vector<int> sorted = pairing;
    std::sort(sorted.begin(), sorted.end());
    for (int p = 0; p < n; ++p)
      if (sorted[p] != p) throw Error("design_simultaneous_gradient: pairing is not a permutation");
  }
  std::vector<double> offsets(n);
  const double reference = modes.frequencies[pairing[0]];
  for (int i = 0; i < n; ++i) offsets[i] = modes.frequencies[pairing[i]] - reference;
  return offsets;
}

Eigen::MatrixXd mode_couplings(const ChainModes& modes, double eta_com) {
  const int n = modes.ions();
  Eigen::MatrixXd eta(n, n);
  for (int i = 0; i < n; ++i)
    for (int p = 0; p < n; ++p)
      eta(i, p) = eta_com * std::abs(modes.mode_vectors(i, p)) * std::sqrt(modes.frequencies[0] / modes.frequencies[p]);
  return eta;
}

MultimodeResult multimode_cool_sim(const MultimodeConfig& cfg) {
  const int n = cfg.modes.ions();
  if (static_cast<int>(cfg.offsets.size()) != n) throw Error("multimode_cool_sim: one offset per ion required");
  if (cfg.eta_eff.rows() != n || cfg.eta_eff.cols() != n)
    throw Error("multimode_cool_sim: eta_eff must be ions x modes");
  if (static_cast<int>(cfg.initial_nbar.size()) != n)
    throw Error("multimode_cool_sim: one initial nbar per mode required");
  if (!cfg.heating_rates.empty() && static_cast<int>(cfg.heating_rates.size()) != n)
    throw Error("multimode_cool_sim: one heating rate per mode required");
  if (!(cfg.linewidth > 0.0)) throw Error("multimode_cool_sim: linewidth must be positive");
  if (!(cfg.duration > 0.0)) throw Error("multimode_cool_sim: duration must be positive");

  MultimodeResult result;
  result.cooling_rates.assign(n, 0.0);
  result.heating_rates.assign(n, 0.0);
  const double g = cfg.linewidth;
  auto lorentz = [g](double detuning) { return g / (g * g + 4.0 * detuning * detuning); };
  for (int p = 0; p < n; ++p) {
    const double nu_p = cfg.modes.frequencies[p];
    for (int i = 0; i < n; ++i) {
      const double coupling = cfg.eta_eff(i, p) * cfg.rabi;
      const double c2 = coupling * coupling;
      result.cooling_rates[p] += c2 * lorentz(cfg.drive_detuning - (cfg.offsets[i] - nu_p));
      result.heating_rates[p] += c2 * lorentz(cfg.drive_detuning - (cfg.offsets[i] + nu_p));
    }
    if (!cfg.heating_rates.empty()) result.heating_rates[p] += cfg.heating_rates[p];
  }

  const std::vector<double> blue_only = [&] {
    std::vector<double> b = result.heating_rates;
    if (!cfg.heating_rates.empty())
      for (int p = 0; p < n; ++p) b[p] -= cfg.heating_rates[p];
    return b;
  }();
  const std::vector<double> external = cfg.heating_rates.empty() ? std::vector<double>(n, 0.0) : cfg.heating_rates;

  auto rhs = [&](double, const Eigen::VectorXd& nbar) -> Eigen::VectorXd {
    Eigen::VectorXd d(n);
    for (int p = 0; p < n; ++p)
      d(p) = -(result.cooling_rates[p] - blue_only[p]) * nbar(p) + blue_only[p] + external[p];
    return d;
  };

  Trajectory& traj = result.trajectory;
  traj.times = linspace(0.0, cfg.duration, cfg.samples);
  for (int p = 0; p < n; ++p) traj.add_series("nbar_" + std::to_string(p + 1));
  Eigen::VectorXd y0(n);
  for (int p = 0; p < n; ++p) y0(p) = cfg.initial_nbar[p];
  IntegratorOptions opt;
  opt.rtol = 1e-10;
  opt.atol = 1e-14;
  integrate_dopri5(rhs, y0, std::span<const double>(traj.times), opt,
                   [&](std::size_t s, double, const Eigen::VectorXd& y) {
                     for (int p = 0; p < n; ++p) traj.series[p].second[s] = y(p);
                   });
  return result;
}

}  // namespace ioncool
