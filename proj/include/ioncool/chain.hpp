#pragma once

// Axial normal modes of a linear ion chain and the single-frequency,
// gradient-assisted cooling of all of them at once.

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ioncool/dynamics.hpp"

namespace ioncool {

struct ChainModes {
  std::vector<double> frequencies;            // rad/s, ascending; frequencies[0] is the COM mode
  Eigen::MatrixXd mode_vectors;               // column p is mode p, row i is ion i
  std::vector<double> equilibrium_positions;  // m, ascending
  double length_scale = 0.0;                  // (q^2 / (4 pi eps0 m nu^2))^(1/3), m

  int ions() const { return static_cast<int>(frequencies.size()); }
};

/// Equilibrium of N equal ions in a harmonic well of axial frequency nu
/// (Newton iteration on the dimensionless potential), then diagonalisation
/// of the Hessian. Throws NumericalError when Newton fails to converge.
ChainModes chain_normal_modes(int ions, double nu, double mass, double charge);

/// Greedy pairing of ions with modes by largest |mode-vector component|, so
/// that every ion used for cooling actually moves in its mode.
/// Returns mode index per ion.
std::vector<int> participation_assignment(const ChainModes& modes);

/// Per-ion resonance offsets delta_omega_i = nu_{m(i)} - nu_{m(0)} so that
/// omega_i - nu_{m(i)} is the same for all ions: one drive frequency sits on
/// the red sideband of mode m(i) for every ion i. `mode_of_ion` defaults to
/// the identity pairing.
std::vector<double> design_simultaneous_gradient(const ChainModes& modes, std::span<const int> mode_of_ion = {});

/// eta_{i,p} = eta_com * b_{i,p} * sqrt(nu_0 / nu_p)
Eigen::MatrixXd mode_couplings(const ChainModes& modes, double eta_com);

struct MultimodeConfig {
  ChainModes modes;
  std::vector<double> offsets;        // per ion, rad/s (omega_i - omega_0)
  Eigen::MatrixXd eta_eff;            // |eta_eff| per ion (row) and mode (column)
  double rabi = 0.0;                  // carrier Rabi frequency, rad/s
  double linewidth = 0.0;             // effective linewidth Gamma of the cooling transition, 1/s
  double drive_detuning = 0.0;        // omega_L - omega_0, rad/s
  std::vector<double> heating_rates;  // per mode, quanta/s (empty: none)
  std::vector<double> initial_nbar;   // per mode
  double duration = 0.0;
  int samples = 201;
};

struct MultimodeResult {
  Trajectory trajectory;              // series nbar_1 .. nbar_N
  std::vector<double> cooling_rates;  // red-sideband absorption rate per quantum, 1/s
  std::vector<double> heating_rates;  // blue-sideband rate + external heating, 1/s
};

/// Rate equations dn_p/dt = -(A-_p - A+_p) n_p + A+_p + h_p with
/// A-+_p = sum_i (eta_ip Omega)^2 Gamma / (Gamma^2 + 4 delta-+_ip^2),
/// delta-+_ip = drive_detuning - (offset_i -+ nu_p).
MultimodeResult multimode_cool_sim(const MultimodeConfig& cfg);

}  // namespace ioncool
