#pragma once

// Resolved-sideband cooling of a single mode on a narrow transition whose
// upper level is emptied by an effective (repump-broadened) decay.

#include "ioncool/dynamics.hpp"
#include "ioncool/hamiltonians.hpp"

namespace ioncool {

enum class SidebandModel {
  rwa,          // static Jaynes-Cummings Hamiltonian, residual detuning Delta + nu
  first_order,  // time-dependent first-order Hamiltonian with carrier and blue terms
};

struct SidebandCoolConfig {
  double initial_nbar = 0.0;
  LaserDrive drive;             // detuning is Delta = omega_L - omega_a; -nu is the red sideband
  TrapParams trap{};
  double repump_rate = 0.0;     // Gamma_eff, 1/s
  double heating_rate = 0.0;    // quanta/s
  double recoil_ldp = 0.0;      // emission recoil, 0 disables the recoil channels
  double duration = 0.0;        // s
  int fock_cutoff = 40;
  int samples = 201;
  SidebandModel model = SidebandModel::rwa;
  double rtol = 1e-9;
};

struct SidebandResult {
  /// Series: nbar, P_e, P_g0, then P0..P{n_max}.
  Trajectory trajectory;
  double lamb_dicke_factor = 0.0;  // eta sqrt(2 nbar + 1) of the initial state
  bool lamb_dicke_warning = false;  // factor above 0.5
};

inline constexpr double kLambDickeWarningThreshold = 0.5;
inline constexpr double kTruncationOverflow = 1e-4;

/// Throws NumericalError when the population of |n_max> grows beyond 1e-4.
SidebandResult sideband_cool(const SidebandCoolConfig& cfg);

/// Lindblad channels used by sideband_cool for the given space.
std::vector<CollapseChannel> sideband_channels(const SidebandCoolConfig& cfg, const HilbertSpace& space);

}  // namespace ioncool
