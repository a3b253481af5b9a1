#pragma once

// Probe absorption of the driven three-level system and its use for
// cooling-line placement.

#include <span>
#include <vector>

#include "ioncool/dynamics.hpp"
#include "ioncool/hamiltonians.hpp"

namespace ioncool {

/// Decay of |2>: (1 - beta) gamma into |1>, beta gamma into |3>.
std::vector<CollapseChannel> eit_decay_channels(const EITConfig& cfg);

/// Steady-state photon scattering rate gamma * rho_22 at cfg.delta3.
double eit_scattering_rate(const EITConfig& cfg);

struct Spectrum {
  std::vector<double> detunings;   // probe detuning Delta_3
  std::vector<double> absorption;  // gamma * rho_22
  std::vector<double> normalized;  // absorption / max(absorption)
  double peak = 0.0;
};

/// Sweeps cfg.delta3 over `delta3_grid` (cfg.delta3 itself is ignored).
/// `threads` > 1 splits the grid across workers; results are ordered by
/// grid index either way.
Spectrum eit_absorption_spectrum(const EITConfig& cfg, std::span<const double> delta3_grid, int threads = 1);

struct EitAssessment {
  double red = 0.0;      // normalized absorption at carrier + nu
  double carrier = 0.0;  // at the carrier placement
  double blue = 0.0;     // at carrier - nu
  double ratio = 0.0;    // red / (carrier + blue)
};

/// Samples the spectrum where the carrier and both first sidebands of a
/// mode at frequency nu fall when the probe sits at `carrier_detuning`.
/// Absorbing on the red sideband takes one phonon, so that line probes the
/// atomic response at carrier_detuning + nu. Throws Error when the grid
/// does not cover the three points or is coarser than 0.02 near them.
EitAssessment eit_cooling_assess(const Spectrum& spectrum, double nu, double carrier_detuning);

}  // namespace ioncool
