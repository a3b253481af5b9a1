#pragma once

// One-dimensional Doppler cooling in a pair of counter-propagating beams,
// each with saturation parameter s0 and detuning Delta, Lorentzian response.

#include <vector>

#include "ioncool/species.hpp"

namespace ioncool {

/// Net scattering force on an atom moving with velocity v (m/s), in N.
double doppler_force(double v, double detuning, double saturation, const SpeciesParams& species);

/// Total photon scattering rate from both beams, 1/s.
double doppler_scattering_rate(double v, double detuning, double saturation, const SpeciesParams& species);

/// k_B T = hbar gamma / 2.
double doppler_limit(const SpeciesParams& species);

struct DopplerResult {
  std::vector<double> times;         // s
  std::vector<double> temperatures;  // K
  double equilibrium_T = 0.0;        // final temperature, K
  double doppler_limit_T = 0.0;      // K
  bool converged = false;            // final T within 1% of the stable fixed point (Newton estimate)
};

/// Thermal-ensemble temperature evolution
///   (k_B/2) dT/dt = <F(v) v> + hbar^2 k^2 <R(v)> / m,
/// averages over a Maxwell velocity distribution at temperature T. The
/// diffusion term counts one absorption and one emission recoil per
/// scattered photon.
DopplerResult doppler_cool_trajectory(double initial_T, double detuning, double saturation,
                                      const SpeciesParams& species, double duration, int samples);

/// d T/dt at temperature T (K/s).
double doppler_temperature_rate(double temperature, double detuning, double saturation,
                                const SpeciesParams& species);

}  // namespace ioncool
