#pragma once

namespace ioncool {

/// Charge oscillating between two infinite plates 2 * half_gap apart that
/// are shorted through a resistor.
struct ResistiveConfig {
  double mass = 0.0;            // kg
  double charge = 0.0;          // C
  double half_gap = 0.0;        // m
  double resistance = 0.0;      // Ohm
  double initial_energy = 0.0;  // J

  void validate() const;
};

/// tau = 4 m z0^2 / (q^2 R)
double resistive_time_constant(const ResistiveConfig& cfg);

/// Image current i = q v_z / (2 z0).
double induced_current(const ResistiveConfig& cfg, double velocity);

/// dE/dt = -q^2 R E / (4 m z0^2)
double resistive_energy_rate(const ResistiveConfig& cfg, double energy);

/// E(t) = E0 exp(-t / tau)
double resistive_energy(const ResistiveConfig& cfg, double t);

}  // namespace ioncool
