#include "ioncool/resistive.hpp"

#include <cmath>

#include "ioncool/quantum.hpp"

namespace ioncool {

void ResistiveConfig::validate() const {
  if (!(mass > 0.0) || !(charge > 0.0) || !(half_gap > 0.0) || !(resistance > 0.0) || !(initial_energy > 0.0))
    throw Error("ResistiveConfig: all parameters must be positive");
}

double resistive_time_constant(const ResistiveConfig& cfg) {
  cfg.validate();
  return 4.0 * cfg.mass * cfg.half_gap * cfg.half_gap / (cfg.charge * cfg.charge * cfg.resistance);
}

double induced_current(const ResistiveConfig& cfg, double velocity) {
  return cfg.charge * velocity / (2.0 * cfg.half_gap);
}

double resistive_energy_rate(const ResistiveConfig& cfg, double energy) {
  return -energy / resistive_time_constant(cfg);
}

double resistive_energy(const ResistiveConfig& cfg, double t) {
  return cfg.initial_energy * std::exp(-t / resistive_time_constant(cfg));
}

}  // namespace ioncool
