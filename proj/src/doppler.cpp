#include "ioncool/doppler.hpp"

#include <algorithm>
#include <cmath>

#include "ioncool/hamiltonians.hpp"
#include "ioncool/integrator.hpp"

namespace ioncool {

namespace {

double beam_response(double detuning, double saturation, double gamma) {
  const double x = 2.0 * detuning / gamma;
  return saturation / (1.0 + saturation + x * x);
}

struct ThermalAverages {
  double force_velocity = 0.0;  // <F v>, W
  double scattering = 0.0;      // <R>, 1/s
};

// Composite Simpson over u = v / sigma in [-8, 8]. The node spacing
// resolves velocity features of width gamma / k.
ThermalAverages thermal_averages(double temperature, double detuning, double saturation,
                                 const SpeciesParams& s) {
  const double sigma = std::sqrt(kBoltzmann * temperature / s.mass);
  const double k = s.wavenumber();
  const double feature = s.linewidth / k / 8.0;
  const double span = 16.0;
  long nodes = std::max(257L, static_cast<long>(std::ceil(span * sigma / feature)) + 1);
  nodes = std::min(nodes, 400001L);
  if (nodes % 2 == 0) ++nodes;
  const double du = span / static_cast<double>(nodes - 1);
  const double norm = 1.0 / std::sqrt(2.0 * kPi);

  ThermalAverages out;
  for (long i = 0; i < nodes; ++i) {
    const double u = -0.5 * span + du * static_cast<double>(i);
    const double w = (i == 0 || i == nodes - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    const double weight = w * norm * std::exp(-0.5 * u * u);
    const double v = sigma * u;
    out.force_velocity += weight * doppler_force(v, detuning, saturation, s) * v;
    out.scattering += weight * doppler_scattering_rate(v, detuning, saturation, s);
  }
  out.force_velocity *= du / 3.0;
  out.scattering *= du / 3.0;
  return out;
}

}  // namespace

double doppler_force(double v, double detuning, double saturation, const SpeciesParams& species) {
  const double k = species.wavenumber();
  const double gamma = species.linewidth;
  // Beam along +z sees Delta - k v, beam along -z sees Delta + k v.
  return 0.5 * kHbar * k * gamma *
         (beam_response(detuning - k * v, saturation, gamma) - beam_response(detuning + k * v, saturation, gamma));
}

double doppler_scattering_rate(double v, double detuning, double saturation, const SpeciesParams& species) {
  const double k = species.wavenumber();
  const double gamma = species.linewidth;
  return 0.5 * gamma *
         (beam_response(detuning - k * v, saturation, gamma) + beam_response(detuning + k * v, saturation, gamma));
}

double doppler_limit(const SpeciesParams& species) {
  return kHbar * species.linewidth / (2.0 * kBoltzmann);
}

double doppler_temperature_rate(double temperature, double detuning, double saturation,
                                const SpeciesParams& species) {
  const ThermalAverages avg = thermal_averages(temperature, detuning, saturation, species);
  const double k = species.wavenumber();
  const double heating = kHbar * kHbar * k * k * avg.scattering / species.mass;
  return 2.0 / kBoltzmann * (avg.force_velocity + heating);
}

DopplerResult doppler_cool_trajectory(double initial_T, double detuning, double saturation,
                                      const SpeciesParams& species, double duration, int samples) {
  species.validate();
  if (!(initial_T > 0.0)) throw Error("doppler_cool_trajectory: initial temperature must be positive");
  if (!(saturation >= 0.0)) throw Error("doppler_cool_trajectory: saturation must be non-negative");
  if (!(duration > 0.0)) throw Error("doppler_cool_trajectory: duration must be positive");

  DopplerResult result;
  result.times = linspace(0.0, duration, samples);
  result.temperatures.resize(result.times.size());
  result.doppler_limit_T = doppler_limit(species);

  // Integrate ln T; the temperature spans many decades.
  auto rhs = [&](double, const Eigen::VectorXd& y) -> Eigen::VectorXd {
    const double temperature = std::exp(y(0));
    Eigen::VectorXd out(1);
    out(0) = doppler_temperature_rate(temperature, detuning, saturation, species) / temperature;
    return out;
  };
  IntegratorOptions opt;
  opt.rtol = 1e-9;
  opt.atol = 1e-10;
  Eigen::VectorXd y0(1);
  y0(0) = std::log(initial_T);
  Eigen::VectorXd last = y0;
  integrate_dopri5(rhs, y0, std::span<const double>(result.times), opt,
                   [&](std::size_t i, double, const Eigen::VectorXd& y) {
                     result.temperatures[i] = std::exp(y(0));
                     last = y;
                   });
  result.equilibrium_T = result.temperatures.back();
  // Newton estimate of the remaining distance to the fixed point in ln T.
  const double h = 1e-3;
  Eigen::VectorXd up = last, down = last;
  up(0) += h;
  down(0) -= h;
  const double rate = rhs(duration, last)(0);
  const double slope = (rhs(duration, up)(0) - rhs(duration, down)(0)) / (2.0 * h);
  result.converged = slope < 0.0 && std::abs(rate / slope) < 1e-2;
  return result;
}

}  // namespace ioncool
