#include "ioncool/eit.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

namespace ioncool {

std::vector<CollapseChannel> eit_decay_channels(const EITConfig& cfg) {
  cfg.validate();
  const HilbertSpace space(3, 0);
  Matrix to1 = Matrix::Zero(3, 3);
  to1(kEitLevel1, kEitLevel2) = 1.0;
  Matrix to3 = Matrix::Zero(3, 3);
  to3(kEitLevel3, kEitLevel2) = 1.0;
  std::vector<CollapseChannel> out;
  if (cfg.beta < 1.0)
    out.push_back(CollapseChannel::with_rate(Operator(space, to1), (1.0 - cfg.beta) * cfg.gamma, "2->1"));
  if (cfg.beta > 0.0)
    out.push_back(CollapseChannel::with_rate(Operator(space, to3), cfg.beta * cfg.gamma, "2->3"));
  return out;
}

double eit_scattering_rate(const EITConfig& cfg) {
  const SteadyState ss = steady_state(eit_hamiltonian(cfg), eit_decay_channels(cfg));
  return scattering_rate(ss.state, cfg.gamma, kEitLevel2);
}

Spectrum eit_absorption_spectrum(const EITConfig& cfg, std::span<const double> delta3_grid, int threads) {
  cfg.validate();
  Spectrum out;
  out.detunings.assign(delta3_grid.begin(), delta3_grid.end());
  for (double d : out.detunings)
    if (!std::isfinite(d)) throw Error("eit_absorption_spectrum: grid contains non-finite detuning");
  const std::size_t count = out.detunings.size();
  out.absorption.assign(count, 0.0);

  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      EITConfig point = cfg;
      point.delta3 = out.detunings[i];
      out.absorption[i] = std::max(0.0, eit_scattering_rate(point));
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), 1, std::max<std::size_t>(count, 1));
  if (workers == 1) {
    work(0, count);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    const std::size_t chunk = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          work(std::min(count, w * chunk), std::min(count, (w + 1) * chunk));
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  out.peak = count ? *std::max_element(out.absorption.begin(), out.absorption.end()) : 0.0;
  out.normalized.resize(count);
  for (std::size_t i = 0; i < count; ++i) out.normalized[i] = out.peak > 0.0 ? out.absorption[i] / out.peak : 0.0;
  return out;
}

namespace {

double sample_at(const Spectrum& s, double x) {
  const auto& grid = s.detunings;
  const auto [lo, hi] = std::minmax_element(grid.begin(), grid.end());
  if (grid.empty() || x < *lo - 1e-12 || x > *hi + 1e-12) {
    std::ostringstream msg;
    msg << "eit_cooling_assess: spectrum does not cover detuning " << x;
    throw Error(msg.str());
  }
  std::size_t nearest = 0;
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (std::abs(grid[i] - x) < std::abs(grid[nearest] - x)) nearest = i;
  if (std::abs(grid[nearest] - x) > 0.02) {
    std::ostringstream msg;
    msg << "eit_cooling_assess: grid too coarse near " << x << " (nearest sample " << grid[nearest] << ")";
    throw Error(msg.str());
  }
  // Linear interpolation between the bracketing samples (grid may be unsorted).
  std::size_t below = grid.size(), above = grid.size();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] <= x && (below == grid.size() || grid[i] > grid[below])) below = i;
    if (grid[i] >= x && (above == grid.size() || grid[i] < grid[above])) above = i;
  }
  if (below == grid.size() || above == grid.size() || grid[above] == grid[below]) return s.normalized[nearest];
  const double w = (x - grid[below]) / (grid[above] - grid[below]);
  return (1.0 - w) * s.normalized[below] + w * s.normalized[above];
}

}  // namespace

EitAssessment eit_cooling_assess(const Spectrum& spectrum, double nu, double carrier_detuning) {
  if (!(nu > 0.0)) throw Error("eit_cooling_assess: nu must be positive");
  EitAssessment out;
  out.red = sample_at(spectrum, carrier_detuning + nu);
  out.carrier = sample_at(spectrum, carrier_detuning);
  out.blue = sample_at(spectrum, carrier_detuning - nu);
  const double denom = out.carrier + out.blue;
  out.ratio = denom > 0.0 ? out.red / denom : std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace ioncool
