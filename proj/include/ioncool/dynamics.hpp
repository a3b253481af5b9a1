#pragma once

// Closed- and open-system time evolution, Liouvillian steady states and
// observable extraction. Hamiltonians are H/hbar (see hamiltonians.hpp).

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ioncool/integrator.hpp"
#include "ioncool/quantum.hpp"

namespace ioncool {

/// Either a fixed operator or a callable t -> H(t).
class HamiltonianSource {
 public:
  HamiltonianSource(Operator constant);  // NOLINT(google-explicit-constructor)
  HamiltonianSource(HilbertSpace space, std::function<Operator(double)> at_time);

  bool time_dependent() const { return static_cast<bool>(at_time_); }
  const HilbertSpace& space() const { return space_; }
  Operator at(double t) const;

 private:
  HilbertSpace space_;
  std::optional<Operator> constant_;
  std::function<Operator(double)> at_time_;
};

/// Jump operator already scaled by sqrt(rate).
struct CollapseChannel {
  Operator op;
  std::string label;

  /// sqrt(rate) * op
  static CollapseChannel with_rate(const Operator& op, double rate, std::string label);
};

struct Observable {
  std::string name;
  Operator op;
};

struct TimeGrid {
  double t0 = 0.0;
  double t1 = 0.0;
  int samples = 2;  // including both end points

  std::vector<double> times() const { return linspace(t0, t1, samples); }
};

struct Trajectory {
  std::vector<double> times;
  std::vector<std::pair<std::string, std::vector<double>>> series;
  std::optional<QuantumState> final_state;

  const std::vector<double>& operator[](const std::string& name) const;
  bool has(const std::string& name) const;
  std::vector<double>& add_series(std::string name);
};

struct EvolveOptions {
  double rtol = 1e-9;
  double atol = 1e-12;
  double dt_max = 0.0;  // 0: unbounded
  /// Sample hook, called with the state at every output time.
  std::function<void(std::size_t, double, const Matrix&)> on_sample;
  /// Abort when |Tr rho - 1| >= 1e-8 or min eig(rho) <= -1e-8 at a sample.
  bool check_invariants = true;
};

/// Pure-state propagation. Constant H uses the exact propagator
/// exp(-i H dt) between samples; time-dependent H uses adaptive
/// fourth-order commutator-free Magnus steps with step-doubling control.
/// Observables are recorded as Re<psi|O|psi>.
Trajectory evolve_schrodinger(const HamiltonianSource& h, const QuantumState& psi0, const TimeGrid& grid,
                              const std::vector<Observable>& observables, const EvolveOptions& options = {});

/// rho' = -i[H, rho] + sum_k (C_k rho C_k^dagger - 1/2 {C_k^dagger C_k, rho}).
/// Pure initial states are promoted to density matrices.
Trajectory lindblad_evolve(const HamiltonianSource& h, const std::vector<CollapseChannel>& channels,
                           const QuantumState& rho0, const TimeGrid& grid,
                           const std::vector<Observable>& observables, const EvolveOptions& options = {});

/// Column-stacked Liouvillian superoperator: vec(L(rho)) = L vec(rho).
Matrix liouvillian(const Operator& h, const std::vector<CollapseChannel>& channels);

struct SteadyState {
  QuantumState state;
  double residual = 0.0;   // max |L(rho_ss)|
  int null_dimension = 0;
  bool degenerate = false;  // null space dimension > 1; first vector returned
};

SteadyState steady_state(const Operator& h, const std::vector<CollapseChannel>& channels);

/// gamma * <excited|rho|excited>, summed over the motional factor.
double scattering_rate(const QuantumState& state, double gamma, int excited_level);

struct PhononStatistics {
  double n_bar = 0.0;
  std::vector<double> populations;  // P(n), n = 0..n_max
};

PhononStatistics phonon_statistics(const QuantumState& state);
PhononStatistics phonon_statistics(const HilbertSpace& space, const Matrix& rho);

}  // namespace ioncool
