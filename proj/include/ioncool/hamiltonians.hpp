#pragma once

// Hamiltonian builders. Every builder returns H / hbar, i.e. an operator
// in angular-frequency units (rad/s when the inputs are in rad/s). Time
// arguments are in the reciprocal unit.

#include <array>
#include <utility>

#include "ioncool/quantum.hpp"

namespace ioncool {

inline constexpr double kHbar = 1.054571817e-34;       // J s
inline constexpr double kBoltzmann = 1.380649e-23;     // J/K
inline constexpr double kAtomicMass = 1.66053906660e-27;  // kg
inline constexpr double kElementaryCharge = 1.602176634e-19;  // C
inline constexpr double kVacuumPermittivity = 8.8541878128e-12;  // F/m

struct TrapParams {
  double nu;    // secular angular frequency, rad/s
  double mass;  // kg

  /// Ground-state extension sqrt(hbar / (2 m nu)).
  double z0() const;
  void validate() const;
};

struct LaserDrive {
  double rabi = 0.0;      // Omega, rad/s
  double detuning = 0.0;  // Delta = omega_L - omega_a, rad/s
  double phase = 0.0;     // rad
  double ldp = 0.0;       // Lamb-Dicke parameter eta

  void validate() const;
};

/// eta_eff = eta + i kappa = eta_prime * exp(i theta)
struct MagicParams {
  double eta = 0.0;
  double kappa = 0.0;
  double theta = 0.0;
  double eta_prime = 0.0;

  Complex eta_eff() const { return {eta, kappa}; }
};

/// Three-level Lambda system; all rates and detunings in one common unit
/// (conventionally the decay rate of |2>).
struct EITConfig {
  double omega1 = 0.0;  // drive Rabi frequency on |1>-|2>
  double omega3 = 0.0;  // probe Rabi frequency on |3>-|2>
  double delta1 = 0.0;  // drive detuning
  double delta3 = 0.0;  // probe detuning
  double gamma = 1.0;   // total decay rate of |2>
  double beta = 0.5;    // branching: (1-beta) gamma into |1>, beta gamma into |3>

  void validate() const;
};

enum class Sideband { carrier, blue, red };
enum class ExpansionOrder { exact, first_order };

/// (Omega/2)(sigma_+ + sigma_-)
Operator carrier_hamiltonian(const LaserDrive& drive, const HilbertSpace& space);
/// (eta Omega/2)(a^dagger sigma_+ + a sigma_-), anti-Jaynes-Cummings.
Operator blue_sideband_hamiltonian(const LaserDrive& drive, const HilbertSpace& space);
/// (eta Omega/2)(a sigma_+ + a^dagger sigma_-), Jaynes-Cummings.
Operator red_sideband_hamiltonian(const LaserDrive& drive, const HilbertSpace& space);

/// Interaction-picture Hamiltonian
///   (Omega/2) exp(i eta (a e^{-i nu t} + a^dagger e^{i nu t})) sigma_+ e^{-i Delta t} + h.c.
/// with the exponential either exact or truncated after the linear term.
/// The laser phase multiplies sigma_+ as e^{i phi}.
Operator full_interaction_hamiltonian(const LaserDrive& drive, const TrapParams& trap, double t,
                                      ExpansionOrder order, const HilbertSpace& space);

/// Rabi frequency of |g,n> -> |e,n'> for the three resolved lines:
/// carrier Omega(1 - eta^2 n), blue eta Omega sqrt(n+1), red eta Omega sqrt(n).
double rabi_coupling(int n, Sideband branch, const LaserDrive& drive);

/// Lamb-Dicke-like coupling from a state-dependent frequency gradient,
/// kappa = z0 |d omega/dz| / nu.
double magic_kappa(const TrapParams& trap, double freq_gradient);

/// Same quantity through the equilibrium shift: F = (hbar/2)|d omega/dz|,
/// dz = F/(m nu^2), kappa = dz / z0.
struct GradientShift {
  double force;     // N
  double shift;     // m
  double kappa;
};
GradientShift magic_gradient_shift(const TrapParams& trap, double freq_gradient);

MagicParams effective_ldp(double eta, double kappa);

/// First-order RF/MAGIC Hamiltonian
///   (Omega_R/2)[e^{-i(Delta t + phi)} sigma_+ (1 + i eta_eff (a^dagger e^{i nu t} + a e^{-i nu t})) + h.c.]
Operator magic_hamiltonian(double rabi, const MagicParams& magic, double detuning, double nu,
                           double phi, double t, const HilbertSpace& space);

/// Effective Lamb-Dicke parameter of a two-beam Raman drive: |(k1 - k2) . axis| z0.
/// Throws Error when `axis` is not a unit vector.
double raman_effective_ldp(const std::array<double, 3>& k1, const std::array<double, 3>& k2,
                           const std::array<double, 3>& axis, const TrapParams& trap);

/// Rotating-frame three-level Hamiltonian on a HilbertSpace(3, 0); levels
/// |1>,|2>,|3> are indices 0,1,2 and have energies 0, -Delta1, Delta3 - Delta1.
Operator eit_hamiltonian(const EITConfig& cfg);

/// Index of |1>, |2>, |3> in the EIT space.
inline constexpr int kEitLevel1 = 0;
inline constexpr int kEitLevel2 = 1;
inline constexpr int kEitLevel3 = 2;

struct DressedStates {
  std::array<double, 2> energies;            // ascending
  std::array<Eigen::Vector2cd, 2> states;    // in the {|1>, |2>} basis
  double splitting() const { return energies[1] - energies[0]; }
};

/// Eigenpairs of the driven {|1>,|2>} block of eit_hamiltonian.
DressedStates dressed_states(double omega1, double delta1);

}  // namespace ioncool
