#include "ioncool/hamiltonians.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace ioncool {

namespace {

void require_two_level(const HilbertSpace& space, const char* what) {
  if (space.internal_dim() != 2)
    throw DimensionError(std::string(what) + ": requires a two-level internal space");
}

Matrix annihilation(int dim) {
  Matrix a = Matrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

Matrix sigma_plus_2x2() {
  Matrix s = Matrix::Zero(2, 2);
  s(kExcited, kGround) = 1.0;
  return s;
}

// (Omega/2) (sigma_+ (x) M + h.c.)
Operator hermitian_drive(const HilbertSpace& space, double rabi, const Matrix& motional) {
  Operator up = tensor(space, sigma_plus_2x2(), motional);
  return Complex{0.5 * rabi, 0.0} * (up + up.adjoint());
}

}  // namespace

double TrapParams::z0() const { return std::sqrt(kHbar / (2.0 * mass * nu)); }

void TrapParams::validate() const {
  if (!(nu > 0.0)) throw Error("TrapParams: nu must be positive");
  if (!(mass > 0.0)) throw Error("TrapParams: mass must be positive");
}

void LaserDrive::validate() const {
  if (!(rabi >= 0.0)) throw Error("LaserDrive: rabi must be non-negative");
  if (!(ldp >= 0.0)) throw Error("LaserDrive: ldp must be non-negative");
}

void EITConfig::validate() const {
  if (!(gamma > 0.0)) throw Error("EITConfig: gamma must be positive");
  if (!(beta >= 0.0 && beta <= 1.0)) throw Error("EITConfig: beta must lie in [0, 1]");
  if (!(omega1 >= 0.0) || !(omega3 >= 0.0))
    throw Error("EITConfig: Rabi frequencies must be non-negative");
}

Operator carrier_hamiltonian(const LaserDrive& drive, const HilbertSpace& space) {
  require_two_level(space, "carrier_hamiltonian");
  drive.validate();
  return hermitian_drive(space, drive.rabi, Matrix::Identity(space.motional_dim(), space.motional_dim()));
}

Operator blue_sideband_hamiltonian(const LaserDrive& drive, const HilbertSpace& space) {
  require_two_level(space, "blue_sideband_hamiltonian");
  drive.validate();
  return hermitian_drive(space, drive.rabi * drive.ldp, annihilation(space.motional_dim()).adjoint());
}

Operator red_sideband_hamiltonian(const LaserDrive& drive, const HilbertSpace& space) {
  require_two_level(space, "red_sideband_hamiltonian");
  drive.validate();
  return hermitian_drive(space, drive.rabi * drive.ldp, annihilation(space.motional_dim()));
}

Operator full_interaction_hamiltonian(const LaserDrive& drive, const TrapParams& trap, double t,
                                      ExpansionOrder order, const HilbertSpace& space) {
  require_two_level(space, "full_interaction_hamiltonian");
  drive.validate();
  const int dim = space.motional_dim();
  const Matrix a = annihilation(dim);
  Matrix motional;
  if (order == ExpansionOrder::exact) {
    // exp(i eta (a e^{-i nu t} + h.c.)) = U exp(i eta (a + a^dagger)) U^dagger, U = exp(i nu t N)
    const Matrix d = matrix_exponential(Matrix(a + a.adjoint()), Complex{0.0, drive.ldp});
    Vector u(dim);
    for (int n = 0; n < dim; ++n) u(n) = std::polar(1.0, trap.nu * t * n);
    motional = u.asDiagonal() * d * u.conjugate().asDiagonal();
  } else {
    const Complex rot = std::polar(1.0, -trap.nu * t);
    motional = Matrix::Identity(dim, dim) + kI * drive.ldp * (rot * a + std::conj(rot) * a.adjoint());
  }
  const Complex phase = std::polar(1.0, drive.phase - drive.detuning * t);
  Operator up = tensor(space, sigma_plus_2x2(), phase * motional);
  return Complex{0.5 * drive.rabi, 0.0} * (up + up.adjoint());
}

double rabi_coupling(int n, Sideband branch, const LaserDrive& drive) {
  if (n < 0) throw Error("rabi_coupling: phonon index must be non-negative");
  const double nn = static_cast<double>(n);
  switch (branch) {
    case Sideband::carrier:
      return drive.rabi * (1.0 - drive.ldp * drive.ldp * nn);
    case Sideband::blue:
      return drive.ldp * drive.rabi * std::sqrt(nn + 1.0);
    case Sideband::red:
      return drive.ldp * drive.rabi * std::sqrt(nn);
  }
  return 0.0;
}

double magic_kappa(const TrapParams& trap, double freq_gradient) {
  trap.validate();
  if (!(freq_gradient >= 0.0)) throw Error("magic_kappa: gradient magnitude must be non-negative");
  return trap.z0() * freq_gradient / trap.nu;
}

GradientShift magic_gradient_shift(const TrapParams& trap, double freq_gradient) {
  trap.validate();
  if (!(freq_gradient >= 0.0))
    throw Error("magic_gradient_shift: gradient magnitude must be non-negative");
  GradientShift out{};
  out.force = 0.5 * kHbar * freq_gradient;
  out.shift = out.force / (trap.mass * trap.nu * trap.nu);
  out.kappa = out.shift / trap.z0();
  return out;
}

MagicParams effective_ldp(double eta, double kappa) {
  if (!(eta >= 0.0) || !(kappa >= 0.0)) throw Error("effective_ldp: eta and kappa must be non-negative");
  MagicParams p;
  p.eta = eta;
  p.kappa = kappa;
  p.eta_prime = std::hypot(eta, kappa);
  p.theta = std::atan2(kappa, eta);
  return p;
}

Operator magic_hamiltonian(double rabi, const MagicParams& magic, double detuning, double nu,
                           double phi, double t, const HilbertSpace& space) {
  require_two_level(space, "magic_hamiltonian");
  const int dim = space.motional_dim();
  const Matrix a = annihilation(dim);
  const Complex rot = std::polar(1.0, nu * t);
  const Matrix motional =
      Matrix::Identity(dim, dim) + kI * magic.eta_eff() * (rot * a.adjoint() + std::conj(rot) * a);
  const Complex phase = std::polar(1.0, -(detuning * t + phi));
  Operator up = tensor(space, sigma_plus_2x2(), phase * motional);
  return Complex{0.5 * rabi, 0.0} * (up + up.adjoint());
}

double raman_effective_ldp(const std::array<double, 3>& k1, const std::array<double, 3>& k2,
                           const std::array<double, 3>& axis, const TrapParams& trap) {
  trap.validate();
  const double norm = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
  if (std::abs(norm - 1.0) > 1e-9) throw Error("raman_effective_ldp: axis must be a unit vector");
  double projection = 0.0;
  for (int i = 0; i < 3; ++i) projection += (k1[i] - k2[i]) * axis[i];
  return std::abs(projection) * trap.z0();
}

Operator eit_hamiltonian(const EITConfig& cfg) {
  cfg.validate();
  const HilbertSpace space(3, 0);
  Matrix h = Matrix::Zero(3, 3);
  h(kEitLevel2, kEitLevel2) = -cfg.delta1;
  h(kEitLevel3, kEitLevel3) = cfg.delta3 - cfg.delta1;
  h(kEitLevel2, kEitLevel1) = h(kEitLevel1, kEitLevel2) = 0.5 * cfg.omega1;
  h(kEitLevel2, kEitLevel3) = h(kEitLevel3, kEitLevel2) = 0.5 * cfg.omega3;
  return {space, h};
}

DressedStates dressed_states(double omega1, double delta1) {
  Eigen::Matrix2cd block;
  block << 0.0, 0.5 * omega1, 0.5 * omega1, -delta1;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> solver(block);
  DressedStates out{};
  for (int i = 0; i < 2; ++i) {
    out.energies[i] = solver.eigenvalues()(i);
    Eigen::Vector2cd v = solver.eigenvectors().col(i);
    // Fix the global phase: first nonzero amplitude real and positive.
    const int pivot = std::abs(v(0)) > 1e-14 ? 0 : 1;
    v *= std::conj(v(pivot)) / std::abs(v(pivot));
    out.states[i] = v;
  }
  return out;
}

}  // namespace ioncool
