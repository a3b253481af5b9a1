#pragma once

// State and operator algebra on the composite internal (x) motional space.
//
// Basis ordering is fixed: index = level * (n_max + 1) + n, i.e. the
// internal factor is the slow (outer) index of every Kronecker product.

#include <complex>
#include <stdexcept>
#include <string>
#include <variant>

#include <Eigen/Dense>

namespace ioncool {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Complex kI{0.0, 1.0};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes or spaces that do not fit together.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure: non-convergence, truncation overflow, broken invariants.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class HilbertSpace {
 public:
  HilbertSpace(int internal_dim, int fock_cutoff);

  int internal_dim() const { return internal_dim_; }
  int fock_cutoff() const { return fock_cutoff_; }
  int motional_dim() const { return fock_cutoff_ + 1; }
  int dim() const { return internal_dim_ * motional_dim(); }

  int index(int level, int n) const { return level * motional_dim() + n; }

  /// Number of Fock levels below n_max treated as boundary-affected for a
  /// drive with Lamb-Dicke parameter eta: max(5, ceil(3 eta sqrt(n_max))).
  int truncation_margin(double eta) const;

  bool operator==(const HilbertSpace&) const = default;

 private:
  int internal_dim_;
  int fock_cutoff_;
};

/// Level labels for two-level spaces.
inline constexpr int kGround = 0;
inline constexpr int kExcited = 1;

class Operator {
 public:
  Operator(HilbertSpace space, Matrix matrix);

  static Operator zero(const HilbertSpace& space);
  static Operator identity(const HilbertSpace& space);

  const HilbertSpace& space() const { return space_; }
  const Matrix& matrix() const { return matrix_; }
  Complex operator()(int row, int col) const { return matrix_(row, col); }

  Operator adjoint() const;
  double hermiticity_defect() const;  // max |M - M^dagger|
  bool is_hermitian(double tol = 1e-12) const { return hermiticity_defect() < tol; }

  Operator& operator+=(const Operator& other);
  Operator& operator-=(const Operator& other);
  Operator& operator*=(Complex scale);

  friend Operator operator+(Operator lhs, const Operator& rhs) { return lhs += rhs; }
  friend Operator operator-(Operator lhs, const Operator& rhs) { return lhs -= rhs; }
  friend Operator operator*(Operator lhs, Complex scale) { return lhs *= scale; }
  friend Operator operator*(Complex scale, Operator rhs) { return rhs *= scale; }
  friend Operator operator*(const Operator& lhs, const Operator& rhs);

 private:
  HilbertSpace space_;
  Matrix matrix_;
};

Operator commutator(const Operator& a, const Operator& b);

/// Largest absolute entry.
double max_norm(const Matrix& m);

class QuantumState {
 public:
  /// Validates ||psi|| = 1 within 1e-10.
  static QuantumState pure(const HilbertSpace& space, Vector psi);
  /// Validates Hermiticity and unit trace within 1e-10, min eigenvalue > -1e-8.
  static QuantumState density(const HilbertSpace& space, Matrix rho);
  /// |level, n>
  static QuantumState basis(const HilbertSpace& space, int level, int n);

  const HilbertSpace& space() const { return space_; }
  bool is_pure() const { return std::holds_alternative<Vector>(data_); }
  const Vector& vector() const;
  /// rho, or |psi><psi| for pure states.
  Matrix density_matrix() const;

 private:
  QuantumState(HilbertSpace space, std::variant<Vector, Matrix> data)
      : space_(space), data_(std::move(data)) {}

  HilbertSpace space_;
  std::variant<Vector, Matrix> data_;
};

struct LadderOperators {
  Operator a;
  Operator a_dagger;
};

struct SpinOperators {
  Operator sigma_z;
  Operator sigma_plus;
  Operator sigma_minus;
};

/// a and a^dagger acting on the motional factor, identity on the internal one.
/// a^dagger |n_max> = 0 by truncation.
LadderOperators ladder_operators(const HilbertSpace& space);

/// sigma_+ = |e><g|, sigma_- = |g><e|, sigma_z = |e><e| - |g><g|, each (x) I.
/// Throws DimensionError unless internal_dim == 2.
SpinOperators internal_operators(const HilbertSpace& space);

/// internal (x) motional Kronecker product. `internal` must be
/// internal_dim square, `motional` motional_dim square.
Operator tensor(const HilbertSpace& space, const Matrix& internal, const Matrix& motional);

/// Projector |level><level| (x) I.
Operator level_projector(const HilbertSpace& space, int level);

/// a^dagger a.
Operator number_operator(const HilbertSpace& space);

/// exp(scale * M). Hermitian arguments with purely imaginary or real scale
/// go through an eigendecomposition; everything else uses scaling and squaring.
Operator matrix_exponential(const Operator& m, Complex scale);
Matrix matrix_exponential(const Matrix& m, Complex scale);

/// exp(i eta (a + a^dagger)) on the truncated space (identity on the internal
/// factor). Only rows/columns below n_max - truncation_margin(eta) are
/// faithful to the untruncated operator.
Operator displacement_operator(double eta, const HilbertSpace& space);

/// <psi|O|psi> or Tr(rho O).
Complex expectation(const QuantumState& state, const Operator& obs);

/// Thermal Fock distribution P(n) ~ (nbar/(nbar+1))^n renormalised on
/// [0, n_max], with the internal factor in `level`.
QuantumState thermal_state(double n_bar, const HilbertSpace& space, int level = kGround);

}  // namespace ioncool
