#include "ioncool/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace ioncool {

namespace {

void require_same_space(const HilbertSpace& a, const HilbertSpace& b, const char* what) {
  if (!(a == b)) {
    std::ostringstream msg;
    msg << what << ": space mismatch (" << a.internal_dim() << "x" << a.motional_dim() << " vs "
        << b.internal_dim() << "x" << b.motional_dim() << ")";
    throw DimensionError(msg.str());
  }
}

Matrix annihilation_matrix(int motional_dim) {
  Matrix a = Matrix::Zero(motional_dim, motional_dim);
  for (int n = 1; n < motional_dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

}  // namespace

HilbertSpace::HilbertSpace(int internal_dim, int fock_cutoff)
    : internal_dim_(internal_dim), fock_cutoff_(fock_cutoff) {
  if (internal_dim < 2) throw DimensionError("HilbertSpace: internal_dim must be >= 2");
  if (fock_cutoff < 0) throw DimensionError("HilbertSpace: fock_cutoff must be >= 0");
}

int HilbertSpace::truncation_margin(double eta) const {
  const double scaled = 3.0 * std::abs(eta) * std::sqrt(static_cast<double>(fock_cutoff_));
  return std::max(5, static_cast<int>(std::ceil(scaled)));
}

// ---------------------------------------------------------------------------

Operator::Operator(HilbertSpace space, Matrix matrix) : space_(space), matrix_(std::move(matrix)) {
  if (matrix_.rows() != space_.dim() || matrix_.cols() != space_.dim()) {
    std::ostringstream msg;
    msg << "Operator: matrix is " << matrix_.rows() << "x" << matrix_.cols()
        << ", space dimension is " << space_.dim();
    throw DimensionError(msg.str());
  }
}

Operator Operator::zero(const HilbertSpace& space) {
  return {space, Matrix::Zero(space.dim(), space.dim())};
}

Operator Operator::identity(const HilbertSpace& space) {
  return {space, Matrix::Identity(space.dim(), space.dim())};
}

Operator Operator::adjoint() const { return {space_, matrix_.adjoint()}; }

double Operator::hermiticity_defect() const { return max_norm(matrix_ - matrix_.adjoint()); }

Operator& Operator::operator+=(const Operator& other) {
  require_same_space(space_, other.space_, "operator+");
  matrix_ += other.matrix_;
  return *this;
}

Operator& Operator::operator-=(const Operator& other) {
  require_same_space(space_, other.space_, "operator-");
  matrix_ -= other.matrix_;
  return *this;
}

Operator& Operator::operator*=(Complex scale) {
  matrix_ *= scale;
  return *this;
}

Operator operator*(const Operator& lhs, const Operator& rhs) {
  require_same_space(lhs.space_, rhs.space_, "operator*");
  return {lhs.space_, lhs.matrix_ * rhs.matrix_};
}

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

double max_norm(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

// ---------------------------------------------------------------------------

QuantumState QuantumState::pure(const HilbertSpace& space, Vector psi) {
  if (psi.size() != space.dim()) throw DimensionError("QuantumState::pure: vector size mismatch");
  const double norm = psi.norm();
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > 1e-10) {
    std::ostringstream msg;
    msg << "QuantumState::pure: norm " << norm << " differs from 1";
    throw NumericalError(msg.str());
  }
  return {space, std::move(psi)};
}

QuantumState QuantumState::density(const HilbertSpace& space, Matrix rho) {
  if (rho.rows() != space.dim() || rho.cols() != space.dim())
    throw DimensionError("QuantumState::density: matrix size mismatch");
  const double herm = max_norm(rho - rho.adjoint());
  if (!(herm < 1e-10)) throw NumericalError("QuantumState::density: matrix is not Hermitian");
  const double trace = rho.trace().real();
  if (std::abs(trace - 1.0) > 1e-10) {
    std::ostringstream msg;
    msg << "QuantumState::density: trace " << trace << " differs from 1";
    throw NumericalError(msg.str());
  }
  const Matrix hermitian = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -1e-8)
    throw NumericalError("QuantumState::density: negative eigenvalue below -1e-8");
  return {space, std::move(rho)};
}

QuantumState QuantumState::basis(const HilbertSpace& space, int level, int n) {
  if (level < 0 || level >= space.internal_dim() || n < 0 || n > space.fock_cutoff())
    throw DimensionError("QuantumState::basis: label out of range");
  Vector psi = Vector::Zero(space.dim());
  psi(space.index(level, n)) = 1.0;
  return {space, std::move(psi)};
}

const Vector& QuantumState::vector() const {
  if (!is_pure()) throw Error("QuantumState::vector: state is mixed");
  return std::get<Vector>(data_);
}

Matrix QuantumState::density_matrix() const {
  if (const auto* psi = std::get_if<Vector>(&data_)) return (*psi) * psi->adjoint();
  return std::get<Matrix>(data_);
}

// ---------------------------------------------------------------------------

LadderOperators ladder_operators(const HilbertSpace& space) {
  const Matrix a = annihilation_matrix(space.motional_dim());
  const Matrix id = Matrix::Identity(space.internal_dim(), space.internal_dim());
  return {tensor(space, id, a), tensor(space, id, a.adjoint())};
}

SpinOperators internal_operators(const HilbertSpace& space) {
  if (space.internal_dim() != 2)
    throw DimensionError("internal_operators: requires a two-level internal space");
  const Matrix id = Matrix::Identity(space.motional_dim(), space.motional_dim());
  Matrix plus = Matrix::Zero(2, 2);
  plus(kExcited, kGround) = 1.0;
  Matrix z = Matrix::Zero(2, 2);
  z(kExcited, kExcited) = 1.0;
  z(kGround, kGround) = -1.0;
  return {tensor(space, z, id), tensor(space, plus, id), tensor(space, plus.adjoint(), id)};
}

Operator tensor(const HilbertSpace& space, const Matrix& internal, const Matrix& motional) {
  if (internal.rows() != space.internal_dim() || internal.cols() != space.internal_dim() ||
      motional.rows() != space.motional_dim() || motional.cols() != space.motional_dim())
    throw DimensionError("tensor: factor dimensions do not match the space");
  return {space, Eigen::kroneckerProduct(internal, motional).eval()};
}

Operator level_projector(const HilbertSpace& space, int level) {
  if (level < 0 || level >= space.internal_dim())
    throw DimensionError("level_projector: level out of range");
  Matrix p = Matrix::Zero(space.internal_dim(), space.internal_dim());
  p(level, level) = 1.0;
  return tensor(space, p, Matrix::Identity(space.motional_dim(), space.motional_dim()));
}

Operator number_operator(const HilbertSpace& space) {
  Matrix n = Matrix::Zero(space.motional_dim(), space.motional_dim());
  for (int k = 0; k < space.motional_dim(); ++k) n(k, k) = static_cast<double>(k);
  return tensor(space, Matrix::Identity(space.internal_dim(), space.internal_dim()), n);
}

Matrix matrix_exponential(const Matrix& m, Complex scale) {
  if (m.rows() != m.cols()) throw DimensionError("matrix_exponential: matrix is not square");
  if (!m.allFinite() || !std::isfinite(scale.real()) || !std::isfinite(scale.imag()))
    throw NumericalError("matrix_exponential: non-finite input");
  if (m.size() == 0) return m;
  if (max_norm(m - m.adjoint()) < 1e-14 * std::max(1.0, max_norm(m))) {
    // Normal argument: exact spectral route keeps exp(i t H) unitary to rounding.
    Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (m + m.adjoint()));
    const Vector phases = (scale * solver.eigenvalues().cast<Complex>().array()).exp().matrix();
    return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
  }
  const Matrix scaled = scale * m;
  return scaled.exp();
}

Operator matrix_exponential(const Operator& m, Complex scale) {
  return {m.space(), matrix_exponential(m.matrix(), scale)};
}

Operator displacement_operator(double eta, const HilbertSpace& space) {
  const Matrix a = annihilation_matrix(space.motional_dim());
  const Matrix position = a + a.adjoint();
  const Matrix motional = matrix_exponential(position, Complex{0.0, eta});
  return tensor(space, Matrix::Identity(space.internal_dim(), space.internal_dim()), motional);
}

Complex expectation(const QuantumState& state, const Operator& obs) {
  require_same_space(state.space(), obs.space(), "expectation");
  if (state.is_pure()) {
    const Vector& psi = state.vector();
    return psi.dot(obs.matrix() * psi);
  }
  return (state.density_matrix() * obs.matrix()).trace();
}

QuantumState thermal_state(double n_bar, const HilbertSpace& space, int level) {
  if (!(n_bar >= 0.0)) throw Error("thermal_state: n_bar must be non-negative");
  if (level < 0 || level >= space.internal_dim())
    throw DimensionError("thermal_state: level out of range");
  const int dim = space.motional_dim();
  Eigen::VectorXd p(dim);
  const double ratio = n_bar / (n_bar + 1.0);
  double weight = 1.0;
  for (int n = 0; n < dim; ++n) {
    p(n) = weight;
    weight *= ratio;
  }
  p /= p.sum();
  Matrix rho = Matrix::Zero(space.dim(), space.dim());
  for (int n = 0; n < dim; ++n) rho(space.index(level, n), space.index(level, n)) = p(n);
  return QuantumState::density(space, std::move(rho));
}

}  // namespace ioncool
