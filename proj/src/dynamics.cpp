#include "ioncool/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/KroneckerProduct>

namespace ioncool {

std::vector<double> linspace(double t0, double t1, int samples) {
  if (samples < 2) throw Error("linspace: need at least two samples");
  if (!(t1 > t0)) throw Error("linspace: end must exceed start");
  std::vector<double> out(static_cast<std::size_t>(samples));
  const double step = (t1 - t0) / (samples - 1);
  for (int i = 0; i < samples; ++i) out[i] = t0 + step * i;
  out.back() = t1;
  return out;
}

// ---------------------------------------------------------------------------

HamiltonianSource::HamiltonianSource(Operator constant)
    : space_(constant.space()), constant_(std::move(constant)) {}

HamiltonianSource::HamiltonianSource(HilbertSpace space, std::function<Operator(double)> at_time)
    : space_(space), at_time_(std::move(at_time)) {}

Operator HamiltonianSource::at(double t) const {
  if (constant_) return *constant_;
  Operator h = at_time_(t);
  if (!(h.space() == space_)) throw DimensionError("HamiltonianSource: H(t) lives on another space");
  return h;
}

CollapseChannel CollapseChannel::with_rate(const Operator& op, double rate, std::string label) {
  if (!(rate >= 0.0)) throw Error("CollapseChannel: rate must be non-negative");
  return {std::sqrt(rate) * op, std::move(label)};
}

const std::vector<double>& Trajectory::operator[](const std::string& name) const {
  for (const auto& [key, values] : series)
    if (key == name) return values;
  throw Error("Trajectory: no series named '" + name + "'");
}

bool Trajectory::has(const std::string& name) const {
  return std::any_of(series.begin(), series.end(), [&](const auto& s) { return s.first == name; });
}

std::vector<double>& Trajectory::add_series(std::string name) {
  series.emplace_back(std::move(name), std::vector<double>(times.size(), 0.0));
  return series.back().second;
}

namespace {

void require_hermitian(const Operator& h, const char* what) {
  const double defect = h.hermiticity_defect();
  if (!(defect < 1e-12 * std::max(1.0, max_norm(h.matrix())))) {
    std::ostringstream msg;
    msg << what << ": Hamiltonian is not Hermitian (defect " << defect << ")";
    throw Error(msg.str());
  }
}

Trajectory make_trajectory(const std::vector<double>& times, const std::vector<Observable>& observables,
                           const HilbertSpace& space) {
  Trajectory traj;
  traj.times = times;
  for (const auto& obs : observables) {
    if (!(obs.op.space() == space)) throw DimensionError("observable '" + obs.name + "' space mismatch");
    traj.add_series(obs.name);
  }
  return traj;
}

void check_density(const Matrix& rho, double t) {
  const double trace_error = std::abs(rho.trace() - Complex{1.0, 0.0});
  if (!(trace_error < 1e-8)) {
    std::ostringstream msg;
    msg << "lindblad_evolve: trace drifted by " << trace_error << " at t=" << t;
    throw NumericalError(msg.str());
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
  const double min_eig = solver.eigenvalues().minCoeff();
  if (!(min_eig > -1e-8)) {
    std::ostringstream msg;
    msg << "lindblad_evolve: density matrix lost positivity (min eigenvalue " << min_eig << ") at t=" << t;
    throw NumericalError(msg.str());
  }
}

// Fourth-order commutator-free Magnus step.
Vector magnus4_step(const HamiltonianSource& h, double t, double dt, const Vector& psi) {
  static const double sqrt3 = std::sqrt(3.0);
  const double c1 = 0.5 - sqrt3 / 6.0;
  const double c2 = 0.5 + sqrt3 / 6.0;
  const double w_small = (3.0 - 2.0 * sqrt3) / 12.0;
  const double w_large = (3.0 + 2.0 * sqrt3) / 12.0;
  const Operator h1 = h.at(t + c1 * dt);
  const Operator h2 = h.at(t + c2 * dt);
  require_hermitian(h1, "evolve_schrodinger");
  require_hermitian(h2, "evolve_schrodinger");
  const Matrix first = w_large * h1.matrix() + w_small * h2.matrix();
  const Matrix second = w_small * h1.matrix() + w_large * h2.matrix();
  const Vector mid = matrix_exponential(first, Complex{0.0, -dt}) * psi;
  return matrix_exponential(second, Complex{0.0, -dt}) * mid;
}

}  // namespace

Trajectory evolve_schrodinger(const HamiltonianSource& h, const QuantumState& psi0, const TimeGrid& grid,
                              const std::vector<Observable>& observables, const EvolveOptions& options) {
  if (!psi0.is_pure()) throw Error("evolve_schrodinger: initial state must be pure");
  if (!(psi0.space() == h.space())) throw DimensionError("evolve_schrodinger: state/Hamiltonian space mismatch");
  const std::vector<double> times = grid.times();
  Trajectory traj = make_trajectory(times, observables, h.space());

  Vector psi = psi0.vector();
  auto record = [&](std::size_t i, double t) {
    for (std::size_t k = 0; k < observables.size(); ++k)
      traj.series[k].second[i] = psi.dot(observables[k].op.matrix() * psi).real();
    if (options.on_sample) options.on_sample(i, t, psi * psi.adjoint());
    if (options.check_invariants && std::abs(psi.norm() - 1.0) > 1e-8) {
      std::ostringstream msg;
      msg << "evolve_schrodinger: norm drifted to " << psi.norm() << " at t=" << t;
      throw NumericalError(msg.str());
    }
  };
  record(0, times.front());

  if (!h.time_dependent()) {
    const Operator ham = h.at(times.front());
    require_hermitian(ham, "evolve_schrodinger");
    // Uniform grid: a single propagator serves every interval.
    const double dt = times[1] - times[0];
    const Matrix step = matrix_exponential(ham.matrix(), Complex{0.0, -dt});
    for (std::size_t i = 1; i < times.size(); ++i) {
      psi = step * psi;
      record(i, times[i]);
    }
  } else {
    double t = times.front();
    double dt = options.dt_max > 0.0 ? options.dt_max : (times[1] - times[0]);
    long steps = 0;
    for (std::size_t i = 1; i < times.size(); ++i) {
      const double target = times[i];
      while (t < target) {
        const bool last = t + dt >= target;
        const double step = last ? target - t : dt;
        const Vector coarse = magnus4_step(h, t, step, psi);
        const Vector fine = magnus4_step(h, t + 0.5 * step, 0.5 * step, magnus4_step(h, t, 0.5 * step, psi));
        const auto scale = (options.atol + options.rtol * psi.cwiseAbs().array()).eval();
        const double err = ((fine - coarse).cwiseAbs().array() / scale).maxCoeff();
        if (!std::isfinite(err)) throw NumericalError("evolve_schrodinger: non-finite state");
        if (err <= 1.0) {
          psi = fine;
          t = last ? target : t + step;
        }
        const double factor = err == 0.0 ? 4.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 4.0);
        if (!(last && err <= 1.0)) dt = step * factor;
        if (options.dt_max > 0.0) dt = std::min(dt, options.dt_max);
        if (dt < 1e-14 * std::max(1.0, std::abs(t)))
          throw NumericalError("evolve_schrodinger: step size underflow");
        if (++steps > 50'000'000) throw NumericalError("evolve_schrodinger: step budget exhausted");
      }
      record(i, target);
    }
  }
  traj.final_state = QuantumState::pure(h.space(), psi / psi.norm());
  return traj;
}

Trajectory lindblad_evolve(const HamiltonianSource& h, const std::vector<CollapseChannel>& channels,
                           const QuantumState& rho0, const TimeGrid& grid,
                           const std::vector<Observable>& observables, const EvolveOptions& options) {
  const HilbertSpace& space = h.space();
  if (!(rho0.space() == space)) throw DimensionError("lindblad_evolve: state/Hamiltonian space mismatch");
  for (const auto& c : channels) {
    if (!(c.op.space() == space))
      throw DimensionError("lindblad_evolve: channel '" + c.label + "' lives on another space");
    if (!c.op.matrix().allFinite())
      throw NumericalError("lindblad_evolve: channel '" + c.label + "' has non-finite entries");
  }
  const std::vector<double> times = grid.times();
  Trajectory traj = make_trajectory(times, observables, space);

  Matrix anti = Matrix::Zero(space.dim(), space.dim());
  for (const auto& c : channels) anti += c.op.matrix().adjoint() * c.op.matrix();
  anti *= 0.5;

  std::optional<Matrix> constant_heff;
  if (!h.time_dependent()) {
    const Operator ham = h.at(times.front());
    require_hermitian(ham, "lindblad_evolve");
    constant_heff = ham.matrix() - kI * anti;
  }

  // rho' = X + X^dagger + sum C rho C^dagger with X = -i H_eff rho.
  auto rhs = [&](double t, const Matrix& rho) -> Matrix {
    Matrix x;
    if (constant_heff) {
      x.noalias() = (-kI) * (*constant_heff * rho);
    } else {
      const Operator ham = h.at(t);
      require_hermitian(ham, "lindblad_evolve");
      x.noalias() = (-kI) * ((ham.matrix() - kI * anti) * rho);
    }
    Matrix out = x + x.adjoint();
    for (const auto& c : channels) out.noalias() += c.op.matrix() * rho * c.op.matrix().adjoint();
    return out;
  };

  IntegratorOptions opt;
  opt.rtol = options.rtol;
  opt.atol = options.atol;
  if (options.dt_max > 0.0) opt.max_step = options.dt_max;

  Matrix final_rho;
  integrate_dopri5(
      rhs, rho0.density_matrix(), std::span<const double>(times), opt,
      [&](std::size_t i, double t, const Matrix& rho) {
        if (options.check_invariants) check_density(rho, t);
        for (std::size_t k = 0; k < observables.size(); ++k)
          traj.series[k].second[i] = (rho * observables[k].op.matrix()).trace().real();
        if (options.on_sample) options.on_sample(i, t, rho);
        if (i + 1 == times.size()) final_rho = rho;
      },
      [](Matrix& rho) { rho = (0.5 * (rho + rho.adjoint())).eval(); });

  final_rho /= final_rho.trace().real();
  traj.final_state = QuantumState::density(space, std::move(final_rho));
  return traj;
}

Matrix liouvillian(const Operator& h, const std::vector<CollapseChannel>& channels) {
  const int d = h.space().dim();
  const Matrix id = Matrix::Identity(d, d);
  const Matrix& hm = h.matrix();
  // vec(A rho B) = (B^T (x) A) vec(rho)
  Matrix l = -kI * (Eigen::kroneckerProduct(id, hm).eval() - Eigen::kroneckerProduct(hm.transpose(), id).eval());
  for (const auto& c : channels) {
    if (!(c.op.space() == h.space())) throw DimensionError("liouvillian: channel '" + c.label + "' space mismatch");
    const Matrix& cm = c.op.matrix();
    const Matrix cdc = cm.adjoint() * cm;
    l += Eigen::kroneckerProduct(cm.conjugate(), cm).eval();
    l -= 0.5 * Eigen::kroneckerProduct(id, cdc).eval();
    l -= 0.5 * Eigen::kroneckerProduct(cdc.transpose(), id).eval();
  }
  return l;
}

SteadyState steady_state(const Operator& h, const std::vector<CollapseChannel>& channels) {
  if (channels.empty()) throw Error("steady_state: at least one collapse channel is required");
  require_hermitian(h, "steady_state");
  const int d = h.space().dim();
  const Matrix l = liouvillian(h, channels);
  Eigen::BDCSVD<Matrix> svd(l, Eigen::ComputeFullV);
  const Eigen::VectorXd& sigma = svd.singularValues();  // descending
  const double cutoff = 1e-10 * std::max(1.0, sigma(0));
  int null_dim = 0;
  for (Eigen::Index i = sigma.size() - 1; i >= 0 && sigma(i) < cutoff; --i) ++null_dim;
  if (null_dim == 0) throw NumericalError("steady_state: Liouvillian has no null vector");

  const Vector v = svd.matrixV().col(sigma.size() - 1);
  Matrix rho = Eigen::Map<const Matrix>(v.data(), d, d);
  const Complex trace = rho.trace();
  if (std::abs(trace) < 1e-14) throw NumericalError("steady_state: null vector is traceless");
  rho /= trace;
  rho = (0.5 * (rho + rho.adjoint())).eval();
  const Vector flat = Eigen::Map<const Vector>(rho.data(), d * d);
  const double residual = (l * flat).cwiseAbs().maxCoeff();

  SteadyState out{QuantumState::density(h.space(), rho), residual, null_dim, null_dim > 1};
  return out;
}

double scattering_rate(const QuantumState& state, double gamma, int excited_level) {
  const HilbertSpace& space = state.space();
  if (excited_level < 0 || excited_level >= space.internal_dim())
    throw DimensionError("scattering_rate: level out of range");
  const Matrix rho = state.density_matrix();
  double population = 0.0;
  for (int n = 0; n < space.motional_dim(); ++n) {
    const int k = space.index(excited_level, n);
    population += rho(k, k).real();
  }
  return gamma * population;
}

PhononStatistics phonon_statistics(const HilbertSpace& space, const Matrix& rho) {
  PhononStatistics out;
  out.populations.assign(static_cast<std::size_t>(space.motional_dim()), 0.0);
  for (int level = 0; level < space.internal_dim(); ++level)
    for (int n = 0; n < space.motional_dim(); ++n) {
      const int k = space.index(level, n);
      out.populations[n] += rho(k, k).real();
    }
  for (int n = 0; n < space.motional_dim(); ++n) out.n_bar += n * out.populations[n];
  return out;
}

PhononStatistics phonon_statistics(const QuantumState& state) {
  return phonon_statistics(state.space(), state.density_matrix());
}

}  // namespace ioncool
