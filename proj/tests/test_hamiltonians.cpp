#include "doctest.h"

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "ioncool/hamiltonians.hpp"
#include "support.hpp"

using namespace ioncool;

namespace {

double p_excited(const HilbertSpace& s, const Vector& psi) {
  double p = 0.0;
  for (int n = 0; n <= s.fock_cutoff(); ++n) p += std::norm(psi(s.index(kExcited, n)));
  return p;
}

Vector evolve(const Operator& h, const Vector& psi, double t) {
  return matrix_exponential(h.matrix(), Complex{0.0, -t}) * psi;
}

// Period average of a time-dependent operator; trapezoid rule is exact for
// trigonometric polynomials of degree below the node count.
template <class F>
Matrix period_average(F&& h_of_t, double period, int nodes = 64) {
  Matrix sum = h_of_t(0.0);
  for (int k = 1; k < nodes; ++k) sum += h_of_t(period * k / nodes);
  return sum / static_cast<double>(nodes);
}

Operator q_blue(const HilbertSpace& s) { return number_operator(s) - level_projector(s, kExcited); }
Operator q_red(const HilbertSpace& s) { return number_operator(s) + level_projector(s, kExcited); }

}  // namespace

TEST_CASE("carrier Hamiltonian") {
  const HilbertSpace s(2, 6);
  CHECK(max_norm(carrier_hamiltonian(LaserDrive{0.0, 0.0, 0.0, 0.1}, s).matrix()) == 0.0);

  const LaserDrive drive{2.0, 0.0, 0.0, 0.1};
  const Operator h = carrier_hamiltonian(drive, s);
  CHECK(h.is_hermitian());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h.matrix());
  for (int i = 0; i < s.dim(); ++i)
    CHECK(std::abs(std::abs(solver.eigenvalues()(i)) - 1.0) < 1e-14);
  CHECK(solver.eigenvalues().head(7).maxCoeff() < 0.0);

  const Vector out = evolve(h, QuantumState::basis(s, kGround, 0).vector(), kPi / drive.rabi);
  CHECK(std::abs(out(s.index(kExcited, 0))) == doctest::Approx(1.0).epsilon(1e-14));

  CHECK_THROWS_AS(carrier_hamiltonian(drive, HilbertSpace(3, 2)), DimensionError);
}

TEST_CASE("blue sideband: anti-Jaynes-Cummings flopping") {
  const HilbertSpace s(2, 20);
  const LaserDrive drive{1.0, 0.0, 0.0, 0.1};
  const Operator h = blue_sideband_hamiltonian(drive, s);
  CHECK(h.is_hermitian());
  CHECK(max_norm(commutator(h, q_blue(s)).matrix()) < 1e-12);

  for (int n = 0; n <= 3; ++n) {
    const double rabi = drive.ldp * drive.rabi * std::sqrt(n + 1.0);
    const Vector psi0 = QuantumState::basis(s, kGround, n).vector();
    const Vector half = evolve(h, psi0, kPi / rabi);
    CHECK(std::abs(half(s.index(kExcited, n + 1))) == doctest::Approx(1.0).epsilon(1e-12));
    const Vector quarter = evolve(h, psi0, 0.5 * kPi / rabi);
    CHECK(p_excited(s, quarter) == doctest::Approx(0.5).epsilon(1e-12));
  }
  CHECK_THROWS_AS(blue_sideband_hamiltonian(drive, HilbertSpace(3, 2)), DimensionError);
}

TEST_CASE("red sideband: Jaynes-Cummings flopping and ground-state blockade") {
  const HilbertSpace s(2, 20);
  const LaserDrive drive{1.0, 0.0, 0.0, 0.1};
  const Operator h = red_sideband_hamiltonian(drive, s);
  CHECK(h.is_hermitian());
  CHECK(max_norm(commutator(h, q_red(s)).matrix()) < 1e-12);

  const Vector g0 = QuantumState::basis(s, kGround, 0).vector();
  CHECK((h.matrix() * g0).norm() == 0.0);

  const Vector psi = evolve(h, QuantumState::basis(s, kGround, 1).vector(), kPi / (drive.ldp * drive.rabi));
  CHECK(std::abs(psi(s.index(kExcited, 0))) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(red_sideband_hamiltonian(drive, HilbertSpace(3, 2)), DimensionError);
}

TEST_CASE("full interaction Hamiltonian") {
  const HilbertSpace s(2, 30);
  const TrapParams trap{1.0, 1.0};

  SUBCASE("eta = 0, Delta = 0 reduces to the carrier") {
    const LaserDrive drive{0.3, 0.0, 0.0, 0.0};
    const Operator carrier = carrier_hamiltonian(drive, s);
    for (double t : {0.0, 0.37, 2.5, 11.0})
      for (auto order : {ExpansionOrder::exact, ExpansionOrder::first_order})
        CHECK(max_norm((full_interaction_hamiltonian(drive, trap, t, order, s) - carrier).matrix()) < 1e-14);
  }

  SUBCASE("Hermitian at every time") {
    const LaserDrive drive{0.2, -0.9, 0.4, 0.1};
    for (double t : {0.0, 0.1, 1.7, 40.0}) {
      CHECK(full_interaction_hamiltonian(drive, trap, t, ExpansionOrder::exact, s).is_hermitian());
      CHECK(full_interaction_hamiltonian(drive, trap, t, ExpansionOrder::first_order, s).is_hermitian());
    }
  }

  SUBCASE("first order at Delta = -nu averages to the red sideband") {
    // The expansion's factor i is absorbed into the laser phase.
    const LaserDrive drive{0.1, -trap.nu, -0.5 * kPi, 0.1};
    const Matrix avg = period_average(
        [&](double t) { return full_interaction_hamiltonian(drive, trap, t, ExpansionOrder::first_order, s).matrix(); },
        2.0 * kPi / trap.nu);
    CHECK(max_norm(avg - red_sideband_hamiltonian(drive, s).matrix()) < 1e-14);
  }

  SUBCASE("first order at Delta = +nu averages to the blue sideband") {
    const LaserDrive drive{0.1, trap.nu, -0.5 * kPi, 0.1};
    const Matrix avg = period_average(
        [&](double t) { return full_interaction_hamiltonian(drive, trap, t, ExpansionOrder::first_order, s).matrix(); },
        2.0 * kPi / trap.nu);
    CHECK(max_norm(avg - blue_sideband_hamiltonian(drive, s).matrix()) < 1e-14);
  }

  SUBCASE("exact minus first order obeys the Taylor remainder bound") {
    const LaserDrive drive{1.0, 0.0, 0.0, 0.05};
    const Matrix diff = (full_interaction_hamiltonian(drive, trap, 0.0, ExpansionOrder::exact, s) -
                         full_interaction_hamiltonian(drive, trap, 0.0, ExpansionOrder::first_order, s))
                            .matrix();
    const int interior = s.fock_cutoff() - s.truncation_margin(drive.ldp);
    const auto ladder = ladder_operators(s);
    const Matrix x = (ladder.a + ladder.a_dagger).matrix();
    const Matrix x2 = x * x;
    double x2_norm = 0.0, worst = 0.0;
    for (int m = 0; m <= interior; ++m)
      for (int n = 0; n <= interior; ++n) {
        x2_norm = std::max(x2_norm, std::abs(x2(s.index(kGround, m), s.index(kGround, n))));
        worst = std::max(worst, std::abs(diff(s.index(kExcited, m), s.index(kGround, n))));
      }
    const double eta = drive.ldp;
    CHECK(worst > 0.0);
    CHECK(worst < 2.0 * eta * eta * 0.5 * drive.rabi * x2_norm);
  }

  SUBCASE("exact form converges linearly in eta to the carrier") {
    const HilbertSpace small(2, 12);
    const LaserDrive base{1.0, 0.0, 0.0, 0.0};
    const Operator carrier = carrier_hamiltonian(base, small);
    auto deviation = [&](double eta) {
      LaserDrive d = base;
      d.ldp = eta;
      const Matrix diff = (full_interaction_hamiltonian(d, trap, 0.3, ExpansionOrder::exact, small) - carrier).matrix();
      return max_norm(diff.topLeftCorner(small.dim(), small.dim()));
    };
    const double slope = std::log(deviation(2e-4) / deviation(1e-4)) / std::log(2.0);
    CHECK(slope == doctest::Approx(1.0).epsilon(1e-3));
  }
}

TEST_CASE("rabi couplings") {
  const LaserDrive drive{2.0 * kPi * 100e3, 0.0, 0.0, 0.1};
  CHECK(rabi_coupling(0, Sideband::carrier, drive) == drive.rabi);
  CHECK(rabi_coupling(0, Sideband::red, drive) == 0.0);
  CHECK(rabi_coupling(3, Sideband::blue, drive) == doctest::Approx(2.0 * kPi * 20e3).epsilon(1e-14));
  CHECK(rabi_coupling(4, Sideband::carrier, drive) == doctest::Approx(drive.rabi * 0.96).epsilon(1e-14));
  for (int n = 0; n < 60; ++n) CHECK(rabi_coupling(n, Sideband::red, drive) < rabi_coupling(n, Sideband::blue, drive));
  CHECK_THROWS_AS(rabi_coupling(-1, Sideband::blue, drive), Error);
}

TEST_CASE("carrier coupling formula vs Debye-Waller matrix element") {
  // Omega (1 - eta^2 n) is the small-eta limit of Omega L_n(eta^2), the
  // Debye-Waller element measured relative to the n = 0 line.
  const HilbertSpace s(2, 40);
  const LaserDrive drive{1.0, 0.0, 0.0, 0.02};
  const Operator d = displacement_operator(drive.ldp, s);
  for (int n = 0; n <= 10; ++n) {
    const double exact = std::abs(d(n, n)) / std::abs(d(0, 0));
    const double truncated = rabi_coupling(n, Sideband::carrier, drive) / drive.rabi;
    CHECK(std::abs(exact - truncated) < 2.0 * std::pow(drive.ldp, 4) * (n * n + n + 1));
  }
}

TEST_CASE("MAGIC coupling strength") {
  const TrapParams trap{2.0 * kPi * 100e3, 171.0 * kAtomicMass};
  const double gradient = 2.0 * kPi * 10e6 / 1e-3;
  CHECK(magic_kappa(trap, 0.0) == 0.0);

  // Hand evaluation of z0 and kappa.
  const double z0 = std::sqrt(1.054571817e-34 / (2.0 * 171.0 * 1.66053906660e-27 * 2.0 * kPi * 100e3));
  CHECK(trap.z0() == doctest::Approx(z0).epsilon(1e-12));
  CHECK(z0 == doctest::Approx(1.72e-8).epsilon(0.01));
  const double kappa = magic_kappa(trap, gradient);
  CHECK(kappa == doctest::Approx(z0 * gradient / trap.nu).epsilon(1e-12));
  CHECK(kappa == doctest::Approx(1.7e-3).epsilon(0.02));

  const GradientShift shift = magic_gradient_shift(trap, gradient);
  CHECK(shift.force == doctest::Approx(0.5 * kHbar * gradient).epsilon(1e-15));
  CHECK(std::abs(shift.kappa - kappa) / kappa < 1e-12);
  CHECK_THROWS_AS(magic_kappa(trap, -1.0), Error);
}

TEST_CASE("effective Lamb-Dicke parameter") {
  const MagicParams rf = effective_ldp(1e-7, 1.7e-3);
  CHECK(std::abs(rf.eta_prime - 1.7e-3) / 1.7e-3 < 1e-8);
  CHECK(rf.theta == doctest::Approx(0.5 * kPi).epsilon(1e-4));

  const MagicParams optical = effective_ldp(0.1, 0.0);
  CHECK(optical.eta_prime == 0.1);
  CHECK(optical.theta == 0.0);

  const MagicParams equal = effective_ldp(0.05, 0.05);
  CHECK(equal.theta == doctest::Approx(0.25 * kPi).epsilon(1e-15));
  CHECK(equal.eta_prime == doctest::Approx(0.05 * std::sqrt(2.0)).epsilon(1e-15));

  for (double eta : {0.0, 0.01, 0.3})
    for (double kappa : {0.0, 0.02, 0.5}) {
      const MagicParams p = effective_ldp(eta, kappa);
      CHECK(std::abs(std::polar(p.eta_prime, p.theta) - p.eta_eff()) < 1e-15);
    }
}

TEST_CASE("MAGIC Hamiltonian") {
  const HilbertSpace s(2, 12);
  const double nu = 1.0;

  SUBCASE("zero coupling is a phased carrier drive") {
    const MagicParams none = effective_ldp(0.0, 0.0);
    const double t = 0.8, phi = 0.3, detuning = -0.2;
    const Operator h = magic_hamiltonian(0.5, none, detuning, nu, phi, t, s);
    const Complex phase = std::polar(1.0, -(detuning * t + phi));
    const auto spin = internal_operators(s);
    const Operator expected = 0.25 * (phase * spin.sigma_plus + std::conj(phase) * spin.sigma_minus);
    CHECK(max_norm((h - expected).matrix()) < 1e-15);
  }

  SUBCASE("Hermitian at arbitrary time and phase") {
    const MagicParams p = effective_ldp(0.02, 0.1);
    for (double t : {0.0, 1.3, 77.0})
      for (double phi : {0.0, 1.0, -2.2}) CHECK(magic_hamiltonian(0.01, p, -nu, nu, phi, t, s).is_hermitian());
  }

  SUBCASE("Delta = -nu averages to the Jaynes-Cummings form with |eta_eff|") {
    const MagicParams p = effective_ldp(1e-7, 1.7e-3);
    const double rabi = 0.01 * nu;
    // Choosing phi = theta + pi/2 removes the phase of i eta_eff.
    const double phi = p.theta + 0.5 * kPi;
    const Matrix avg = period_average(
        [&](double t) { return magic_hamiltonian(rabi, p, -nu, nu, phi, t, s).matrix(); }, 2.0 * kPi / nu);
    const Matrix jc = red_sideband_hamiltonian(LaserDrive{rabi, 0.0, 0.0, p.eta_prime}, s).matrix();
    CHECK(max_norm(avg - jc) < 1e-12 * max_norm(jc));
  }

  SUBCASE("kappa = 0 reproduces the first-order optical Hamiltonian") {
    const double eta = 0.08;
    const MagicParams p = effective_ldp(eta, 0.0);
    const TrapParams trap{nu, 1.0};
    for (double t : {0.0, 0.4, 3.3}) {
      const LaserDrive drive{0.2, -0.7, 0.6, eta};
      const Operator optical = full_interaction_hamiltonian(drive, trap, t, ExpansionOrder::first_order, s);
      // The optical phase enters as e^{+i phi}, the MAGIC phase as e^{-i phi}.
      const Operator magic = magic_hamiltonian(drive.rabi, p, drive.detuning, nu, -drive.phase, t, s);
      CHECK(max_norm((optical - magic).matrix()) < 1e-15);
    }
  }
}

TEST_CASE("Raman effective Lamb-Dicke parameter") {
  const TrapParams trap{2.0 * kPi * 1e6, 40.0 * kAtomicMass};
  const double k = 2.0 * kPi / 397e-9;
  const double z0 = trap.z0();
  const std::array<double, 3> z{0.0, 0.0, 1.0};

  CHECK(raman_effective_ldp({0, 0, k}, {0, 0, k}, z, trap) == 0.0);
  CHECK(raman_effective_ldp({0, 0, k}, {0, 0, -k}, z, trap) == doctest::Approx(2.0 * k * z0).epsilon(1e-14));

  // Beams at 90 degrees to each other, each 45 degrees from the axis.
  const double c = k / std::sqrt(2.0);
  CHECK(raman_effective_ldp({c, 0, c}, {c, 0, -c}, z, trap) == doctest::Approx(std::sqrt(2.0) * k * z0).epsilon(1e-14));
  CHECK_THROWS_AS(raman_effective_ldp({0, 0, k}, {0, 0, -k}, {0, 0, 2.0}, trap), Error);
}

TEST_CASE("EIT Hamiltonian") {
  SUBCASE("probe off, drive resonant: dressed doublet split by Omega1") {
    const EITConfig cfg{1.3, 0.0, 0.0, 0.4, 1.0, 0.5};
    const Operator h = eit_hamiltonian(cfg);
    CHECK(h.is_hermitian());
    Vector plus = Vector::Zero(3), minus = Vector::Zero(3);
    plus(kEitLevel1) = plus(kEitLevel2) = 1.0 / std::sqrt(2.0);
    minus(kEitLevel1) = 1.0 / std::sqrt(2.0);
    minus(kEitLevel2) = -1.0 / std::sqrt(2.0);
    CHECK((h.matrix() * plus - 0.65 * plus).norm() < 1e-15);
    CHECK((h.matrix() * minus + 0.65 * minus).norm() < 1e-15);
  }
  SUBCASE("no fields: diagonal") {
    const Matrix h = eit_hamiltonian(EITConfig{0.0, 0.0, 0.7, -0.2, 1.0, 0.5}).matrix();
    Matrix off = h;
    off.diagonal().setZero();
    CHECK(max_norm(off) == 0.0);
    CHECK(h(kEitLevel2, kEitLevel2).real() == -0.7);
    CHECK(h(kEitLevel3, kEitLevel3).real() == doctest::Approx(-0.9));
  }
  SUBCASE("dark state at two-photon resonance") {
    for (double delta : {0.0, 1.0, -2.5}) {
      const EITConfig cfg{1.0, 0.2, delta, delta, 1.0, 0.5};
      Vector dark(3);
      dark << cfg.omega3, 0.0, -cfg.omega1;
      dark.normalize();
      const Vector hd = eit_hamiltonian(cfg).matrix() * dark;
      CHECK(std::abs(hd(kEitLevel2)) < 1e-15);
    }
  }
  SUBCASE("validation") {
    CHECK_THROWS_AS(eit_hamiltonian(EITConfig{1.0, 0.1, 0.0, 0.0, 0.0, 0.5}), Error);
    CHECK_THROWS_AS(eit_hamiltonian(EITConfig{1.0, 0.1, 0.0, 0.0, 1.0, 1.5}), Error);
  }
}

TEST_CASE("dressed states") {
  const DressedStates resonant = dressed_states(1.0, 0.0);
  CHECK(resonant.splitting() == doctest::Approx(1.0).epsilon(1e-15));
  for (int i = 0; i < 2; ++i) {
    CHECK(std::abs(resonant.states[i](0)) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(std::abs(resonant.states[i](1)) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  }
  // Upper state is the symmetric combination.
  CHECK(resonant.states[1](1).real() > 0.0);

  const DressedStates bare = dressed_states(0.0, 0.8);
  CHECK(bare.splitting() == doctest::Approx(0.8).epsilon(1e-15));

  for (double omega : {0.3, 1.0, 2.0})
    for (double delta : {-1.5, 0.2, 1.0})
      CHECK(dressed_states(omega, delta).splitting() == doctest::Approx(std::hypot(omega, delta)).epsilon(1e-13));
}

TEST_CASE("every builder returns a Hermitian operator") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const HilbertSpace s(2, 15);
  const TrapParams trap{1.0, 1.0};
  for (int trial = 0; trial < 20; ++trial) {
    const LaserDrive drive{std::abs(u(rng)), u(rng), u(rng), 0.1 * std::abs(u(rng))};
    const double t = 10.0 * u(rng);
    CHECK(carrier_hamiltonian(drive, s).hermiticity_defect() < 1e-12);
    CHECK(blue_sideband_hamiltonian(drive, s).hermiticity_defect() < 1e-12);
    CHECK(red_sideband_hamiltonian(drive, s).hermiticity_defect() < 1e-12);
    CHECK(full_interaction_hamiltonian(drive, trap, t, ExpansionOrder::exact, s).hermiticity_defect() < 1e-12);
    CHECK(full_interaction_hamiltonian(drive, trap, t, ExpansionOrder::first_order, s).hermiticity_defect() < 1e-12);
    CHECK(magic_hamiltonian(drive.rabi, effective_ldp(drive.ldp, 0.05), drive.detuning, 1.0, drive.phase, t, s)
              .hermiticity_defect() < 1e-12);
    CHECK(eit_hamiltonian(EITConfig{std::abs(u(rng)), std::abs(u(rng)), u(rng), u(rng), 1.0, 0.5})
              .hermiticity_defect() < 1e-12);
  }
}
