#pragma once

// Test-only helpers: independent oracles and signal fitting.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "ioncool/quantum.hpp"

namespace ioncool::testing {

/// Angular frequency of P(t) = (1 - cos(w t)) / 2, from half-level
/// crossings followed by a golden-section least-squares refinement.
inline double fit_flopping_frequency(const std::vector<double>& t, const std::vector<double>& p) {
  int crossings = 0;
  for (std::size_t i = 1; i < p.size(); ++i)
    if ((p[i - 1] - 0.5) * (p[i] - 0.5) < 0) ++crossings;
  const double span = t.back() - t.front();
  const double guess = kPi * std::max(crossings, 1) / span;
  auto sse = [&](double w) {
    double s = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double r = p[i] - 0.5 * (1.0 - std::cos(w * t[i]));
      s += r * r;
    }
    return s;
  };
  // Coarse scan, then golden section around the best bracket.
  double lo = 0.7 * guess, hi = 1.3 * guess;
  const int scan = 2000;
  double best = lo, best_val = sse(lo);
  for (int k = 1; k <= scan; ++k) {
    const double w = lo + (hi - lo) * k / scan;
    const double v = sse(w);
    if (v < best_val) {
      best_val = v;
      best = w;
    }
  }
  const double width = (hi - lo) / scan;
  double a = best - width, b = best + width;
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - phi * (b - a), d = a + phi * (b - a);
  for (int it = 0; it < 200; ++it) {
    if (sse(c) < sse(d)) b = d; else a = c;
    c = b - phi * (b - a);
    d = a + phi * (b - a);
  }
  return 0.5 * (a + b);
}

/// Random Hermitian matrix with entries of order one.
inline Matrix random_hermitian(int dim, std::mt19937& rng) {
  std::normal_distribution<double> normal;
  Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = Complex{normal(rng), normal(rng)};
  return 0.5 * (m + m.adjoint());
}

inline Matrix random_matrix(int dim, std::mt19937& rng) {
  std::normal_distribution<double> normal;
  Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = Complex{normal(rng), normal(rng)};
  return m;
}

/// Truncated power series of exp(M); only for small, well-scaled M.
inline Matrix exp_series(const Matrix& m, int terms = 60) {
  Matrix out = Matrix::Identity(m.rows(), m.cols());
  Matrix term = out;
  for (int k = 1; k < terms; ++k) {
    term = (term * m / static_cast<double>(k)).eval();
    out += term;
  }
  return out;
}

/// Generalised Laguerre polynomial L_n^(alpha)(x) by three-term recurrence.
inline double laguerre(int n, double alpha, double x) {
  if (n == 0) return 1.0;
  double prev = 1.0, cur = 1.0 + alpha - x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

/// <m| exp(alpha a^dagger - alpha* a) |n> from the closed-form Laguerre expression.
inline Complex displacement_element(int m, int n, Complex alpha) {
  const double x = std::norm(alpha);
  const double gauss = std::exp(-0.5 * x);
  if (m >= n) {
    const double ratio = std::exp(0.5 * (std::lgamma(n + 1.0) - std::lgamma(m + 1.0)));
    return ratio * std::pow(alpha, m - n) * gauss * laguerre(n, m - n, x);
  }
  const double ratio = std::exp(0.5 * (std::lgamma(m + 1.0) - std::lgamma(n + 1.0)));
  return ratio * std::pow(-std::conj(alpha), n - m) * gauss * laguerre(m, n - m, x);
}

/// Mean of the thermal distribution renormalised on [0, n_max], by direct summation.
inline double truncated_thermal_mean(double nbar, int n_max) {
  const double r = nbar / (nbar + 1.0);
  double z = 0.0, s = 0.0, w = 1.0;
  for (int n = 0; n <= n_max; ++n) {
    z += w;
    s += n * w;
    w *= r;
  }
  return s / z;
}

}  // namespace ioncool::testing
