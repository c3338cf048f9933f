#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <initializer_list>
#include <random>
#include <vector>

#include "dunkl/rootsys.hpp"

namespace testing {

using dunkl::Vector;

inline Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

inline double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

/// Strictly decreasing vector of `m` entries with gaps in [gap_lo, gap_hi].
inline Vector random_chamber(std::mt19937_64& rng, int m, double gap_lo, double gap_hi,
                             double start = 0.0) {
  std::uniform_real_distribution<double> gap(gap_lo, gap_hi);
  Vector v(m);
  v(m - 1) = start;
  for (int i = m - 2; i >= 0; --i) v(i) = v(i + 1) + gap(rng);
  return v;
}

/// k = 1 closed form, computed here from scratch: (prod_{j<=n} j!) det(e^{l_i x_j}) / (V(l) V(x)).
inline double determinant_oracle(const Vector& l, const Vector& x) {
  const int m = static_cast<int>(l.size());
  Eigen::MatrixXd E(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) E(i, j) = std::exp(l(i) * x(j));
  double fact = 1.0, f = 1.0;
  for (int j = 1; j < m; ++j) fact *= (f *= j);
  double vl = 1.0, vx = 1.0;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      vl *= l(i) - l(j);
      vx *= x(i) - x(j);
    }
  return fact * E.determinant() / (vl * vx);
}

/// Series for the lower incomplete gamma function.
inline double lower_gamma_series(double a, double x) {
  double term = 1.0 / a, sum = term;
  for (int n = 1; n < 400 && std::abs(term) > 1e-18 * std::abs(sum); ++n) {
    term *= x / (a + n);
    sum += term;
  }
  return std::pow(x, a) * std::exp(-x) * sum;
}

inline double beta(double a, double b) {
  return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

/// Large-product limit of the spherical ratio along lambda = p (n, ..., 0), X = (n, ..., 0):
/// prod_{j=2}^{n+1} Gamma(jk) / Gamma(k).
inline double uniform_shape_limit(int n, double k) {
  double out = 0.0;
  for (int j = 2; j <= n + 1; ++j) out += std::lgamma(j * k) - std::lgamma(k);
  return std::exp(out);
}

constexpr double kE1At1 = 0.21938393439552027368;

}  // namespace testing
