#include "dunkl/special.hpp"

#include <cmath>
#include <numbers>

#include "dunkl/error.hpp"

namespace dunkl {

namespace {

constexpr double kSeriesLimit = 50.0;

// Power series, all terms positive for z >= 0.
double log_kummer_series(double k, double z) {
  double term = 1.0, sum = 1.0;
  for (int s = 0; s < 10000; ++s) {
    term *= (k + s) / (2.0 * k + s) * z / (s + 1.0);
    sum += term;
    if (term < 1e-17 * sum) return std::log(sum);
  }
  throw AccuracyError("Kummer series did not converge");
}

// Large-z expansion; the exponentially small companion term is dropped.
double log_kummer_asymptotic(double k, double z) {
  double term = 1.0, sum = 1.0, prev = 1.0;
  for (int s = 0; s < 200; ++s) {
    term *= (k + s) * (1.0 - k + s) / ((s + 1.0) * z);
    if (std::abs(term) > std::abs(prev) && s > 0) break;
    sum += term;
    prev = term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return z + std::lgamma(2.0 * k) - std::lgamma(k) - k * std::log(z) + std::log(sum);
}

}  // namespace

double log_kummer_k2k(double k, double z) {
  if (!(k > 0.0)) throw DomainError("Kummer function needs k > 0");
  if (z < 0.0) return z + log_kummer_k2k(k, -z);
  if (z < kSeriesLimit + 2.0 * k) return log_kummer_series(k, z);
  return log_kummer_asymptotic(k, z);
}

double lower_gamma(double k, double x) {
  if (!(k > 0.0)) throw DomainError("lower_gamma needs k > 0");
  if (x < 0.0) throw DomainError("lower_gamma needs x >= 0");
  if (x == 0.0) return 0.0;
  if (x < k + 1.0) {
    // x^k e^{-x} sum x^n / (k (k+1) ... (k+n))
    double term = 1.0 / k, sum = term;
    for (int n = 1; n < 100000; ++n) {
      term *= x / (k + n);
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    return std::exp(k * std::log(x) - x) * sum;
  }
  // Upper tail by Lentz continued fraction.
  const double tiny = 1e-300;
  double b = x + 1.0 - k, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i < 100000; ++i) {
    const double an = -i * (i - k);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  const double upper = std::exp(k * std::log(x) - x) * h;
  return std::tgamma(k) - upper;
}

double log_mehta_gaussian(const RootSystemA& rs) {
  const double k = rs.k();
  double lg = 0.5 * rs.dim() * std::log(2.0 * std::numbers::pi);
  for (int j = 1; j <= rs.rank() + 1; ++j) lg += std::lgamma(1.0 + j * k) - std::lgamma(1.0 + k);
  return lg;
}

}  // namespace dunkl
