#include "dunkl/stable.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "dunkl/heatkernel.hpp"
#include "dunkl/quad.hpp"

namespace dunkl {

namespace {

constexpr double kPi = std::numbers::pi;

void check_args(double s, double t) {
  if (!(s > 0.0 && s < 2.0)) throw DomainError("stability index s must lie in (0, 2)");
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("time t must be > 0");
}

// log A(phi) of the Kanter/Zolotarev representation.
double log_kanter_a(double beta, double phi) {
  return (beta * std::log(std::sin(beta * phi)) + (1.0 - beta) * std::log(std::sin((1.0 - beta) * phi)) -
          std::log(std::sin(phi))) /
         (1.0 - beta);
}

// log f(x) for the standard density with Laplace transform e^{-z^beta}.
double log_standard_kanter(double beta, double x) {
  const double c = std::pow(x, -beta / (1.0 - beta));
  if (c < 0.25) {
    // Convergent large-x series.
    double sum = 0.0;
    const double lx = std::log(x);
    for (int m = 1; m < 400; ++m) {
      const double mag = std::lgamma(m * beta + 1.0) - std::lgamma(m + 1.0) - (m * beta + 1.0) * lx;
      const double term = std::exp(mag) * std::sin(kPi * m * beta) * (m % 2 ? 1.0 : -1.0);
      sum += term;
      if (m > 4 && std::exp(mag) < 1e-18 * std::abs(sum)) break;
    }
    if (!(sum > 0.0)) throw AccuracyError("subordinator series lost positivity");
    return std::log(sum / kPi);
  }
  const double log_a0 = (beta * std::log(beta) + (1.0 - beta) * std::log(1.0 - beta)) / (1.0 - beta);
  const double a0 = std::exp(log_a0);
  Grading g;
  g.panel_nodes = 16;
  g.lo_scale = std::min(0.5, 0.5 / std::sqrt(c * a0));
  g.hi_scale = 0.25 * std::min(1.0, std::pow(c, 1.0 - beta));
  const Rule r = graded_rule(48, 0.0, 0.0, 0.0, kPi, g);
  LogSum acc;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double la = log_kanter_a(beta, r.x[i]);
    const double a = std::exp(la);
    acc.add(std::log(r.w[i]) + la - c * (a - a0));
  }
  return std::log(beta / (1.0 - beta)) - std::log(x) / (1.0 - beta) - std::log(kPi) + acc.log() -
         c * a0;
}

// Sine-form inversion of the Laplace transform along the rotated ray, in w = x^beta.
double standard_inversion(double beta, double x) {
  const double cb = std::cos(kPi * beta), sb = std::sin(kPi * beta);
  auto f = [&](double w) {
    if (w <= 0.0) return 0.0;
    const double xx = std::pow(w, 1.0 / beta);
    return std::exp(-x * xx - w * cb) * std::sin(w * sb) * std::pow(w, 1.0 / beta - 1.0) / beta;
  };
  const double half_period = std::min(kPi / sb, 0.5 * std::pow(x, -beta));
  const Rule& ref = reference_jacobi(24, 0.0, 0.0);
  double sum = 0.0, a = 0.0;
  for (int panel = 0; panel < 200000; ++panel) {
    double part = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) part += ref.w[i] * f(a + half_period * ref.x[i]);
    part *= half_period;
    sum += part;
    a += half_period;
    const double envelope = std::exp(-x * std::pow(a, 1.0 / beta) - a * cb) *
                            std::pow(a, 1.0 / beta - 1.0) / beta;
    if (a * cb + x * std::pow(a, 1.0 / beta) > 60.0 && envelope * half_period < 1e-18 * std::abs(sum))
      return sum / kPi;
  }
  throw AccuracyError("subordinator inversion integral did not converge");
}

}  // namespace

double log_subordinator_density(double s, double t, double u, SubordinatorMethod method) {
  check_args(s, t);
  if (!(u > 0.0)) throw DomainError("subordinator density needs u > 0");
  const double beta = 0.5 * s;
  if (method == SubordinatorMethod::ClosedForm && s != 1.0)
    throw DomainError("the closed-form subordinator density exists only for s = 1");
  if (s == 1.0 && (method == SubordinatorMethod::Auto || method == SubordinatorMethod::ClosedForm))
    return std::log(t) - 0.5 * std::log(4.0 * kPi) - 1.5 * std::log(u) - t * t / (4.0 * u);
  // eta_t(u) = t^{-1/beta} f(u t^{-1/beta})
  const double scale = std::pow(t, -1.0 / beta);
  const double x = u * scale;
  if (method == SubordinatorMethod::Inversion) {
    const double v = standard_inversion(beta, x);
    if (!(v > 0.0)) throw AccuracyError("subordinator inversion returned a non-positive value");
    return std::log(scale) + std::log(v);
  }
  return std::log(scale) + log_standard_kanter(beta, x);
}

double subordinator_density(double s, double t, double u, SubordinatorMethod method) {
  return std::exp(log_subordinator_density(s, t, u, method));
}

SubordinatorRatios subordinator_ratios(double s, double t, double u) {
  const double le = log_subordinator_density(s, t, u);
  const double lp = std::log(t) - (1.0 + 0.5 * s) * std::log(u);
  SubordinatorRatios r;
  r.upper = std::exp(le - lp + t * std::pow(u, -0.5 * s));
  r.tail = u >= std::pow(t, 2.0 / s) ? std::exp(le - lp) : std::numeric_limits<double>::quiet_NaN();
  return r;
}

std::pair<bool, bool> subordinator_bounds_check(double s, double t, double u,
                                                const SubordinatorConstants& c) {
  const SubordinatorRatios r = subordinator_ratios(s, t, u);
  const bool upper = r.upper <= c.upper_c;
  const bool tail = std::isnan(r.tail) || (r.tail >= c.tail_lo && r.tail <= c.tail_hi);
  return {upper, tail};
}

double log_euclid_stable_envelope(int d, double s, double t, const Vector& X, const Vector& Y) {
  check_args(s, t);
  return std::log(t) - 0.5 * (d + s) * std::log(std::pow(t, 2.0 / s) + (X - Y).squaredNorm());
}

double euclid_stable_envelope(int d, double s, double t, const Vector& X, const Vector& Y) {
  return std::exp(log_euclid_stable_envelope(d, s, t, X, Y));
}

double euclid_stable_min_form(int d, double s, double t, const Vector& X, const Vector& Y) {
  check_args(s, t);
  const double D2 = (X - Y).squaredNorm();
  const double near = std::pow(t, -d / s);
  if (D2 == 0.0) return near;
  return std::min(near, t * std::pow(D2, -0.5 * (d + s)));
}

double log_stable_envelope(const RootSystemA& rs, double s, double t, const Vector& X,
                           const Vector& Y) {
  const double base = std::pow(t, 2.0 / s) + (X - Y).squaredNorm();
  double out = log_euclid_stable_envelope(rs.dim(), s, t, X, Y);
  for (const Root& a : rs.roots()) out -= rs.k() * std::log(base + pairing(a, X) * pairing(a, Y));
  return out;
}

double stable_envelope(const RootSystemA& rs, double s, double t, const Vector& X, const Vector& Y) {
  return std::exp(log_stable_envelope(rs, s, t, X, Y));
}

double log_stable_envelope_reflected(const RootSystemA& rs, double s, double t, const Vector& X,
                                     const Vector& Y) {
  const double ts = std::pow(t, 2.0 / s);
  double out = log_euclid_stable_envelope(rs.dim(), s, t, X, Y);
  for (const Root& a : rs.roots()) out -= rs.k() * std::log(ts + reflected_distance_sq(a, X, Y));
  return out;
}

double log_stable_kernel(const RootSystemA& rs, double s, double t, const Vector& X,
                         const Vector& Y, const SphericalOptions& quad, SubordinatorMethod method,
                         int panel_nodes) {
  const double beta = 0.5 * s;
  const double u0 = std::pow(t, 2.0 / s);
  const double D2 = (X - Y).squaredNorm();
  const double lc = log_c_norm(rs);
  // Below x_lo the subordinator density is below e^{-60} of its scale.
  const double log_a0 = (beta * std::log(beta) + (1.0 - beta) * std::log(1.0 - beta)) / (1.0 - beta);
  const double v_lo = (1.0 - beta) / beta * (log_a0 - std::log(60.0));
  // Beyond the split the integrand decays like u^{-q}, q = beta + d/2 + gamma.
  const double q = beta + 0.5 * rs.dim() + rs.gamma();
  const double v_hi = std::max(0.0, std::log(std::max(D2, 1e-300) / u0)) + 30.0 / q + 2.0;
  const double width = 0.5;
  const Rule& ref = reference_jacobi(panel_nodes, 0.0, 0.0);

  LogSum acc;
  auto add_panel = [&](double a, double b) {
    for (std::size_t i = 0; i < ref.size(); ++i) {
      const double v = a + (b - a) * ref.x[i];
      const double u = u0 * std::exp(v);
      acc.add(std::log((b - a) * ref.w[i]) + std::log(u) + log_heat_kernel(rs, u, X, Y, quad, lc) +
              log_subordinator_density(s, t, u, method));
    }
  };
  const int below = static_cast<int>(std::ceil(-v_lo / width));
  for (int p = 0; p < below; ++p) add_panel(-(p + 1) * width, -p * width);
  const int above = static_cast<int>(std::ceil(v_hi / width));
  for (int p = 0; p < above; ++p) add_panel(p * width, (p + 1) * width);
  // Power-law tail past the last panel: integrand ~ e^{-q v}.
  const double v_end = above * width;
  const double u_end = u0 * std::exp(v_end);
  acc.add(std::log(u_end) + log_heat_kernel(rs, u_end, X, Y, quad, lc) +
          log_subordinator_density(s, t, u_end, method) - std::log(q));
  return acc.log();
}

KernelValue stable_exact(const StableParams& sp) {
  check_args(sp.s, sp.t);
  ChamberPoint cx(sp.rs, sp.X), cy(sp.rs, sp.Y);
  if (sp.panel_nodes < 4) throw DomainError("stable panel_nodes must be >= 4");
  SphericalOptions q = sp.quad;
  if (q.base == BaseCase::Exponential && q.nodes == 0) q.base = BaseCase::ConfluentRankOne;
  KernelValue kv;
  kv.log_value = log_stable_kernel(sp.rs, sp.s, sp.t, sp.X, sp.Y, q, sp.method, sp.panel_nodes);
  const double coarse =
      log_stable_kernel(sp.rs, sp.s, sp.t, sp.X, sp.Y, q, sp.method, sp.panel_nodes / 2);
  kv.rel_error = std::abs(std::expm1(coarse - kv.log_value));
  return kv;
}

KernelValue stable_exact(const RootSystemA& rs, double s, double t, const Vector& X,
                         const Vector& Y) {
  StableParams sp{rs, s, t, X, Y, {}, SubordinatorMethod::Auto, 10};
  return stable_exact(sp);
}

double stable_mass(const RootSystemA& rs, double s, double t, const Vector& X, int nodes) {
  check_args(s, t);
  SphericalOptions q;
  q.base = BaseCase::ConfluentRankOne;
  ChamberProfile prof{X, std::pow(t, 1.0 / s), true, nodes};
  const double li = log_chamber_integral(
      rs, [&](const Vector& Y) { return log_stable_kernel(rs, s, t, X, Y, q, SubordinatorMethod::Auto, 6); },
      prof);
  return rs.weyl_order() * std::exp(li);
}

}  // namespace dunkl
