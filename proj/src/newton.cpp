#include "dunkl/newton.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "dunkl/heatkernel.hpp"

namespace dunkl {

namespace {

double distance_sq_checked(const Vector& X, const Vector& Y) {
  const double d2 = (X - Y).squaredNorm();
  if (!(d2 > 0.0)) throw DomainError("Newton kernel is singular on the diagonal X = Y");
  return d2;
}

double log_newton_with(const RootSystemA& rs, const Vector& X, const Vector& Y,
                       const SphericalOptions& q, int panel_nodes, std::int64_t* evals) {
  const double D2 = distance_sq_checked(X, Y);
  const double d = rs.dim();
  const double g = rs.gamma();
  const double p = 0.5 * d + g - 2.0;
  if (!(p > -1.0))
    throw DomainError("Newton integral diverges at t -> infinity: d/2 + gamma must exceed 1");
  double max_aa = 0.0;
  for (const Root& a : rs.roots()) max_aa = std::max(max_aa, pairing(a, X) * pairing(a, Y));
  // Past u* the heat factor starts to decay like a power of u.
  const double u_star = max_aa > 0.0 ? D2 / (2.0 * max_aa) : 1.0;
  const double upper = laguerre_cutoff(std::max(p, 0.0), 42.0);
  const double head = std::clamp(0.25 * u_star, 1e-12, 0.25);
  const Rule rule = semi_infinite_rule(panel_nodes, p, head, upper);
  const double lc = log_c_norm(rs);
  const double xy = X.dot(Y);

  const int n = rs.rank();
  std::vector<double> lam(n + 1), arg(n + 1);
  for (int a = 0; a <= n; ++a) lam[a] = X(rs.active()[a]);
  double inactive_xy = 0.0;
  for (int m : rs.inactive()) inactive_xy += X(m) * Y(m);

  LogSum acc;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double u = rule.x[i];
    const double t = D2 / (4.0 * u);
    for (int a = 0; a <= n; ++a) arg[a] = Y(rs.active()[a]) / (2.0 * t);
    const double log_psi = log_spherical_active(rs.k(), n, lam.data(), arg.data(), q, evals);
    const double log_phi = log_psi + inactive_xy / (2.0 * t) - xy / (2.0 * t);
    acc.add(std::log(rule.w[i]) - u + log_phi);
  }
  return -lc - (g + 0.5 * d) * std::numbers::ln2 + (0.5 * d + g - 1.0) * std::log(4.0 / D2) +
         acc.log();
}

void require_planar(const RootSystemA& rs, int rank) {
  if (rs.dim() != 2 || rs.rank() != rank)
    throw DomainError(rank == 1 ? "planar rank-one envelope needs d = 2 and rank 1"
                                : "planar rank-two envelope needs the trace-zero A_2 (d = 2)");
}

}  // namespace

KernelValue newton_exact(const NewtonParams& np) {
  ChamberPoint cx(np.rs, np.X), cy(np.rs, np.Y);
  if (np.panel_nodes < 4) throw DomainError("Newton panel_nodes must be >= 4");
  SphericalOptions q = np.quad;
  if (q.base == BaseCase::Exponential && q.nodes == 0) q.base = BaseCase::ConfluentRankOne;
  KernelValue kv;
  kv.log_value = log_newton_with(np.rs, np.X, np.Y, q, np.panel_nodes, &kv.evaluations);
  std::int64_t scratch = 0;
  const double coarse = log_newton_with(np.rs, np.X, np.Y, q, np.panel_nodes / 2, &scratch);
  kv.rel_error = std::abs(std::expm1(coarse - kv.log_value));
  return kv;
}

KernelValue newton_exact(const RootSystemA& rs, const Vector& X, const Vector& Y) {
  return newton_exact(NewtonParams{rs, X, Y, {}, 16});
}

double log_newton_envelope_d3(const RootSystemA& rs, const Vector& X, const Vector& Y) {
  if (rs.dim() < 3) throw DomainError("this envelope needs d >= 3");
  const double D2 = distance_sq_checked(X, Y);
  double out = 0.5 * (2.0 - rs.dim()) * std::log(D2);
  for (const Root& a : rs.roots()) out -= rs.k() * std::log(reflected_distance_sq(a, X, Y));
  return out;
}

double newton_envelope_d3(const RootSystemA& rs, const Vector& X, const Vector& Y) {
  return std::exp(log_newton_envelope_d3(rs, X, Y));
}

double newton_d2_a1_numerator(const RootSystemA& rs, const Vector& X, const Vector& Y) {
  const double D2 = distance_sq_checked(X, Y);
  return std::log1p(reflected_distance_sq(rs.roots()[0], X, Y) / D2);
}

double log_newton_envelope_d2_a1(const RootSystemA& rs, const Vector& X, const Vector& Y) {
  require_planar(rs, 1);
  const double num = newton_d2_a1_numerator(rs, X, Y);
  return std::log(num) - rs.k() * std::log(reflected_distance_sq(rs.roots()[0], X, Y));
}

double newton_envelope_d2_a1(const RootSystemA& rs, const Vector& X, const Vector& Y) {
  return std::exp(log_newton_envelope_d2_a1(rs, X, Y));
}

double log_newton_envelope_d2_a2(const RootSystemA& rs, const Vector& X, const Vector& Y) {
  require_planar(rs, 2);
  const double D2 = distance_sq_checked(X, Y);
  const auto& act = rs.active();
  const Root simple[2] = {{act[0], act[1]}, {act[1], act[2]}};
  const double r_min =
      std::min(reflected_distance_sq(simple[0], X, Y), reflected_distance_sq(simple[1], X, Y));
  double out = std::log(std::log1p(r_min / D2));
  for (const Root& a : rs.roots()) out -= rs.k() * std::log(reflected_distance_sq(a, X, Y));
  return out;
}

double newton_envelope_d2_a2(const RootSystemA& rs, const Vector& X, const Vector& Y) {
  return std::exp(log_newton_envelope_d2_a2(rs, X, Y));
}

double log_newton_envelope(const RootSystemA& rs, const Vector& X, const Vector& Y) {
  if (rs.dim() >= 3) return log_newton_envelope_d3(rs, X, Y);
  if (rs.rank() == 1) return log_newton_envelope_d2_a1(rs, X, Y);
  return log_newton_envelope_d2_a2(rs, X, Y);
}

}  // namespace dunkl
