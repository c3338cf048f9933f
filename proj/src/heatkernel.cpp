#include "dunkl/heatkernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dunkl/special.hpp"

namespace dunkl {

namespace {

void check_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("time t must be > 0");
}

SphericalOptions smooth_options(SphericalOptions q) {
  if (q.base == BaseCase::Exponential && q.nodes == 0) q.base = BaseCase::ConfluentRankOne;
  return q;
}

// Composite rule on [lo, inf) (or two-sided around c) with panels doubling in width.
void add_geometric_panels(Rule& out, int nodes, double start, double first, double direction,
                          double reach) {
  const Rule& ref = reference_jacobi(nodes, 0.0, 0.0);
  double a = 0.0, width = first;
  while (a < reach) {
    for (std::size_t i = 0; i < ref.size(); ++i) {
      out.x.push_back(start + direction * (a + width * ref.x[i]));
      out.w.push_back(width * ref.w[i]);
    }
    a += width;
    width = a;
  }
}

}  // namespace

double log_c_norm(const RootSystemA& rs) { return log_mehta_gaussian(rs); }

double log_heat_kernel(const RootSystemA& rs, double t, const Vector& X, const Vector& Y,
                       const SphericalOptions& quad, double log_c) {
  const int n = rs.rank();
  const double d = rs.dim();
  const double g = rs.gamma();
  double lam[16], arg[16];
  std::vector<double> lv, av;
  double* lp = lam;
  double* ap = arg;
  if (n + 1 > 16) {
    lv.resize(n + 1);
    av.resize(n + 1);
    lp = lv.data();
    ap = av.data();
  }
  for (int a = 0; a <= n; ++a) {
    lp[a] = X(rs.active()[a]);
    ap[a] = Y(rs.active()[a]) / (2.0 * t);
  }
  double extra = 0.0;
  for (int m : rs.inactive()) extra += X(m) * Y(m) / (2.0 * t);
  const double log_psi = log_spherical_active(rs.k(), n, lp, ap, quad);
  return -log_c - (g + 0.5 * d) * std::numbers::ln2 - (0.5 * d + g) * std::log(t) -
         (X.squaredNorm() + Y.squaredNorm()) / (4.0 * t) + log_psi + extra;
}

KernelValue heat_exact(const HeatParams& hp) {
  check_time(hp.t);
  const RootSystemA& rs = hp.rs;
  ChamberPoint cx(rs, hp.X), cy(rs, hp.Y);
  const double log_c = std::isnan(hp.log_c) ? log_c_norm(rs) : hp.log_c;
  const Vector arg = hp.Y / (2.0 * hp.t);
  KernelValue psi = spherical_exact(rs, hp.X, arg, hp.quad);
  const double d = rs.dim();
  const double g = rs.gamma();
  psi.log_value += -log_c - (g + 0.5 * d) * std::numbers::ln2 - (0.5 * d + g) * std::log(hp.t) -
                   (hp.X.squaredNorm() + hp.Y.squaredNorm()) / (4.0 * hp.t);
  return psi;
}

KernelValue heat_exact(const RootSystemA& rs, double t, const Vector& X, const Vector& Y,
                       const SphericalOptions& quad) {
  return heat_exact(HeatParams{rs, t, X, Y, std::numeric_limits<double>::quiet_NaN(), quad});
}

double log_heat_envelope(const RootSystemA& rs, double t, const Vector& X, const Vector& Y) {
  check_time(t);
  double out = -0.5 * rs.dim() * std::log(t) - (X - Y).squaredNorm() / (4.0 * t);
  for (const Root& a : rs.roots()) out -= rs.k() * std::log(t + pairing(a, X) * pairing(a, Y));
  return out;
}

double heat_envelope(const RootSystemA& rs, double t, const Vector& X, const Vector& Y) {
  return std::exp(log_heat_envelope(rs, t, X, Y));
}

double log_chamber_integral(const RootSystemA& rs, const std::function<double(const Vector&)>& log_f,
                            const ChamberProfile& profile) {
  const int n = rs.rank();
  const double k = rs.k();
  const double w = profile.width;
  if (!(w > 0.0)) throw DomainError("chamber profile width must be > 0");
  const Vector ca = active_part(rs, profile.center);

  std::vector<Rule> rules;
  // Mean of the active coordinates.
  const bool has_mean = !rs.is_trace_zero();
  if (has_mean) {
    const double mc = ca.mean();
    if (profile.heavy_tailed) {
      Rule r = legendre_rule(profile.nodes, mc - w, mc + w);
      add_geometric_panels(r, profile.nodes, mc + w, w, 1.0, profile.reach * w);
      add_geometric_panels(r, profile.nodes, mc - w, w, -1.0, profile.reach * w);
      rules.push_back(std::move(r));
    } else {
      rules.push_back(hermite_rule(profile.hermite_nodes, mc, w * std::sqrt(2.0 / (n + 1))));
    }
  }
  // Simple-root gaps; a panel touching the wall absorbs g^{2k}.
  std::vector<char> absorbed(n, 0);
  for (int i = 0; i < n; ++i) {
    const double gc = ca(i) - ca(i + 1);
    if (profile.heavy_tailed) {
      Rule r = jacobi_rule(profile.nodes, 2.0 * k, 0.0, 0.0, std::max(w, gc));
      const std::size_t head = r.size();
      add_geometric_panels(r, profile.nodes, std::max(w, gc), std::max(w, gc), 1.0, profile.reach * w);
      for (std::size_t j = head; j < r.size(); ++j) r.w[j] *= std::pow(r.x[j], 2.0 * k);
      absorbed[i] = 1;
      rules.push_back(std::move(r));
    } else {
      const double lo = std::max(0.0, gc - 12.0 * w);
      const double hi = gc + 12.0 * w;
      if (lo == 0.0) {
        rules.push_back(jacobi_rule(profile.nodes, 2.0 * k, 0.0, 0.0, hi));
        absorbed[i] = 1;
      } else {
        rules.push_back(legendre_rule(profile.nodes, lo, hi));
      }
    }
  }
  for (int m : rs.inactive()) {
    const double c = profile.center(m);
    if (profile.heavy_tailed) {
      Rule r = legendre_rule(profile.nodes, c - w, c + w);
      add_geometric_panels(r, profile.nodes, c + w, w, 1.0, profile.reach * w);
      add_geometric_panels(r, profile.nodes, c - w, w, -1.0, profile.reach * w);
      rules.push_back(std::move(r));
    } else {
      rules.push_back(hermite_rule(profile.hermite_nodes, c, w * std::sqrt(2.0)));
    }
  }

  Vector y(rs.storage_size());
  const double log_jac = rs.is_trace_zero() ? -0.5 * std::log(n + 1.0) : 0.0;
  auto integrand = [&](std::span<const double> v) {
    int pos = 0;
    const double mean = has_mean ? v[pos++] : 0.0;
    double shift = 0.0;
    for (int i = 0; i < n; ++i) shift += v[pos + i] * (i + 1.0) / (n + 1.0);
    double acc = mean - shift;
    y(rs.active()[n]) = acc;
    for (int a = n - 1; a >= 0; --a) {
      acc += v[pos + a];
      y(rs.active()[a]) = acc;
    }
    double lw = 0.0;
    for (int i = 0; i < n; ++i)
      if (absorbed[i]) lw -= 2.0 * k * std::log(v[pos + i]);
    pos += n;
    for (int m : rs.inactive()) y(m) = v[pos++];
    return log_f(y) + log_weight(rs, y) + lw;
  };
  return log_tensor_sum(rules, integrand) + log_jac;
}

double heat_mass(const RootSystemA& rs, double t, const Vector& X, const SphericalOptions& quad,
                 double log_c, int nodes) {
  check_time(t);
  const SphericalOptions q = smooth_options(quad);
  const double lc = std::isnan(log_c) ? log_c_norm(rs) : log_c;
  ChamberProfile prof{X, std::sqrt(2.0 * t), false, nodes};
  const double li = log_chamber_integral(
      rs, [&](const Vector& Y) { return log_heat_kernel(rs, t, X, Y, q, lc); }, prof);
  return rs.weyl_order() * std::exp(li);
}

double calibrate_log_c_norm(const RootSystemA& rs, int nodes) {
  const Vector zero = Vector::Zero(rs.storage_size());
  return std::log(heat_mass(rs, 1.0, zero, {}, 0.0, nodes));
}

double chapman_kolmogorov_check(const RootSystemA& rs, double t, double s, const Vector& X,
                                const Vector& Z, int nodes) {
  check_time(t);
  check_time(s);
  if (rs.rank() > 2) throw DomainError("Chapman-Kolmogorov check supports rank 1 and 2");
  ChamberPoint cx(rs, X), cz(rs, Z);
  const SphericalOptions q = smooth_options({});
  const double lc = log_c_norm(rs);
  const Vector center = (s * X + t * Z) / (t + s);
  ChamberProfile prof{center, std::sqrt(2.0 * std::max(t, s)), false, nodes};
  const double li = log_chamber_integral(
      rs,
      [&](const Vector& Y) {
        return log_heat_kernel(rs, t, X, Y, q, lc) + log_heat_kernel(rs, s, Y, Z, q, lc);
      },
      prof);
  const double direct = log_heat_kernel(rs, t + s, X, Z, q, lc);
  return std::abs(std::expm1(std::log(rs.weyl_order()) + li - direct));
}

double generator_check(const RootSystemA& rs, double t, const Vector& X, const Vector& Y, double h) {
  check_time(t);
  if (rs.rank() != 1) throw DomainError("generator check is implemented for rank one");
  if (!(h > 0.0) || h < 1e-12) throw DomainError("finite-difference step underflow");
  ChamberPoint cy(rs, Y);
  const int i = rs.active()[0], j = rs.active()[1];
  const double gap = X(i) - X(j);
  if (!(gap > 4.0 * h)) throw DomainError("generator check needs X strictly inside the chamber");
  if (!(t > 4.0 * h)) throw DomainError("generator check needs t well above the step");
  SphericalOptions q;
  q.base = BaseCase::ConfluentRankOne;
  const double lc = log_c_norm(rs);
  const double l0 = log_heat_kernel(rs, t, X, Y, q, lc);
  auto rel = [&](double tt, const Vector& xx) {
    return std::exp(log_heat_kernel(rs, tt, xx, Y, q, lc) - l0);
  };
  const double dt = (rel(t + h, X) - rel(t - h, X)) / (2.0 * h);
  double lap = 0.0;
  double grad_i = 0.0, grad_j = 0.0;
  for (int m = 0; m < rs.storage_size(); ++m) {
    Vector xp = X, xm = X;
    xp(m) += h;
    xm(m) -= h;
    const double fp = rel(t, xp), fm = rel(t, xm);
    lap += (fp - 2.0 + fm) / (h * h);
    if (m == i) grad_i = (fp - fm) / (2.0 * h);
    if (m == j) grad_j = (fp - fm) / (2.0 * h);
  }
  const double lp = lap + 2.0 * rs.k() * (grad_i - grad_j) / gap;
  const double scale = std::max({std::abs(dt), std::abs(lp), 1e-300});
  return std::abs(dt - lp) / scale;
}

}  // namespace dunkl
