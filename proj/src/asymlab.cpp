#include "dunkl/asymlab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "dunkl/quad.hpp"
#include "dunkl/special.hpp"

namespace dunkl {

namespace {

constexpr double kWindowDecay = 46.0;

double log_prod_shift(double k, double a, std::span<const double> b) {
  double out = 0.0;
  for (double bi : b) out += k * std::log(a + bi);
  return out;
}

void check_k(double k) {
  if (!(k > 0.0) || !std::isfinite(k)) throw DomainError("multiplicity k must be > 0");
}

}  // namespace

std::string to_string(ClaimId id) {
  switch (id) {
    case ClaimId::LemmaA: return "lemma_A";
    case ClaimId::LemmaAi: return "lemma_ai";
    case ClaimId::LemmaA1: return "lemma_a1";
    case ClaimId::LemmaA2: return "lemma_a2";
    case ClaimId::PropTruncated: return "prop_truncated";
    case ClaimId::PropIn: return "prop_In";
  }
  return "?";
}

ClaimId claim_from_string(const std::string& name) {
  for (ClaimId id : {ClaimId::LemmaA, ClaimId::LemmaAi, ClaimId::LemmaA1, ClaimId::LemmaA2,
                     ClaimId::PropTruncated, ClaimId::PropIn})
    if (to_string(id) == name) return id;
  throw DomainError("unknown claim id '" + name + "'");
}

double lemma_A_ratio(double k, double x) {
  check_k(k);
  if (!(x >= 0.0)) throw DomainError("lemma_A needs x >= 0");
  if (x == 0.0) return 1.0 / k;
  if (std::isinf(x)) return std::tgamma(k);
  return lower_gamma(k, x) * std::pow((1.0 + x) / x, k);
}

std::pair<double, double> lemma_A_limits(double k) {
  check_k(k);
  return {1.0 / k, std::tgamma(k)};
}

double log_algebraic_laplace(double k, double p, double a, std::span<const double> b,
                             int panel_nodes) {
  check_k(k);
  if (!(a >= 0.0)) throw DomainError("a must be >= 0");
  for (double bi : b) {
    if (!(bi >= 0.0)) throw DomainError("b_i must be >= 0");
    if (!(a + bi > 0.0)) throw DomainError("a + b_i must be > 0");
  }
  if (a == 0.0) {
    const double pe = p - k * static_cast<double>(b.size());
    if (!(pe > -1.0)) throw DomainError("integral diverges at u = 0");
    double out = std::lgamma(pe + 1.0);
    for (double bi : b) out -= k * std::log(bi);
    return out;
  }
  if (!(p > -1.0)) throw DomainError("integral diverges at u = 0");
  double knee = std::numeric_limits<double>::infinity();
  for (double bi : b)
    if (bi > 0.0) knee = std::min(knee, a / bi);
  const double head = std::clamp(0.25 * knee, 1e-300, 0.25);
  const Rule rule = semi_infinite_rule(panel_nodes, p, head, laguerre_cutoff(std::max(p, 0.0)));
  return log_integrate(rule, [&](double u) {
    double v = -u;
    for (double bi : b) v -= k * std::log(a + bi * u);
    return v;
  });
}

double lemma_ai_ratio(double k, double N, double a, std::span<const double> b) {
  check_k(k);
  if (b.empty()) throw DomainError("lemma_ai needs at least one b_i");
  if (!(N > k * static_cast<double>(b.size()) - 1.0))
    throw DomainError("lemma_ai needs N > k m - 1 for convergence");
  return std::exp(log_algebraic_laplace(k, N, a, b) + log_prod_shift(k, a, b));
}

double lemma_a1_ratio(double k, double a, double b) {
  check_k(k);
  if (!(a > 0.0)) throw DomainError("lemma_a1 needs a > 0");
  if (!(b >= 0.0)) throw DomainError("lemma_a1 needs b >= 0");
  const double bs[1] = {b};
  return std::exp(log_algebraic_laplace(k, k - 1.0, a, bs) + log_prod_shift(k, a, bs)) /
         std::log(2.0 + b / a);
}

namespace {

void check_a2(double k, double b1, double b2, double b3) {
  check_k(k);
  if (!(b1 >= 0.0) || !(b1 <= b2) || !(b2 <= b3))
    throw DomainError("lemma_a2 needs 0 <= b1 <= b2 <= b3");
}

}  // namespace

double lemma_a2_ratio(double k, double a, double b1, double b2, double b3) {
  check_a2(k, b1, b2, b3);
  if (!(a > 0.0))
    throw DomainError("lemma_a2 at a = 0: both sides diverge; use lemma_a2_blowup_rate");
  const double bs[3] = {b1, b2, b3};
  return std::exp(log_algebraic_laplace(k, 3.0 * k - 1.0, a, bs) + log_prod_shift(k, a, bs)) /
         std::log(2.0 + b1 / a);
}

double lemma_a2_blowup_rate(double k, double a, double b1, double b2, double b3) {
  check_a2(k, b1, b2, b3);
  if (!(a > 0.0) || !(a < b1)) throw DomainError("blow-up rate needs 0 < a < b1");
  const double bs[3] = {b1, b2, b3};
  return std::exp(log_algebraic_laplace(k, 3.0 * k - 1.0, a, bs) + log_prod_shift(k, a, bs)) /
         std::log(b1 / a);
}

namespace {

struct PropSetup {
  int n = 0;
  double k = 1.0;
  std::vector<double> lam;
  std::vector<double> lam0;
  std::vector<double> x;
};

PropSetup prop_setup(const RootSystemA& rs, const Vector& lambda, const Vector& X, bool truncated) {
  ChamberPoint cl(rs, lambda), cx(rs, X);
  if (!in_chamber(rs, X, true)) throw DomainError("X must lie in the open chamber");
  PropSetup s;
  s.n = rs.rank();
  s.k = rs.k();
  const Vector la = active_part(rs, lambda), xa = active_part(rs, X);
  s.lam.assign(la.data(), la.data() + la.size());
  s.x.assign(xa.data(), xa.data() + xa.size());
  for (int i = 0; i < s.n; ++i) s.lam0.push_back(s.lam[i] - s.lam[s.n]);
  if (truncated) {
    const double last = s.x[s.n - 1] - s.x[s.n];
    for (int i = 0; i + 1 < s.n; ++i)
      if (s.x[i] - s.x[i + 1] > last * (1.0 + 1e-12))
        throw DomainError("x_n - x_{n+1} must be the largest simple gap");
  }
  return s;
}

double log_prop_integral(const PropSetup& s, int nodes, bool exact_inner, bool truncated) {
  const int n = s.n;
  const double km1 = s.k - 1.0;
  const double rate_min = s.lam0[n - 1];
  std::vector<Rule> rules(n);
  for (int i = 0; i < n; ++i) {
    const bool cut = truncated && i == n - 1;
    const double lo = cut ? 0.5 * (s.x[i] + s.x[i + 1]) : s.x[i + 1];
    const double hi = s.x[i];
    const double len = hi - lo;
    Grading g;
    g.panel_nodes = std::max(4, nodes / 3);
    if (s.lam0[i] * len > 4.0) g.hi_scale = 1.0 / s.lam0[i];
    if (rate_min * len > 2.0 * kWindowDecay) g.hi_window = kWindowDecay / rate_min;
    rules[i] = graded_rule(nodes, cut ? 0.0 : km1, km1, lo, hi, g);
  }
  SphericalOptions inner;
  inner.base = BaseCase::ConfluentRankOne;
  double base = 0.0;
  for (int i = 0; i < n; ++i) base -= s.lam0[i] * s.x[i];

  auto log_f = [&](std::span<const double> y) {
    double v = base;
    if (km1 != 0.0) {
      double far = 0.0;
      for (int i = 0; i < n; ++i) {
        for (int m = 0; m < i; ++m) far += std::log(s.x[m] - y[i]);
        for (int m = i + 2; m <= n; ++m) far += std::log(y[i] - s.x[m]);
      }
      if (truncated) far += std::log(y[n - 1] - s.x[n]);
      v += km1 * far;
    }
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) v += std::log(y[i] - y[j]);
    if (exact_inner) {
      v += log_spherical_active(s.k, n - 1, s.lam0.data(), y.data(), inner);
    } else {
      for (int i = 0; i < n; ++i) v += s.lam0[i] * y[i];
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          v -= s.k * std::log1p((s.lam0[i] - s.lam0[j]) * (y[i] - y[j]));
    }
    return v;
  };
  return log_tensor_sum(rules, log_f);
}

KernelValue prop_value(const PropSetup& s, const PropInOptions& opt, bool truncated) {
  if (opt.nodes != 0 && opt.nodes < 2) throw DomainError("nodes must be >= 2");
  const int nodes = opt.nodes > 0 ? opt.nodes : default_nodes(s.n);
  KernelValue kv;
  const double main = log_prop_integral(s, nodes, opt.exact_inner, truncated);
  const ErrorEstimate mode = resolve_error_mode(opt.error, s.n);
  if (mode == ErrorEstimate::None) {
    kv.log_value = main;
    return kv;
  }
  const bool refine = mode == ErrorEstimate::Refine;
  const double other =
      log_prop_integral(s, refine ? 2 * nodes : std::max(2, nodes / 2), opt.exact_inner, truncated);
  kv.log_value = refine ? other : main;
  kv.rel_error = std::abs(std::expm1(other - main));
  return kv;
}

}  // namespace

KernelValue prop_In(const RootSystemA& rs, const Vector& lambda, const Vector& X,
                    const PropInOptions& opt) {
  const PropSetup s = prop_setup(rs, lambda, X, opt.truncated);
  return prop_value(s, opt, opt.truncated);
}

double log_prop_In_envelope(const RootSystemA& rs, const Vector& lambda, const Vector& X) {
  const Vector la = active_part(rs, lambda), xa = active_part(rs, X);
  const double k = rs.k();
  double out = 0.0;
  for (int i = 0; i < la.size(); ++i)
    for (int j = i + 1; j < la.size(); ++j) {
      const double dx = xa(i) - xa(j);
      out += (2.0 * k - 1.0) * std::log(dx) - k * std::log1p((la(i) - la(j)) * dx);
    }
  return out;
}

double prop_truncated_ratio(const RootSystemA& rs, const Vector& lambda, const Vector& X,
                            const PropInOptions& opt) {
  const PropSetup s = prop_setup(rs, lambda, X, true);
  PropInOptions o = opt;
  o.error = ErrorEstimate::None;
  const double part = prop_value(s, o, true).log_value;
  const double whole = prop_value(s, o, false).log_value;
  return std::exp(part - whole);
}

}  // namespace dunkl
