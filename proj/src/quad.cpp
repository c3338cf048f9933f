#include "dunkl/quad.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <sstream>
#include <tuple>

#include "dunkl/error.hpp"

namespace dunkl {

namespace {

using LVec = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
using LMat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

// Golub-Welsch: nodes are the eigenvalues of the Jacobi matrix, weights the
// squared first eigenvector components times the zeroth moment.
Rule golub_welsch(const LVec& diag, const LVec& sub, long double mu0) {
  Eigen::SelfAdjointEigenSolver<LMat> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) throw AccuracyError("Golub-Welsch eigensolver failed");
  const Eigen::Index n = diag.size();
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const long double v0 = es.eigenvectors()(0, i);
    r.x[i] = static_cast<double>(es.eigenvalues()(i));
    r.w[i] = static_cast<double>(mu0 * v0 * v0);
  }
  return r;
}

// Weight (1 - s)^alpha (1 + s)^beta on [-1, 1], returned mapped to [0, 1]
// with weight x^beta (1 - x)^alpha.
Rule build_jacobi01(int n, long double alpha, long double beta) {
  LVec diag(n);
  LVec sub(std::max(n - 1, 0));
  const long double ab = alpha + beta;
  for (int j = 0; j < n; ++j) {
    const long double s = 2.0L * j + ab;
    diag(j) = j == 0 ? (beta - alpha) / (ab + 2.0L) : (beta * beta - alpha * alpha) / (s * (s + 2.0L));
  }
  for (int j = 1; j < n; ++j) {
    const long double s = 2.0L * j + ab;
    long double b;
    if (j == 1) {
      b = 4.0L * (1.0L + alpha) * (1.0L + beta) / ((2.0L + ab) * (2.0L + ab) * (3.0L + ab));
    } else {
      b = 4.0L * j * (j + alpha) * (j + beta) * (j + ab) / (s * s * (s + 1.0L) * (s - 1.0L));
    }
    sub(j - 1) = std::sqrt(b);
  }
  // Moment of the [0, 1] weight directly: B(beta + 1, alpha + 1).
  const long double mu0 =
      std::exp(std::lgamma(alpha + 1.0L) + std::lgamma(beta + 1.0L) - std::lgamma(ab + 2.0L));
  Rule r = golub_welsch(diag, sub, mu0);
  for (double& x : r.x) x = 0.5 * (1.0 + x);
  return r;
}

void check_exponent(double e, const char* which) {
  if (!(e > -1.0) || !std::isfinite(e)) {
    std::ostringstream os;
    os << "invalid " << which << " exponent " << e << " (must be > -1)";
    throw DomainError(os.str());
  }
}

void check_nodes(int n) {
  if (n < 1) throw DomainError("quadrature needs at least one node");
}

}  // namespace

void QuadratureSpec::validate() const {
  check_exponent(left_exponent, "left");
  check_exponent(right_exponent, "right");
  if (nodes < 2) throw DomainError("QuadratureSpec.nodes must be >= 2");
  if (refine_factor < 2) throw DomainError("QuadratureSpec.refine_factor must be >= 2");
}

double Rule::sum_weights() const {
  double s = 0.0;
  for (double v : w) s += v;
  return s;
}

const Rule& reference_jacobi(int nodes, double a, double b) {
  check_nodes(nodes);
  check_exponent(a, "left");
  check_exponent(b, "right");
  using Key = std::tuple<int, double, double>;
  static std::shared_mutex mutex;
  static std::map<Key, std::unique_ptr<Rule>> cache;
  const Key key{nodes, a, b};
  {
    std::shared_lock lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;
  }
  auto rule = std::make_unique<Rule>(build_jacobi01(nodes, b, a));
  std::unique_lock lock(mutex);
  auto [it, inserted] = cache.emplace(key, std::move(rule));
  return *it->second;
}

Rule jacobi_rule(int nodes, double a_exp, double b_exp, double lo, double hi) {
  if (!(hi > lo)) throw DomainError("jacobi_rule needs a non-degenerate interval");
  const Rule& ref = reference_jacobi(nodes, a_exp, b_exp);
  const double len = hi - lo;
  const double scale = std::pow(len, 1.0 + a_exp + b_exp);
  Rule r;
  r.x.resize(ref.size());
  r.w.resize(ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) {
    r.x[i] = lo + len * ref.x[i];
    r.w[i] = scale * ref.w[i];
  }
  return r;
}

Rule legendre_rule(int nodes, double lo, double hi) { return jacobi_rule(nodes, 0.0, 0.0, lo, hi); }

Rule laguerre_rule(int nodes, double alpha, double lo) {
  check_nodes(nodes);
  check_exponent(alpha, "Laguerre");
  LVec diag(nodes);
  LVec sub(std::max(nodes - 1, 0));
  for (int j = 0; j < nodes; ++j) diag(j) = 2.0L * j + alpha + 1.0L;
  for (int j = 1; j < nodes; ++j) sub(j - 1) = std::sqrt(static_cast<long double>(j) * (j + alpha));
  Rule r = golub_welsch(diag, sub, std::tgamma(static_cast<long double>(alpha) + 1.0L));
  for (double& x : r.x) x += lo;
  return r;
}

Rule hermite_rule(int nodes, double center, double sigma) {
  check_nodes(nodes);
  if (!(sigma > 0.0)) throw DomainError("hermite_rule needs sigma > 0");
  LVec diag = LVec::Zero(nodes);
  LVec sub(std::max(nodes - 1, 0));
  for (int j = 1; j < nodes; ++j) sub(j - 1) = std::sqrt(static_cast<long double>(j) / 2.0L);
  Rule r = golub_welsch(diag, sub, std::sqrt(std::numbers::pi_v<long double>));
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double u = r.x[i];
    r.w[i] *= sigma * std::exp(u * u);
    r.x[i] = center + sigma * u;
  }
  return r;
}

void graded_rule_into(Rule& out, int nodes, double a, double b, double lo, double hi,
                      const Grading& g) {
  if (!(hi > lo)) throw DomainError("graded_rule needs a non-degenerate interval");
  const double start = std::max(lo, hi - g.hi_window);
  const double stop = std::min(hi, lo + g.lo_window);
  if (!(stop > start)) throw DomainError("graded_rule windows leave an empty interval");
  const double mid = 0.5 * (start + stop);
  const double span = stop - start;

  double cuts[160];
  int ncut = 0;
  cuts[ncut++] = start;
  cuts[ncut++] = stop;
  if (start == lo && g.lo_scale * 2.0 * g.ratio < span) {
    for (double c = lo + g.lo_scale; c < mid && ncut < 80; c = lo + (c - lo) * g.ratio)
      cuts[ncut++] = c;
  }
  if (stop == hi && g.hi_scale * 2.0 * g.ratio < span) {
    for (double c = hi - g.hi_scale; c > mid && ncut < 158; c = hi - (hi - c) * g.ratio)
      cuts[ncut++] = c;
  }
  std::sort(cuts, cuts + ncut);
  ncut = static_cast<int>(std::unique(cuts, cuts + ncut) - cuts);

  out.x.clear();
  out.w.clear();
  const int per_panel =
      ncut == 2 ? nodes : (g.panel_nodes > 0 ? g.panel_nodes : std::max(8, nodes / 2));
  for (int p = 0; p + 1 < ncut; ++p) {
    const double pl = cuts[p];
    const double ph = cuts[p + 1];
    const bool at_lo = pl == lo;
    const bool at_hi = ph == hi;
    const double ea = at_lo ? a : 0.0;
    const double eb = at_hi ? b : 0.0;
    const Rule& ref = reference_jacobi(per_panel, ea, eb);
    const double plen = ph - pl;
    const double scale = std::pow(plen, 1.0 + ea + eb);
    for (std::size_t i = 0; i < ref.size(); ++i) {
      const double x = pl + plen * ref.x[i];
      double w = scale * ref.w[i];
      if (!at_lo && a != 0.0) w *= std::pow(x - lo, a);
      if (!at_hi && b != 0.0) w *= std::pow(hi - x, b);
      out.x.push_back(x);
      out.w.push_back(w);
    }
  }
}

Rule graded_rule(int nodes, double a, double b, double lo, double hi, const Grading& g) {
  Rule out;
  graded_rule_into(out, nodes, a, b, lo, hi, g);
  return out;
}

Rule semi_infinite_rule(int panel_nodes, double p, double head, double upper, double max_width) {
  check_exponent(p, "semi-infinite");
  if (!(head > 0.0) || !(upper > head)) throw DomainError("semi_infinite_rule needs 0 < head < upper");
  Rule out = jacobi_rule(panel_nodes, p, 0.0, 0.0, head);
  double lo = head;
  while (lo < upper) {
    const double width = std::min({lo, max_width, upper - lo});
    const double hi = lo + width;
    const Rule& ref = reference_jacobi(panel_nodes, 0.0, 0.0);
    for (std::size_t i = 0; i < ref.size(); ++i) {
      const double x = lo + width * ref.x[i];
      out.x.push_back(x);
      out.w.push_back(width * ref.w[i] * std::pow(x, p));
    }
    lo = hi;
  }
  return out;
}

double laguerre_cutoff(double p, double log_drop) {
  const double peak_at = std::max(p, 1e-300);
  const double log_peak = p > 0.0 ? p * std::log(peak_at) - peak_at : 0.0;
  double u = std::max(p, 1.0);
  while (p * std::log(u) - u > log_peak - log_drop) u += 1.0;
  return u;
}

namespace {

double checked_eval(const std::function<double(double)>& f, double x) {
  const double v = f(x);
  if (!std::isfinite(v)) {
    std::ostringstream os;
    os.precision(17);
    os << "integrand is non-finite (" << v << ") at node x = " << x;
    throw EvaluationError(os.str());
  }
  return v;
}

double apply_rule(const Rule& r, const std::function<double(double)>& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) s += r.w[i] * checked_eval(f, r.x[i]);
  return s;
}

Rule rule_for(const QuadratureSpec& spec, int nodes, double lo, double hi) {
  switch (spec.family) {
    case RuleFamily::GaussJacobi:
      return jacobi_rule(nodes, spec.left_exponent, spec.right_exponent, lo, hi);
    case RuleFamily::GaussLegendre:
      return legendre_rule(nodes, lo, hi);
    case RuleFamily::GaussLaguerre:
      return laguerre_rule(nodes, spec.left_exponent, lo);
    case RuleFamily::AdaptiveSimpson:
      break;
  }
  throw DomainError("adaptive rules have no fixed node set");
}

// Adaptive Simpson on theta in [0, 1] after x = lo + L (1 - cos(pi theta)) / 2.
// The endpoint samples of the transformed integrand are taken as 0, so f is
// never evaluated at lo or hi.
struct OpenSimpson {
  const std::function<double(double)>& f;
  double lo, len;
  std::int64_t evals = 0;
  double err = 0.0;

  double g(double th) {
    if (th <= 0.0 || th >= 1.0) return 0.0;
    // Measured from the nearer endpoint so that 1 - cos never cancels to 0.
    const double half = std::numbers::pi / 2;
    const double x = th < 0.5 ? lo + len * std::pow(std::sin(half * th), 2)
                              : lo + len - len * std::pow(std::sin(half * (1.0 - th)), 2);
    if (x <= lo || x >= lo + len) return 0.0;
    ++evals;
    return checked_eval(f, x) * 0.5 * len * std::numbers::pi * std::sin(std::numbers::pi * th);
  }

  double recurse(double a, double b, double fa, double fm, double fb, double whole, double tol,
                 int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = g(lm);
    const double frm = g(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
      err += std::abs(delta) / 15.0;
      return left + right + delta / 15.0;
    }
    return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
  }
};

}  // namespace

KernelValue integrate_1d(const QuadratureSpec& spec, const std::function<double(double)>& f,
                         double lo, double hi) {
  spec.validate();
  if (spec.family == RuleFamily::GaussLaguerre) {
    if (!std::isinf(hi) || hi < 0) throw DomainError("Gauss-Laguerre needs hi = +inf");
  } else if (!(hi > lo) || !std::isfinite(hi) || !std::isfinite(lo)) {
    throw DomainError("integrate_1d needs a finite non-degenerate interval");
  }

  if (spec.family == RuleFamily::AdaptiveSimpson) {
    if (spec.left_exponent != 0.0 || spec.right_exponent != 0.0)
      throw DomainError("adaptive_simpson does not take weight exponents");
    OpenSimpson s{f, lo, hi - lo};
    const double fm = s.g(0.5);
    const double whole = (1.0 / 6.0) * (4.0 * fm);
    // Seed at depth 2 so the first comparison already sees interior samples.
    double total = 0.0;
    for (int piece = 0; piece < 8; ++piece) {
      const double a = piece / 8.0;
      const double b = (piece + 1) / 8.0;
      const double fa = s.g(a), fb = s.g(b), fmid = s.g(0.5 * (a + b));
      const double w = (b - a) / 6.0 * (fa + 4.0 * fmid + fb);
      total += s.recurse(a, b, fa, fmid, fb, w, spec.tolerance * std::max(1.0, std::abs(whole)) / 8.0,
                         48);
    }
    KernelValue kv = KernelValue::from_value(total, 0.0, s.evals);
    kv.rel_error = total != 0.0 ? s.err / std::abs(total) : s.err;
    return kv;
  }

  const Rule coarse = rule_for(spec, spec.nodes, lo, hi);
  const Rule fine = rule_for(spec, spec.nodes * spec.refine_factor, lo, hi);
  const double i1 = apply_rule(coarse, f);
  const double i2 = apply_rule(fine, f);
  KernelValue kv = KernelValue::from_value(i2, 0.0, static_cast<std::int64_t>(fine.size()));
  const double diff = std::abs(i1 - i2);
  kv.rel_error = i2 != 0.0 ? diff / std::abs(i2) : diff;
  return kv;
}

double log_integrate(const Rule& rule, const std::function<double(double)>& log_f) {
  LogSum acc;
  for (std::size_t i = 0; i < rule.size(); ++i) acc.add(std::log(rule.w[i]) + log_f(rule.x[i]));
  return acc.log();
}

std::int64_t tensor_size(std::span<const QuadratureSpec> specs) {
  std::int64_t total = 1;
  for (const auto& s : specs) {
    if (s.nodes <= 0) return 0;
    if (total > std::numeric_limits<std::int64_t>::max() / s.nodes)
      return std::numeric_limits<std::int64_t>::max();
    total *= s.nodes;
  }
  return total;
}

namespace {

template <typename Visit>
void for_each_tensor_point(std::span<const Rule> rules, std::vector<double>& y, Visit&& visit) {
  const std::size_t n = rules.size();
  if (n == 0) {
    visit(0.0);
    return;
  }
  for (const auto& r : rules)
    if (r.size() == 0) return;
  std::vector<std::size_t> idx(n, 0);
  std::vector<double> partial_logw(n + 1, 0.0);
  y.assign(n, 0.0);
  for (std::size_t l = 0; l < n; ++l) {
    y[l] = rules[l].x[0];
    partial_logw[l + 1] = partial_logw[l] + std::log(rules[l].w[0]);
  }
  while (true) {
    visit(partial_logw[n]);
    std::size_t l = n;
    while (l > 0) {
      --l;
      if (++idx[l] < rules[l].size()) break;
      idx[l] = 0;
      if (l == 0) return;
    }
    for (std::size_t m = l; m < n; ++m) {
      y[m] = rules[m].x[idx[m]];
      partial_logw[m + 1] = partial_logw[m] + std::log(rules[m].w[idx[m]]);
    }
  }
}

}  // namespace

double log_tensor_sum(std::span<const Rule> rules,
                      const std::function<double(std::span<const double>)>& log_f,
                      std::int64_t* evaluations) {
  LogSum acc;
  std::vector<double> y;
  std::int64_t count = 0;
  for_each_tensor_point(rules, y, [&](double logw) {
    ++count;
    acc.add(logw + log_f(std::span<const double>(y)));
  });
  if (evaluations) *evaluations += count;
  return acc.log();
}

KernelValue integrate_nested(const NestedDomain& domain,
                             const std::function<double(std::span<const double>)>& f,
                             std::span<const QuadratureSpec> specs, std::int64_t budget) {
  const std::size_t n = domain.levels();
  if (domain.hi.size() != n || domain.left_exponent.size() != n ||
      domain.right_exponent.size() != n || specs.size() != n)
    throw DomainError("integrate_nested: inconsistent level count");
  std::vector<QuadratureSpec> fine_specs(specs.begin(), specs.end());
  for (auto& s : fine_specs) {
    s.validate();
    s.nodes *= s.refine_factor;
  }
  if (tensor_size(specs) > budget || tensor_size(fine_specs) > budget)
    throw BudgetExceeded("integrate_nested: tensor grid exceeds the evaluation budget of " +
                         std::to_string(budget));

  auto build = [&](std::span<const QuadratureSpec> ss) {
    std::vector<Rule> rules;
    for (std::size_t l = 0; l < n; ++l) {
      check_exponent(domain.left_exponent[l], "left");
      check_exponent(domain.right_exponent[l], "right");
      rules.push_back(jacobi_rule(ss[l].nodes, domain.left_exponent[l], domain.right_exponent[l],
                                  domain.lo[l], domain.hi[l]));
    }
    return rules;
  };

  auto run = [&](const std::vector<Rule>& rules, std::int64_t& count) {
    double sum = 0.0;
    std::vector<double> y;
    for_each_tensor_point(rules, y, [&](double logw) {
      ++count;
      const double v = f(std::span<const double>(y));
      if (!std::isfinite(v)) {
        std::ostringstream os;
        os.precision(17);
        os << "nested integrand is non-finite at y = (";
        for (std::size_t i = 0; i < y.size(); ++i) os << (i ? ", " : "") << y[i];
        os << ")";
        throw EvaluationError(os.str());
      }
      sum += std::exp(logw) * v;
    });
    return sum;
  };

  std::int64_t coarse_count = 0, fine_count = 0;
  const double i1 = run(build(specs), coarse_count);
  const double i2 = run(build(fine_specs), fine_count);
  KernelValue kv = KernelValue::from_value(i2, 0.0, fine_count);
  const double diff = std::abs(i1 - i2);
  kv.rel_error = i2 != 0.0 ? diff / std::abs(i2) : diff;
  return kv;
}

}  // namespace dunkl
