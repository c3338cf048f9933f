#include "dunkl/spherical.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dunkl/special.hpp"

namespace dunkl {

namespace {

constexpr double kCollapseRel = 1e-13;
constexpr double kPerturb = 1e-8;
// e^{-46} ~ 1e-20: mass beyond the window is invisible in double.
constexpr double kWindowDecay = 46.0;

struct Level {
  Rule rule;
  std::vector<double> logw;
};

struct Frame {
  std::vector<Level> levels;
  std::vector<double> lam0;
  std::vector<double> y;
  std::vector<double> partial;
  std::vector<std::size_t> idx;
};

class Engine {
 public:
  Engine(double k, int top_rank, int nodes, BaseCase base, std::int64_t budget)
      : k_(k), nodes_(nodes), base_(base), budget_(budget), frames_(top_rank + 1) {
    for (int n = 1; n <= top_rank; ++n) {
      Frame& f = frames_[n];
      f.levels.resize(n);
      f.lam0.resize(n);
      f.y.resize(n);
      f.partial.resize(n + 1);
      f.idx.resize(n);
    }
  }

  std::int64_t evaluations() const { return count_; }

  double log_psi(int n, const double* lam, const double* x) {
    if (n == 0) return lam[0] * x[0];
    if (n == 1 && base_ == BaseCase::ConfluentRankOne) {
      ++count_;
      const double L = lam[0] - lam[1];
      return lam[1] * (x[0] + x[1]) + L * x[1] + log_kummer_k2k(k_, L * (x[0] - x[1]));
    }
    Frame& f = frames_[n];
    const double km1 = k_ - 1.0;
    for (int r = 0; r < n; ++r) f.lam0[r] = lam[r] - lam[n];
    const double rate_min = f.lam0[n - 1];

    std::int64_t grid = 1;
    for (int i = 0; i < n; ++i) {
      const double lo = x[i + 1];
      const double hi = x[i];
      const double len = hi - lo;
      if (!(len > 0.0)) fail(n, x, "collapsed interlacing interval");
      Grading g;
      g.panel_nodes = std::max(4, nodes_ / 3);
      const double rate = f.lam0[i];
      if (rate * len > 4.0) g.hi_scale = 1.0 / rate;
      if (rate_min * len > 2.0 * kWindowDecay) g.hi_window = kWindowDecay / rate_min;
      if (km1 != 0.0) {
        if (i > 0 && x[i - 1] - hi < len / 8.0) g.hi_scale = std::min(g.hi_scale, x[i - 1] - hi);
        if (i + 2 <= n && lo - x[i + 2] < len / 8.0) g.lo_scale = lo - x[i + 2];
      }
      Level& lv = f.levels[i];
      graded_rule_into(lv.rule, nodes_, km1, km1, lo, hi, g);
      lv.logw.resize(lv.rule.size());
      for (std::size_t j = 0; j < lv.rule.size(); ++j) {
        const double y = lv.rule.x[j];
        double lw = std::log(lv.rule.w[j]);
        if (km1 != 0.0) {
          double far = 0.0;
          for (int m = 0; m < i; ++m) far += std::log(x[m] - y);
          for (int m = i + 2; m <= n; ++m) far += std::log(y - x[m]);
          lw += km1 * far;
        }
        lv.logw[j] = lw;
      }
      grid *= static_cast<std::int64_t>(lv.rule.size());
    }
    if (count_ + grid > budget_) {
      std::ostringstream os;
      os << "spherical recursion at rank " << n << " exceeds the evaluation budget of " << budget_;
      throw BudgetExceeded(os.str());
    }

    LogSum acc;
    std::fill(f.idx.begin(), f.idx.end(), 0);
    f.partial[0] = 0.0;
    for (int i = 0; i < n; ++i) {
      f.y[i] = f.levels[i].rule.x[0];
      f.partial[i + 1] = f.partial[i] + f.levels[i].logw[0];
    }
    while (true) {
      double lp = f.partial[n];
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) lp += std::log(f.y[i] - f.y[j]);
      lp += log_psi(n - 1, f.lam0.data(), f.y.data());
      ++count_;
      if (std::isnan(lp)) fail(n, f.y.data(), "non-finite integrand");
      acc.add(lp);

      int l = n;
      bool done = false;
      while (true) {
        --l;
        if (++f.idx[l] < f.levels[l].rule.size()) break;
        f.idx[l] = 0;
        if (l == 0) {
          done = true;
          break;
        }
      }
      if (done) break;
      for (int m = l; m < n; ++m) {
        f.y[m] = f.levels[m].rule.x[f.idx[m]];
        f.partial[m + 1] = f.partial[m] + f.levels[m].logw[f.idx[m]];
      }
    }

    double sum_x = 0.0, log_pi = 0.0;
    for (int i = 0; i <= n; ++i) {
      sum_x += x[i];
      for (int j = i + 1; j <= n; ++j) log_pi += std::log(x[i] - x[j]);
    }
    return std::lgamma(k_ * (n + 1)) - (n + 1) * std::lgamma(k_) + lam[n] * sum_x +
           (1.0 - 2.0 * k_) * log_pi + acc.log();
  }

 private:
  [[noreturn]] void fail(int n, const double* pt, const char* what) const {
    std::ostringstream os;
    os.precision(17);
    os << "spherical recursion: " << what << " at rank " << n << ", point (";
    const int len = n;
    for (int i = 0; i < len; ++i) os << (i ? ", " : "") << pt[i];
    os << ")";
    throw EvaluationError(os.str());
  }

  double k_;
  int nodes_;
  BaseCase base_;
  std::int64_t budget_;
  std::int64_t count_ = 0;
  std::vector<Frame> frames_;
};

bool has_collapsed_gap(int n, const double* v, double tau) {
  for (int i = 0; i < n; ++i)
    if (v[i] - v[i + 1] < tau) return true;
  return false;
}

double run(double k, int n, const double* lam, const double* x, int nodes, BaseCase base,
           std::int64_t budget, std::int64_t* evaluations) {
  double xnorm = 0.0, lnorm = 0.0;
  for (int i = 0; i <= n; ++i) {
    xnorm += x[i] * x[i];
    lnorm += lam[i] * lam[i];
  }
  const double tau_x = kCollapseRel * std::max(1.0, std::sqrt(xnorm));
  const double tau_l = kCollapseRel * std::max(1.0, std::sqrt(lnorm));
  const bool need_psi_rank = !(base == BaseCase::ConfluentRankOne && n == 1);
  std::vector<double> lv(lam, lam + n + 1), xv(x, x + n + 1);
  if (need_psi_rank && has_collapsed_gap(n, xv.data(), tau_x)) {
    if (!has_collapsed_gap(n, lv.data(), tau_l)) {
      std::swap(lv, xv);
    } else {
      // Spread every gap by kPerturb while keeping the coordinate sum.
      for (int i = 0; i <= n; ++i) xv[i] += kPerturb * (0.5 * n - i);
    }
  }
  Engine eng(k, n, nodes, base, budget);
  const double out = eng.log_psi(n, lv.data(), xv.data());
  if (evaluations) *evaluations += eng.evaluations();
  return out;
}

void check_point(const RootSystemA& rs, const Vector& v, const char* name) {
  try {
    ChamberPoint cp(rs, v);
  } catch (const DomainError& e) {
    throw DomainError(std::string(name) + ": " + e.what());
  }
}

double inactive_dot(const RootSystemA& rs, const Vector& a, const Vector& b) {
  double s = 0.0;
  for (int m : rs.inactive()) s += a(m) * b(m);
  return s;
}

}  // namespace

ErrorEstimate resolve_error_mode(ErrorEstimate e, int rank) {
  if (e != ErrorEstimate::Auto) return e;
  return rank <= 2 ? ErrorEstimate::Refine : ErrorEstimate::Coarsen;
}

int default_nodes(int rank) {
  if (rank <= 1) return 48;
  if (rank == 2) return 32;
  return 20;
}

double log_spherical_active(double k, int n, const double* lambda, const double* x,
                            const SphericalOptions& opt, std::int64_t* evaluations) {
  const int nodes = opt.nodes > 0 ? opt.nodes : default_nodes(n);
  return run(k, n, lambda, x, nodes, opt.base, opt.budget, evaluations);
}

KernelValue spherical_exact(const RootSystemA& rs, const Vector& lambda, const Vector& X,
                            const SphericalOptions& opt) {
  check_point(rs, lambda, "lambda");
  check_point(rs, X, "X");
  if (opt.nodes != 0 && opt.nodes < 2) throw DomainError("spherical nodes must be >= 2");
  if (opt.refine_factor < 2) throw DomainError("refine_factor must be >= 2");
  const int n = rs.rank();
  const Vector la = active_part(rs, lambda);
  const Vector xa = active_part(rs, X);
  const double extra = inactive_dot(rs, lambda, X);
  const int nodes = opt.nodes > 0 ? opt.nodes : default_nodes(n);

  auto nominal_grid = [&](int q) {
    double total = 0.0, per = 1.0;
    const int stop = opt.base == BaseCase::ConfluentRankOne ? 1 : 0;
    for (int r = n; r > stop; --r) {
      per *= std::pow(static_cast<double>(q), r);
      total += per;
    }
    return total;
  };
  const ErrorEstimate mode = resolve_error_mode(opt.error, n);
  int second = 0;
  if (mode == ErrorEstimate::Refine) second = nodes * opt.refine_factor;
  if (mode == ErrorEstimate::Coarsen) second = std::max(2, nodes / opt.refine_factor);
  if (nominal_grid(std::max(nodes, second)) > static_cast<double>(opt.budget))
    throw BudgetExceeded("spherical grid of " + std::to_string(nominal_grid(std::max(nodes, second))) +
                         " evaluations exceeds the budget of " + std::to_string(opt.budget));

  KernelValue kv;
  std::int64_t evals = 0;
  const double main = run(rs.k(), n, la.data(), xa.data(), nodes, opt.base, opt.budget, &evals);
  if (second == 0) {
    kv.log_value = main + extra;
    kv.evaluations = evals;
    return kv;
  }
  std::int64_t evals2 = 0;
  const double other =
      run(rs.k(), n, la.data(), xa.data(), second, opt.base, opt.budget, &evals2);
  const bool refine = mode == ErrorEstimate::Refine;
  kv.log_value = (refine ? other : main) + extra;
  kv.rel_error = std::abs(std::expm1(refine ? main - other : other - main));
  kv.evaluations = refine ? evals2 : evals;
  return kv;
}

KernelValue spherical_exact(const SphericalParams& p) {
  return spherical_exact(p.rs, p.lambda, p.X, p.quad);
}

double log_spherical_oracle_k1(const RootSystemA& rs, const Vector& lambda, const Vector& X) {
  if (rs.k() != 1.0) throw DomainError("determinant oracle needs k = 1");
  check_point(rs, lambda, "lambda");
  check_point(rs, X, "X");
  const int n = rs.rank();
  const Vector la = active_part(rs, lambda);
  const Vector xa = active_part(rs, X);
  for (int i = 0; i < n; ++i)
    if (!(la(i) > la(i + 1)) || !(xa(i) > xa(i + 1)))
      throw DomainError("determinant oracle needs distinct lambda and X entries");

  // Two-sided diagonal scaling with potentials b_j = sum_{m<j} lambda_m (x_{m+1} - x_m):
  // unit diagonal, off-diagonal entries <= 1 for sorted arguments.
  using LMat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  std::vector<long double> b(n + 1, 0.0L);
  for (int j = 1; j <= n; ++j)
    b[j] = b[j - 1] + static_cast<long double>(la(j - 1)) * (xa(j) - xa(j - 1));
  LMat m(n + 1, n + 1);
  long double log_scale = 0.0L;
  for (int i = 0; i <= n; ++i) {
    const long double a = static_cast<long double>(la(i)) * xa(i) - b[i];
    for (int j = 0; j <= n; ++j) m(i, j) = std::exp(static_cast<long double>(la(i)) * xa(j) - a - b[j]);
    log_scale += a + b[i];
  }
  const long double det = m.partialPivLu().determinant();
  if (!(det > 0.0L)) throw EvaluationError("determinant oracle lost all precision");
  double log_fact = 0.0;
  for (int j = 1; j <= n; ++j) log_fact += std::lgamma(j + 1.0);
  double log_pi = 0.0;
  for (int i = 0; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) log_pi += std::log(la(i) - la(j)) + std::log(xa(i) - xa(j));
  return log_fact + static_cast<double>(std::log(det) + log_scale) - log_pi +
         inactive_dot(rs, lambda, X);
}

double spherical_oracle_k1(const RootSystemA& rs, const Vector& lambda, const Vector& X) {
  return std::exp(log_spherical_oracle_k1(rs, lambda, X));
}

double log_spherical_envelope(const RootSystemA& rs, const Vector& lambda, const Vector& X) {
  double out = lambda.dot(X);
  for (const Root& a : rs.roots())
    out -= rs.k() * std::log1p(pairing(a, X) * pairing(a, lambda));
  return out;
}

double spherical_envelope(const RootSystemA& rs, const Vector& lambda, const Vector& X) {
  return std::exp(log_spherical_envelope(rs, lambda, X));
}

}  // namespace dunkl
