#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "dunkl/kernel_value.hpp"

namespace dunkl {

enum class RuleFamily { GaussJacobi, GaussLegendre, GaussLaguerre, AdaptiveSimpson };

/// Per-level quadrature settings.
struct QuadratureSpec {
  RuleFamily family = RuleFamily::GaussJacobi;
  int nodes = 32;
  /// Exponent of (x - lo); for Laguerre, of (x - lo) in front of e^{-(x-lo)}.
  double left_exponent = 0.0;
  /// Exponent of (hi - x).
  double right_exponent = 0.0;
  int refine_factor = 2;
  /// Relative tolerance for the adaptive family.
  double tolerance = 1e-12;

  /// Throws DomainError on exponents <= -1, nodes < 2 or refine_factor < 2.
  void validate() const;
};

/// Nodes and positive weights on a concrete interval.
struct Rule {
  std::vector<double> x;
  std::vector<double> w;

  std::size_t size() const { return x.size(); }
  double sum_weights() const;
};

/// Reference Gauss-Jacobi rule on [0, 1] for the weight x^a (1 - x)^b.
/// Built once by Golub-Welsch in extended precision, then cached; the
/// returned reference stays valid for the life of the program.
const Rule& reference_jacobi(int nodes, double a, double b);

/// Gauss-Jacobi rule for the weight (x - lo)^a (hi - x)^b on [lo, hi].
Rule jacobi_rule(int nodes, double a_exp, double b_exp, double lo, double hi);

Rule legendre_rule(int nodes, double lo, double hi);

/// Generalized Gauss-Laguerre rule for the weight (x - lo)^alpha e^{-(x - lo)}
/// on [lo, inf).
Rule laguerre_rule(int nodes, double alpha, double lo = 0.0);

/// Gauss-Hermite rule for int f(x) dx where f is close to a Gaussian with the
/// given center and width; the weights already include the e^{u^2} factor,
/// so sum_i w_i f(x_i) approximates the plain integral.
Rule hermite_rule(int nodes, double center, double sigma);

/// Where an integrand on [lo, hi] has features narrower than the interval.
///
/// A finite `*_scale` adds geometrically graded panels (widths scale,
/// ratio * scale, ...) toward that endpoint. A finite `*_window` declares the
/// integrand negligible farther than the window from that endpoint; the rule
/// then covers only the window.
struct Grading {
  double lo_scale = std::numeric_limits<double>::infinity();
  double hi_scale = std::numeric_limits<double>::infinity();
  double lo_window = std::numeric_limits<double>::infinity();
  double hi_window = std::numeric_limits<double>::infinity();
  /// Nodes per panel when more than one panel is produced; 0 picks
  /// max(8, nodes / 2).
  int panel_nodes = 0;
  double ratio = 4.0;
};

/// Composite rule for (x - lo)^a (hi - x)^b f(x) on [lo, hi]. Panels touching
/// lo (hi) absorb the a (b) power into a Jacobi weight; elsewhere the power
/// is folded into the weights pointwise. Without active grading this is
/// jacobi_rule(nodes, a, b, lo, hi).
Rule graded_rule(int nodes, double a, double b, double lo, double hi, const Grading& g = {});

/// Same as graded_rule, reusing the storage of `out`.
void graded_rule_into(Rule& out, int nodes, double a, double b, double lo, double hi,
                      const Grading& g = {});

/// Composite rule for int_0^upper u^p f(u) du. The first panel [0, head]
/// absorbs u^p exactly; panels then grow geometrically (ratio 2) until their
/// width reaches `max_width`, after which they stay that wide.
Rule semi_infinite_rule(int panel_nodes, double p, double head, double upper,
                        double max_width = 4.0);

/// Smallest u >= max(p, 1) with u^p e^{-u} below e^{-log_drop} times its peak.
double laguerre_cutoff(double p, double log_drop = 42.0);

/// Streaming log-sum-exp of positive terms.
class LogSum {
 public:
  void add(double log_term) {
    if (log_term == -std::numeric_limits<double>::infinity()) return;
    if (log_term > max_) {
      sum_ = sum_ * std::exp(max_ - log_term) + 1.0;
      max_ = log_term;
    } else {
      sum_ += std::exp(log_term - max_);
    }
  }
  double log() const {
    return sum_ > 0.0 ? max_ + std::log(sum_) : -std::numeric_limits<double>::infinity();
  }

 private:
  double max_ = -std::numeric_limits<double>::infinity();
  double sum_ = 0.0;
};

/// int f over [lo, hi] (hi may be +inf for Laguerre) against the spec's
/// weight. f is sampled at interior nodes only. The error indicator is
/// |I(nodes) - I(refine_factor * nodes)| relative to the refined value, which
/// is the one returned.
///
/// Throws EvaluationError naming the node when f returns a non-finite value.
KernelValue integrate_1d(const QuadratureSpec& spec, const std::function<double(double)>& f,
                         double lo, double hi);

/// Sum over rule nodes of w_i * exp(log_f(x_i)) in log space.
double log_integrate(const Rule& rule, const std::function<double(double)>& log_f);

/// Iterated integral over a product of intervals [lo_i, hi_i]; level i
/// carries the weight (y_i - lo_i)^{left_i} (hi_i - y_i)^{right_i}.
struct NestedDomain {
  std::vector<double> lo;
  std::vector<double> hi;
  std::vector<double> left_exponent;
  std::vector<double> right_exponent;

  std::size_t levels() const { return lo.size(); }
};

inline constexpr std::int64_t kDefaultEvaluationBudget = 1'000'000'000;

/// Product of node counts, saturating at INT64_MAX.
std::int64_t tensor_size(std::span<const QuadratureSpec> specs);

/// Tensorized iterated integral. Deterministic for fixed specs; reports the
/// evaluation count of the returned (refined) pass. Throws BudgetExceeded
/// when the product of node counts exceeds `budget`.
KernelValue integrate_nested(const NestedDomain& domain,
                             const std::function<double(std::span<const double>)>& f,
                             std::span<const QuadratureSpec> specs,
                             std::int64_t budget = kDefaultEvaluationBudget);

/// Log-space tensor sum of prod_i w_i(y_i) exp(log_f(y)) over given rules.
/// The callback receives the point; `evaluations` is incremented per point.
double log_tensor_sum(std::span<const Rule> rules,
                      const std::function<double(std::span<const double>)>& log_f,
                      std::int64_t* evaluations = nullptr);

}  // namespace dunkl
