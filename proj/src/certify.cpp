#include "dunkl/certify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <iomanip>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "dunkl/asymlab.hpp"
#include "dunkl/heatkernel.hpp"
#include "dunkl/newton.hpp"
#include "dunkl/special.hpp"
#include "dunkl/spherical.hpp"
#include "dunkl/stable.hpp"

namespace dunkl {

std::vector<double> Range::values() const {
  std::vector<double> out;
  if (count <= 0) return out;
  if (count == 1) return {lo};
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double f = static_cast<double>(i) / (count - 1);
    out.push_back(log ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f);
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::int64_t budget_from_env(std::int64_t fallback) {
  const char* v = std::getenv("DUNKL_BUDGET");
  if (!v || !*v) return fallback;
  char* end = nullptr;
  const double b = std::strtod(v, &end);
  if (end == v || *end != '\0' || !(b >= 1.0) || !std::isfinite(b))
    throw DomainError(std::string("DUNKL_BUDGET must be a positive number, got '") + v + "'");
  return b >= 9.2e18 ? INT64_MAX : static_cast<std::int64_t>(b);
}

namespace {

bool is_lemma(const std::string& kernel) { return kernel.rfind("lemma:", 0) == 0; }

ClaimId lemma_id(const std::string& kernel) { return claim_from_string(kernel.substr(6)); }

void check_range(const Range& r, const char* name) {
  if (r.count < 1) throw DomainError(std::string("empty grid: ") + name + " count must be >= 1");
  if (!std::isfinite(r.lo) || !std::isfinite(r.hi))
    throw DomainError(std::string(name) + " range must be finite");
  if (r.log && !(r.lo > 0.0 && r.hi > 0.0))
    throw DomainError(std::string(name) + " log range must be positive");
}

}  // namespace

void SweepConfig::validate() const {
  if (kernel != "spherical" && kernel != "heat" && kernel != "newton" && kernel != "stable") {
    if (!is_lemma(kernel)) throw DomainError("unknown kernel '" + kernel + "'");
    lemma_id(kernel);
  }
  if (n < 1) throw DomainError("rank n must be >= 1");
  if (k.empty()) throw DomainError("empty grid: no multiplicity values");
  for (double kk : k)
    if (!(kk > 0.0)) throw DomainError("multiplicity k must be > 0");
  check_range(product, "product");
  check_range(t, "t");
  if (kernel == "stable") {
    if (s.empty()) throw DomainError("empty grid: no stability index");
    for (double ss : s)
      if (!(ss > 0.0 && ss < 2.0)) throw DomainError("stability index s must lie in (0, 2)");
  }
  if (dim != 0 && dim < n + 1 && !trace_zero) throw DomainError("dim must be >= n + 1");
  if (nodes != 0 && nodes < 2) throw DomainError("nodes must be >= 2");
  if (error != "auto" && error != "refine" && error != "coarsen" && error != "none")
    throw DomainError("error mode must be auto, refine, coarsen or none");
  if (!(spread_limit >= 1.0)) throw DomainError("spread limit must be >= 1");
  if (!(slope_limit > 0.0)) throw DomainError("slope limit must be > 0");
  if (threads < 0) throw DomainError("threads must be >= 0");
  if (budget < 1) throw DomainError("budget must be >= 1");
  if (format != "csv" && format != "json") throw DomainError("format must be csv or json");
  if (!(scale > 0.0) || !std::isfinite(scale)) throw DomainError("scale must be > 0");
}

SweepConfig default_config(const std::string& kernel) {
  SweepConfig c;
  c.kernel = kernel;
  if (kernel == "spherical") {
    c.k = {0.25, 0.5, 1.0, 2.5};
    c.product = {1e-3, 1e4, 8, true};
  } else if (kernel == "heat") {
    c.k = {0.5, 1.0, 2.0};
    c.product = {1e-2, 1e2, 5, true};
    c.spread_limit = 1e2;
  } else if (kernel == "newton") {
    c.k = {0.5, 1.0, 2.0};
    c.dim = 3;
    c.product = {1e-2, 1e2, 9, true};
    c.spread_limit = 1e2;
  } else if (kernel == "stable") {
    c.k = {0.5, 1.0, 2.0};
    c.s = {0.5, 1.0, 1.5};
    c.t = {1.0, 1.0, 1, true};
    c.product = {1e-2, 1e2, 5, true};
    c.spread_limit = 1e2;
  } else if (is_lemma(kernel)) {
    const ClaimId id = lemma_id(kernel);
    c.spread_limit = 1e6;
    if (id == ClaimId::LemmaA) {
      c.k = {0.25, 0.5, 1.0, 2.0, 4.0};
      c.product = {1e-6, 1e6, 13, true};
    } else if (id == ClaimId::PropIn || id == ClaimId::PropTruncated) {
      c.k = {0.5, 1.0, 2.5};
      c.product = {1e-2, 1e3, 6, true};
    } else {
      c.k = {0.25, 0.5, 1.0, 2.5};
      c.product = {1e-4, 1e6, 11, true};
    }
  } else {
    throw DomainError("unknown kernel '" + kernel + "'");
  }
  return c;
}

namespace {

struct Outcome {
  double log_exact = 0.0;
  double log_envelope = 0.0;
  double err = std::numeric_limits<double>::quiet_NaN();
};

struct Point {
  std::string group;
  std::vector<double> inputs;
  std::function<Outcome()> eval;
};

struct Grid {
  std::vector<std::string> columns;
  int drift = -1;
  std::vector<Point> points;
};

std::string group_label(double k) {
  std::ostringstream os;
  os << "k=" << k;
  return os.str();
}

RootSystemA make_rs(const SweepConfig& c, double k) {
  if (c.trace_zero) return RootSystemA::trace_zero(c.n, k);
  return RootSystemA(c.n, k, c.dim == 0 ? -1 : c.dim);
}

ErrorEstimate error_mode(const SweepConfig& c) {
  if (c.error == "refine") return ErrorEstimate::Refine;
  if (c.error == "coarsen") return ErrorEstimate::Coarsen;
  if (c.error == "none") return ErrorEstimate::None;
  return resolve_error_mode(ErrorEstimate::Auto, c.n);
}

SphericalOptions spherical_options(const SweepConfig& c) {
  SphericalOptions q;
  q.nodes = c.nodes;
  q.error = error_mode(c);
  return q;
}

// Active-coordinate shape with top-to-bottom gaps g (normalized to total 1),
// centered when `center` is set.
Vector shape(const std::vector<double>& gaps, bool center) {
  double total = 0.0;
  for (double g : gaps) total += g;
  Vector v(gaps.size() + 1);
  v(gaps.size()) = 0.0;
  for (int i = static_cast<int>(gaps.size()) - 1; i >= 0; --i) v(i) = v(i + 1) + gaps[i] / total;
  if (center) v.array() -= v.mean();
  return v;
}

std::vector<double> uniform_gaps(int n) { return std::vector<double>(n, 1.0); }

std::vector<double> geometric_gaps(int n, bool decreasing) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = std::pow(10.0, decreasing ? -i : i - (n - 1));
  return g;
}

// Embeds active coordinates into a storage vector.
Vector embed(const RootSystemA& rs, const Vector& act) {
  Vector out = Vector::Zero(rs.storage_size());
  for (int a = 0; a <= rs.rank(); ++a) out(rs.active()[a]) = act(a);
  if (rs.is_trace_zero()) out.array() -= out.mean();
  return out;
}

// A unit direction orthogonal to every root, or an empty vector.
Vector neutral_direction(const RootSystemA& rs) {
  Vector e = Vector::Zero(rs.storage_size());
  if (!rs.inactive().empty()) {
    e(rs.inactive()[0]) = 1.0;
    return e;
  }
  if (rs.is_trace_zero()) return Vector();
  for (int a : rs.active()) e(a) = 1.0;
  return e / e.norm();
}

double max_pairing_product(const RootSystemA& rs, const Vector& X, const Vector& Y) {
  double m = 0.0;
  for (const Root& a : rs.roots()) m = std::max(m, pairing(a, X) * pairing(a, Y));
  return m;
}

void push_vec(std::vector<double>& dst, const Vector& v) {
  for (int i = 0; i < v.size(); ++i) dst.push_back(v(i));
}

void add_vec_columns(std::vector<std::string>& cols, const char* name, int size) {
  for (int i = 1; i <= size; ++i) cols.push_back(std::string(name) + "_" + std::to_string(i));
}

Grid spherical_grid(const SweepConfig& c, bool prop, bool truncated) {
  Grid g;
  RootSystemA probe = make_rs(c, c.k.front());
  const int sz = probe.storage_size();
  g.columns = {"k"};
  add_vec_columns(g.columns, "lambda", sz);
  add_vec_columns(g.columns, "x", sz);
  g.columns.push_back("product");
  // Only the spherical claim is tested for drift along the product axis.
  g.drift = prop ? -1 : static_cast<int>(g.columns.size()) - 1;
  const int n = c.n;
  std::vector<std::pair<Vector, Vector>> shapes;
  if (truncated) {
    shapes.push_back({shape(uniform_gaps(n), false), shape(geometric_gaps(n, false), true)});
    shapes.push_back({shape(geometric_gaps(n, true), false), shape(geometric_gaps(n, false), true)});
  } else {
    shapes.push_back({shape(uniform_gaps(n), false), shape(uniform_gaps(n), true)});
    shapes.push_back({shape(geometric_gaps(n, true), false), shape(geometric_gaps(n, false), false)});
  }
  const SphericalOptions q = spherical_options(c);
  for (double k : c.k) {
    const RootSystemA rs = make_rs(c, k);
    for (const auto& [lh, xh] : shapes) {
      for (double P : c.product.values()) {
        const Vector lam = embed(rs, std::sqrt(P) * lh);
        const Vector X = embed(rs, std::sqrt(P) * xh);
        Point p;
        p.group = group_label(k);
        p.inputs = {k};
        push_vec(p.inputs, lam);
        push_vec(p.inputs, X);
        p.inputs.push_back(max_pairing_product(rs, lam, X));
        if (prop) {
          PropInOptions po;
          po.nodes = c.nodes;
          po.error = q.error;
          if (truncated) {
            p.eval = [rs, lam, X, po]() {
              PropInOptions a = po;
              a.truncated = true;
              const KernelValue part = prop_In(rs, lam, X, a);
              const KernelValue whole = prop_In(rs, lam, X, po);
              double err = std::max(part.rel_error, whole.rel_error);
              return Outcome{part.log_value, whole.log_value, err};
            };
          } else {
            p.eval = [rs, lam, X, po]() {
              const KernelValue v = prop_In(rs, lam, X, po);
              return Outcome{v.log_value, log_prop_In_envelope(rs, lam, X), v.rel_error};
            };
          }
        } else {
          p.eval = [rs, lam, X, q]() {
            const KernelValue v = spherical_exact(rs, lam, X, q);
            return Outcome{v.log_value, log_spherical_envelope(rs, lam, X), v.rel_error};
          };
        }
        g.points.push_back(std::move(p));
      }
    }
  }
  return g;
}

Grid heat_grid(const SweepConfig& c) {
  Grid g;
  RootSystemA probe = make_rs(c, c.k.front());
  const int sz = probe.storage_size();
  g.columns = {"k", "t"};
  add_vec_columns(g.columns, "x", sz);
  add_vec_columns(g.columns, "y", sz);
  g.columns.push_back("product");
  const SphericalOptions q = spherical_options(c);
  const Vector xh = shape(uniform_gaps(c.n), true);
  double amax = 0.0;
  for (const Root& a : probe.roots()) amax = std::max(amax, std::abs(pairing(a, embed(probe, xh))));
  for (double k : c.k) {
    const RootSystemA rs = make_rs(c, k);
    const Vector xs = embed(rs, xh);
    for (double t : c.t.values()) {
      for (double Q : c.product.values()) {
        for (int mode = 0; mode < 2; ++mode) {
          // alpha(X) alpha(Y) = Q t on the widest root.
          const double c2 = Q * t / (amax * amax);
          const double a = mode == 0 ? std::sqrt(c2) : -std::sqrt(t) + std::sqrt(t + c2);
          const double b = mode == 0 ? a : a + 2.0 * std::sqrt(t);
          const Vector X = a * xs, Y = b * xs;
          Point p;
          p.group = group_label(k);
          p.inputs = {k, t};
          push_vec(p.inputs, X);
          push_vec(p.inputs, Y);
          p.inputs.push_back(max_pairing_product(rs, X, Y));
          p.eval = [rs, t, X, Y, q]() {
            const KernelValue v = heat_exact(rs, t, X, Y, q);
            return Outcome{v.log_value, log_heat_envelope(rs, t, X, Y), v.rel_error};
          };
          g.points.push_back(std::move(p));
        }
      }
    }
  }
  return g;
}

Grid newton_grid(const SweepConfig& c) {
  Grid g;
  RootSystemA probe = make_rs(c, c.k.front());
  const int sz = probe.storage_size();
  g.columns = {"k"};
  add_vec_columns(g.columns, "x", sz);
  add_vec_columns(g.columns, "y", sz);
  g.columns.push_back("product");
  const SphericalOptions q = spherical_options(c);
  const Vector xh = shape(uniform_gaps(c.n), true);
  for (double k : c.k) {
    const RootSystemA rs = make_rs(c, k);
    const Vector xs = embed(rs, xh);
    const Vector e = neutral_direction(rs);
    double amax = 0.0;
    for (const Root& a : rs.roots()) amax = std::max(amax, std::abs(pairing(a, xs)));
    for (double rho : c.product.values()) {
      for (int mode = 0; mode < 2; ++mode) {
        Vector X, Y;
        if (mode == 0 && e.size() > 0) {
          // Unit offset along a direction the roots do not see.
          X = std::sqrt(rho) / amax * xs;
          Y = X + e;
        } else if (mode == 1) {
          // Radial offset of length 1: r (r + h) amax^2 = rho h^2 |xs|^2.
          const double h = 1.0 / xs.norm();
          const double cc = rho * h * h * xs.squaredNorm() / (amax * amax);
          const double r = 0.5 * (-h + std::sqrt(h * h + 4.0 * cc));
          X = r * xs;
          Y = (r + h) * xs;
        } else {
          continue;
        }
        Point p;
        p.group = group_label(k);
        p.inputs = {k};
        push_vec(p.inputs, X);
        push_vec(p.inputs, Y);
        p.inputs.push_back(max_pairing_product(rs, X, Y) / (X - Y).squaredNorm());
        p.eval = [rs, X, Y, q]() {
          NewtonParams np{rs, X, Y, q, 16};
          const KernelValue v = newton_exact(np);
          return Outcome{v.log_value, log_newton_envelope(rs, X, Y), v.rel_error};
        };
        g.points.push_back(std::move(p));
      }
    }
  }
  return g;
}

Grid stable_grid(const SweepConfig& c) {
  Grid g;
  RootSystemA probe = make_rs(c, c.k.front());
  const int sz = probe.storage_size();
  g.columns = {"k", "s", "t"};
  add_vec_columns(g.columns, "x", sz);
  add_vec_columns(g.columns, "y", sz);
  g.columns.push_back("product");
  SphericalOptions q = spherical_options(c);
  const Vector xh = shape(uniform_gaps(c.n), true);
  for (double k : c.k) {
    const RootSystemA rs = make_rs(c, k);
    const Vector xs = embed(rs, xh);
    const Vector unit = xs / xs.norm();
    const Vector e = neutral_direction(rs);
    for (double s : c.s) {
      std::ostringstream label;
      label << "k=" << k << "/s=" << s;
      for (double t : c.t.values()) {
        const double scale = std::pow(t, 1.0 / s);
        for (double rho : c.product.values()) {
          const double D = std::sqrt(rho) * scale;
          for (int mode = 0; mode < 3; ++mode) {
            Vector X, Y;
            if (mode == 0) {
              X = Vector::Zero(rs.storage_size());
              Y = D * unit;
            } else if (mode == 1) {
              X = scale * unit;
              Y = X + D * unit;
            } else if (e.size() > 0) {
              X = scale * unit;
              Y = X + D * e;
            } else {
              continue;
            }
            Point p;
            p.group = label.str();
            p.inputs = {k, s, t};
            push_vec(p.inputs, X);
            push_vec(p.inputs, Y);
            p.inputs.push_back((X - Y).squaredNorm() / (scale * scale));
            p.eval = [rs, s, t, X, Y, q]() {
              StableParams sp{rs, s, t, X, Y, q, SubordinatorMethod::Auto, 10};
              const KernelValue v = stable_exact(sp);
              return Outcome{v.log_value, log_stable_envelope(rs, s, t, X, Y), v.rel_error};
            };
            g.points.push_back(std::move(p));
          }
        }
      }
    }
  }
  return g;
}

Grid lemma_grid(const SweepConfig& c) {
  const ClaimId id = lemma_id(c.kernel);
  if (id == ClaimId::PropIn) return spherical_grid(c, true, false);
  if (id == ClaimId::PropTruncated) return spherical_grid(c, true, true);
  Grid g;
  const double sc = c.scale;
  for (double k : c.k) {
    const std::string label = group_label(k);
    switch (id) {
      case ClaimId::LemmaA: {
        g.columns = {"k", "x"};
        for (double x0 : c.product.values()) {
          const double x = x0 * sc;
          Point p{label, {k, x}, [k, x]() {
                    return Outcome{std::log(lower_gamma(k, x)), k * std::log(x / (1.0 + x)),
                                   std::numeric_limits<double>::quiet_NaN()};
                  }};
          g.points.push_back(std::move(p));
        }
        break;
      }
      case ClaimId::LemmaAi: {
        g.columns = {"k", "N", "a", "b_1", "b_2", "product"};
        for (double N : {2.0 * k - 0.5, 2.0 * k + 1.0}) {
          for (double r : c.product.values()) {
            const double a = sc, b1 = r * sc, b2 = 10.0 * r * sc;
            Point p{label, {k, N, a, b1, b2, r}, [k, N, a, b1, b2]() {
                      const double b[2] = {b1, b2};
                      return Outcome{log_algebraic_laplace(k, N, a, b),
                                     -k * (std::log(a + b1) + std::log(a + b2)),
                                     std::numeric_limits<double>::quiet_NaN()};
                    }};
            g.points.push_back(std::move(p));
          }
        }
        break;
      }
      case ClaimId::LemmaA1: {
        g.columns = {"k", "a", "b", "product"};
        for (double r : c.product.values()) {
          const double a = sc, b = r * sc;
          Point p{label, {k, a, b, r}, [k, a, b]() {
                    const double bs[1] = {b};
                    return Outcome{log_algebraic_laplace(k, k - 1.0, a, bs),
                                   std::log(std::log(2.0 + b / a)) - k * std::log(a + b),
                                   std::numeric_limits<double>::quiet_NaN()};
                  }};
          g.points.push_back(std::move(p));
        }
        break;
      }
      case ClaimId::LemmaA2: {
        g.columns = {"k", "a", "b_1", "b_2", "b_3", "product"};
        for (int mode = 0; mode < 2; ++mode) {
          for (double r : c.product.values()) {
            const double a = sc;
            const double b1 = (mode == 0 ? r : 0.1 * r) * sc;
            const double b2 = (mode == 0 ? 3.0 * r : r) * sc;
            const double b3 = 10.0 * r * sc;
            Point p{label, {k, a, b1, b2, b3, r}, [k, a, b1, b2, b3]() {
                      const double bs[3] = {b1, b2, b3};
                      double env = std::log(std::log(2.0 + b1 / a));
                      for (double b : bs) env -= k * std::log(a + b);
                      return Outcome{log_algebraic_laplace(k, 3.0 * k - 1.0, a, bs), env,
                                     std::numeric_limits<double>::quiet_NaN()};
                    }};
            g.points.push_back(std::move(p));
          }
        }
        break;
      }
      default:
        break;
    }
  }
  return g;
}

Grid build_grid(const SweepConfig& c) {
  if (c.kernel == "spherical") return spherical_grid(c, false, false);
  if (c.kernel == "heat") return heat_grid(c);
  if (c.kernel == "newton") return newton_grid(c);
  if (c.kernel == "stable") return stable_grid(c);
  return lemma_grid(c);
}

double spherical_cost(int n, int nodes, ErrorEstimate e) {
  const int q = nodes > 0 ? nodes : default_nodes(n);
  auto nominal = [n](double qq) {
    double total = 0.0, per = 1.0;
    for (int r = n; r > 0; --r) {
      per *= std::pow(qq, r);
      total += per;
    }
    return total;
  };
  double cost = nominal(q);
  if (e == ErrorEstimate::Refine) cost += nominal(2.0 * q);
  if (e == ErrorEstimate::Coarsen) cost += nominal(q / 2.0);
  return cost;
}

}  // namespace

double estimate_cost(const SweepConfig& c) {
  c.validate();
  const Grid g = build_grid(c);
  const double pts = static_cast<double>(g.points.size());
  const ErrorEstimate e = error_mode(c);
  if (c.kernel == "spherical") return pts * spherical_cost(c.n, c.nodes, e);
  if (c.kernel == "heat") return pts * spherical_cost(c.n, c.nodes, e);
  if (c.kernel == "newton") return pts * 1.5 * 400.0 * spherical_cost(c.n, c.nodes, ErrorEstimate::None);
  if (c.kernel == "stable") return pts * 1.5 * 1500.0 * spherical_cost(c.n, c.nodes, ErrorEstimate::None);
  const ClaimId id = lemma_id(c.kernel);
  if (id == ClaimId::PropIn || id == ClaimId::PropTruncated) {
    const int q = c.nodes > 0 ? c.nodes : default_nodes(c.n);
    return pts * 3.0 * std::pow(2.0 * q, c.n);
  }
  return pts * 1e4;
}

namespace {

// Brackets are a property of the claim, so they are rebuilt from the config.
void apply_brackets(RatioReport& r) {
  if (!is_lemma(r.config.kernel)) return;
  const ClaimId id = lemma_id(r.config.kernel);
  for (GroupSummary& g : r.groups) {
    if (id == ClaimId::LemmaA) {
      const double k = std::stod(g.label.substr(2));
      const auto [l0, l1] = lemma_A_limits(k);
      g.bracket_lo = 0.5 * std::min(l0, l1);
      g.bracket_hi = 2.0 * std::max(l0, l1);
    } else if (id == ClaimId::PropTruncated) {
      g.bracket_hi = 1.0 + 1e-9;
    }
  }
}

}  // namespace

bool RatioReport::pass() const {
  if (groups.empty()) return false;
  for (const GroupSummary& g : groups)
    if (!g.pass) return false;
  return true;
}

void summarize(RatioReport& r) {
  r.groups.clear();
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const SweepRow& row = r.rows[i];
    auto it = std::find_if(r.groups.begin(), r.groups.end(),
                           [&](const GroupSummary& g) { return g.label == row.group; });
    if (it == r.groups.end()) {
      GroupSummary g;
      g.label = row.group;
      g.min_ratio = g.max_ratio = row.ratio;
      g.argmin = g.argmax = i;
      r.groups.push_back(g);
      it = r.groups.end() - 1;
    }
    GroupSummary& g = *it;
    ++g.samples;
    if (row.ratio < g.min_ratio || std::isnan(row.ratio)) {
      g.min_ratio = row.ratio;
      g.argmin = i;
    }
    if (row.ratio > g.max_ratio || std::isnan(row.ratio)) {
      g.max_ratio = row.ratio;
      g.argmax = i;
    }
  }
  for (GroupSummary& g : r.groups) {
    g.spread = g.max_ratio / g.min_ratio;
    bool finite = true;
    double sx = 0, sy = 0, sxx = 0, sxy = 0, m = 0;
    for (const SweepRow& row : r.rows) {
      if (row.group != g.label) continue;
      if (!(row.ratio > 0.0) || !std::isfinite(row.ratio)) finite = false;
      if (r.drift_column >= 0) {
        const double x = std::log(row.inputs[r.drift_column]);
        const double y = std::log(row.ratio);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        m += 1.0;
      }
    }
    if (r.drift_column >= 0 && m >= 2.0) {
      const double den = m * sxx - sx * sx;
      g.slope = den > 0.0 ? (m * sxy - sx * sy) / den : 0.0;
    }
    g.pass = finite;
  }
  apply_brackets(r);
  for (GroupSummary& g : r.groups)
    g.pass = g.pass && g.spread <= r.config.spread_limit && g.min_ratio >= g.bracket_lo &&
             g.max_ratio <= g.bracket_hi &&
             (std::isnan(g.slope) || std::abs(g.slope) < r.config.slope_limit);
}

namespace {

void finish(RatioReport& r) { summarize(r); }

}  // namespace

RatioReport run_sweep(const SweepConfig& config,
                      const std::function<void(std::size_t, std::size_t)>& progress) {
  config.validate();
  Grid grid = build_grid(config);
  if (grid.points.empty()) throw DomainError("empty grid");
  const double cost = estimate_cost(config);
  if (cost > static_cast<double>(config.budget)) {
    std::ostringstream os;
    os << "sweep needs about " << cost << " evaluations, over the budget of " << config.budget;
    throw BudgetExceeded(os.str());
  }
  RatioReport r;
  r.config = config;
  r.columns = grid.columns;
  r.drift_column = grid.drift;
  r.rows.resize(grid.points.size());

  const std::size_t total = grid.points.size();
  unsigned workers = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                        : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, total));
  std::atomic<std::size_t> next{0}, done{0};
  std::vector<std::exception_ptr> errors(total);
  std::mutex progress_mutex;
  auto work = [&]() {
    for (std::size_t i = next++; i < total; i = next++) {
      Point& p = grid.points[i];
      SweepRow& row = r.rows[i];
      row.group = p.group;
      row.inputs = p.inputs;
      try {
        const Outcome o = p.eval();
        row.log_exact = o.log_exact;
        row.log_envelope = o.log_envelope;
        row.ratio = std::exp(o.log_exact - o.log_envelope);
        row.err_indicator = o.err;
      } catch (...) {
        errors[i] = std::current_exception();
      }
      const std::size_t d = ++done;
      if (progress) {
        std::lock_guard<std::mutex> lock(progress_mutex);
        progress(d, total);
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (std::thread& th : pool) th.join();
  for (std::size_t i = 0; i < total; ++i) {
    if (!errors[i]) continue;
    std::ostringstream where;
    where << "grid point " << i << " (";
    for (std::size_t c = 0; c < r.columns.size(); ++c)
      where << (c ? ", " : "") << r.columns[c] << "=" << r.rows[i].inputs[c];
    where << "): ";
    try {
      std::rethrow_exception(errors[i]);
    } catch (const DomainError& e) {
      throw DomainError(where.str() + e.what());
    } catch (const BudgetExceeded& e) {
      throw BudgetExceeded(where.str() + e.what());
    } catch (const std::exception& e) {
      throw EvaluationError(where.str() + e.what());
    }
  }
  finish(r);
  return r;
}

std::string log_decimal(double log_value) {
  if (std::isnan(log_value)) return "nan";
  if (log_value == -std::numeric_limits<double>::infinity()) return "0";
  if (log_value == std::numeric_limits<double>::infinity()) return "inf";
  const double l10 = log_value / std::log(10.0);
  long e = static_cast<long>(std::floor(l10));
  double m = std::pow(10.0, l10 - static_cast<double>(e));
  if (m >= 10.0) {
    m /= 10.0;
    ++e;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.16fe%+ld", m, e);
  return buf;
}

double parse_log_decimal(const std::string& text) {
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (text == "0") return -std::numeric_limits<double>::infinity();
  if (text == "inf") return std::numeric_limits<double>::infinity();
  const auto pos = text.find_first_of("eE");
  if (pos == std::string::npos) return std::log(std::stod(text));
  const double m = std::stod(text.substr(0, pos));
  const long e = std::stol(text.substr(pos + 1));
  return std::log(m) + static_cast<double>(e) * std::log(10.0);
}

namespace {

std::string num17(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_num(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  return std::stod(s);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.push_back("");
  return out;
}

nlohmann::json range_json(const Range& r) {
  return {{"lo", r.lo}, {"hi", r.hi}, {"count", r.count}, {"log", r.log}};
}

Range range_from(const nlohmann::json& j) {
  return Range{j.at("lo").get<double>(), j.at("hi").get<double>(), j.at("count").get<int>(),
               j.at("log").get<bool>()};
}

nlohmann::json config_json(const SweepConfig& c) {
  return {{"kernel", c.kernel},
          {"n", c.n},
          {"dim", c.dim},
          {"trace_zero", c.trace_zero},
          {"k", c.k},
          {"product", range_json(c.product)},
          {"t", range_json(c.t)},
          {"s", c.s},
          {"scale", c.scale},
          {"nodes", c.nodes},
          {"error", c.error},
          {"spread_limit", c.spread_limit},
          {"slope_limit", c.slope_limit},
          {"threads", c.threads},
          {"budget", c.budget},
          {"output", c.output},
          {"format", c.format}};
}

SweepConfig config_from(const nlohmann::json& j) {
  SweepConfig c;
  c.kernel = j.at("kernel").get<std::string>();
  c.n = j.at("n").get<int>();
  c.dim = j.at("dim").get<int>();
  c.trace_zero = j.at("trace_zero").get<bool>();
  c.k = j.at("k").get<std::vector<double>>();
  c.product = range_from(j.at("product"));
  c.t = range_from(j.at("t"));
  c.s = j.at("s").get<std::vector<double>>();
  c.scale = j.at("scale").get<double>();
  c.nodes = j.at("nodes").get<int>();
  c.error = j.at("error").get<std::string>();
  c.spread_limit = j.at("spread_limit").get<double>();
  c.slope_limit = j.at("slope_limit").get<double>();
  c.threads = j.at("threads").get<int>();
  c.budget = j.at("budget").get<std::int64_t>();
  c.output = j.at("output").get<std::string>();
  c.format = j.at("format").get<std::string>();
  return c;
}

nlohmann::json num_json(double v) {
  if (std::isfinite(v)) return v;
  return num17(v);
}

double num_from(const nlohmann::json& j) {
  if (j.is_string()) return parse_num(j.get<std::string>());
  return j.get<double>();
}

}  // namespace

void write_csv(const RatioReport& r, std::ostream& out) {
  out << "group";
  for (const std::string& c : r.columns) out << ',' << c;
  out << ",exact,envelope,ratio,err_indicator\n";
  for (const SweepRow& row : r.rows) {
    out << row.group;
    for (double v : row.inputs) out << ',' << num17(v);
    out << ',' << log_decimal(row.log_exact) << ',' << log_decimal(row.log_envelope) << ','
        << num17(row.ratio) << ',' << num17(row.err_indicator) << '\n';
  }
  out << "# kernel=" << r.config.kernel << " n=" << r.config.n << " drift_column="
      << r.drift_column << " spread_limit=" << num17(r.config.spread_limit)
      << " slope_limit=" << num17(r.config.slope_limit) << '\n';
  for (const GroupSummary& g : r.groups) {
    out << "# group=" << g.label << " min=" << num17(g.min_ratio) << " max=" << num17(g.max_ratio)
        << " spread=" << num17(g.spread) << " argmin=" << g.argmin << " argmax=" << g.argmax
        << " samples=" << g.samples << " slope=" << num17(g.slope)
        << " result=" << (g.pass ? "PASS" : "FAIL") << '\n';
  }
}

RatioReport read_csv(std::istream& in) {
  RatioReport r;
  std::string line;
  if (!std::getline(in, line)) throw DomainError("empty CSV report");
  std::vector<std::string> head = split(line, ',');
  if (head.size() < 5 || head.front() != "group") throw DomainError("not a sweep CSV report");
  r.columns.assign(head.begin() + 1, head.end() - 4);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream is(line.substr(1));
      std::string tok;
      while (is >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (key == "kernel") r.config.kernel = val;
        else if (key == "n") r.config.n = std::stoi(val);
        else if (key == "drift_column") r.drift_column = std::stoi(val);
        else if (key == "spread_limit") r.config.spread_limit = parse_num(val);
        else if (key == "slope_limit") r.config.slope_limit = parse_num(val);
      }
      continue;
    }
    const std::vector<std::string> f = split(line, ',');
    if (f.size() != head.size()) throw DomainError("CSV row has the wrong number of fields");
    SweepRow row;
    row.group = f[0];
    for (std::size_t i = 1; i + 4 < f.size(); ++i) row.inputs.push_back(parse_num(f[i]));
    row.log_exact = parse_log_decimal(f[f.size() - 4]);
    row.log_envelope = parse_log_decimal(f[f.size() - 3]);
    row.ratio = parse_num(f[f.size() - 2]);
    row.err_indicator = parse_num(f[f.size() - 1]);
    r.rows.push_back(std::move(row));
  }
  finish(r);
  return r;
}

void write_json(const RatioReport& r, std::ostream& out) {
  nlohmann::json j;
  j["config"] = config_json(r.config);
  j["columns"] = r.columns;
  j["drift_column"] = r.drift_column;
  nlohmann::json rows = nlohmann::json::array();
  for (const SweepRow& row : r.rows) {
    nlohmann::json in = nlohmann::json::array();
    for (double v : row.inputs) in.push_back(num_json(v));
    rows.push_back({{"group", row.group},
                    {"inputs", in},
                    {"exact", log_decimal(row.log_exact)},
                    {"envelope", log_decimal(row.log_envelope)},
                    {"log_exact", num_json(row.log_exact)},
                    {"log_envelope", num_json(row.log_envelope)},
                    {"ratio", num_json(row.ratio)},
                    {"err_indicator", num_json(row.err_indicator)}});
  }
  j["rows"] = rows;
  nlohmann::json groups = nlohmann::json::array();
  for (const GroupSummary& g : r.groups)
    groups.push_back({{"group", g.label},
                      {"min", num_json(g.min_ratio)},
                      {"max", num_json(g.max_ratio)},
                      {"spread", num_json(g.spread)},
                      {"argmin", g.argmin},
                      {"argmax", g.argmax},
                      {"samples", g.samples},
                      {"slope", num_json(g.slope)},
                      {"pass", g.pass}});
  j["summary"] = groups;
  j["pass"] = r.pass();
  out << std::setw(1) << j << '\n';
}

RatioReport read_json(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed JSON report: ") + e.what());
  }
  RatioReport r;
  r.config = config_from(j.at("config"));
  r.columns = j.at("columns").get<std::vector<std::string>>();
  r.drift_column = j.at("drift_column").get<int>();
  for (const auto& jr : j.at("rows")) {
    SweepRow row;
    row.group = jr.at("group").get<std::string>();
    for (const auto& v : jr.at("inputs")) row.inputs.push_back(num_from(v));
    row.log_exact = num_from(jr.at("log_exact"));
    row.log_envelope = num_from(jr.at("log_envelope"));
    row.ratio = num_from(jr.at("ratio"));
    row.err_indicator = num_from(jr.at("err_indicator"));
    r.rows.push_back(std::move(row));
  }
  finish(r);
  return r;
}

std::string summary_text(const RatioReport& r) {
  std::ostringstream os;
  os << std::setprecision(6);
  for (const GroupSummary& g : r.groups) {
    os << r.config.kernel << " n=" << r.config.n << " " << g.label << " samples=" << g.samples
       << " min=" << g.min_ratio << " max=" << g.max_ratio << " spread=" << g.spread;
    if (!std::isnan(g.slope)) os << " slope=" << g.slope;
    os << " " << (g.pass ? "PASS" : "FAIL") << '\n';
  }
  return os.str();
}

}  // namespace dunkl
