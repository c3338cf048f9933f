#include "dunkl/selftest.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>

#include "dunkl/asymlab.hpp"
#include "dunkl/certify.hpp"
#include "dunkl/heatkernel.hpp"
#include "dunkl/newton.hpp"
#include "dunkl/quad.hpp"
#include "dunkl/special.hpp"
#include "dunkl/spherical.hpp"
#include "dunkl/stable.hpp"

namespace dunkl {

bool SelftestResult::pass() const {
  for (const SelftestCheck& c : checks)
    if (!c.pass) return false;
  return !checks.empty();
}

std::string SelftestResult::text() const {
  std::ostringstream os;
  for (const SelftestCheck& c : checks)
    os << (c.pass ? "PASS " : "FAIL ") << c.name << (c.detail.empty() ? "" : " ") << c.detail
       << '\n';
  return os.str();
}

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

std::string fmt(double got, double want) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "got %.10g want %.10g", got, want);
  return buf;
}

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

class Suite {
 public:
  void close(const std::string& name, double got, double want, double tol) {
    const double r = want == 0.0 ? std::abs(got) : rel(got, want);
    add(name, r <= tol, fmt(got, want));
  }
  void add(const std::string& name, bool ok, const std::string& detail = {}) {
    out.checks.push_back({name, ok, detail});
  }
  void guarded(const std::string& name, const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      add(name, false, std::string("threw: ") + e.what());
    }
  }
  template <typename E>
  void throws(const std::string& name, const std::function<void()>& body) {
    try {
      body();
      add(name, false, "no error raised");
    } catch (const E&) {
      add(name, true);
    } catch (const std::exception& e) {
      add(name, false, std::string("wrong error: ") + e.what());
    }
  }
  SelftestResult out;
};

}  // namespace

SelftestResult run_selftest(const SelftestOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  Suite s;
  const double e = std::numbers::e;

  s.guarded("rootsys", [&] {
    s.add("rootsys.roots_A1", RootSystemA(1, 1.0).roots().size() == 1);
    const RootSystemA a2(2, 1.0);
    const auto& r2 = a2.roots();
    s.add("rootsys.roots_A2",
          r2.size() == 3 && r2[0] == Root{0, 1} && r2[1] == Root{0, 2} && r2[2] == Root{1, 2});
    s.add("rootsys.roots_A3", RootSystemA(3, 1.0).roots().size() == 6);
    s.close("rootsys.pairing", pairing(Root{0, 2}, vec({2, 0, -2})), 4.0, 0.0);
    s.add("rootsys.reflect", reflect(Root{0, 1}, vec({5, 3})) == vec({3, 5}));
    s.close("rootsys.weight_A2", weight(RootSystemA(2, 1.0), vec({2, 0, -2})), 256.0, 1e-14);
    s.close("rootsys.weight_A1", weight(RootSystemA(1, 0.5), vec({1, 0})), 1.0, 1e-14);
    s.close("rootsys.vandermonde", vandermonde(RootSystemA(2, 1.0), vec({2, 1, 0})), 2.0, 0.0);
    s.close("rootsys.reflected_distance", reflected_distance_sq(Root{0, 1}, vec({1, 0}), vec({2, 0})),
            5.0, 1e-15);
  });

  s.guarded("quad", [&] {
    s.close("quad.jacobi_sum_half", jacobi_rule(16, 0.5, 0.0, 0.0, 1.0).sum_weights(), 2.0 / 3.0,
            1e-13);
    s.close("quad.jacobi_sum_arcsine", jacobi_rule(16, -0.5, -0.5, 0.0, 1.0).sum_weights(),
            std::numbers::pi, 1e-13);
    QuadratureSpec q;
    q.left_exponent = -0.5;
    q.nodes = 16;
    s.close("quad.incomplete_gamma",
            integrate_1d(q, [](double u) { return std::exp(-u); }, 0.0, 1.0).value(),
            lower_gamma(0.5, 1.0), 1e-12);
    QuadratureSpec lg;
    lg.family = RuleFamily::GaussLaguerre;
    lg.nodes = 8;
    s.close("quad.laguerre", integrate_1d(lg, [](double u) { return u; }, 0.0,
                                          std::numeric_limits<double>::infinity())
                                 .value(),
            1.0, 1e-12);
  });

  s.guarded("spherical", [&] {
    const RootSystemA a1(1, 1.0), a2(2, 1.0);
    s.close("spherical.lambda_zero", spherical_exact(RootSystemA(2, 0.7), vec({0, 0, 0}),
                                                     vec({1, 0.2, -1}))
                                         .value(),
            1.0, 1e-6);
    s.close("spherical.A1_k1", spherical_exact(a1, vec({1, 0}), vec({1, 0})).value(), e - 1.0,
            1e-6);
    const double pts[3][6] = {{2, 1, 0, 1, 0, -1}, {3.5, 0.4, -1, 0.7, 0.1, -0.3},
                              {6, 2, 1.5, 2, -0.5, -1}};
    for (int i = 0; i < 3; ++i) {
      const Vector l = vec({pts[i][0], pts[i][1], pts[i][2]});
      const Vector x = vec({pts[i][3], pts[i][4], pts[i][5]});
      s.close("spherical.A2_k1_oracle_" + std::to_string(i),
              spherical_exact(a2, l, x).value(), spherical_oracle_k1(a2, l, x), 1e-4);
    }
    const double p1[3][4] = {{1.3, -0.2, 0.9, 0.1}, {4, 1, 2, -3}, {0.5, 0.25, 3, 1}};
    for (int i = 0; i < 3; ++i) {
      const Vector l = vec({p1[i][0], p1[i][1]}), x = vec({p1[i][2], p1[i][3]});
      s.close("spherical.A1_k1_oracle_" + std::to_string(i), spherical_exact(a1, l, x).value(),
              spherical_oracle_k1(a1, l, x), 1e-6);
    }
    s.close("spherical.envelope_A1", spherical_envelope(RootSystemA(1, 2.0), vec({3, 0}), vec({2, 0})),
            std::exp(6.0) / 49.0, 1e-14);
    s.close("spherical.envelope_A2", spherical_envelope(a2, vec({1, 0, 0}), vec({1, 0, 0})), e / 4.0,
            1e-14);
  });

  s.guarded("heat", [&] {
    const RootSystemA a1(1, 1.0);
    const double t = 0.7;
    const Vector z = vec({0, 0});
    const double want = -log_c_norm(a1) - (a1.gamma() + 1.0) * std::numbers::ln2 -
                        (1.0 + a1.gamma()) * std::log(t);
    s.close("heat.origin", heat_exact(a1, t, z, z).log_value, want, 1e-12);
    s.close("heat.envelope", heat_envelope(a1, 1.0, vec({1, -1}), vec({1, -1})), 0.2, 1e-14);
    const double mass = heat_mass(a1, 1.0, vec({0.3, -0.2}), {}, log_c_norm(a1) + opt.log_c_offset);
    s.add("heat.mass_identity", std::abs(mass - 1.0) <= 1e-3, fmt(mass, 1.0));
  });

  s.guarded("newton", [&] {
    const RootSystemA a1(1, 1.0, 3);
    // |X - Y|^2 = 1 and |X - sigma Y|^2 = 5.
    const Vector X = vec({1, 0, 0}), Y = vec({2, 0, 0});
    s.close("newton.envelope_d3", newton_envelope_d3(a1, X, Y), 0.2, 1e-14);
    const RootSystemA p1(1, 1.0);
    s.add("newton.d2_numerator",
          newton_d2_a1_numerator(p1, vec({1, 0}), vec({3, 0.5})) >= std::numbers::ln2);
    s.throws<DomainError>("newton.diagonal", [&] { newton_exact(a1, X, X); });
  });

  s.guarded("stable", [&] {
    s.close("stable.subordinator_s1", subordinator_density(1.0, 1.0, 1.0),
            std::exp(-0.25) / (2.0 * std::sqrt(std::numbers::pi)), 1e-12);
    const Vector X = vec({1, 0}), Y = vec({0, 0});
    // t^{2/s} = |X - Y|^2 = 1 at t = 1.
    s.close("stable.min_form_crossover", euclid_stable_min_form(2, 1.0, 1.0, X, Y), 1.0, 1e-14);
    const RootSystemA a1(1, 1.0);
    const double t = 2.0, ss = 1.5;
    s.close("stable.envelope_origin", stable_envelope(a1, ss, t, Y, Y),
            std::pow(t, -2.0 / ss - 2.0 * a1.gamma() / ss), 1e-12);
  });

  s.guarded("asymlab", [&] {
    s.close("asymlab.lemma_A", lemma_A_ratio(1.0, 1.0), (1.0 - 1.0 / e) * 2.0, 1e-12);
    s.close("asymlab.lemma_a1", lemma_a1_ratio(1.0, 1.0, 1.0),
            2.0 * e * 0.21938393439552027368 / std::log(3.0), 1e-8);
    const double b[1] = {0.0};
    s.close("asymlab.lemma_ai", lemma_ai_ratio(1.0, 3.0, 1.0, b), 6.0, 1e-10);
  });

  s.guarded("certify", [&] {
    SweepConfig c;
    c.kernel = "spherical";
    c.product = {1.0, 1.0, 1, true};
    c.k = {1.0};
    c.threads = 1;
    RatioReport r = run_sweep(c);
    // Two shapes at one product value; a single row must give spread 1.
    r.rows.resize(1);
    summarize(r);
    s.add("certify.single_point", r.groups.size() == 1 && r.groups[0].spread == 1.0 && r.pass());
  });

  s.out.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return s.out;
}

}  // namespace dunkl
