#include <doctest.h>

#include <array>
#include <numbers>

#include "dunkl/error.hpp"
#include "dunkl/quad.hpp"
#include "support.hpp"

using namespace dunkl;

TEST_SUITE("quad") {
  TEST_CASE("Jacobi weight sums match the Beta function") {
    const double e[] = {-0.9, -0.5, 0.0, 0.5, 2.0};
    for (double a : e)
      for (double b : e) {
        const double want = testing::beta(a + 1, b + 1);
        CHECK(jacobi_rule(12, a, b, 0.0, 1.0).sum_weights() ==
              doctest::Approx(want).epsilon(1e-12));
        // On [1, 3]: scaled by 2^{a + b + 1}.
        CHECK(jacobi_rule(12, a, b, 1.0, 3.0).sum_weights() ==
              doctest::Approx(want * std::pow(2.0, a + b + 1)).epsilon(1e-12));
      }
    CHECK(jacobi_rule(16, -0.5, -0.5, 0.0, 1.0).sum_weights() ==
          doctest::Approx(std::numbers::pi).epsilon(1e-13));
    CHECK(jacobi_rule(16, 0.5, 0.0, 0.0, 1.0).sum_weights() ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-13));
    CHECK(jacobi_rule(5, 0.0, 0.0, 0.0, 1.0).sum_weights() == doctest::Approx(1.0));
  }

  TEST_CASE("Gauss-Jacobi is exact to degree 2n - 1") {
    const int n = 6;
    const double a = -0.3, b = 1.7;
    const Rule r = jacobi_rule(n, a, b, 0.0, 1.0);
    for (int p = 0; p <= 2 * n - 1; ++p) {
      double s = 0.0;
      for (std::size_t i = 0; i < r.size(); ++i) s += r.w[i] * std::pow(r.x[i], p);
      CHECK(s == doctest::Approx(testing::beta(a + 1 + p, b + 1)).epsilon(1e-12));
    }
  }

  TEST_CASE("invalid exponents are rejected") {
    CHECK_THROWS_AS(jacobi_rule(8, -1.0, 0.0, 0.0, 1.0), DomainError);
    QuadratureSpec q;
    q.right_exponent = -1.5;
    CHECK_THROWS_AS(q.validate(), DomainError);
    q = {};
    q.nodes = 1;
    CHECK_THROWS_AS(q.validate(), DomainError);
  }

  TEST_CASE("integrate_1d examples") {
    QuadratureSpec q;
    q.nodes = 8;
    CHECK(integrate_1d(q, [](double) { return 1.0; }, 0.0, 1.0).value() ==
          doctest::Approx(1.0).epsilon(1e-14));
    q.left_exponent = -0.5;
    q.nodes = 16;
    const KernelValue g = integrate_1d(q, [](double u) { return std::exp(-u); }, 0.0, 1.0);
    CHECK(g.value() == doctest::Approx(testing::lower_gamma_series(0.5, 1.0)).epsilon(1e-12));
    CHECK(g.value() == doctest::Approx(1.49365).epsilon(1e-5));
    QuadratureSpec lg;
    lg.family = RuleFamily::GaussLaguerre;
    lg.nodes = 8;
    CHECK(integrate_1d(lg, [](double u) { return u; }, 0.0, INFINITY).value() ==
          doctest::Approx(1.0).epsilon(1e-12));
    QuadratureSpec simpson;
    simpson.family = RuleFamily::AdaptiveSimpson;
    simpson.tolerance = 1e-10;
    CHECK(integrate_1d(simpson, [](double x) { return 1.0 / std::sqrt(x * (1 - x)); }, 0.0, 1.0)
              .value() == doctest::Approx(std::numbers::pi).epsilon(1e-4));
  }

  TEST_CASE("non-finite integrand values are reported") {
    QuadratureSpec q;
    q.nodes = 4;
    CHECK_THROWS_AS(integrate_1d(q, [](double) { return NAN; }, 0.0, 1.0), EvaluationError);
  }

  TEST_CASE("nested integration") {
    // Interlacing intervals of X = (2, 1, 0).
    NestedDomain d{{1.0, 0.0}, {2.0, 1.0}, {0.0, 0.0}, {0.0, 0.0}};
    std::array<QuadratureSpec, 2> specs{};
    CHECK(integrate_nested(d, [](std::span<const double>) { return 1.0; }, specs).value() ==
          doctest::Approx(1.0).epsilon(1e-14));

    NestedDomain beta{{0.0}, {1.0}, {-0.5}, {-0.5}};
    std::array<QuadratureSpec, 1> one{};
    one[0].left_exponent = one[0].right_exponent = -0.5;
    CHECK(integrate_nested(beta, [](std::span<const double>) { return 1.0; }, one).value() ==
          doctest::Approx(std::numbers::pi).epsilon(1e-12));
  }

  TEST_CASE("property: separable nested integrals factor") {
    NestedDomain d{{0.2, -1.0}, {1.5, 0.3}, {0.5, 0.0}, {0.0, -0.4}};
    std::array<QuadratureSpec, 2> specs{};
    specs[0].left_exponent = 0.5;
    specs[1].right_exponent = -0.4;
    const auto f = [](double y) { return std::cos(y) + 2.0; };
    const auto g = [](double y) { return std::exp(0.3 * y); };
    const double joint =
        integrate_nested(d, [&](std::span<const double> y) { return f(y[0]) * g(y[1]); }, specs)
            .value();
    const double a = integrate_1d(specs[0], f, 0.2, 1.5).value();
    const double b = integrate_1d(specs[1], g, -1.0, 0.3).value();
    CHECK(joint == doctest::Approx(a * b).epsilon(1e-10));
  }

  TEST_CASE("evaluation budget") {
    NestedDomain d{{0, 0, 0}, {1, 1, 1}, {0, 0, 0}, {0, 0, 0}};
    std::array<QuadratureSpec, 3> specs{};
    for (auto& s : specs) s.nodes = 100;
    CHECK(tensor_size(specs) == 1'000'000);
    CHECK_THROWS_AS(integrate_nested(d, [](std::span<const double>) { return 1.0; }, specs, 1000),
                    BudgetExceeded);
  }

  TEST_CASE("property: refinement does not inflate the error indicator") {
    const std::function<double(double)> corpus[] = {
        [](double x) { return std::exp(x); },
        [](double x) { return std::cos(3 * x); },
        [](double x) { return 1.0 / (1.0 + x * x); },
        [](double x) { return std::sqrt(x + 0.1); },
    };
    for (const auto& f : corpus) {
      QuadratureSpec q;
      q.family = RuleFamily::GaussLegendre;
      double prev = INFINITY;
      for (int n : {2, 4, 8, 16}) {
        q.nodes = n;
        const double e = integrate_1d(q, f, 0.0, 2.0).rel_error;
        CHECK(e <= 2.0 * prev + 1e-15);
        prev = e;
      }
    }
  }

  TEST_CASE("graded and semi-infinite rules") {
    Grading g;
    g.lo_scale = 1e-6;
    // Interior panels fold x^{1/2} into the weights pointwise.
    CHECK(graded_rule(16, 0.5, 0.0, 0.0, 1.0, g).sum_weights() ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-9));
    CHECK(graded_rule(32, 0.5, 0.0, 0.0, 1.0, g).sum_weights() ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    // int_0^inf u^{1.5} e^{-u} du = Gamma(2.5).
    const double p = 1.5;
    const Rule s = semi_infinite_rule(16, p, 0.5, laguerre_cutoff(p));
    double sum = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) sum += s.w[i] * std::exp(-s.x[i]);
    CHECK(sum == doctest::Approx(std::tgamma(2.5)).epsilon(1e-12));
  }

  TEST_CASE("log-space sums") {
    LogSum s;
    s.add(1000.0);
    s.add(1000.0);
    CHECK(s.log() == doctest::Approx(1000.0 + std::log(2.0)));
    LogSum empty;
    CHECK(empty.log() == -INFINITY);
  }
}
