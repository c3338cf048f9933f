#include <doctest.h>

#include <numbers>

#include "dunkl/error.hpp"
#include "dunkl/heatkernel.hpp"
#include "dunkl/spherical.hpp"
#include "support.hpp"

using namespace dunkl;
using testing::vec;

TEST_SUITE("heat") {
  TEST_CASE("value at the origin") {
    for (int n = 1; n <= 2; ++n)
      for (double t : {0.3, 2.0}) {
        const RootSystemA rs(n, 0.8);
        const Vector z = Vector::Zero(n + 1);
        const double d = rs.dim();
        const double want = -log_c_norm(rs) - (rs.gamma() + d / 2) * std::numbers::ln2 -
                            (d / 2 + rs.gamma()) * std::log(t);
        CHECK(heat_exact(rs, t, z, z).log_value == doctest::Approx(want).epsilon(1e-12));
      }
  }

  TEST_CASE("normalization: Mehta product against the mass calibration") {
    for (int n = 1; n <= 2; ++n)
      for (double k : {0.5, 1.0, 2.0}) {
        const RootSystemA rs(n, k);
        CHECK(log_c_norm(rs) == doctest::Approx(calibrate_log_c_norm(rs, n == 1 ? 40 : 24))
                                    .epsilon(1e-6));
      }
  }

  TEST_CASE("mass identity on A_1") {
    for (double k : {0.5, 1.0, 2.0})
      for (double t : {0.5, 1.0, 2.0})
        CHECK(heat_mass(RootSystemA(1, k), t, vec({0.4, -0.1})) ==
              doctest::Approx(1.0).epsilon(1e-3));
  }

  TEST_CASE("a wrong constant breaks the mass identity") {
    const RootSystemA rs(1, 1.0);
    CHECK(std::abs(heat_mass(rs, 1.0, vec({0.4, -0.1}), {}, log_c_norm(rs) + 0.1) - 1.0) > 0.05);
  }

  TEST_CASE("k = 1 closed-form kernel") {
    // psi from the determinant formula, assembled independently.
    const RootSystemA rs(1, 1.0);
    const double t = 0.6;
    const Vector X = vec({1.3, -0.2}), Y = vec({0.9, 0.4});
    const double psi = testing::determinant_oracle(X, Y / (2 * t));
    const double want = -log_c_norm(rs) - (rs.gamma() + 1.0) * std::numbers::ln2 -
                        (1.0 + rs.gamma()) * std::log(t) -
                        (X.squaredNorm() + Y.squaredNorm()) / (4 * t) + std::log(psi);
    CHECK(heat_exact(rs, t, X, Y).log_value == doctest::Approx(want).epsilon(1e-10));
  }

  TEST_CASE("property: symmetry in X and Y") {
    std::mt19937_64 rng(31);
    for (int n = 1; n <= 2; ++n) {
      const RootSystemA rs(n, 1.7);
      for (int trial = 0; trial < 5; ++trial) {
        const Vector X = testing::random_chamber(rng, n + 1, 0.1, 2.0, -0.5);
        const Vector Y = testing::random_chamber(rng, n + 1, 0.1, 2.0, 0.2);
        CHECK(heat_exact(rs, 0.8, X, Y).log_value ==
              doctest::Approx(heat_exact(rs, 0.8, Y, X).log_value).epsilon(1e-9));
      }
    }
  }

  TEST_CASE("envelope") {
    const double t = 0.7;
    const Vector X = vec({1.0, 1.0}), Y = vec({2.0, 2.0});
    CHECK(heat_envelope(RootSystemA(1, 1.5), t, X, Y) ==
          doctest::Approx(std::pow(t, -1.0 - 1.5) * std::exp(-2.0 / (4 * t))).epsilon(1e-14));
    CHECK(heat_envelope(RootSystemA(1, 1.0), 1.0, vec({1, -1}), vec({1, -1})) ==
          doctest::Approx(0.2).epsilon(1e-14));
    const RootSystemA rs(2, 0.6);
    const Vector P = vec({1.2, 0.1, -0.4}), Q = vec({0.3, 0.2, -1.5});
    for (double c : {0.1, 10.0})
      CHECK(heat_envelope(rs, c * c * t, c * P, c * Q) ==
            doctest::Approx(std::pow(c, -3.0 - 2 * rs.gamma()) * heat_envelope(rs, t, P, Q))
                .epsilon(1e-12));
  }

  TEST_CASE("property: parabolic scaling of the exact kernel") {
    const RootSystemA rs(2, 1.3);
    const Vector X = vec({1.2, 0.1, -0.4}), Y = vec({0.3, 0.2, -1.5});
    const double t = 0.9;
    const double base = heat_exact(rs, t, X, Y).log_value;
    for (double c : {0.1, 10.0})
      CHECK(heat_exact(rs, c * c * t, c * X, c * Y).log_value +
                (3.0 + 2 * rs.gamma()) * std::log(c) ==
            doctest::Approx(base).epsilon(1e-10));
  }

  TEST_CASE("semigroup and generator residuals") {
    const RootSystemA rs(1, 1.0);
    const Vector X = vec({0.8, -0.3}), Z = vec({0.5, 0.1});
    CHECK(chapman_kolmogorov_check(rs, 0.5, 0.5, X, X) < 1e-4);
    CHECK(chapman_kolmogorov_check(rs, 0.5, 0.5, X, Z) ==
          doctest::Approx(chapman_kolmogorov_check(rs, 0.5, 0.5, Z, X)).epsilon(1e-6));
    CHECK(generator_check(rs, 1.0, X, Z) < 1e-3);
    CHECK(generator_check(rs, 1.0, X, X) < 1e-3);
  }

  TEST_CASE("domain errors") {
    const RootSystemA rs(1, 1.0);
    CHECK_THROWS_AS(heat_exact(rs, 0.0, vec({1, 0}), vec({1, 0})), DomainError);
    CHECK_THROWS_AS(heat_exact(rs, -1.0, vec({1, 0}), vec({1, 0})), DomainError);
  }
}
