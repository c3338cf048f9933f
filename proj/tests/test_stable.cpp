#include <doctest.h>

#include <numbers>

#include "dunkl/error.hpp"
#include "dunkl/heatkernel.hpp"
#include "dunkl/quad.hpp"
#include "dunkl/stable.hpp"
#include "support.hpp"

using namespace dunkl;
using testing::vec;

namespace {

/// int_0^inf e^{-z u} eta_t(u) du over log u, plus the power-law tail
/// t U^{-beta} / Gamma(1 - beta) beyond U when z = 0.
double laplace(double s, double t, double z, SubordinatorMethod m = SubordinatorMethod::Auto) {
  const double beta = s / 2;
  const double c = std::log(std::pow(t, 2 / s));
  const Rule& ref = reference_jacobi(16, 0.0, 0.0);
  const double lo = c - 30.0, hi = c + 70.0, h = 0.5;
  double sum = 0.0;
  for (double a = lo; a < hi; a += h)
    for (std::size_t i = 0; i < ref.size(); ++i) {
      const double v = a + h * ref.x[i];
      const double u = std::exp(v);
      sum += h * ref.w[i] * u * std::exp(-z * u + log_subordinator_density(s, t, u, m));
    }
  if (z == 0.0) sum += t * std::exp(-beta * hi) / std::tgamma(1 - beta);
  return sum;
}

/// h_t(0, Y) on A_1: the heat kernel at X = 0 is a Gaussian in |Y|, so the
/// subordination integral is one-dimensional.
double log_origin_kernel(const RootSystemA& rs, double s, double t, double r) {
  const double D = rs.dim() + 2 * rs.gamma();
  const Rule& ref = reference_jacobi(16, 0.0, 0.0);
  LogSum acc;
  for (double a = -40; a < 60; a += 0.25)
    for (std::size_t i = 0; i < ref.size(); ++i) {
      const double v = a + 0.25 * ref.x[i];
      const double u = std::exp(v);
      acc.add(std::log(0.25 * ref.w[i]) + v - D / 2 * v - r * r / (4 * u) +
              log_subordinator_density(s, t, u));
    }
  return acc.log() - log_c_norm(rs) - D / 2 * std::numbers::ln2;
}

}  // namespace

TEST_SUITE("stable") {
  TEST_CASE("kernel at the origin against a one-dimensional subordination integral") {
    for (double k : {0.5, 2.0})
      for (double s : {0.5, 1.0, 1.5})
        for (double r : {0.1, 1.0, 5.0}) {
          const RootSystemA rs(1, k);
          const Vector Y = vec({r / std::sqrt(2.0), -r / std::sqrt(2.0)});
          CHECK(stable_exact(rs, s, 1.0, vec({0, 0}), Y).log_value ==
                doctest::Approx(log_origin_kernel(rs, s, 1.0, r)).epsilon(1e-6));
        }
  }

  TEST_CASE("at s = 1 and X = 0 the kernel is a multiple of the envelope") {
    const RootSystemA rs(1, 1.5);
    const Vector z = vec({0, 0});
    const auto ratio = [&](double r) {
      const Vector Y = vec({r, 0});
      return std::exp(stable_exact(rs, 1.0, 0.7, z, Y).log_value -
                      log_stable_envelope(rs, 1.0, 0.7, z, Y));
    };
    const double base = ratio(0.01);
    for (double r : {0.3, 2.0, 40.0}) CHECK(ratio(r) == doctest::Approx(base).epsilon(1e-6));
  }

  TEST_CASE("closed form at s = 1") {
    CHECK(subordinator_density(1.0, 1.0, 1.0) ==
          doctest::Approx(std::exp(-0.25) / (2 * std::sqrt(std::numbers::pi))).epsilon(1e-13));
    CHECK(subordinator_density(1.0, 1.0, 1.0) == doctest::Approx(0.219695).epsilon(1e-6));
    for (double u : {1e-2, 0.3, 5.0, 400.0}) {
      const double closed = subordinator_density(1.0, 2.0, u, SubordinatorMethod::ClosedForm);
      CHECK(subordinator_density(1.0, 2.0, u, SubordinatorMethod::Kanter) ==
            doctest::Approx(closed).epsilon(1e-10));
      if (u >= 0.1)
        CHECK(subordinator_density(1.0, 2.0, u, SubordinatorMethod::Inversion) ==
              doctest::Approx(closed).epsilon(1e-6));
    }
  }

  TEST_CASE("inversion and series paths agree for s != 1") {
    for (double s : {0.5, 1.5})
      for (double u : {0.3, 2.0, 30.0})
        CHECK(subordinator_density(s, 1.0, u, SubordinatorMethod::Inversion) ==
              doctest::Approx(subordinator_density(s, 1.0, u)).epsilon(1e-6));
  }

  TEST_CASE("normalization and Laplace transform") {
    for (double s : {0.5, 1.0, 1.5})
      for (double t : {0.5, 1.0, 2.0}) {
        CHECK(std::abs(laplace(s, t, 0.0) - 1.0) <= 1e-6);
        for (double z : {0.5, 1.0, 2.0})
          CHECK(std::abs(laplace(s, t, z) - std::exp(-t * std::pow(z, s / 2))) <= 1e-6);
      }
  }

  TEST_CASE("property: recorded bounds over nine decades") {
    for (double s : {0.5, 1.0, 1.5})
      for (double t : {0.5, 2.0}) {
        const double scale = std::pow(t, 2 / s);
        for (double r = 1e-4; r <= 1e4 * 1.0001; r *= std::sqrt(10.0)) {
          const auto [upper, tail] = subordinator_bounds_check(s, t, r * scale);
          CHECK(upper);
          CHECK(tail);
        }
      }
    // The crossover itself.
    CHECK(subordinator_bounds_check(1.0, 1.0, 1.0).second);
  }

  TEST_CASE("Euclidean envelope") {
    const Vector X = vec({0.4, 0.1}), far = vec({300.0, 0.0});
    const double s = 1.5, t = 0.8;
    CHECK(euclid_stable_envelope(2, s, t, X, X) ==
          doctest::Approx(std::pow(t, -2 / s)).epsilon(1e-14));
    const Vector Y = vec({0.4 + std::pow(t, 1 / s), 0.1});
    CHECK(std::pow(t, -2 / s) == doctest::Approx(t * std::pow((X - Y).norm(), -(2 + s))));
    CHECK(euclid_stable_min_form(2, s, t, X, Y) == doctest::Approx(std::pow(t, -2 / s)));
    CHECK(euclid_stable_envelope(2, s, t, X, far) ==
          doctest::Approx(t * std::pow((X - far).norm(), -(2 + s))).epsilon(1e-4));
    // Envelope and min form are equivalent within 2^{(d + s)/2}.
    for (double r : {1e-3, 1.0, 1e3}) {
      const Vector Z = vec({0.4 + r, 0.1});
      const double q = euclid_stable_envelope(2, s, t, X, Z) / euclid_stable_min_form(2, s, t, X, Z);
      CHECK(q <= 1.0 + 1e-12);
      CHECK(q >= std::pow(2.0, -(2 + s) / 2) - 1e-12);
    }
  }

  TEST_CASE("Dunkl stable envelope") {
    const RootSystemA rs(1, 1.2);
    const double s = 0.5, t = 2.0;
    const Vector z = vec({0, 0});
    CHECK(stable_envelope(rs, s, t, z, z) ==
          doctest::Approx(std::pow(t, -2 / s - 2 * rs.gamma() / s)).epsilon(1e-12));
    const Vector X = vec({1, 1}), Y = vec({3, 3});
    CHECK(stable_envelope(rs, s, t, X, Y) ==
          doctest::Approx(euclid_stable_envelope(2, s, t, X, Y) *
                          std::pow(std::pow(t, 2 / s) + 8.0, -rs.gamma()))
              .epsilon(1e-12));
    const RootSystemA a2(2, 0.7);
    const Vector P = vec({1.5, 0.2, -1}), Q = vec({0.4, 0.1, -0.2});
    const double a = log_stable_envelope(a2, 1.0, 1.0, P, Q);
    const double b = log_stable_envelope_reflected(a2, 1.0, 1.0, P, Q);
    CHECK(a - b >= -1e-12);
    CHECK(a - b <= a2.gamma() * std::numbers::ln2 + 1e-12);
  }

  TEST_CASE("property: scaling of the exact kernel") {
    const RootSystemA rs(1, 0.9);
    const Vector X = vec({0.7, -0.2}), Y = vec({0.3, 0.1});
    for (double s : {0.5, 1.5}) {
      const double t = 0.6;
      const double base = stable_exact(rs, s, t, X, Y).log_value;
      for (double c : {0.1, 10.0})
        CHECK(stable_exact(rs, s, std::pow(c, s) * t, c * X, c * Y).log_value +
                  (2 + 2 * rs.gamma()) * std::log(c) ==
              doctest::Approx(base).epsilon(1e-4));
    }
  }

  TEST_CASE("closed-form and series subordinators give the same kernel at s = 1") {
    const RootSystemA rs(1, 1.0);
    const Vector X = vec({0.7, -0.2}), Y = vec({0.3, 0.1});
    const auto run = [&](SubordinatorMethod m) {
      StableParams p{rs, 1.0, 1.0, X, Y, {}, m, 10};
      return stable_exact(p).log_value;
    };
    CHECK(run(SubordinatorMethod::Kanter) ==
          doctest::Approx(run(SubordinatorMethod::ClosedForm)).epsilon(1e-6));
  }

  TEST_CASE("mass is preserved by subordination") {
    CHECK(stable_mass(RootSystemA(1, 1.0), 1.0, 1.0, vec({0.3, -0.2})) ==
          doctest::Approx(1.0).epsilon(1e-3));
  }

  TEST_CASE("domain errors") {
    CHECK_THROWS_AS(subordinator_density(1.0, 1.0, 0.0), DomainError);
    CHECK_THROWS_AS(subordinator_density(2.0, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(subordinator_density(0.5, -1.0, 1.0), DomainError);
  }
}
