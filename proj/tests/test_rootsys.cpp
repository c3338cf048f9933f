#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "dunkl/error.hpp"
#include "dunkl/rootsys.hpp"
#include "support.hpp"

using namespace dunkl;
using testing::vec;

TEST_SUITE("rootsys") {
  TEST_CASE("positive roots in lexicographic order") {
    const RootSystemA a1(1, 1.0), a2(2, 1.0), a3(3, 1.0);
    CHECK(a1.roots() == std::vector<Root>{{0, 1}});
    CHECK(a2.roots() == std::vector<Root>{{0, 1}, {0, 2}, {1, 2}});
    CHECK(a3.roots().size() == 6);
    CHECK(a3.gamma() == 6.0);
    CHECK(a3.weyl_order() == 24.0);
  }

  TEST_CASE("pairing") {
    CHECK(pairing(Root{0, 1}, vec({3, 1})) == 2.0);
    CHECK(pairing(Root{0, 2}, vec({2, 0, -2})) == 4.0);
    CHECK(pairing(Root{0, 1}, vec({1, 1, 0})) == 0.0);
  }

  TEST_CASE("reflection swaps coordinates and is an involution") {
    CHECK(reflect(Root{0, 1}, vec({5, 3})) == vec({3, 5}));
    CHECK(reflect(Root{0, 1}, vec({2, 2})) == vec({2, 2}));
    const Vector y = vec({0.3, -1.2, 4.0});
    CHECK(reflect(Root{0, 2}, reflect(Root{0, 2}, y)) == y);
  }

  TEST_CASE("weight and vandermonde") {
    CHECK(weight(RootSystemA(1, 0.5), vec({1, 0})) == doctest::Approx(1.0));
    CHECK(weight(RootSystemA(2, 1.0), vec({2, 0, -2})) == doctest::Approx(256.0));
    CHECK(weight(RootSystemA(2, 0.7), vec({1, 1, 0})) == 0.0);
    CHECK(vandermonde(RootSystemA(1, 1.0), vec({1, 0})) == 1.0);
    CHECK(vandermonde(RootSystemA(2, 1.0), vec({2, 1, 0})) == 2.0);
    CHECK(vandermonde(RootSystemA(2, 1.0), vec({1, 1, 0})) == 0.0);
  }

  TEST_CASE("reflected distance") {
    CHECK(reflected_distance_sq(Root{0, 1}, vec({1, 1}), vec({1, 1})) == 0.0);
    CHECK(reflected_distance_sq(Root{0, 1}, vec({1, 0}), vec({2, 0})) == 5.0);
    CHECK((vec({1, 0}) - reflect(Root{0, 1}, vec({2, 0}))).squaredNorm() == 5.0);
  }

  TEST_CASE("property: reflected distance equals the distance to the reflected point") {
    std::mt19937_64 rng(11);
    for (int n = 1; n <= 3; ++n) {
      const RootSystemA rs(n, 1.0);
      for (int trial = 0; trial < 50; ++trial) {
        const Vector X = testing::random_chamber(rng, n + 1, 0.0, 3.0, -1.0);
        const Vector Y = testing::random_chamber(rng, n + 1, 0.0, 3.0, 0.5);
        for (const Root& a : rs.roots()) {
          const double direct = (X - reflect(a, Y)).squaredNorm();
          CHECK(std::abs(reflected_distance_sq(a, X, Y) - direct) <= 1e-12 * (1.0 + direct));
        }
      }
    }
  }

  TEST_CASE("property: weight is permutation invariant, pairings are nonnegative on the chamber") {
    std::mt19937_64 rng(12);
    const RootSystemA rs(3, 0.8);
    for (int trial = 0; trial < 30; ++trial) {
      Vector X = testing::random_chamber(rng, 4, 0.0, 2.0, -1.0);
      for (const Root& a : rs.roots()) CHECK(pairing(a, X) >= 0.0);
      CHECK(in_chamber(rs, X));
      const double w = weight(rs, X);
      std::vector<int> perm{0, 1, 2, 3};
      std::shuffle(perm.begin(), perm.end(), rng);
      Vector P(4);
      for (int i = 0; i < 4; ++i) P(i) = X(perm[i]);
      CHECK(weight(rs, P) == doctest::Approx(w).epsilon(1e-12));
      CHECK(sort_into_chamber(rs, P) == X);
    }
  }

  TEST_CASE("ambient and trace-zero realizations") {
    const RootSystemA rs(1, 1.0, 3);
    CHECK(rs.dim() == 3);
    CHECK(rs.storage_size() == 3);
    CHECK(rs.inactive() == std::vector<int>{2});
    const RootSystemA tz = RootSystemA::trace_zero(2, 1.0);
    CHECK(tz.dim() == 2);
    CHECK(tz.storage_size() == 3);
    CHECK(tz.is_trace_zero());
    CHECK_THROWS_AS(RootSystemA(0, 1.0), DomainError);
    CHECK_THROWS_AS(RootSystemA(1, -1.0), DomainError);
    CHECK_THROWS_AS(RootSystemA(2, 1.0, 2), DomainError);
  }

  TEST_CASE("vector parsing") {
    CHECK(parse_vector("1,-2.5,3e1") == vec({1, -2.5, 30}));
    CHECK_THROWS_AS(parse_vector("1,,2"), DomainError);
    CHECK_THROWS_AS(parse_vector("1,x"), DomainError);
    CHECK_THROWS_AS(parse_vector(""), DomainError);
  }
}
