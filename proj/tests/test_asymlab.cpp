#include <doctest.h>

#include <numbers>

#include "dunkl/asymlab.hpp"
#include "dunkl/error.hpp"
#include "dunkl/spherical.hpp"
#include "support.hpp"

using namespace dunkl;
using testing::vec;

TEST_SUITE("asymlab") {
  TEST_CASE("lemma A examples and endpoint limits") {
    CHECK(lemma_A_ratio(1.0, 1.0) == doctest::Approx(2 * (1 - std::exp(-1.0))).epsilon(1e-12));
    CHECK(lemma_A_ratio(1.0, 1e8) == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(lemma_A_ratio(2.0, 1e-8) == doctest::Approx(0.5).epsilon(1e-7));
    for (double k : {0.25, 0.5, 1.0, 2.0, 4.0}) {
      const auto [lo, hi] = lemma_A_limits(k);
      CHECK(lo == doctest::Approx(1 / k));
      CHECK(hi == doctest::Approx(std::tgamma(k)));
      // Taylor at 0: gamma(k, x) ~ x^k / k; at infinity the envelope tends to 1.
      CHECK(lemma_A_ratio(k, 1e-9) == doctest::Approx(1 / k).epsilon(1e-6));
      CHECK(lemma_A_ratio(k, 1e9) == doctest::Approx(std::tgamma(k)).epsilon(1e-6));
      CHECK(lemma_A_ratio(k, 0.0) == doctest::Approx(1 / k));
      CHECK(lemma_A_ratio(k, 3.0) ==
            doctest::Approx(testing::lower_gamma_series(k, 3.0) * std::pow(4.0 / 3.0, k))
                .epsilon(1e-12));
    }
  }

  TEST_CASE("lemma ai") {
    const double none[1] = {0.0};
    CHECK(lemma_ai_ratio(1.0, 3.0, 1.0, none) == doctest::Approx(6.0).epsilon(1e-10));
    const double b[1] = {2.5};
    CHECK(lemma_ai_ratio(1.0, 2.0, 0.0, b) == doctest::Approx(1.0).epsilon(1e-10));
    const double two[2] = {1.0, 3.0};
    CHECK_THROWS_AS(lemma_ai_ratio(1.0, 1.0, 1.0, two), DomainError);
    CHECK(std::isfinite(lemma_ai_ratio(1.0, 1.5, 1.0, two)));
  }

  TEST_CASE("lemma a1") {
    CHECK(lemma_a1_ratio(1.0, 1.0, 1.0) ==
          doctest::Approx(2 * std::numbers::e * testing::kE1At1 / std::log(3.0)).epsilon(1e-8));
    CHECK(lemma_a1_ratio(1.0, 1.0, 1.0) == doctest::Approx(1.0856).epsilon(1e-4));
    for (double k : {0.5, 2.5})
      CHECK(lemma_a1_ratio(k, 2.0, 0.0) ==
            doctest::Approx(std::tgamma(k) / std::numbers::ln2).epsilon(1e-10));
    CHECK_THROWS_AS(lemma_a1_ratio(1.0, 0.0, 1.0), DomainError);
  }

  TEST_CASE("lemma a2") {
    for (double k : {0.5, 1.0, 2.0}) {
      CHECK(lemma_a2_ratio(k, 1.0, 0, 0, 0) ==
            doctest::Approx(std::tgamma(3 * k) / std::numbers::ln2).epsilon(1e-10));
      CHECK(lemma_a2_ratio(k, 1e8, 1, 2, 3) ==
            doctest::Approx(std::tgamma(3 * k) / std::numbers::ln2).epsilon(1e-6));
    }
    CHECK_THROWS_AS(lemma_a2_ratio(1.0, 1.0, 2, 1, 3), DomainError);
    CHECK_THROWS_AS(lemma_a2_ratio(1.0, 0.0, 1, 2, 3), DomainError);
    // Approach to the a = 0 blow-up is logarithmic.
    const double r8 = lemma_a2_blowup_rate(1.0, 1e-8, 1, 2, 3);
    const double r16 = lemma_a2_blowup_rate(1.0, 1e-16, 1, 2, 3);
    CHECK(r8 > 0.8);
    CHECK(r16 > r8);
    CHECK(r16 < 1.0);
  }

  TEST_CASE("property: ratios are invariant under (a, b) -> (ca, cb)") {
    const double b2[2] = {0.5, 4.0};
    for (double k : {0.25, 1.0, 2.5})
      for (double c : {1e-3, 1e3}) {
        const double cb2[2] = {c * b2[0], c * b2[1]};
        CHECK(lemma_ai_ratio(k, 6.0, c * 0.3, cb2) ==
              doctest::Approx(lemma_ai_ratio(k, 6.0, 0.3, b2)).epsilon(1e-8));
        CHECK(lemma_a1_ratio(k, c * 0.3, c * 7.0) ==
              doctest::Approx(lemma_a1_ratio(k, 0.3, 7.0)).epsilon(1e-8));
        CHECK(lemma_a2_ratio(k, c * 0.3, c, 2 * c, 9 * c) ==
              doctest::Approx(lemma_a2_ratio(k, 0.3, 1, 2, 9)).epsilon(1e-8));
      }
  }

  TEST_CASE("first integral at lambda = 0") {
    for (double k : {0.5, 1.0, 2.5}) {
      const RootSystemA rs(1, k);
      const Vector X = vec({1.7, 0.2});
      CHECK(prop_In(rs, vec({0, 0}), X).value() ==
            doctest::Approx(testing::beta(k, k) * std::pow(1.5, 2 * k - 1)).epsilon(1e-10));
    }
    CHECK(prop_In(RootSystemA(1, 0.5), vec({0, 0}), vec({1, 0})).value() ==
          doctest::Approx(std::numbers::pi).epsilon(1e-12));
  }

  TEST_CASE("exact inner factor reproduces the spherical function at k = 1") {
    for (int n = 1; n <= 2; ++n) {
      const RootSystemA rs(n, 1.0);
      const Vector l = n == 1 ? vec({1.3, 0}) : vec({2.0, 0.7, 0});
      const Vector x = n == 1 ? vec({1.1, -0.3}) : vec({0.9, 0.1, -0.6});
      PropInOptions o;
      o.exact_inner = true;
      double fact = 1.0;
      for (int j = 2; j <= n; ++j) fact *= j;
      const double want = std::exp(-l.dot(x)) * vandermonde(rs, x) *
                          testing::determinant_oracle(l, x) / fact;
      CHECK(prop_In(rs, l, x, o).value() == doctest::Approx(want).epsilon(1e-5));
    }
  }

  TEST_CASE("truncated integral") {
    const RootSystemA rs(1, 1.3);
    CHECK(prop_truncated_ratio(rs, vec({0, 0}), vec({1, -1})) ==
          doctest::Approx(0.5).epsilon(1e-10));
    for (double p : {1e-2, 1.0, 1e2, 1e3}) {
      const double r = prop_truncated_ratio(rs, vec({p, 0}), vec({1, 0}));
      CHECK(r > 0.0);
      CHECK(r <= 1.0 + 1e-12);
    }
    CHECK_THROWS_AS(prop_truncated_ratio(RootSystemA(2, 1.0), vec({1, 0, 0}), vec({3, 0, -1})),
                    DomainError);
  }

  TEST_CASE("claim ids") {
    for (ClaimId id : {ClaimId::LemmaA, ClaimId::LemmaAi, ClaimId::LemmaA1, ClaimId::LemmaA2,
                       ClaimId::PropTruncated, ClaimId::PropIn})
      CHECK(claim_from_string(to_string(id)) == id);
    CHECK_THROWS_AS(claim_from_string("lemma_z"), DomainError);
  }
}
