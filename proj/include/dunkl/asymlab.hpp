#pragma once

#include <span>
#include <string>
#include <utility>

#include "dunkl/kernel_value.hpp"
#include "dunkl/rootsys.hpp"
#include "dunkl/spherical.hpp"

namespace dunkl {

enum class ClaimId { LemmaA, LemmaAi, LemmaA1, LemmaA2, PropTruncated, PropIn };

std::string to_string(ClaimId id);
/// Accepts lemma_A, lemma_ai, lemma_a1, lemma_a2, prop_truncated, prop_In.
ClaimId claim_from_string(const std::string& name);

/// A two-sided claim f(p) ~ g(p) together with the bracket [lo, hi] recorded
/// for the ratio f / g over its grid.
struct AsympClaim {
  ClaimId id = ClaimId::LemmaA;
  double lo = 0.0;
  double hi = 0.0;
};

/// int_0^x u^{k-1} e^{-u} du / (x / (1 + x))^k; the x = 0 value is the limit 1/k.
double lemma_A_ratio(double k, double x);
/// (limit at x -> 0, limit at x -> inf) = (1/k, Gamma(k)).
std::pair<double, double> lemma_A_limits(double k);

/// log of int_0^inf u^p e^{-u} / prod_i (a + b_i u)^k du. Needs a >= 0,
/// a + b_i > 0 and convergence at 0.
double log_algebraic_laplace(double k, double p, double a, std::span<const double> b,
                             int panel_nodes = 24);

/// J prod_i (a + b_i)^k for J = int_0^inf u^N e^{-u} / prod_i (a + b_i u)^k du.
/// Throws DomainError unless N > k m - 1, a >= 0, b_i >= 0 and a + b_i > 0.
double lemma_ai_ratio(double k, double N, double a, std::span<const double> b);

/// int_0^inf u^{k-1} e^{-u} / (a + b u)^k du * (a + b)^k / ln(2 + b/a), a > 0.
double lemma_a1_ratio(double k, double a, double b);

/// int_0^inf u^{3k-1} e^{-u} / prod_i (a + b_i u)^k du * prod_i (a + b_i)^k
/// / ln(2 + b_1/a), for a > 0 and 0 <= b_1 <= b_2 <= b_3. At a = 0 both sides
/// diverge and DomainError is thrown; see lemma_a2_blowup_rate.
double lemma_a2_ratio(double k, double a, double b1, double b2, double b3);

/// J prod_i (a + b_i)^k / ln(b_1 / a) for small a > 0 and b_1 > 0; tends to 1
/// as a -> 0, the rate at which both sides of the a2 claim blow up.
double lemma_a2_blowup_rate(double k, double a, double b1, double b2, double b3);

struct PropInOptions {
  /// Nodes per level; 0 picks default_nodes(rank).
  int nodes = 0;
  /// Replace the propagated estimate of the inner function by the exact
  /// inner spherical function times e^{-lambda0(Y)}.
  bool exact_inner = false;
  /// Restrict y_n to [M_n, x_n], M_n = (x_n + x_{n+1}) / 2.
  bool truncated = false;
  ErrorEstimate error = ErrorEstimate::Auto;
};

/// The n-fold interlacing integral I^(n) with the inner spherical function
/// replaced by its two-sided estimate. Active coordinates only; X must lie in
/// the open chamber. With exact_inner, the value is
/// Gamma(k)^{n+1} / Gamma(k(n+1)) e^{-lambda(X)} pi(X)^{2k-1} psi_lambda(e^X).
KernelValue prop_In(const RootSystemA& rs, const Vector& lambda, const Vector& X,
                    const PropInOptions& opt = {});

/// pi(X)^{2k-1} / prod_{i<j} (1 + (lambda_i - lambda_j)(x_i - x_j))^k.
double log_prop_In_envelope(const RootSystemA& rs, const Vector& lambda, const Vector& X);

/// I_1 / I^(n) where I_1 restricts y_n to [M_n, x_n]. Requires x_n - x_{n+1}
/// to be the largest simple gap of X.
double prop_truncated_ratio(const RootSystemA& rs, const Vector& lambda, const Vector& X,
                            const PropInOptions& opt = {});

}  // namespace dunkl
