#pragma once

#include <cstdint>

#include "dunkl/kernel_value.hpp"
#include "dunkl/quad.hpp"
#include "dunkl/rootsys.hpp"

namespace dunkl {

/// Where the recursion stops. `Exponential` descends to a single coordinate
/// where the function is e^{lambda x}; `ConfluentRankOne` stops at rank one and
/// uses the closed form through Kummer's M(k, 2k, .).
enum class BaseCase { Exponential, ConfluentRankOne };

/// How the a-posteriori indicator is produced: a second pass with
/// refine_factor times more nodes per level (the finer value is returned),
/// a pass with refine_factor times fewer (the nominal value is returned),
/// or no second pass. Auto refines up to rank 2 and coarsens above, where a
/// refined A_3 pass would cost 2^6 times the nominal one.
enum class ErrorEstimate { Auto, Refine, Coarsen, None };

/// Auto resolved for a given rank; other modes are returned unchanged.
ErrorEstimate resolve_error_mode(ErrorEstimate e, int rank);

struct SphericalOptions {
  /// Nodes per level; 0 picks default_nodes(rank).
  int nodes = 0;
  BaseCase base = BaseCase::Exponential;
  ErrorEstimate error = ErrorEstimate::Auto;
  int refine_factor = 2;
  std::int64_t budget = kDefaultEvaluationBudget;
};

/// 48 for rank 1, 32 for rank 2, 20 for rank 3 and above.
int default_nodes(int rank);

struct SphericalParams {
  RootSystemA rs;
  Vector lambda;
  Vector X;
  SphericalOptions quad;
};

/// psi_lambda(e^X) by the iterated integral over interlacing points. Both
/// arguments must lie in the closed chamber; coordinates outside the active
/// set contribute e^{lambda_m x_m}.
///
/// Throws DomainError, BudgetExceeded (before any evaluation when the nominal
/// grid is too large) or EvaluationError (naming depth and point).
KernelValue spherical_exact(const SphericalParams& p);
KernelValue spherical_exact(const RootSystemA& rs, const Vector& lambda, const Vector& X,
                            const SphericalOptions& opt = {});

/// Log of psi for sorted active coordinates only (lambda and x of length
/// n + 1, non-increasing), without an error pass. Wall points are handled as
/// in spherical_exact. `evaluations` is incremented by the leaf count.
double log_spherical_active(double k, int n, const double* lambda, const double* x,
                            const SphericalOptions& opt = {},
                            std::int64_t* evaluations = nullptr);

/// k = 1 closed form prod_{j<=n} j! det(e^{lambda_i x_j}) / (pi(lambda) pi(X)).
/// Throws DomainError when k != 1 or an active entry of lambda or X repeats.
double log_spherical_oracle_k1(const RootSystemA& rs, const Vector& lambda, const Vector& X);
double spherical_oracle_k1(const RootSystemA& rs, const Vector& lambda, const Vector& X);

/// e^{lambda(X)} / prod_{i<j} (1 + (x_i - x_j)(lambda_i - lambda_j))^k.
double log_spherical_envelope(const RootSystemA& rs, const Vector& lambda, const Vector& X);
double spherical_envelope(const RootSystemA& rs, const Vector& lambda, const Vector& X);

}  // namespace dunkl
