#pragma once

#include <utility>

#include "dunkl/kernel_value.hpp"
#include "dunkl/rootsys.hpp"
#include "dunkl/spherical.hpp"

namespace dunkl {

/// How eta_t(u) is produced for s != 1 (s = 1 always has a closed form
/// available; `Auto` uses it).
enum class SubordinatorMethod { Auto, ClosedForm, Kanter, Inversion };

/// Density of the s/2-stable subordinator at time t: Laplace transform
/// int e^{-z u} eta_t(u) du = e^{-t z^{s/2}}. Throws DomainError unless
/// u > 0, t > 0 and 0 < s < 2.
double subordinator_density(double s, double t, double u,
                            SubordinatorMethod method = SubordinatorMethod::Auto);
double log_subordinator_density(double s, double t, double u,
                                SubordinatorMethod method = SubordinatorMethod::Auto);

/// eta / (t u^{-1-s/2} e^{-t u^{-s/2}}) and, for u >= t^{2/s}, eta / (t u^{-1-s/2})
/// (NaN below the crossover).
struct SubordinatorRatios {
  double upper = 0.0;
  double tail = 0.0;
};
SubordinatorRatios subordinator_ratios(double s, double t, double u);

/// Recorded constants for the two subordinator bounds.
struct SubordinatorConstants {
  double upper_c = 2.0;
  double tail_lo = 0.05;
  double tail_hi = 1.0;
};
/// (upper bound holds, two-sided tail bound holds or is not applicable).
std::pair<bool, bool> subordinator_bounds_check(double s, double t, double u,
                                                const SubordinatorConstants& c = {});

/// t / (t^{2/s} + |X - Y|^2)^{(d+s)/2}.
double log_euclid_stable_envelope(int d, double s, double t, const Vector& X, const Vector& Y);
double euclid_stable_envelope(int d, double s, double t, const Vector& X, const Vector& Y);
/// min{t^{-d/s}, t |X - Y|^{-(d+s)}}.
double euclid_stable_min_form(int d, double s, double t, const Vector& X, const Vector& Y);

/// Euclidean envelope / prod_alpha (t^{2/s} + |X - Y|^2 + alpha(X) alpha(Y))^k.
double log_stable_envelope(const RootSystemA& rs, double s, double t, const Vector& X,
                           const Vector& Y);
double stable_envelope(const RootSystemA& rs, double s, double t, const Vector& X, const Vector& Y);
/// Same with the reflected distances |X - sigma_alpha Y|^2 in the product.
double log_stable_envelope_reflected(const RootSystemA& rs, double s, double t, const Vector& X,
                                     const Vector& Y);

struct StableParams {
  RootSystemA rs;
  double s = 1.0;
  double t = 1.0;
  Vector X;
  Vector Y;
  SphericalOptions quad;
  SubordinatorMethod method = SubordinatorMethod::Auto;
  /// Nodes per unit-half panel in log u; the indicator uses half as many.
  int panel_nodes = 10;
};

/// h_t^W(X, Y) = int_0^inf p_u^W(X, Y) eta_t(u) du, integrated in log u with
/// the split at u = t^{2/s} and a power-law tail correction.
KernelValue stable_exact(const StableParams& sp);
KernelValue stable_exact(const RootSystemA& rs, double s, double t, const Vector& X,
                         const Vector& Y);

/// Log of h_t^W without validation or error pass.
double log_stable_kernel(const RootSystemA& rs, double s, double t, const Vector& X,
                         const Vector& Y, const SphericalOptions& quad,
                         SubordinatorMethod method = SubordinatorMethod::Auto,
                         int panel_nodes = 10);

/// |W| int h_t^W(X, Y) omega_k(Y) dY over a heavy-tailed chamber grid.
double stable_mass(const RootSystemA& rs, double s, double t, const Vector& X, int nodes = 8);

}  // namespace dunkl
