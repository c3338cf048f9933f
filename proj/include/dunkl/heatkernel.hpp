#pragma once

#include <functional>
#include <limits>

#include "dunkl/kernel_value.hpp"
#include "dunkl/rootsys.hpp"
#include "dunkl/spherical.hpp"

namespace dunkl {

/// log c_norm for p_t^W: the Gaussian Mehta integral of the realization.
double log_c_norm(const RootSystemA& rs);

struct HeatParams {
  RootSystemA rs;
  double t = 1.0;
  Vector X;
  Vector Y;
  /// NaN means log_c_norm(rs).
  double log_c = std::numeric_limits<double>::quiet_NaN();
  SphericalOptions quad;
};

/// p_t^W(X, Y) = c^{-1} 2^{-gamma-d/2} t^{-d/2-gamma} e^{-(|X|^2+|Y|^2)/4t} psi_X(Y/2t).
/// Throws DomainError for t <= 0 or points outside the chamber.
KernelValue heat_exact(const HeatParams& hp);
KernelValue heat_exact(const RootSystemA& rs, double t, const Vector& X, const Vector& Y,
                       const SphericalOptions& quad = {});

/// Log heat kernel without validation or error pass; for integrand loops.
double log_heat_kernel(const RootSystemA& rs, double t, const Vector& X, const Vector& Y,
                       const SphericalOptions& quad, double log_c);

/// t^{-d/2} e^{-|X-Y|^2/4t} / prod_alpha (t + alpha(X) alpha(Y))^k.
double log_heat_envelope(const RootSystemA& rs, double t, const Vector& X, const Vector& Y);
double heat_envelope(const RootSystemA& rs, double t, const Vector& X, const Vector& Y);

/// Shape of an integrand over the chamber, used to place nodes.
struct ChamberProfile {
  /// Point the integrand concentrates around (chamber point).
  Vector center;
  /// Gaussian-like decay e^{-|Y - center|^2 / (2 width^2)} when not heavy;
  /// otherwise the length scale of an algebraically decaying tail.
  double width = 1.0;
  bool heavy_tailed = false;
  /// Nodes per gap coordinate (Gaussian) or per panel (heavy-tailed).
  int nodes = 40;
  /// Hermite nodes for the mean and inactive directions.
  int hermite_nodes = 24;
  /// Heavy-tailed grids extend to reach * width from the center.
  double reach = 1e5;
};

/// log of int_{chamber} e^{log_f(Y)} omega_k(Y) dY. Coordinates are the
/// active mean, the simple-root gaps and the inactive coordinates; the
/// trace-zero realization integrates over its hyperplane.
double log_chamber_integral(const RootSystemA& rs, const std::function<double(const Vector&)>& log_f,
                            const ChamberProfile& profile);

/// |W| int_{chamber} p_t^W(X, Y) omega_k(Y) dY.
double heat_mass(const RootSystemA& rs, double t, const Vector& X, const SphericalOptions& quad = {},
                 double log_c = std::numeric_limits<double>::quiet_NaN(), int nodes = 40);

/// log c_norm obtained by enforcing unit mass at t = 1, X = 0.
double calibrate_log_c_norm(const RootSystemA& rs, int nodes = 40);

/// |(|W| int p_t(X,Y) p_s(Y,Z) omega(Y) dY) / p_{t+s}(X,Z) - 1|. Rank 1 or 2.
double chapman_kolmogorov_check(const RootSystemA& rs, double t, double s, const Vector& X,
                                const Vector& Z, int nodes = 40);

/// Relative mismatch between a central-difference d/dt p_t(X, Y) and the
/// radial Dunkl Laplacian in X, Delta p + 2k (d1 - d2) p / (x1 - x2), for rank
/// one with X strictly inside the chamber.
double generator_check(const RootSystemA& rs, double t, const Vector& X, const Vector& Y,
                       double h = 1e-4);

}  // namespace dunkl
