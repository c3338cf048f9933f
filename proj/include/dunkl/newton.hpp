#pragma once

#include "dunkl/kernel_value.hpp"
#include "dunkl/rootsys.hpp"
#include "dunkl/spherical.hpp"

namespace dunkl {

struct NewtonParams {
  RootSystemA rs;
  Vector X;
  Vector Y;
  SphericalOptions quad;
  /// Gauss-Legendre nodes per panel of the u-rule; the indicator compares
  /// against half as many.
  int panel_nodes = 16;
};

/// N^W(X, Y) = int_0^inf p_t^W(X, Y) dt, integrated in u = |X - Y|^2 / 4t.
/// Throws DomainError for X == Y or when d/2 + gamma <= 1 (divergent at t -> inf).
KernelValue newton_exact(const NewtonParams& np);
KernelValue newton_exact(const RootSystemA& rs, const Vector& X, const Vector& Y);

/// |X - Y|^{2-d} / prod_alpha |X - sigma_alpha Y|^{2k}; requires d >= 3.
double log_newton_envelope_d3(const RootSystemA& rs, const Vector& X, const Vector& Y);
double newton_envelope_d3(const RootSystemA& rs, const Vector& X, const Vector& Y);

/// ln(1 + |X - sigma Y|^2 / |X - Y|^2), the numerator of the planar rank-one envelope.
double newton_d2_a1_numerator(const RootSystemA& rs, const Vector& X, const Vector& Y);

/// Planar rank one: ln(1 + |X - sigma Y|^2/|X - Y|^2) / |X - sigma Y|^{2k}.
double log_newton_envelope_d2_a1(const RootSystemA& rs, const Vector& X, const Vector& Y);
double newton_envelope_d2_a1(const RootSystemA& rs, const Vector& X, const Vector& Y);

/// Planar rank two (trace-zero realization): the logarithm uses the simple root
/// whose reflection brings Y closest to X; all three roots carry exponent 2k.
double log_newton_envelope_d2_a2(const RootSystemA& rs, const Vector& X, const Vector& Y);
double newton_envelope_d2_a2(const RootSystemA& rs, const Vector& X, const Vector& Y);

/// The envelope that applies to rs: d >= 3, planar rank one or planar rank two.
double log_newton_envelope(const RootSystemA& rs, const Vector& X, const Vector& Y);

}  // namespace dunkl
