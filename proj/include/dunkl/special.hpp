#pragma once

#include "dunkl/rootsys.hpp"

namespace dunkl {

/// log M(k, 2k, z) for the confluent hypergeometric function M = 1F1.
/// Any real z; negative z goes through Kummer's transformation.
double log_kummer_k2k(double k, double z);

/// Lower incomplete gamma integral int_0^x u^{k-1} e^{-u} du, x >= 0.
double lower_gamma(double k, double x);

/// log of int_{R^{n+1}} e^{-|Z|^2/2} prod_{i<j} |z_i - z_j|^{2k} dZ restricted to
/// the realization of rs: the product over active coordinates, a factor
/// sqrt(2 pi) per inactive one, and the hyperplane version for trace-zero.
double log_mehta_gaussian(const RootSystemA& rs);

}  // namespace dunkl
