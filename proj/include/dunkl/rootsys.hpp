#pragma once

#include <Eigen/Core>

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "dunkl/error.hpp"

namespace dunkl {

using Vector = Eigen::VectorXd;

/// Positive root e_i - e_j, stored as storage indices into a point vector.
struct Root {
  int i = 0;
  int j = 0;
  bool operator==(const Root&) const = default;
};

/// Root system A_n with a single multiplicity k acting on n+1 coordinates.
///
/// Two realizations are supported. The ambient one acts on n+1 chosen
/// coordinates of R^d (d >= n+1); the others are untouched by the group.
/// The trace-zero one is the rank-n hyperplane {sum x = 0} of R^{n+1}; points
/// are still stored as (n+1)-vectors but the Euclidean dimension is d = n.
class RootSystemA {
 public:
  /// Ambient realization. `dim` < 0 means d = rank + 1; empty `active` means
  /// the first rank + 1 coordinates.
  RootSystemA(int rank, double k, int dim = -1, std::vector<int> active = {});

  static RootSystemA trace_zero(int rank, double k);

  int rank() const { return rank_; }
  /// Euclidean dimension d entering the kernels.
  int dim() const { return dim_; }
  /// Length of the stored coordinate vectors.
  int storage_size() const { return storage_; }
  double k() const { return k_; }
  bool is_trace_zero() const { return trace_zero_; }
  const std::vector<int>& active() const { return active_; }
  const std::vector<int>& inactive() const { return inactive_; }
  const std::vector<Root>& roots() const { return roots_; }
  int num_positive_roots() const { return static_cast<int>(roots_.size()); }
  /// gamma = k |Sigma+|.
  double gamma() const { return k_ * num_positive_roots(); }
  /// |W| = (n+1)!.
  double weyl_order() const;

  RootSystemA with_k(double k) const;

 private:
  RootSystemA() = default;
  void build_roots();

  int rank_ = 1;
  int dim_ = 2;
  int storage_ = 2;
  double k_ = 1.0;
  bool trace_zero_ = false;
  std::vector<int> active_;
  std::vector<int> inactive_;
  std::vector<Root> roots_;
};

/// Positive roots of rs in lexicographic order of their active positions.
inline const std::vector<Root>& positive_roots(const RootSystemA& rs) { return rs.roots(); }

/// alpha(P) = p_i - p_j.
template <typename Derived>
typename Derived::Scalar pairing(const Root& a, const Eigen::MatrixBase<Derived>& p) {
  return p(a.i) - p(a.j);
}

/// sigma_alpha(Y): swaps coordinates i and j.
template <typename Derived>
typename Derived::PlainObject reflect(const Root& a, const Eigen::MatrixBase<Derived>& y) {
  typename Derived::PlainObject out = y;
  std::swap(out(a.i), out(a.j));
  return out;
}

/// Dunkl weight prod |alpha(X)|^{2k}.
template <typename Derived>
typename Derived::Scalar weight(const RootSystemA& rs, const Eigen::MatrixBase<Derived>& x) {
  using S = typename Derived::Scalar;
  S w(1);
  for (const Root& a : rs.roots()) w *= std::pow(std::abs(pairing(a, x)), S(2 * rs.k()));
  return w;
}

template <typename Derived>
typename Derived::Scalar log_weight(const RootSystemA& rs, const Eigen::MatrixBase<Derived>& x) {
  using S = typename Derived::Scalar;
  S lw(0);
  for (const Root& a : rs.roots()) lw += S(2 * rs.k()) * std::log(std::abs(pairing(a, x)));
  return lw;
}

/// pi(X) = prod_{i<j} (x_i - x_j) over the active coordinates (signed).
template <typename Derived>
typename Derived::Scalar vandermonde(const RootSystemA& rs, const Eigen::MatrixBase<Derived>& x) {
  typename Derived::Scalar v(1);
  for (const Root& a : rs.roots()) v *= pairing(a, x);
  return v;
}

/// |X - sigma_alpha Y|^2 via |X - Y|^2 + 2 alpha(X) alpha(Y).
template <typename DX, typename DY>
typename DX::Scalar reflected_distance_sq(const Root& a, const Eigen::MatrixBase<DX>& x,
                                          const Eigen::MatrixBase<DY>& y) {
  return (x - y).squaredNorm() + 2 * pairing(a, x) * pairing(a, y);
}

template <typename DX, typename DY>
typename DX::Scalar reflected_distance_sq(const RootSystemA&, const Root& a,
                                          const Eigen::MatrixBase<DX>& x,
                                          const Eigen::MatrixBase<DY>& y) {
  return reflected_distance_sq(a, x, y);
}

inline constexpr double kChamberTolerance = 1e-12;

/// Active coordinates of p in root-system order.
Vector active_part(const RootSystemA& rs, const Vector& p);

/// Closed-chamber test x_1 >= ... >= x_{n+1} on active coordinates with
/// tolerance tol. `strict` demands every gap exceed tol.
bool in_chamber(const RootSystemA& rs, const Vector& p, bool strict = false,
                double tol = kChamberTolerance);

/// Sorts active coordinates into decreasing order, leaving the rest alone.
Vector sort_into_chamber(const RootSystemA& rs, const Vector& p);

/// Coordinate vector constrained to the closed positive Weyl chamber.
class ChamberPoint {
 public:
  /// Throws DomainError when p has the wrong length, leaves the closed
  /// chamber, or (trace-zero realization) has nonzero coordinate sum.
  ChamberPoint(const RootSystemA& rs, Vector p);

  const Vector& coords() const { return p_; }
  operator const Vector&() const { return p_; }

 private:
  Vector p_;
};

/// Parses "1,0,-2.5" into a vector. Throws DomainError on malformed input.
Vector parse_vector(const std::string& text);

}  // namespace dunkl
