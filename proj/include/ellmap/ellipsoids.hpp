#pragma once

#include <cstdint>
#include <vector>

#include "ellmap/numerics.hpp"

namespace ellmap {

/// Centered non-degenerate ellipsoid {x : x^T Q x <= 1}.
///
/// Every E-dependent quantity is expressed through the form Q_E in the
/// standard basis:
///   <x, y>_E            = x^T Q_E y
///   M_E(F)^2            = trace(Q_E^{-1} Q_F) / n
///   M*_E(F)^2           = trace(Q_F^{-1} Q_E) / n
///   E-polar of F        = {y : y^T (Q_E Q_F^{-1} Q_E) y <= 1}
/// The operator T with F = {x : <x, T x>_E <= 1} is Q_E^{-1} Q_F, and the
/// E-invariant inner product of operators satisfies <T, Id>_E = trace(T).
class Ellipsoid {
 public:
  /// Validates positive definiteness; throws NotPositiveDefinite.
  explicit Ellipsoid(const SymMatrix& q);

  int dim() const { return q_.dim(); }
  const SymMatrix& form() const { return q_; }
  const SymMatrix& inverse_form() const { return q_inv_; }
  const Matrix& cholesky_factor() const { return chol_; }

  /// ||x||_E = sqrt(x^T Q x).
  double norm(const Vector& x) const;

 private:
  SymMatrix q_;
  SymMatrix q_inv_;
  Matrix chol_;
};

Ellipsoid make_ellipsoid(const SymMatrix& q);
Ellipsoid unit_ball(int dim);

double inner_product(const Ellipsoid& e, const Vector& x, const Vector& y);

double m_ellipsoid(const Ellipsoid& e, const Ellipsoid& f);
double m_star(const Ellipsoid& e, const Ellipsoid& f);

/// {y : <x, y>_E <= 1 for all x in F}; form Q_E Q_F^{-1} Q_E.
Ellipsoid polar_wrt(const Ellipsoid& e, const Ellipsoid& f);

/// T(E) = {y : y^T T^{-T} Q T^{-1} y <= 1}. Throws SingularTransform.
Ellipsoid ellipsoid_linear_image(const Matrix& t, const Ellipsoid& e);

/// t * E, i.e. semiaxes scaled by t (form Q / t^2).
Ellipsoid scaled(const Ellipsoid& e, double t);

/// Points of the boundary of E distributed by the O(E)-invariant probability
/// measure: Gaussian direction, Euclidean normalization, then Q^{-1/2}.
std::vector<Vector> sample_mu(const Ellipsoid& e, int count, std::uint64_t seed);

}  // namespace ellmap
