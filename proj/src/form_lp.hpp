#pragma once

// Coordinates for LPs whose unknown is a symmetric form B. The variables are
// the raw upper-triangle entries B_ij (i <= j), so x^T B x and trace(P B) are
// linear with off-diagonal coefficients doubled.

#include <cmath>
#include <vector>

#include "ellmap/bodies.hpp"
#include "ellmap/numerics.hpp"

namespace ellmap::detail {

inline int form_vars(int n) { return n * (n + 1) / 2; }

/// Coefficients c with c . vars(B) = x^T B x.
inline Vector quadratic_row(const Vector& x) {
  const auto n = static_cast<int>(x.size());
  Vector row(form_vars(n));
  int k = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) row(k++) = (i == j ? 1.0 : 2.0) * x(i) * x(j);
  }
  return row;
}

/// Coefficients c with c . vars(B) = trace(P B).
inline Vector trace_row(const SymMatrix& p) {
  const int n = p.dim();
  Vector row(form_vars(n));
  int k = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) row(k++) = (i == j ? 1.0 : 2.0) * p(i, j);
  }
  return row;
}

inline SymMatrix unpack_form(const Vector& v, int n) {
  Matrix b(n, n);
  int k = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      b(i, j) = v(k);
      b(j, i) = v(k);
      ++k;
    }
  }
  return SymMatrix(b);
}

inline Vector pack_form(const SymMatrix& b) {
  const int n = b.dim();
  Vector v(form_vars(n));
  int k = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) v(k++) = b(i, j);
  }
  return v;
}

/// Cut points on the boundary of K, merged when two span lines closer than
/// 1e-6 rad. Cuts are never dropped.
class CutPool {
 public:
  bool add(const Vector& x) {
    for (const auto& c : cuts_) {
      if (line_angle(c, x) < 1e-6) return false;
    }
    cuts_.push_back(x);
    return true;
  }
  const std::vector<Vector>& cuts() const { return cuts_; }
  std::size_t size() const { return cuts_.size(); }

 private:
  std::vector<Vector> cuts_;
};

/// Euclidean scale of a body used to normalize LP coordinates: geometric mean
/// of |boundary_point(K, e_i)|.
inline double body_scale(const ConvexBody& k) {
  double log_sum = 0.0;
  for (int i = 0; i < k.dim(); ++i) {
    log_sum += std::log(boundary_point(k, Vector::Unit(k.dim(), i)).norm());
  }
  return std::exp(log_sum / k.dim());
}

}  // namespace ellmap::detail
