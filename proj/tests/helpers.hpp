#pragma once

#include <cmath>
#include <random>

#include "ellmap/bodies.hpp"
#include "ellmap/ellipsoids.hpp"

namespace testing {

using ellmap::Matrix;
using ellmap::SymMatrix;
using ellmap::Vector;

inline Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

inline Matrix random_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = g(rng);
  }
  return m;
}

inline Vector random_vector(int n, std::mt19937_64& rng) { return random_matrix(n, 1, rng).col(0); }

/// Q = R diag(d) R^T with d log-uniform so that the condition number is <= cond.
inline SymMatrix random_spd(int n, double cond, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Eigen::HouseholderQR<Matrix> qr(random_matrix(n, n, rng));
  const Matrix r = qr.householderQ();
  Vector d(n);
  for (int i = 0; i < n; ++i) d(i) = std::pow(cond, u(rng) - 0.5);
  d(0) = std::sqrt(cond);
  d(n - 1) = 1.0 / std::sqrt(cond);
  return SymMatrix(r * d.asDiagonal() * r.transpose());
}

/// Invertible T with condition number <= cond.
inline Matrix random_transform(int n, double cond, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Matrix a = Eigen::HouseholderQR<Matrix>(random_matrix(n, n, rng)).householderQ();
  const Matrix b = Eigen::HouseholderQR<Matrix>(random_matrix(n, n, rng)).householderQ();
  Vector s(n);
  for (int i = 0; i < n; ++i) s(i) = std::pow(cond, u(rng));
  s(0) = 1.0;
  s(n - 1) = cond;
  return a * s.asDiagonal() * b;
}

/// Symmetric H-polytope with `pairs` random facet pairs, plus the coordinate
/// directions when needed to keep it bounded.
inline ellmap::ConvexBody random_polytope_h(int n, int pairs, std::mt19937_64& rng) {
  std::vector<Vector> facets;
  for (int j = 0; j < pairs; ++j) facets.push_back(random_vector(n, rng));
  Matrix m(n, pairs);
  for (int j = 0; j < pairs; ++j) m.col(j) = facets[j];
  if (Eigen::FullPivLU<Matrix>(m).rank() < n) {
    for (int i = 0; i < n; ++i) facets.push_back(Vector::Unit(n, i));
  }
  return ellmap::ConvexBody::polytope_h(std::move(facets));
}

inline double rel(const SymMatrix& a, const SymMatrix& b) { return ellmap::relative_distance(a, b); }

}  // namespace testing

#include <optional>

#include "ellmap/errors.hpp"

namespace testing {

/// Error code thrown by f, if any.
template <typename F>
std::optional<ellmap::Errc> error_of(F&& f) {
  try {
    f();
  } catch (const ellmap::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace testing
