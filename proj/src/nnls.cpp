// Lawson-Hanson active-set NNLS.

#include <algorithm>
#include <cmath>
#include <limits>

#include "ellmap/errors.hpp"
#include "ellmap/numerics.hpp"

namespace ellmap {
namespace {

Vector least_squares_on(const Matrix& a, const std::vector<bool>& passive, const Vector& b) {
  std::vector<Eigen::Index> idx;
  for (std::size_t j = 0; j < passive.size(); ++j) {
    if (passive[j]) idx.push_back(static_cast<Eigen::Index>(j));
  }
  if (idx.empty()) return Vector::Zero(a.cols());
  Matrix sub(a.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = a.col(idx[k]);
  const Vector z = sub.colPivHouseholderQr().solve(b);
  Vector full = Vector::Zero(a.cols());
  for (std::size_t k = 0; k < idx.size(); ++k) full(idx[k]) = z(static_cast<Eigen::Index>(k));
  return full;
}

}  // namespace

NnlsResult solve_nnls(const std::vector<Vector>& columns, const Vector& target) {
  if (columns.empty()) throw Error(Errc::InvalidInput, "NNLS needs at least one column");
  const Eigen::Index rows = target.size();
  const auto ncols = static_cast<Eigen::Index>(columns.size());
  Matrix a(rows, ncols);
  for (Eigen::Index j = 0; j < ncols; ++j) {
    if (columns[static_cast<std::size_t>(j)].size() != rows) {
      throw Error(Errc::InvalidInput, "NNLS column length mismatch");
    }
    a.col(j) = columns[static_cast<std::size_t>(j)];
  }

  const double tol = 10.0 * std::numeric_limits<double>::epsilon() *
                     a.cwiseAbs().colwise().sum().maxCoeff() *
                     static_cast<double>(std::max(rows, ncols));
  std::vector<bool> passive(static_cast<std::size_t>(ncols), false);
  Vector x = Vector::Zero(ncols);
  Vector grad = a.transpose() * (target - a * x);

  const int max_outer = 3 * static_cast<int>(ncols) + 10;
  for (int outer = 0; outer < max_outer; ++outer) {
    Eigen::Index pick = -1;
    double best = tol;
    for (Eigen::Index j = 0; j < ncols; ++j) {
      if (!passive[static_cast<std::size_t>(j)] && grad(j) > best) {
        best = grad(j);
        pick = j;
      }
    }
    if (pick < 0) break;
    passive[static_cast<std::size_t>(pick)] = true;

    Vector s = least_squares_on(a, passive, target);
    for (int inner = 0; inner < 3 * ncols + 10; ++inner) {
      double alpha = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < ncols; ++j) {
        if (passive[static_cast<std::size_t>(j)] && s(j) <= tol) {
          alpha = std::min(alpha, x(j) / (x(j) - s(j)));
        }
      }
      if (!std::isfinite(alpha)) break;
      x += alpha * (s - x);
      for (Eigen::Index j = 0; j < ncols; ++j) {
        if (passive[static_cast<std::size_t>(j)] && x(j) <= tol) {
          passive[static_cast<std::size_t>(j)] = false;
          x(j) = 0.0;
        }
      }
      s = least_squares_on(a, passive, target);
    }
    x = s;
    grad = a.transpose() * (target - a * x);
  }

  NnlsResult out;
  out.weights = x.cwiseMax(0.0);
  out.residual = (a * out.weights - target).norm();
  for (Eigen::Index j = 0; j < ncols; ++j) {
    if (out.weights(j) > 0.0) out.support.push_back(static_cast<std::size_t>(j));
  }
  return out;
}

}  // namespace ellmap
