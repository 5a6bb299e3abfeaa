#include "ellmap/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ellmap/errors.hpp"

namespace ellmap {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::InvalidInput: return "InvalidInput";
    case Errc::NotPositiveDefinite: return "NotPositiveDefinite";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::SingularTransform: return "SingularTransform";
    case Errc::ZeroDirection: return "ZeroDirection";
    case Errc::MaxCutsReached: return "MaxCutsReached";
    case Errc::UnsupportedBodyVariant: return "UnsupportedBodyVariant";
    case Errc::NoFeasiblePoint: return "NoFeasiblePoint";
  }
  return "Unknown";
}

SymMatrix::SymMatrix(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw Error(Errc::InvalidInput, "symmetric matrix must be square with dim >= 1");
  }
  m_ = 0.5 * (m + m.transpose());
}

SymMatrix SymMatrix::identity(int dim) { return SymMatrix(Matrix::Identity(dim, dim)); }

SymMatrix SymMatrix::diagonal(const Vector& d) { return SymMatrix(Matrix(d.asDiagonal())); }

double relative_distance(const SymMatrix& a, const SymMatrix& b) {
  return (a.matrix() - b.matrix()).norm() / b.matrix().norm();
}

Matrix cholesky(const SymMatrix& s) {
  const int n = s.dim();
  const double floor = 1e-12 * std::abs(s.trace()) / n;
  Matrix l = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    double pivot = s(j, j) - l.row(j).head(j).squaredNorm();
    if (!(pivot > floor)) {
      throw Error(Errc::NotPositiveDefinite,
                  "pivot " + std::to_string(pivot) + " at index " + std::to_string(j));
    }
    const double d = std::sqrt(pivot);
    l(j, j) = d;
    for (int i = j + 1; i < n; ++i) {
      l(i, j) = (s(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / d;
    }
  }
  return l;
}

SymEigen sym_eigen(const SymMatrix& s) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(s.matrix());
  if (solver.info() != Eigen::Success) {
    throw Error(Errc::NoConvergence, "symmetric eigensolver did not converge");
  }
  // Eigen returns ascending order.
  SymEigen out;
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

void require_invertible(const Matrix& t) {
  if (t.rows() != t.cols() || t.rows() < 1) {
    throw Error(Errc::InvalidInput, "transform must be square");
  }
  Eigen::JacobiSVD<Matrix> svd(t);
  const Vector& sv = svd.singularValues();
  if (!(sv(sv.size() - 1) > 1e-10 * sv(0))) {
    throw Error(Errc::SingularTransform, "smallest singular value below 1e-10 * largest");
  }
}

}  // namespace ellmap
