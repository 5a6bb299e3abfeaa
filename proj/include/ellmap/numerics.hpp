#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace ellmap {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Dense symmetric matrix. The constructor symmetrizes its input by averaging
/// with the transpose, so entries(i,j) == entries(j,i) holds exactly.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(const Matrix& m);

  static SymMatrix identity(int dim);
  static SymMatrix diagonal(const Vector& d);

  int dim() const { return static_cast<int>(m_.rows()); }
  double operator()(int i, int j) const { return m_(i, j); }
  const Matrix& matrix() const { return m_; }

  double trace() const { return m_.trace(); }
  double frobenius() const { return m_.norm(); }
  double quad(const Vector& x) const { return x.dot(m_ * x); }

  SymMatrix operator*(double s) const { return SymMatrix(m_ * s); }
  SymMatrix operator+(const SymMatrix& o) const { return SymMatrix(m_ + o.m_); }
  SymMatrix operator-(const SymMatrix& o) const { return SymMatrix(m_ - o.m_); }

 private:
  Matrix m_;
};

/// Relative Frobenius distance ||a - b||_F / ||b||_F.
double relative_distance(const SymMatrix& a, const SymMatrix& b);

/// Lower-triangular L with S = L L^T. Throws NotPositiveDefinite when a pivot
/// falls below 1e-12 * trace(S) / dim.
Matrix cholesky(const SymMatrix& s);

struct SymEigen {
  Vector values;   // descending
  Matrix vectors;  // orthonormal columns, vectors.col(i) pairs with values(i)
};

SymEigen sym_eigen(const SymMatrix& s);

/// f(S) = V diag(f(lambda)) V^T for a scalar function applied to eigenvalues.
template <typename F>
SymMatrix spectral_apply(const SymMatrix& s, F&& f) {
  const SymEigen e = sym_eigen(s);
  Vector mapped = e.values;
  for (Eigen::Index i = 0; i < mapped.size(); ++i) mapped(i) = f(mapped(i));
  return SymMatrix(e.vectors * mapped.asDiagonal() * e.vectors.transpose());
}

/// Throws SingularTransform unless smallest singular value > 1e-10 * largest.
void require_invertible(const Matrix& t);

// ---- linear programming --------------------------------------------------

/// One row a.x >= b.
struct LinearConstraint {
  Vector a;
  double b = 0.0;
};

/// minimize objective.x subject to every constraint and |x_k| <= box.
struct LpProblem {
  Vector objective;
  std::vector<LinearConstraint> constraints;
  double box = 1e6;
};

enum class LpStatus { Optimal, Infeasible };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  Vector x;
  double objective = 0.0;
  /// Indices into LpProblem::constraints whose slack is zero to tolerance.
  std::vector<std::size_t> active;
  /// Nonnegative dual multipliers, one per user constraint; objective equals
  /// sum multipliers_i * a_i plus box terms.
  Vector multipliers;
  bool box_active = false;
  int iterations = 0;
};

LpSolution solve_lp(const LpProblem& p);

// ---- nonnegative least squares ------------------------------------------

struct NnlsResult {
  Vector weights;
  double residual = 0.0;
  std::vector<std::size_t> support;
};

/// min || sum_i w_i columns[i] - target ||  s.t. w >= 0  (Lawson-Hanson).
NnlsResult solve_nnls(const std::vector<Vector>& columns, const Vector& target);

}  // namespace ellmap
