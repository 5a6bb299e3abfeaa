// Dense LP for the small relaxations built by the cutting-plane solvers.
//
// The primal  min c.x  s.t.  G x >= h  (user rows plus the 2n box rows) has
// few variables and many rows, so we run a revised primal simplex on its dual
//
//   max h.y   s.t.  G^T y = c,  y >= 0,
//
// which has only n equality rows. Picking, per coordinate, the box row whose
// sign matches c_k gives a feasible starting basis, so no phase 1 is needed.
// The simplex multipliers of the dual are the primal point x, a dual-optimal
// basis certifies primal feasibility of x, and an unbounded dual ray means the
// primal is infeasible.

#include <algorithm>
#include <cmath>
#include <limits>

#include "ellmap/errors.hpp"
#include "ellmap/numerics.hpp"

namespace ellmap {
namespace {

struct Column {
  Vector g;
  double h;
};

}  // namespace

LpSolution solve_lp(const LpProblem& p) {
  const Eigen::Index n = p.objective.size();
  if (n < 1) throw Error(Errc::InvalidInput, "LP needs at least one variable");
  if (!(p.box > 0.0) || !std::isfinite(p.box)) {
    throw Error(Errc::InvalidInput, "LP box must be finite and positive");
  }
  for (const auto& c : p.constraints) {
    if (c.a.size() != n) throw Error(Errc::InvalidInput, "LP constraint length mismatch");
  }

  const std::size_t m = p.constraints.size();
  const std::size_t total = m + 2 * static_cast<std::size_t>(n);
  std::vector<Column> cols;
  cols.reserve(total);
  for (const auto& c : p.constraints) cols.push_back({c.a, c.b});
  for (Eigen::Index k = 0; k < n; ++k) cols.push_back({Vector::Unit(n, k), -p.box});
  for (Eigen::Index k = 0; k < n; ++k) cols.push_back({-Vector::Unit(n, k), -p.box});

  std::vector<double> col_norm(total);
  for (std::size_t j = 0; j < total; ++j) col_norm[j] = cols[j].g.lpNorm<Eigen::Infinity>();

  std::vector<std::size_t> basis(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) {
    basis[static_cast<std::size_t>(k)] =
        p.objective(k) >= 0.0 ? m + static_cast<std::size_t>(k)
                              : m + static_cast<std::size_t>(n + k);
  }

  const double c_scale = std::max(1.0, p.objective.lpNorm<Eigen::Infinity>());
  const int max_iter = 50 * static_cast<int>(total) + 1000;
  int degenerate_run = 0;
  bool bland = false;

  LpSolution out;
  Matrix basis_matrix(n, n);
  Vector h_basis(n);
  Vector y_basis(n);
  Vector x(n);

  for (int iter = 0;; ++iter) {
    for (Eigen::Index i = 0; i < n; ++i) {
      basis_matrix.col(i) = cols[basis[static_cast<std::size_t>(i)]].g;
      h_basis(i) = cols[basis[static_cast<std::size_t>(i)]].h;
    }
    Eigen::PartialPivLU<Matrix> lu(basis_matrix);
    y_basis = lu.solve(p.objective);
    x = lu.transpose().solve(h_basis);

    // Pricing: the entering dual column is the most violated primal row.
    const double x_scale = x.lpNorm<Eigen::Infinity>();
    std::size_t entering = total;
    double best = 0.0;
    for (std::size_t j = 0; j < total; ++j) {
      const double slack = cols[j].g.dot(x) - cols[j].h;
      const double tol = 1e-11 * std::max({1.0, std::abs(cols[j].h), col_norm[j] * x_scale});
      if (slack >= -tol) continue;
      if (bland) {
        entering = j;
        break;
      }
      const double score = -slack / std::max(col_norm[j], 1e-300);
      if (score > best) {
        best = score;
        entering = j;
      }
    }

    if (entering == total) {
      out.status = LpStatus::Optimal;
      out.iterations = iter;
      break;
    }
    if (iter >= max_iter) {
      throw Error(Errc::NoConvergence, "simplex iteration cap reached");
    }

    const Vector w = lu.solve(cols[entering].g);
    const double w_scale = std::max(1.0, w.lpNorm<Eigen::Infinity>());
    Eigen::Index leaving = -1;
    double ratio = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (w(i) <= 1e-11 * w_scale) continue;
      const double t = std::max(0.0, y_basis(i)) / w(i);
      const double eps = 1e-14 * c_scale;
      if (leaving < 0 || t < ratio - eps) {
        leaving = i;
        ratio = t;
        continue;
      }
      if (t > ratio + eps) continue;
      // Tie: Bland takes the smallest column index, otherwise the largest pivot.
      const bool take = bland ? basis[static_cast<std::size_t>(i)] <
                                    basis[static_cast<std::size_t>(leaving)]
                              : w(i) > w(leaving);
      if (take) {
        leaving = i;
        ratio = std::min(ratio, t);
      }
    }
    if (leaving < 0) {
      out.status = LpStatus::Infeasible;
      out.iterations = iter;
      return out;
    }
    if (ratio <= 1e-14 * c_scale) {
      if (++degenerate_run > 50) bland = true;
    } else {
      degenerate_run = 0;
    }
    basis[static_cast<std::size_t>(leaving)] = entering;
  }

  out.x = x;
  out.objective = p.objective.dot(x);
  out.multipliers = Vector::Zero(static_cast<Eigen::Index>(m));
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::size_t j = basis[static_cast<std::size_t>(i)];
    if (j < m) out.multipliers(static_cast<Eigen::Index>(j)) = std::max(0.0, y_basis(i));
  }
  const double x_scale = x.lpNorm<Eigen::Infinity>();
  for (std::size_t j = 0; j < m; ++j) {
    const double slack = cols[j].g.dot(x) - cols[j].h;
    const double tol = 1e-9 * std::max({1.0, std::abs(cols[j].h), col_norm[j] * x_scale});
    if (slack <= tol) out.active.push_back(j);
  }
  out.box_active = x_scale >= p.box * (1.0 - 1e-12);
  return out;
}

}  // namespace ellmap
