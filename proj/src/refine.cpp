#include "refine.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>

#include "form_lp.hpp"

namespace ellmap::detail {
namespace {

constexpr double kBarrierGap = 1e-12;
constexpr double kViolation = 1e-13;
constexpr int kMaxExchangeRounds = 60;

class SupportBarrier {
 public:
  SupportBarrier(const SymMatrix& p, const std::vector<Vector>& rows)
      : p_(p.matrix()), rows_(rows), n_(p.dim()) {
    for (int i = 0; i < n_; ++i) {
      for (int j = i; j < n_; ++j) idx_.emplace_back(i, j);
    }
  }

  /// t * f(A) / f_scale - sum log(1 - row . a), or nothing outside the domain.
  std::optional<double> value(const Vector& a, double t) const {
    double logs = 0.0;
    for (const auto& r : rows_) {
      const double s = 1.0 - r.dot(a);
      if (!(s > 0.0)) return std::nullopt;
      logs += std::log(s);
    }
    const auto g = inverse(a);
    if (!g) return std::nullopt;
    return t * (p_ * *g).trace() / f_scale_ - logs;
  }

  double objective(const Vector& a) const { return (p_ * *inverse(a)).trace(); }
  void set_scale(double s) { f_scale_ = s; }

  /// Damped Newton iterations on the barrier at a fixed t.
  void center(Vector& a, double t) const {
    const int m = static_cast<int>(idx_.size());
    for (int it = 0; it < 200; ++it) {
      const Matrix g = *inverse(a);
      const Matrix r = g * p_ * g;
      Vector grad(m);
      Matrix hess(m, m);
      for (int k = 0; k < m; ++k) {
        const auto [i, j] = idx_[k];
        grad(k) = -(i == j ? r(i, i) : 2.0 * r(i, j)) * t / f_scale_;
        for (int l = 0; l <= k; ++l) {
          double h = 0.0;
          for (const auto& [a1, b1] : terms(idx_[l])) {
            for (const auto& [c1, d1] : terms(idx_[k])) h += g(d1, a1) * r(b1, c1);
          }
          hess(k, l) = hess(l, k) = 2.0 * h * t / f_scale_;
        }
      }
      for (const auto& row : rows_) {
        const double s = 1.0 - row.dot(a);
        grad += row / s;
        hess += row * row.transpose() / (s * s);
      }
      const Vector dx = hess.ldlt().solve(-grad);
      const double dec = -grad.dot(dx);
      if (!(dec > 2e-12)) return;
      const double phi0 = *value(a, t);
      double step = 1.0;
      for (; step > 1e-14; step *= 0.5) {
        const auto v = value(a + step * dx, t);
        if (v && *v <= phi0 - 0.25 * step * dec) break;
      }
      if (step <= 1e-14) return;
      a += step * dx;
    }
  }

 private:
  std::optional<Matrix> inverse(const Vector& a) const {
    const Matrix am = unpack_form(a, n_).matrix();
    Eigen::LLT<Matrix> llt(am);
    if (llt.info() != Eigen::Success) return std::nullopt;
    return llt.solve(Matrix::Identity(n_, n_));
  }

  static std::vector<std::pair<int, int>> terms(std::pair<int, int> ij) {
    if (ij.first == ij.second) return {ij};
    return {ij, {ij.second, ij.first}};
  }

  Matrix p_;
  const std::vector<Vector>& rows_;
  int n_;
  std::vector<std::pair<int, int>> idx_;
  double f_scale_ = 1.0;
};

Vector solve_barrier(const SymMatrix& p, const std::vector<Vector>& rows, Vector a) {
  SupportBarrier bar(p, rows);
  bar.set_scale(bar.objective(a));
  const double count = static_cast<double>(rows.size());
  for (double t = count;; t *= 10.0) {
    bar.center(a, t);
    if (count / t <= kBarrierGap) break;
  }
  return a;
}

}  // namespace

Refined refine_support_form(const ConvexBody& k, const SymMatrix& p, const SymMatrix& q0,
                            const std::vector<Vector>& cuts, const SeparationOptions& sep) {
  const int n = k.dim();
  CutPool dirs;
  std::vector<Vector> rows;
  auto add_direction = [&](const Vector& y) {
    if (!(y.norm() > 0.0) || !dirs.add(y / y.norm())) return false;
    const Vector u = y / y.norm();
    const double h = support(k, u);
    rows.push_back(quadratic_row(u) / (h * h));
    return true;
  };
  if (const auto* h = std::get_if<PolytopeH>(&k.variant())) {
    for (const auto& f : h->facets) add_direction(f);
  }
  for (const auto& c : cuts) add_direction(norm_with_dual(k, c).dual);

  Refined out;
  Matrix a_mat = Ellipsoid(q0).inverse_form().matrix();
  SymMatrix q = q0;
  ContainmentVerdict verdict;
  for (;;) {
    Vector a = pack_form(SymMatrix(a_mat));
    double worst = 0.0;
    for (const auto& r : rows) worst = std::max(worst, r.dot(a));
    a *= 0.9 / worst;
    a = solve_barrier(p, rows, a);
    a_mat = unpack_form(a, n).matrix();
    q = Ellipsoid(SymMatrix(a_mat)).inverse_form();

    verdict = contains_ellipsoid(k, Ellipsoid(q), 1e-12, sep);
    ++out.rounds;
    if (out.rounds >= kMaxExchangeRounds) break;
    int added = 0;
    for (const auto& c : verdict.candidates) {
      if (c.margin < -kViolation && add_direction(norm_with_dual(k, c.point).dual)) ++added;
    }
    if (added == 0) break;
  }

  out.margin = verdict.worst_margin;
  const bool rescale = out.margin < 0.0 || !verdict.sampled;
  out.form = rescale ? q * (1.0 / (1.0 + out.margin)) : q;

  const Vector a = pack_form(SymMatrix(a_mat));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (1.0 - rows[i].dot(a) <= 1e-6) {
      const Vector u = dirs.cuts()[i];
      out.contacts.push_back(boundary_point(k, a_mat * u));
    }
  }
  for (const auto& c : verdict.candidates) {
    if (std::abs(c.margin - out.margin) <= 1e-8) out.contacts.push_back(c.point);
  }
  return out;
}

}  // namespace ellmap::detail
