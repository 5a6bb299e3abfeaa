#include <algorithm>
#include <cmath>
#include <random>

#include "ellmap/errors.hpp"
#include "ellmap/solver.hpp"
#include "form_lp.hpp"

namespace ellmap {
namespace {

constexpr int kProbeObjectives = 2;
constexpr double kFaceSlack = 1e-8;
constexpr double kDistinct = 1e-3;
constexpr double kDegenerate = 1e-6;

// Cutting-plane relaxation of  max trace(P B)  s.t.  0 <= x^T B x <= 1 on K,
// in coordinates B~ = rho^2 B. Cuts persist across the main solve and probes.
class DualRelaxation {
 public:
  DualRelaxation(const ConvexBody& k, const SymMatrix& p, const SolveConfig& cfg)
      : k_(k), n_(k.dim()), rho_(detail::body_scale(k)), cfg_(cfg) {
    trace_row_ = detail::trace_row(p * (1.0 / p.trace()));
    lp_.box = cfg.box_R;
    if (const auto* v = std::get_if<PolytopeV>(&k.variant())) {
      for (const auto& w : v->generators) add_upper(w);
    } else {
      for (int i = 0; i < n_; ++i) add_upper(boundary_point(k, Vector::Unit(n_, i)));
    }
  }

  const Vector& trace_row() const { return trace_row_; }
  int rounds() const { return rounds_; }
  bool exhausted() const { return exhausted_; }

  /// Maximizes objective . vars over the relaxation plus `extra`, cutting until
  /// the upper constraints hold to tol_feas. Returns the rescaled form B.
  SymMatrix maximize(const Vector& objective, const std::vector<LinearConstraint>& extra) {
    for (;; ++rounds_) {
      if (cut_count_ > cfg_.max_cuts) {
        exhausted_ = true;
        return last_;
      }
      LpProblem lp = lp_;
      lp.objective = -objective;
      lp.constraints.insert(lp.constraints.end(), extra.begin(), extra.end());
      const LpSolution sol = solve_lp(lp);
      if (sol.status != LpStatus::Optimal) {
        throw Error(Errc::NoConvergence, "dual relaxation became infeasible");
      }
      const SymMatrix b = detail::unpack_form(sol.x, n_) * (1.0 / (rho_ * rho_));
      const SymEigen eig = sym_eigen(b);
      if (eig.values(n_ - 1) < -1e-12 * b.frobenius()) {
        if (add_psd(eig.vectors.col(n_ - 1))) continue;
      }
      const SymMatrix psd = spectral_apply(b, [](double l) { return std::max(l, 0.0); });
      const EnclosureVerdict v =
          max_quadratic_on_body(k_, psd, cfg_.tol_feas, {64, cfg_.seed + rounds_});
      int added = 0;
      for (const auto& c : v.candidates) {
        if (c.margin > cfg_.tol_feas && add_upper(c.point)) ++added;
      }
      const double excess = std::max(0.0, v.worst_excess);
      last_ = psd * (1.0 / (1.0 + excess));
      if (added == 0) return last_;
    }
  }

 private:
  bool add_upper(const Vector& x) {
    if (!upper_.add(x)) return false;
    lp_.constraints.push_back({-detail::quadratic_row(x / rho_), -1.0});
    ++cut_count_;
    return true;
  }

  bool add_psd(const Vector& v) {
    if (!psd_.add(v)) return false;
    lp_.constraints.push_back({detail::quadratic_row(v), 0.0});
    ++cut_count_;
    return true;
  }

  const ConvexBody& k_;
  int n_;
  double rho_;
  const SolveConfig& cfg_;
  Vector trace_row_;
  LpProblem lp_;
  detail::CutPool upper_;
  detail::CutPool psd_;
  int cut_count_ = 0;
  int rounds_ = 0;
  bool exhausted_ = false;
  SymMatrix last_;
};

Vector random_symmetric_row(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) g(i, j) = gauss(rng);
  }
  const Vector row = detail::trace_row(SymMatrix(g));
  return row / row.norm();
}

}  // namespace

DualReport solve_u_bar(const ConvexBody& k, const Ellipsoid& e, const SolveConfig& cfg) {
  if (k.dim() != e.dim()) throw Error(Errc::InvalidInput, "body and ellipsoid dimensions differ");
  if (!k.is_polytope_v() && !k.is_lp_ball()) {
    throw Error(Errc::UnsupportedBodyVariant,
                "circumscribed problem needs a V-polytope or an lp ball");
  }
  cfg.validate(k.dim());
  const int n = k.dim();
  const SymMatrix& p = e.inverse_form();
  const double rho = detail::body_scale(k);

  DualRelaxation rel(k, p, cfg);
  DualReport out;
  const SymMatrix best = rel.maximize(rel.trace_row(), {});
  out.optimal_form = best;
  out.i_value = std::sqrt(std::max(0.0, (p.matrix() * best.matrix()).trace()) / n);
  out.rounds = rel.rounds();
  if (rel.exhausted()) {
    out.status = DualStatus::MaxCutsReached;
    return out;
  }

  // Explore the optimal face with secondary objectives.
  const double v_star = rel.trace_row().dot(detail::pack_form(best * (rho * rho)));
  const std::vector<LinearConstraint> face{
      {rel.trace_row(), v_star - kFaceSlack * std::abs(v_star)}};
  std::mt19937_64 rng(cfg.seed);
  std::vector<SymMatrix> maximizers{best};
  for (int i = 0; i < kProbeObjectives; ++i) {
    const Vector g = random_symmetric_row(n, rng);
    maximizers.push_back(rel.maximize(g, face));
    maximizers.push_back(rel.maximize(-g, face));
  }
  out.rounds = rel.rounds();
  if (rel.exhausted()) {
    out.status = DualStatus::MaxCutsReached;
    return out;
  }

  double far = 0.0;
  Matrix centroid = Matrix::Zero(n, n);
  for (const auto& m : maximizers) {
    centroid += m.matrix() / static_cast<double>(maximizers.size());
    const double d = relative_distance(m, best);
    if (d > far) {
      far = d;
      if (d > kDistinct) out.second = m;
    }
  }
  out.multiple_found = out.second.has_value();

  const SymMatrix c(centroid);
  const SymEigen eig = sym_eigen(c);
  if (eig.values(n - 1) >= kDegenerate * c.frobenius()) {
    out.status = DualStatus::Attained;
    out.maximizer = Ellipsoid(c);
  } else {
    out.status = DualStatus::NonAttained;
    out.degenerate_direction = fold_antipodal(eig.vectors.col(n - 1));
  }
  return out;
}

bool verify_dual_equivalence(const ConvexBody& k, const Ellipsoid& e, const Ellipsoid& f,
                             const SolveConfig& cfg) {
  if (k.dim() != e.dim() || k.dim() != f.dim()) {
    throw Error(Errc::InvalidInput, "dimension mismatch");
  }
  const EnclosureVerdict enc = ellipsoid_encloses(k, f, 10.0 * cfg.tol_feas, {64, cfg.seed});
  if (!enc.enclosed) throw Error(Errc::InvalidInput, "K is not contained in F");
  const ConvexBody polar_f = linear_image(f.inverse_form().matrix(), polar(k));
  const SolveReport rep = solve_u(polar_f, e, cfg);
  if (rep.status != SolveStatus::Optimal) {
    throw Error(Errc::MaxCutsReached, "cut budget exhausted before convergence");
  }
  return relative_distance(rep.minimizer.form(), f.form()) <= 1e-4;
}

}  // namespace ellmap
