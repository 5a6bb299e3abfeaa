#include "ellmap/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "ellmap/errors.hpp"
#include "form_lp.hpp"
#include "refine.hpp"

namespace ellmap {
namespace {

struct SingleSolve {
  SymMatrix form;
  SolveStatus status = SolveStatus::Optimal;
  std::vector<Vector> cuts;
  int lp_iterations = 0;
  int rounds = 0;
  double lower_trace = 0.0;  // trace(Q_E^{-1} B) of the last relaxation
  bool sampled = false;
};

std::vector<Vector> seeded_directions(int dim, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Vector> out;
  Vector g(dim);
  while (static_cast<int>(out.size()) < count) {
    for (int i = 0; i < dim; ++i) g(i) = gauss(rng);
    if (g.norm() > 0.0) out.push_back(g / g.norm());
  }
  return out;
}

// One cutting-plane run. The LP works in coordinates normalized by the body
// scale rho (B~ = rho^2 B) and by trace(Q_E^{-1}), which leaves the minimizer
// unchanged and keeps the LP box meaningful for tiny or huge bodies.
SingleSolve solve_once(const ConvexBody& k, const Ellipsoid& e, const SolveConfig& cfg,
                       std::uint64_t seed) {
  const int n = k.dim();
  const double rho = detail::body_scale(k);
  const SymMatrix& p = e.inverse_form();
  const double p_trace = p.trace();

  detail::CutPool pool;
  for (int i = 0; i < n; ++i) pool.add(boundary_point(k, Vector::Unit(n, i)));
  for (const auto& d : seeded_directions(n, 4 * n, seed)) pool.add(boundary_point(k, d));

  LpProblem lp;
  lp.objective = detail::trace_row(p * (1.0 / p_trace));
  lp.box = cfg.box_R;
  auto sync_constraints = [&] {
    for (std::size_t i = lp.constraints.size(); i < pool.size(); ++i) {
      lp.constraints.push_back({detail::quadratic_row(pool.cuts()[i] / rho), 1.0});
    }
  };

  SingleSolve out;
  std::optional<SymMatrix> best_feasible;
  double best_upper = std::numeric_limits<double>::infinity();
  double prev_obj = std::numeric_limits<double>::quiet_NaN();
  const SeparationOptions sep{64, seed};

  for (;; ++out.rounds) {
    if (static_cast<int>(pool.size()) > cfg.max_cuts) {
      out.status = SolveStatus::MaxCutsReached;
      break;
    }
    sync_constraints();
    const LpSolution sol = solve_lp(lp);
    out.lp_iterations += sol.iterations;
    if (sol.status != LpStatus::Optimal) {
      throw Error(Errc::NoConvergence, "cutting-plane relaxation became infeasible");
    }
    const SymMatrix b = detail::unpack_form(sol.x, n) * (1.0 / (rho * rho));
    const double obj = sol.objective;
    out.lower_trace = obj * p_trace / (rho * rho);

    const SymEigen eig = sym_eigen(b);
    const double lambda_min = eig.values(n - 1);
    const bool definite = lambda_min > 1e-12 * std::abs(b.trace()) / n;
    if (!definite || sol.box_active) {
      // The relaxation is still too loose: any direction where B is not
      // positive gives a violated constraint x^T B x >= 1 at its boundary point.
      const Vector v = eig.vectors.col(n - 1);
      if (!pool.add(boundary_point(k, v))) {
        pool.add(boundary_point(k, seeded_directions(n, 1, seed + 7919 * out.rounds).front()));
      }
      continue;
    }

    const Ellipsoid f(b);
    const ContainmentVerdict verdict = contains_ellipsoid(k, f, cfg.tol_feas, sep);
    out.sampled = verdict.sampled;
    const double margin = verdict.worst_margin;
    const double rescale = margin < 0.0 ? 1.0 / (1.0 + margin) : 1.0;
    if (obj * rescale < best_upper) {
      best_upper = obj * rescale;
      best_feasible = b * rescale;
    }

    int added = 0;
    for (const auto& c : verdict.candidates) {
      if (c.margin < -cfg.tol_feas && pool.add(c.point)) ++added;
    }
    const bool stalled =
        std::isfinite(prev_obj) && std::abs(obj - prev_obj) <= cfg.tol_obj * std::abs(obj);
    prev_obj = obj;
    if ((margin >= -cfg.tol_feas && stalled) || added == 0) {
      const detail::Refined ref =
          detail::refine_support_form(k, p, b * rescale, pool.cuts(), sep);
      for (const auto& c : ref.contacts) pool.add(c);
      out.form = ref.form;
      out.cuts = pool.cuts();
      return out;
    }
  }

  // Cut budget exhausted: hand back the best rescaled (hence feasible) iterate.
  if (!best_feasible) {
    throw Error(Errc::MaxCutsReached, "no positive definite iterate within the cut budget");
  }
  out.form = *best_feasible;
  out.cuts = pool.cuts();
  return out;
}

}  // namespace

std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::MaxCutsReached: return "MaxCutsReached";
  }
  return "Unknown";
}

std::string_view to_string(DualStatus s) {
  switch (s) {
    case DualStatus::Attained: return "Attained";
    case DualStatus::NonAttained: return "NonAttained";
    case DualStatus::MaxCutsReached: return "MaxCutsReached";
  }
  return "Unknown";
}

void SolveConfig::validate(int dim) const {
  if (!(tol_feas > 0.0) || !(tol_obj > 0.0)) {
    throw Error(Errc::InvalidInput, "solver tolerances must be positive");
  }
  if (max_cuts < 2 * dim) throw Error(Errc::InvalidInput, "max_cuts must be at least 2 * dim");
  if (!(box_R > 0.0) || !std::isfinite(box_R)) {
    throw Error(Errc::InvalidInput, "box_R must be finite and positive");
  }
  if (restarts < 1) throw Error(Errc::InvalidInput, "restarts must be >= 1");
}

SolveReport solve_u(const ConvexBody& k, const Ellipsoid& e, const SolveConfig& cfg) {
  if (k.dim() != e.dim()) throw Error(Errc::InvalidInput, "body and ellipsoid dimensions differ");
  cfg.validate(k.dim());

  std::vector<SingleSolve> runs;
  runs.reserve(static_cast<std::size_t>(cfg.restarts));
  for (int r = 0; r < cfg.restarts; ++r) {
    runs.push_back(solve_once(k, e, cfg, cfg.seed + static_cast<std::uint64_t>(r)));
  }

  // Prefer converged runs, then the smallest objective.
  const auto objective = [&](const SingleSolve& s) {
    return (e.inverse_form().matrix() * s.form.matrix()).trace();
  };
  std::size_t best = 0;
  for (std::size_t i = 1; i < runs.size(); ++i) {
    const bool opt_i = runs[i].status == SolveStatus::Optimal;
    const bool opt_b = runs[best].status == SolveStatus::Optimal;
    if ((opt_i && !opt_b) || (opt_i == opt_b && objective(runs[i]) < objective(runs[best]))) {
      best = i;
    }
  }

  const SingleSolve& chosen = runs[best];
  SolveReport rep{.minimizer = Ellipsoid(chosen.form)};
  rep.j_value = m_ellipsoid(e, rep.minimizer);
  rep.status = chosen.status;
  rep.cuts = chosen.cuts;
  rep.rounds = chosen.rounds;
  rep.sampled_oracle = chosen.sampled;
  rep.seed = cfg.seed;
  rep.j_lower_bound = std::sqrt(std::max(0.0, chosen.lower_trace) / k.dim());
  for (const auto& r : runs) {
    rep.lp_iterations += r.lp_iterations;
    rep.restart_spread = std::max(rep.restart_spread, relative_distance(r.form, chosen.form));
  }
  const SymMatrix& q = rep.minimizer.form();
  for (const auto& c : rep.cuts) {
    if (std::abs(q.quad(c) - 1.0) <= 10.0 * cfg.tol_feas) rep.active_cuts.push_back(c);
  }
  return rep;
}

double j_value(const ConvexBody& k, const Ellipsoid& e, const SolveConfig& cfg) {
  const SolveReport rep = solve_u(k, e, cfg);
  if (rep.status != SolveStatus::Optimal) {
    throw Error(Errc::MaxCutsReached, "cut budget exhausted before convergence");
  }
  return rep.j_value;
}

JohnCheck check_john(const ConvexBody& k, const Ellipsoid& e, const SolveConfig& cfg) {
  JohnCheck out;
  const ContainmentVerdict inside = contains_ellipsoid(k, e, 10.0 * cfg.tol_feas, {64, cfg.seed});
  out.inscribed = inside.contained;
  out.containment_margin = inside.worst_margin;
  if (!out.inscribed) {
    out.distance = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  const SolveReport rep = solve_u(k, e, cfg);
  if (rep.status != SolveStatus::Optimal) {
    throw Error(Errc::MaxCutsReached, "cut budget exhausted before convergence");
  }
  out.distance = relative_distance(rep.minimizer.form(), e.form());
  out.is_fixed_point = out.distance <= 100.0 * cfg.tol_feas;
  out.image = rep.minimizer;
  return out;
}

Trajectory iterate_u(const ConvexBody& k, const Ellipsoid& e0, int steps, const SolveConfig& cfg) {
  if (steps < 1) throw Error(Errc::InvalidInput, "steps must be >= 1");
  Trajectory out;
  Ellipsoid current = e0;
  for (int s = 0; s < steps; ++s) {
    const SolveReport rep = solve_u(k, current, cfg);
    if (rep.status != SolveStatus::Optimal) {
      throw Error(Errc::MaxCutsReached, "cut budget exhausted before convergence");
    }
    const double step = relative_distance(rep.minimizer.form(), current.form());
    out.iterates.push_back(rep.minimizer);
    out.steps.push_back(step);
    current = rep.minimizer;
    if (step < 100.0 * cfg.tol_feas) {
      out.fixed_point_reached = true;
      break;
    }
  }
  return out;
}

}  // namespace ellmap
