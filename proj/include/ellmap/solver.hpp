#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ellmap/bodies.hpp"
#include "ellmap/ellipsoids.hpp"

namespace ellmap {

struct SolveConfig {
  double tol_feas = 1e-8;
  double tol_obj = 1e-9;
  int max_cuts = 2000;
  double box_R = 1e6;
  int restarts = 3;
  std::uint64_t seed = 0;

  /// Throws InvalidInput unless tolerances are positive and max_cuts >= 2 dim.
  void validate(int dim) const;
};

enum class SolveStatus { Optimal, MaxCutsReached };

/// Result of computing the inscribed ellipsoid u_K(E) minimizing M_E.
struct SolveReport {
  Ellipsoid minimizer;
  double j_value = 0.0;
  SolveStatus status = SolveStatus::Optimal;
  std::vector<Vector> cuts{};
  std::vector<Vector> active_cuts{};
  int lp_iterations = 0;
  int rounds = 0;
  /// Certified lower bound sqrt(LP objective / n) on J from the final relaxation.
  double j_lower_bound = 0.0;
  /// Max relative Frobenius distance between the minimizers of the restarts.
  double restart_spread = 0.0;
  bool sampled_oracle = false;
  std::uint64_t seed = 0;
};

/// u_K(E) by cutting planes on the semi-infinite LP
///   min trace(Q_E^{-1} B)  s.t.  x^T B x >= 1  for x on the boundary of K.
SolveReport solve_u(const ConvexBody& k, const Ellipsoid& e, const SolveConfig& cfg = {});

/// J_K(E) = M_E(u_K(E)). Throws MaxCutsReached if the solve did not converge.
double j_value(const ConvexBody& k, const Ellipsoid& e, const SolveConfig& cfg = {});

struct JohnCheck {
  bool is_fixed_point = false;
  /// ||Q_{u_K(E)} - Q_E||_F / ||Q_E||_F; NaN when E is not inside K.
  double distance = 0.0;
  bool inscribed = false;
  double containment_margin = 0.0;
  std::optional<Ellipsoid> image;
};

/// Tests u_K(E) == E, which characterizes the Lowner-John ellipsoid of K.
JohnCheck check_john(const ConvexBody& k, const Ellipsoid& e, const SolveConfig& cfg = {});

struct Trajectory {
  std::vector<Ellipsoid> iterates;  // E_1, E_2, ... (E_0 excluded)
  std::vector<double> steps;        // relative distance between consecutive forms
  bool fixed_point_reached = false;
};

/// E_{k+1} = u_K(E_k), stopping early once consecutive forms agree to
/// 100 tol_feas. Records the trajectory; asserts nothing about convergence.
Trajectory iterate_u(const ConvexBody& k, const Ellipsoid& e0, int steps,
                     const SolveConfig& cfg = {});

// ---- circumscribed (dual) problem -----------------------------------------

enum class DualStatus { Attained, NonAttained, MaxCutsReached };

struct DualReport {
  DualStatus status = DualStatus::MaxCutsReached;
  std::optional<Ellipsoid> maximizer;  // Attained only
  Vector degenerate_direction;         // NonAttained only
  /// sup of M_E(F) over ellipsoids F containing K (best bound found).
  double i_value = 0.0;
  /// Optimal form B (possibly singular) of the final relaxation.
  SymMatrix optimal_form;
  bool multiple_found = false;
  std::optional<SymMatrix> second;  // a different maximizer when multiple_found
  int rounds = 0;
};

/// I_K(E) and a maximizer of M_E over circumscribed ellipsoids:
///   max trace(Q_E^{-1} B)  s.t.  0 <= x^T B x <= 1  on the boundary of K.
/// Supports PolytopeV (exact upper constraints at generators) and LpBall.
DualReport solve_u_bar(const ConvexBody& k, const Ellipsoid& e, const SolveConfig& cfg = {});

/// Checks u_{K_F^o}(E) == F, where K_F^o = Q_F^{-1} K^o is the polar of K in
/// the F scalar product; this holds iff F maximizes M_E among ellipsoids
/// containing K. Throws InvalidInput when K is not inside F.
bool verify_dual_equivalence(const ConvexBody& k, const Ellipsoid& e, const Ellipsoid& f,
                             const SolveConfig& cfg = {});

std::string_view to_string(SolveStatus s);
std::string_view to_string(DualStatus s);

}  // namespace ellmap
