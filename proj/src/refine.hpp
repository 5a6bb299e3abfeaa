#pragma once

#include <vector>

#include "ellmap/bodies.hpp"
#include "ellmap/numerics.hpp"

namespace ellmap::detail {

struct Refined {
  SymMatrix form;               // Q_F, contained in K
  std::vector<Vector> contacts;  // boundary points of K touched by F
  double margin = 0.0;          // containment margin before the final rescale
  int rounds = 0;
};

/// Polishes an inscribed form q0 in the inverse coordinates A = Q^{-1}, where
/// F subset K reads y^T A y <= h_K(y)^2 for every direction y and the objective
/// trace(P A^{-1}) is smooth. Each subproblem over finitely many directions is
/// solved by a log-barrier Newton method; violated directions come from the
/// dual vectors of separation witnesses.
Refined refine_support_form(const ConvexBody& k, const SymMatrix& p, const SymMatrix& q0,
                            const std::vector<Vector>& cuts, const SeparationOptions& sep);

}  // namespace ellmap::detail
