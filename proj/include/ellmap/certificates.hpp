#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "ellmap/bodies.hpp"
#include "ellmap/ellipsoids.hpp"

namespace ellmap {

/// Atomic E-isotropic measure: sum_i weights_i u_i u_i^T ~ Q_E^{-1}.
struct Certificate {
  std::vector<Vector> points;
  std::vector<double> weights;
  /// ||sum w_i u_i u_i^T - Q_E^{-1}||_F / ||Q_E^{-1}||_F.
  double residual = 1.0;
  Ellipsoid metric;
};

/// Points of the boundary of K touched by F, one per antipodal pair, merged
/// below 1e-4 rad. Exact facet formula for H-polytopes; otherwise the
/// separation candidates, direction-net points and `extra` (typically the
/// solver cuts) are filtered by |x^T Q_F x - 1| <= tol and |  ||x||_K - 1 | <= tol.
std::vector<Vector> contact_points(const ConvexBody& k, const Ellipsoid& f, double tol,
                                   const std::vector<Vector>& extra = {});

/// Nonnegative least squares for the weights.
Certificate isotropy_certificate(const Ellipsoid& e, const std::vector<Vector>& points);

enum class Verdict { Verified, FailedContainment, FailedIsotropy };

struct Verification {
  Verdict verdict = Verdict::FailedContainment;
  double residual = 1.0;  // meaningful for Verified and FailedIsotropy
  std::optional<Certificate> certificate;
};

/// Solver-independent optimality check of F = u_K(E): F inside K to tol and an
/// isotropic measure on the contact points with residual <= 100 tol.
Verification verify_u(const ConvexBody& k, const Ellipsoid& e, const Ellipsoid& f, double tol,
                      const std::vector<Vector>& extra = {});

std::string_view to_string(Verdict v);

}  // namespace ellmap
