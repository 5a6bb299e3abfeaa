#pragma once

#include <cstdint>

#include "ellmap/bodies.hpp"
#include "ellmap/ellipsoids.hpp"

namespace ellmap {

struct GridConfig {
  int axis_steps = 120;
  int angle_steps = 90;
  int refine_rounds = 3;
  int boundary_samples = 2048;

  void validate() const;
};

struct OracleResult {
  SymMatrix q;
  double j = 0.0;
  double a = 0.0;    // semiaxis along (cos phi, sin phi)
  double b = 0.0;    // semiaxis along (-sin phi, cos phi)
  double phi = 0.0;
};

/// Exhaustive search for u_K(E) in the plane. For each semiaxis a and angle
/// phi the largest b keeping every sampled boundary point of K outside the
/// ellipse's interior is exact, so only (a, phi) is gridded; the grid is
/// refined around the incumbent with a 10x shrink per round.
/// Throws NoFeasiblePoint when no grid cell admits a contained ellipse.
OracleResult brute_force_u(const ConvexBody& k, const Ellipsoid& e, const GridConfig& g = {});

struct QuadratureResult {
  double estimate = 0.0;
  double standard_error = 0.0;
};

/// Monte-Carlo M_E(K): sqrt of the sample mean of ||x||_K^2 over sample_mu,
/// with a delta-method standard error. count >= 100.
QuadratureResult quadrature_m(const Ellipsoid& e, const ConvexBody& k, int count,
                              std::uint64_t seed);

}  // namespace ellmap
