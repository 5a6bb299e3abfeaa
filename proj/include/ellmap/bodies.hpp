#pragma once

#include <cstdint>
#include <memory>
#include <variant>
#include <vector>

#include "ellmap/ellipsoids.hpp"
#include "ellmap/numerics.hpp"

namespace ellmap {

class ConvexBody;

/// {x : |h_j . x| <= 1 for all j}.
struct PolytopeH {
  std::vector<Vector> facets;
  double radius_bound = 0.0;  // Euclidean radius enclosing the body
};

/// conv{+-w_k}.
struct PolytopeV {
  std::vector<Vector> generators;
  double polar_radius_bound = 0.0;  // Euclidean radius enclosing the polar
};

/// {x : ||x||_p <= radius}, p in [1, inf].
struct LpBall {
  double p = 2.0;
  double radius = 1.0;
};

/// map(inner).
struct LinearImage {
  Matrix map;
  Matrix inverse;
  std::shared_ptr<const ConvexBody> inner;
};

/// Centrally symmetric convex body with nonempty interior. Immutable; all
/// degenerate inputs are rejected by the factories.
class ConvexBody {
 public:
  using Variant = std::variant<PolytopeH, PolytopeV, LpBall, LinearImage>;

  static ConvexBody polytope_h(std::vector<Vector> facets);
  static ConvexBody polytope_v(std::vector<Vector> generators);
  static ConvexBody lp_ball(int dim, double p, double radius);
  /// Wraps without pushing the map through; see linear_image() for that.
  static ConvexBody wrap_linear_image(const Matrix& t, ConvexBody inner);

  static ConvexBody cube(int dim);
  static ConvexBody cross_polytope(int dim);

  int dim() const { return dim_; }
  const Variant& variant() const { return v_; }
  bool is_polytope_h() const { return std::holds_alternative<PolytopeH>(v_); }
  bool is_polytope_v() const { return std::holds_alternative<PolytopeV>(v_); }
  bool is_lp_ball() const { return std::holds_alternative<LpBall>(v_); }
  bool is_linear_image() const { return std::holds_alternative<LinearImage>(v_); }

 private:
  ConvexBody(int dim, Variant v) : dim_(dim), v_(std::move(v)) {}

  int dim_ = 0;
  Variant v_;
};

/// Gauge ||x||_K.
double norm(const ConvexBody& k, const Vector& x);

/// ||x||_K together with a dual vector v in the polar body satisfying
/// v . x = ||x||_K (a subgradient of the gauge at x).
struct NormWithDual {
  double value = 0.0;
  Vector dual;
};
NormWithDual norm_with_dual(const ConvexBody& k, const Vector& x);

/// h_K(theta) = sup_{x in K} theta . x.
double support(const ConvexBody& k, const Vector& theta);

/// A maximizer of theta . x over K.
Vector support_point(const ConvexBody& k, const Vector& theta);

/// direction / ||direction||_K. Throws ZeroDirection.
Vector boundary_point(const ConvexBody& k, const Vector& direction);

/// The ellipsoid F as a body: Q_F^{-1/2} applied to the Euclidean unit ball.
ConvexBody ellipsoid_body(const Ellipsoid& f);

/// Standard (Euclidean) polar body.
ConvexBody polar(const ConvexBody& k);

/// T(K): H- and V-polytopes are transformed in place, everything else is
/// wrapped. Throws SingularTransform.
ConvexBody linear_image(const Matrix& t, const ConvexBody& k);

// ---- separation oracle -----------------------------------------------------

struct SeparationOptions {
  int starts_per_dim = 64;  // seeded random starts, multiplied by dim
  std::uint64_t seed = 0;
};

struct ContactCandidate {
  Vector point;   // on the boundary of K
  double margin;  // point^T Q_F point - 1
};

struct ContainmentVerdict {
  bool contained = false;
  /// min over the boundary of K of x^T Q_F x - 1 (negative: F sticks out).
  double worst_margin = 0.0;
  Vector witness;
  /// True when the verdict came from multistart search rather than a closed form.
  bool sampled = false;
  /// Locally worst boundary points found, ascending margin. For H-polytopes
  /// one entry per facet pair.
  std::vector<ContactCandidate> candidates;
};

/// Decides F subset K. Exact for H-polytopes; for other variants the
/// ratio x^T Q_F x / ||x||_K^2 is minimized over a fixed direction net plus
/// seeded random starts, each refined by the monotone support-point
/// iteration theta <- Q_F^{-1} v(theta).
ContainmentVerdict contains_ellipsoid(const ConvexBody& k, const Ellipsoid& f, double tol,
                                      const SeparationOptions& opts = {});

struct EnclosureVerdict {
  bool enclosed = false;
  /// max over K of x^T Q_F x - 1 (positive: K sticks out of F).
  double worst_excess = 0.0;
  Vector witness;
  bool sampled = false;
  std::vector<ContactCandidate> candidates;  // descending excess
};

/// Decides K subset F. Exact for V-polytopes (generators); otherwise a
/// net-plus-multistart search with support-point ascent.
EnclosureVerdict ellipsoid_encloses(const ConvexBody& k, const Ellipsoid& f, double tol,
                                    const SeparationOptions& opts = {});

/// Same search for a positive semidefinite (possibly singular) form B:
/// worst_excess = max over K of x^T B x - 1.
EnclosureVerdict max_quadratic_on_body(const ConvexBody& k, const SymMatrix& b, double tol,
                                       const SeparationOptions& opts = {});

/// Fixed quasi-uniform directions on the upper half sphere (antipodes folded):
/// equal angles for n = 2, a Fibonacci lattice for n = 3, seeded Gaussian
/// directions for n >= 4.
std::vector<Vector> direction_net(int dim);

/// Sign-normalize so the largest-magnitude coordinate is positive.
Vector fold_antipodal(const Vector& x);

/// Angle between the lines spanned by a and b, in [0, pi/2].
double line_angle(const Vector& a, const Vector& b);

}  // namespace ellmap
