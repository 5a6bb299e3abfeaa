#include "ellmap/bodies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <type_traits>

#include "ellmap/errors.hpp"

namespace ellmap {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Matrix rows_of(const std::vector<Vector>& vs) {
  Matrix m(static_cast<Eigen::Index>(vs.size()), vs.front().size());
  for (std::size_t i = 0; i < vs.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = vs[i].transpose();
  return m;
}

/// Validates a spanning family of nonzero vectors and returns the Euclidean
/// radius of {y : |v_i . y| <= 1 for all i}, with a factor 2 of headroom.
double spanning_radius(const std::vector<Vector>& vs, const char* what) {
  if (vs.empty()) throw Error(Errc::InvalidInput, std::string(what) + ": empty list");
  const Eigen::Index n = vs.front().size();
  if (n < 1) throw Error(Errc::InvalidInput, std::string(what) + ": dimension must be >= 1");
  for (const auto& v : vs) {
    if (v.size() != n) throw Error(Errc::InvalidInput, std::string(what) + ": ragged vectors");
    if (!v.allFinite()) throw Error(Errc::InvalidInput, std::string(what) + ": non-finite entry");
    if (v.norm() == 0.0) throw Error(Errc::InvalidInput, std::string(what) + ": zero vector");
  }
  if (static_cast<Eigen::Index>(vs.size()) < n) {
    throw Error(Errc::InvalidInput, std::string(what) + ": vectors do not span the space");
  }
  Eigen::JacobiSVD<Matrix> svd(rows_of(vs));
  const Vector& sv = svd.singularValues();
  if (!(sv(n - 1) > 1e-10 * sv(0))) {
    throw Error(Errc::InvalidInput, std::string(what) + ": vectors do not span the space");
  }
  return 2.0 * std::sqrt(static_cast<double>(vs.size())) / sv(n - 1);
}

/// max x.theta subject to |r_i . theta| <= 1, via the dense LP.
NormWithDual polytope_lp_max(const std::vector<Vector>& rows, double radius, const Vector& x) {
  if (x.isZero(0.0)) return {0.0, Vector::Zero(x.size())};
  LpProblem lp;
  lp.objective = -x;
  lp.box = radius;
  lp.constraints.reserve(2 * rows.size());
  for (const auto& r : rows) {
    lp.constraints.push_back({r, -1.0});
    lp.constraints.push_back({-r, -1.0});
  }
  const LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::Optimal) {
    throw Error(Errc::NoConvergence, "polytope LP reported infeasible");
  }
  return {x.dot(sol.x), sol.x};
}

bool is_identity(const Matrix& t) {
  return t.rows() == t.cols() && t == Matrix::Identity(t.rows(), t.cols());
}

double conjugate_exponent(double p) {
  if (p == 1.0) return kInf;
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

double lp_norm(const Vector& x, double p) {
  const double top = x.lpNorm<Eigen::Infinity>();
  if (top == 0.0) return 0.0;
  if (std::isinf(p)) return top;
  if (p == 1.0) return x.lpNorm<1>();
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += std::pow(std::abs(x(i)) / top, p);
  return top * std::pow(s, 1.0 / p);
}

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

/// Gradient of the l_p norm at x (a subgradient at kinks), dual-norm 1.
Vector lp_norm_gradient(const Vector& x, double p) {
  const Eigen::Index n = x.size();
  Vector g = Vector::Zero(n);
  const double nx = lp_norm(x, p);
  if (nx == 0.0) return g;
  if (std::isinf(p)) {
    Eigen::Index i = 0;
    x.cwiseAbs().maxCoeff(&i);
    g(i) = sign(x(i));
    return g;
  }
  if (p == 1.0) {
    for (Eigen::Index i = 0; i < n; ++i) g(i) = sign(x(i));
    return g;
  }
  for (Eigen::Index i = 0; i < n; ++i) g(i) = sign(x(i)) * std::pow(std::abs(x(i)) / nx, p - 1.0);
  return g;
}

std::vector<Vector> random_directions(int dim, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(count));
  Vector g(dim);
  while (static_cast<int>(out.size()) < count) {
    for (int i = 0; i < dim; ++i) g(i) = gauss(rng);
    const double len = g.norm();
    if (len > 0.0) out.push_back(g / len);
  }
  return out;
}

/// Keeps the first of every group of candidates spanning the same line.
template <class Better>
std::vector<ContactCandidate> dedup_lines(std::vector<ContactCandidate> cs, Better better,
                                          std::size_t cap) {
  std::stable_sort(cs.begin(), cs.end(), better);
  std::vector<ContactCandidate> kept;
  for (auto& c : cs) {
    const bool dup = std::any_of(kept.begin(), kept.end(), [&](const ContactCandidate& k) {
      return line_angle(k.point, c.point) < 1e-6;
    });
    if (!dup) kept.push_back(std::move(c));
    if (kept.size() >= cap) break;
  }
  return kept;
}

}  // namespace

// ---- construction ----------------------------------------------------------

ConvexBody ConvexBody::polytope_h(std::vector<Vector> facets) {
  const double r = spanning_radius(facets, "polytope_h facets");
  const int n = static_cast<int>(facets.front().size());
  return ConvexBody(n, PolytopeH{std::move(facets), r});
}

ConvexBody ConvexBody::polytope_v(std::vector<Vector> generators) {
  const double r = spanning_radius(generators, "polytope_v generators");
  const int n = static_cast<int>(generators.front().size());
  return ConvexBody(n, PolytopeV{std::move(generators), r});
}

ConvexBody ConvexBody::lp_ball(int dim, double p, double radius) {
  if (dim < 1) throw Error(Errc::InvalidInput, "lp_ball: dimension must be >= 1");
  if (!(p >= 1.0)) throw Error(Errc::InvalidInput, "lp_ball: p must lie in [1, inf]");
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw Error(Errc::InvalidInput, "lp_ball: radius must be finite and positive");
  }
  return ConvexBody(dim, LpBall{p, radius});
}

ConvexBody ConvexBody::wrap_linear_image(const Matrix& t, ConvexBody inner) {
  if (t.rows() != inner.dim() || t.cols() != inner.dim()) {
    throw Error(Errc::InvalidInput, "linear image: matrix size does not match body");
  }
  require_invertible(t);
  const int n = inner.dim();
  return ConvexBody(n, LinearImage{t, t.inverse(),
                                   std::make_shared<const ConvexBody>(std::move(inner))});
}

ConvexBody ConvexBody::cube(int dim) {
  std::vector<Vector> f;
  for (int i = 0; i < dim; ++i) f.push_back(Vector::Unit(dim, i));
  return polytope_h(std::move(f));
}

ConvexBody ConvexBody::cross_polytope(int dim) {
  std::vector<Vector> g;
  for (int i = 0; i < dim; ++i) g.push_back(Vector::Unit(dim, i));
  return polytope_v(std::move(g));
}

// ---- oracles ---------------------------------------------------------------

NormWithDual norm_with_dual(const ConvexBody& k, const Vector& x) {
  if (x.size() != k.dim()) throw Error(Errc::InvalidInput, "norm: dimension mismatch");
  return std::visit(
      Overloaded{
          [&](const PolytopeH& h) -> NormWithDual {
            double best = 0.0;
            Vector dual = Vector::Zero(x.size());
            for (const auto& f : h.facets) {
              const double v = f.dot(x);
              if (std::abs(v) > best) {
                best = std::abs(v);
                dual = sign(v) * f;
              }
            }
            return {best, dual};
          },
          [&](const PolytopeV& v) -> NormWithDual {
            return polytope_lp_max(v.generators, v.polar_radius_bound, x);
          },
          [&](const LpBall& b) -> NormWithDual {
            return {lp_norm(x, b.p) / b.radius, lp_norm_gradient(x, b.p) / b.radius};
          },
          [&](const LinearImage& li) -> NormWithDual {
            NormWithDual in = norm_with_dual(*li.inner, li.inverse * x);
            return {in.value, li.inverse.transpose() * in.dual};
          },
      },
      k.variant());
}

double norm(const ConvexBody& k, const Vector& x) {
  if (x.size() != k.dim()) throw Error(Errc::InvalidInput, "norm: dimension mismatch");
  return std::visit(
      Overloaded{
          [&](const PolytopeH& h) {
            double best = 0.0;
            for (const auto& f : h.facets) best = std::max(best, std::abs(f.dot(x)));
            return best;
          },
          [&](const PolytopeV&) { return norm_with_dual(k, x).value; },
          [&](const LpBall& b) { return lp_norm(x, b.p) / b.radius; },
          [&](const LinearImage& li) { return norm(*li.inner, li.inverse * x); },
      },
      k.variant());
}

Vector support_point(const ConvexBody& k, const Vector& theta) {
  if (theta.size() != k.dim()) throw Error(Errc::InvalidInput, "support: dimension mismatch");
  return std::visit(
      Overloaded{
          [&](const PolytopeH& h) -> Vector {
            return polytope_lp_max(h.facets, h.radius_bound, theta).dual;
          },
          [&](const PolytopeV& v) -> Vector {
            double best = -1.0;
            Vector out = Vector::Zero(theta.size());
            for (const auto& w : v.generators) {
              const double s = w.dot(theta);
              if (std::abs(s) > best) {
                best = std::abs(s);
                out = (s < 0.0 ? -1.0 : 1.0) * w;
              }
            }
            return out;
          },
          [&](const LpBall& b) -> Vector {
            return b.radius * lp_norm_gradient(theta, conjugate_exponent(b.p));
          },
          [&](const LinearImage& li) -> Vector {
            return li.map * support_point(*li.inner, li.map.transpose() * theta);
          },
      },
      k.variant());
}

double support(const ConvexBody& k, const Vector& theta) {
  if (theta.size() != k.dim()) throw Error(Errc::InvalidInput, "support: dimension mismatch");
  return std::visit(
      Overloaded{
          [&](const PolytopeH& h) {
            return polytope_lp_max(h.facets, h.radius_bound, theta).value;
          },
          [&](const PolytopeV& v) {
            double best = 0.0;
            for (const auto& w : v.generators) best = std::max(best, std::abs(w.dot(theta)));
            return best;
          },
          [&](const LpBall& b) { return b.radius * lp_norm(theta, conjugate_exponent(b.p)); },
          [&](const LinearImage& li) { return support(*li.inner, li.map.transpose() * theta); },
      },
      k.variant());
}

Vector boundary_point(const ConvexBody& k, const Vector& direction) {
  if (direction.size() != k.dim()) {
    throw Error(Errc::InvalidInput, "boundary_point: dimension mismatch");
  }
  if (direction.isZero(0.0)) throw Error(Errc::ZeroDirection, "boundary_point of zero vector");
  return direction / norm(k, direction);
}

ConvexBody ellipsoid_body(const Ellipsoid& f) {
  const SymMatrix root = spectral_apply(f.form(), [](double l) { return 1.0 / std::sqrt(l); });
  return ConvexBody::wrap_linear_image(root.matrix(), ConvexBody::lp_ball(f.dim(), 2.0, 1.0));
}

ConvexBody polar(const ConvexBody& k) {
  return std::visit(
      Overloaded{
          [&](const PolytopeH& h) { return ConvexBody::polytope_v(h.facets); },
          [&](const PolytopeV& v) { return ConvexBody::polytope_h(v.generators); },
          [&](const LpBall& b) {
            return ConvexBody::lp_ball(k.dim(), conjugate_exponent(b.p), 1.0 / b.radius);
          },
          [&](const LinearImage& li) {
            return ConvexBody::wrap_linear_image(li.inverse.transpose(), polar(*li.inner));
          },
      },
      k.variant());
}

ConvexBody linear_image(const Matrix& t, const ConvexBody& k) {
  if (t.rows() != k.dim() || t.cols() != k.dim()) {
    throw Error(Errc::InvalidInput, "linear_image: matrix size does not match body");
  }
  require_invertible(t);
  if (is_identity(t)) return k;
  return std::visit(
      Overloaded{
          [&](const PolytopeH& h) {
            const Matrix inv_t = t.inverse().transpose();
            std::vector<Vector> f;
            f.reserve(h.facets.size());
            for (const auto& v : h.facets) f.push_back(inv_t * v);
            return ConvexBody::polytope_h(std::move(f));
          },
          [&](const PolytopeV& v) {
            std::vector<Vector> g;
            g.reserve(v.generators.size());
            for (const auto& w : v.generators) g.push_back(t * w);
            return ConvexBody::polytope_v(std::move(g));
          },
          [&](const LpBall&) { return ConvexBody::wrap_linear_image(t, k); },
          [&](const LinearImage& li) {
            return ConvexBody::wrap_linear_image(t * li.map, *li.inner);
          },
      },
      k.variant());
}

// ---- geometry helpers ------------------------------------------------------

Vector fold_antipodal(const Vector& x) {
  Eigen::Index i = 0;
  x.cwiseAbs().maxCoeff(&i);
  return x(i) < 0.0 ? Vector(-x) : x;
}

double line_angle(const Vector& a, const Vector& b) {
  const double c = std::abs(a.dot(b)) / (a.norm() * b.norm());
  // Cross-term form stays accurate for nearly parallel lines.
  const double s = std::sqrt(std::max(0.0, (a.squaredNorm() * b.squaredNorm() - a.dot(b) * a.dot(b)))) /
                   (a.norm() * b.norm());
  return std::atan2(s, c);
}

std::vector<Vector> direction_net(int dim) {
  std::vector<Vector> out;
  if (dim == 1) {
    out.push_back(Vector::Ones(1));
  } else if (dim == 2) {
    constexpr int kSteps = 128;
    for (int i = 0; i < kSteps; ++i) {
      const double a = std::numbers::pi * i / kSteps;
      Vector v(2);
      v << std::cos(a), std::sin(a);
      out.push_back(v);
    }
  } else if (dim == 3) {
    constexpr int kPoints = 256;
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < kPoints; ++i) {
      const double z = (i + 0.5) / kPoints;
      const double r = std::sqrt(1.0 - z * z);
      const double phi = golden * i;
      Vector v(3);
      v << r * std::cos(phi), r * std::sin(phi), z;
      out.push_back(v);
    }
  } else {
    for (auto& v : random_directions(dim, 128 * dim, 0x5eedULL)) out.push_back(fold_antipodal(v));
  }
  return out;
}

// ---- separation ------------------------------------------------------------

ContainmentVerdict contains_ellipsoid(const ConvexBody& k, const Ellipsoid& f, double tol,
                                      const SeparationOptions& opts) {
  if (k.dim() != f.dim()) throw Error(Errc::InvalidInput, "containment: dimension mismatch");
  if (!(tol > 0.0)) throw Error(Errc::InvalidInput, "containment: tol must be positive");
  const Matrix& q = f.form().matrix();
  const Matrix& q_inv = f.inverse_form().matrix();
  ContainmentVerdict out;

  if (const auto* h = std::get_if<PolytopeH>(&k.variant())) {
    double worst_reach = 0.0;
    for (const auto& facet : h->facets) {
      const Vector dir = q_inv * facet;
      const double reach = facet.dot(dir);  // h^T Q^{-1} h
      const Vector x = boundary_point(k, dir);
      out.candidates.push_back({x, x.dot(q * x) - 1.0});
      worst_reach = std::max(worst_reach, reach);
    }
    std::stable_sort(out.candidates.begin(), out.candidates.end(),
                     [](const auto& a, const auto& b) { return a.margin < b.margin; });
    out.contained = worst_reach <= 1.0 + tol;
    out.worst_margin = 1.0 / worst_reach - 1.0;
    out.witness = out.candidates.front().point;
    return out;
  }

  out.sampled = true;
  std::vector<Vector> starts = direction_net(k.dim());
  for (auto& v : random_directions(k.dim(), opts.starts_per_dim * k.dim(), opts.seed)) {
    starts.push_back(std::move(v));
  }

  std::vector<ContactCandidate> found;
  found.reserve(starts.size());
  for (const auto& s : starts) {
    Vector theta = s;
    NormWithDual nd = norm_with_dual(k, theta);
    double ratio = theta.dot(q * theta) / (nd.value * nd.value);
    for (int it = 0; it < 100; ++it) {
      Vector next = q_inv * nd.dual;
      const double len = next.norm();
      if (len == 0.0) break;
      next /= len;
      NormWithDual nd_next = norm_with_dual(k, next);
      const double r_next = next.dot(q * next) / (nd_next.value * nd_next.value);
      if (!(r_next < ratio * (1.0 - 1e-15))) break;
      theta = std::move(next);
      nd = std::move(nd_next);
      ratio = r_next;
    }
    found.push_back({theta / nd.value, ratio - 1.0});
  }
  out.candidates = dedup_lines(
      std::move(found), [](const auto& a, const auto& b) { return a.margin < b.margin; },
      static_cast<std::size_t>(8 * k.dim()));
  out.worst_margin = out.candidates.front().margin;
  out.witness = out.candidates.front().point;
  out.contained = out.worst_margin >= -tol;
  return out;
}

EnclosureVerdict ellipsoid_encloses(const ConvexBody& k, const Ellipsoid& f, double tol,
                                    const SeparationOptions& opts) {
  return max_quadratic_on_body(k, f.form(), tol, opts);
}

EnclosureVerdict max_quadratic_on_body(const ConvexBody& k, const SymMatrix& b, double tol,
                                       const SeparationOptions& opts) {
  if (k.dim() != b.dim()) throw Error(Errc::InvalidInput, "enclosure: dimension mismatch");
  if (!(tol > 0.0)) throw Error(Errc::InvalidInput, "enclosure: tol must be positive");
  const Matrix& q = b.matrix();
  EnclosureVerdict out;
  auto by_excess = [](const auto& a, const auto& b) { return a.margin > b.margin; };

  if (const auto* v = std::get_if<PolytopeV>(&k.variant())) {
    for (const auto& w : v->generators) out.candidates.push_back({w, w.dot(q * w) - 1.0});
    std::stable_sort(out.candidates.begin(), out.candidates.end(), by_excess);
  } else {
    out.sampled = true;
    std::vector<Vector> starts = direction_net(k.dim());
    for (auto& d : random_directions(k.dim(), opts.starts_per_dim * k.dim(), opts.seed)) {
      starts.push_back(std::move(d));
    }
    std::vector<ContactCandidate> found;
    found.reserve(starts.size());
    for (const auto& s : starts) {
      Vector x = support_point(k, s);
      double val = x.dot(q * x);
      for (int it = 0; it < 100; ++it) {
        Vector next = support_point(k, q * x);
        const double v_next = next.dot(q * next);
        if (!(v_next > val * (1.0 + 1e-15))) break;
        x = std::move(next);
        val = v_next;
      }
      found.push_back({x, val - 1.0});
    }
    out.candidates = dedup_lines(std::move(found), by_excess,
                                 static_cast<std::size_t>(8 * k.dim()));
  }
  out.worst_excess = out.candidates.front().margin;
  out.witness = out.candidates.front().point;
  out.enclosed = out.worst_excess <= tol;
  return out;
}

}  // namespace ellmap
