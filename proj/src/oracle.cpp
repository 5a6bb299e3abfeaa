#include "ellmap/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "ellmap/errors.hpp"

namespace ellmap {
namespace {

constexpr double kSlack = 1e-9;

struct Sample {
  double x, y;
};

// Largest b such that every sample satisfies (x.u)^2/a^2 + (x.v)^2/b^2 >= 1 - kSlack.
double max_minor(const std::vector<Sample>& pts, double a, double c, double s) {
  double b2 = std::numeric_limits<double>::infinity();
  for (const auto& p : pts) {
    const double pu = c * p.x + s * p.y;
    const double pv = -s * p.x + c * p.y;
    const double rest = 1.0 - kSlack - pu * pu / (a * a);
    if (rest <= 0.0) continue;
    b2 = std::min(b2, pv * pv / rest);
    if (b2 <= 0.0) return 0.0;
  }
  return std::sqrt(b2);
}

}  // namespace

void GridConfig::validate() const {
  if (axis_steps < 1 || angle_steps < 1 || refine_rounds < 0 || boundary_samples < 4) {
    throw Error(Errc::InvalidInput, "grid parameters must be positive");
  }
}

OracleResult brute_force_u(const ConvexBody& k, const Ellipsoid& e, const GridConfig& g) {
  if (k.dim() != 2 || e.dim() != 2) throw Error(Errc::InvalidInput, "oracle is planar only");
  g.validate();
  const double pi = std::numbers::pi;

  std::vector<Sample> pts;
  pts.reserve(static_cast<std::size_t>(g.boundary_samples));
  double reach = 0.0;
  for (int i = 0; i < g.boundary_samples; ++i) {
    const double t = pi * i / g.boundary_samples;
    Vector d(2);
    d << std::cos(t), std::sin(t);
    const Vector x = boundary_point(k, d);
    pts.push_back({x(0), x(1)});
    reach = std::max(reach, x.norm());
  }

  const Matrix& p = e.inverse_form().matrix();
  OracleResult best;
  best.j = std::numeric_limits<double>::infinity();
  double a_lo = 0.0, a_hi = reach, phi_lo = 0.0, phi_hi = pi;
  for (int round = 0; round <= g.refine_rounds; ++round) {
    const double da = (a_hi - a_lo) / g.axis_steps;
    const double dphi = (phi_hi - phi_lo) / g.angle_steps;
    for (int i = 1; i <= g.axis_steps; ++i) {
      const double a = a_lo + i * da;
      if (!(a > 0.0)) continue;
      for (int j = 0; j < g.angle_steps; ++j) {
        const double phi = phi_lo + j * dphi;
        const double c = std::cos(phi), s = std::sin(phi);
        const double b = max_minor(pts, a, c, s);
        if (!(b > 0.0) || !std::isfinite(b)) continue;
        Vector u(2), v(2);
        u << c, s;
        v << -s, c;
        const double j2 = (u.dot(p * u) / (a * a) + v.dot(p * v) / (b * b)) / 2.0;
        if (std::sqrt(j2) < best.j) {
          best.j = std::sqrt(j2);
          best.a = a;
          best.b = b;
          best.phi = phi;
        }
      }
    }
    if (!std::isfinite(best.j)) {
      throw Error(Errc::NoFeasiblePoint, "no contained ellipse on the grid");
    }
    const double half_a = (a_hi - a_lo) / 20.0;
    const double half_phi = (phi_hi - phi_lo) / 20.0;
    a_lo = std::max(0.0, best.a - half_a);
    a_hi = best.a + half_a;
    phi_lo = best.phi - half_phi;
    phi_hi = best.phi + half_phi;
  }

  Vector u(2), v(2);
  u << std::cos(best.phi), std::sin(best.phi);
  v << -std::sin(best.phi), std::cos(best.phi);
  best.q = SymMatrix(u * u.transpose() / (best.a * best.a) +
                     v * v.transpose() / (best.b * best.b));
  return best;
}

QuadratureResult quadrature_m(const Ellipsoid& e, const ConvexBody& k, int count,
                              std::uint64_t seed) {
  if (count < 100) throw Error(Errc::InvalidInput, "quadrature needs count >= 100");
  if (k.dim() != e.dim()) throw Error(Errc::InvalidInput, "quadrature: dimension mismatch");
  double sum = 0.0, sum_sq = 0.0;
  for (const auto& x : sample_mu(e, count, seed)) {
    const double v = std::pow(norm(k, x), 2);
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / count;
  const double var = std::max(0.0, (sum_sq - count * mean * mean) / (count - 1));
  QuadratureResult out;
  out.estimate = std::sqrt(mean);
  out.standard_error = mean > 0.0 ? std::sqrt(var / count) / (2.0 * out.estimate) : 0.0;
  return out;
}

}  // namespace ellmap
