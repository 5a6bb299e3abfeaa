#include "ellmap/certificates.hpp"

#include <cmath>

#include "ellmap/errors.hpp"

namespace ellmap {
namespace {

constexpr double kMergeAngle = 1e-4;

void push_unique(std::vector<Vector>& out, const Vector& x) {
  for (const auto& y : out) {
    if (line_angle(x, y) < kMergeAngle) return;
  }
  out.push_back(fold_antipodal(x));
}

Vector svec(const Matrix& m) {
  const auto n = static_cast<int>(m.rows());
  Vector v(n * (n + 1) / 2);
  int k = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) v(k++) = (i == j ? 1.0 : std::sqrt(2.0)) * m(i, j);
  }
  return v;
}

}  // namespace

std::vector<Vector> contact_points(const ConvexBody& k, const Ellipsoid& f, double tol,
                                   const std::vector<Vector>& extra) {
  if (k.dim() != f.dim()) throw Error(Errc::InvalidInput, "contact points: dimension mismatch");
  std::vector<Vector> out;
  const SymMatrix& q_inv = f.inverse_form();

  if (const auto* h = std::get_if<PolytopeH>(&k.variant())) {
    for (const auto& facet : h->facets) {
      const double reach = q_inv.quad(facet);
      if (std::abs(reach - 1.0) <= tol) push_unique(out, q_inv.matrix() * facet / std::sqrt(reach));
    }
    return out;
  }

  auto consider = [&](const Vector& x) {
    if (!(x.norm() > 0.0)) return;
    if (std::abs(f.form().quad(x) - 1.0) <= tol && std::abs(norm(k, x) - 1.0) <= tol) {
      push_unique(out, x);
    }
  };
  const ContainmentVerdict v = contains_ellipsoid(k, f, tol);
  for (const auto& c : v.candidates) consider(c.point);
  for (const auto& d : direction_net(k.dim())) consider(d / f.norm(d));
  for (const auto& x : extra) consider(x);
  return out;
}

Certificate isotropy_certificate(const Ellipsoid& e, const std::vector<Vector>& points) {
  const Vector target = svec(e.inverse_form().matrix());
  Certificate out{points, std::vector<double>(points.size(), 0.0), 1.0, e};
  if (points.empty()) return out;
  std::vector<Vector> columns;
  columns.reserve(points.size());
  for (const auto& u : points) {
    if (u.size() != e.dim()) throw Error(Errc::InvalidInput, "certificate: dimension mismatch");
    columns.push_back(svec(u * u.transpose()));
  }
  const NnlsResult r = solve_nnls(columns, target);
  for (std::size_t i = 0; i < points.size(); ++i) out.weights[i] = r.weights(static_cast<Eigen::Index>(i));
  out.residual = r.residual / target.norm();
  return out;
}

Verification verify_u(const ConvexBody& k, const Ellipsoid& e, const Ellipsoid& f, double tol,
                      const std::vector<Vector>& extra) {
  Verification out;
  if (!contains_ellipsoid(k, f, tol).contained) return out;
  Certificate cert = isotropy_certificate(e, contact_points(k, f, tol, extra));
  out.residual = cert.residual;
  out.verdict = cert.residual <= 100.0 * tol ? Verdict::Verified : Verdict::FailedIsotropy;
  out.certificate = std::move(cert);
  return out;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Verified: return "Verified";
    case Verdict::FailedContainment: return "FailedContainment";
    case Verdict::FailedIsotropy: return "FailedIsotropy";
  }
  return "Unknown";
}

}  // namespace ellmap
