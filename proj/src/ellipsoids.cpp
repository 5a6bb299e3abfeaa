#include "ellmap/ellipsoids.hpp"

#include <cmath>
#include <random>

#include "ellmap/errors.hpp"

namespace ellmap {
namespace {

void require_same_dim(const Ellipsoid& a, const Ellipsoid& b) {
  if (a.dim() != b.dim()) throw Error(Errc::InvalidInput, "ellipsoid dimensions differ");
}

}  // namespace

Ellipsoid::Ellipsoid(const SymMatrix& q) : q_(q), chol_(cholesky(q)) {
  const int n = q.dim();
  const Matrix lower_inv =
      chol_.triangularView<Eigen::Lower>().solve(Matrix::Identity(n, n));
  q_inv_ = SymMatrix(lower_inv.transpose() * lower_inv);
  const double err = (q_.matrix() * q_inv_.matrix() - Matrix::Identity(n, n)).norm();
  if (!(err <= 1e-9)) {
    throw Error(Errc::NotPositiveDefinite, "form too ill-conditioned to invert accurately");
  }
}

double Ellipsoid::norm(const Vector& x) const { return std::sqrt(std::max(0.0, q_.quad(x))); }

Ellipsoid make_ellipsoid(const SymMatrix& q) { return Ellipsoid(q); }

Ellipsoid unit_ball(int dim) { return Ellipsoid(SymMatrix::identity(dim)); }

double inner_product(const Ellipsoid& e, const Vector& x, const Vector& y) {
  if (x.size() != e.dim() || y.size() != e.dim()) {
    throw Error(Errc::InvalidInput, "vector dimension does not match ellipsoid");
  }
  return x.dot(e.form().matrix() * y);
}

double m_ellipsoid(const Ellipsoid& e, const Ellipsoid& f) {
  require_same_dim(e, f);
  const double tr = (e.inverse_form().matrix() * f.form().matrix()).trace();
  return std::sqrt(tr / e.dim());
}

double m_star(const Ellipsoid& e, const Ellipsoid& f) {
  require_same_dim(e, f);
  const double tr = (f.inverse_form().matrix() * e.form().matrix()).trace();
  return std::sqrt(tr / e.dim());
}

Ellipsoid polar_wrt(const Ellipsoid& e, const Ellipsoid& f) {
  require_same_dim(e, f);
  const Matrix& qe = e.form().matrix();
  return Ellipsoid(SymMatrix(qe * f.inverse_form().matrix() * qe));
}

Ellipsoid ellipsoid_linear_image(const Matrix& t, const Ellipsoid& e) {
  if (t.rows() != e.dim()) throw Error(Errc::InvalidInput, "transform dimension mismatch");
  require_invertible(t);
  const Matrix t_inv = t.inverse();
  return Ellipsoid(SymMatrix(t_inv.transpose() * e.form().matrix() * t_inv));
}

Ellipsoid scaled(const Ellipsoid& e, double t) {
  if (!(t != 0.0) || !std::isfinite(t)) throw Error(Errc::InvalidInput, "scale must be nonzero");
  return Ellipsoid(e.form() * (1.0 / (t * t)));
}

std::vector<Vector> sample_mu(const Ellipsoid& e, int count, std::uint64_t seed) {
  if (count < 1) throw Error(Errc::InvalidInput, "sample count must be positive");
  const int n = e.dim();
  const SymMatrix inv_sqrt = spectral_apply(e.form(), [](double l) { return 1.0 / std::sqrt(l); });
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(count));
  Vector g(n);
  while (static_cast<int>(out.size()) < count) {
    for (int i = 0; i < n; ++i) g(i) = gauss(rng);
    const double len = g.norm();
    if (len == 0.0) continue;
    Vector x = inv_sqrt.matrix() * (g / len);
    // Remove the rounding drift so x^T Q x = 1 to machine precision.
    x /= e.norm(x);
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace ellmap
