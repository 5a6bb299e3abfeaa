#include <doctest.h>

#include <numbers>

#include "ellmap/ellipsoids.hpp"
#include "ellmap/oracle.hpp"
#include "helpers.hpp"

using namespace ellmap;
using namespace testing;

namespace {

Ellipsoid diag(std::initializer_list<double> d) { return make_ellipsoid(SymMatrix::diagonal(vec(d))); }

Matrix rotation(double a) {
  Matrix r(2, 2);
  r << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  return r;
}

}  // namespace

TEST_SUITE("ellipsoids") {

TEST_CASE("make_ellipsoid") {
  const Ellipsoid ball = make_ellipsoid(SymMatrix::identity(3));
  CHECK(ball.norm(vec({0, 0, 1})) == doctest::Approx(1.0));
  const Ellipsoid e = diag({0.25, 1});
  CHECK(e.norm(vec({2, 0})) == doctest::Approx(1.0));
  CHECK(e.norm(vec({0, 1})) == doctest::Approx(1.0));
  CHECK((e.form().matrix() * e.inverse_form().matrix() - Matrix::Identity(2, 2)).norm() <= 1e-9);
  CHECK(error_of([] { diag({1, 0}); }) == Errc::NotPositiveDefinite);
  CHECK(error_of([] { diag({1, -2}); }) == Errc::NotPositiveDefinite);
}

TEST_CASE("inner_product") {
  CHECK(inner_product(unit_ball(2), vec({1, 0}), vec({0, 1})) == 0.0);
  const Vector x = vec({1 / std::sqrt(2.0), 0});
  CHECK(inner_product(make_ellipsoid(SymMatrix::identity(2) * 2.0), x, x) == doctest::Approx(1.0));
  CHECK(inner_product(diag({0.25, 1}), vec({2, 0}), vec({2, 0})) == doctest::Approx(1.0));
  CHECK(error_of([] { inner_product(unit_ball(2), vec({1}), vec({1, 0})); }) == Errc::InvalidInput);
}

TEST_CASE("m_ellipsoid examples") {
  CHECK(m_ellipsoid(unit_ball(2), unit_ball(2)) == doctest::Approx(1.0));
  CHECK(m_ellipsoid(unit_ball(2), diag({0.25, 1})) == doctest::Approx(std::sqrt(5.0 / 8)));
  CHECK(m_ellipsoid(diag({1, 0.25}), unit_ball(2)) == doctest::Approx(std::sqrt(5.0 / 2)));
  CHECK(error_of([] { m_ellipsoid(unit_ball(2), unit_ball(3)); }) == Errc::InvalidInput);
}

TEST_CASE("m_ellipsoid agrees with Monte-Carlo quadrature") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + trial % 2;
    const Ellipsoid e = make_ellipsoid(random_spd(n, 10.0, rng));
    const Ellipsoid f = make_ellipsoid(random_spd(n, 10.0, rng));
    const QuadratureResult q = quadrature_m(e, ellipsoid_body(f), 20000, 100 + trial);
    CHECK(std::abs(q.estimate - m_ellipsoid(e, f)) <= 3.0 * q.standard_error);
  }
  const QuadratureResult q = quadrature_m(diag({1, 0.25}), ellipsoid_body(unit_ball(2)), 20000, 7);
  CHECK(std::abs(q.estimate - std::sqrt(2.5)) <= 3.0 * q.standard_error);
}

TEST_CASE("m_star examples") {
  CHECK(m_star(diag({2, 3}), diag({2, 3})) == doctest::Approx(1.0));
  const Ellipsoid d = make_ellipsoid(SymMatrix::identity(2) * 2.0);
  CHECK(m_star(d, diag({3, 1.5})) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m_star(unit_ball(2), diag({0.25, 1})) == doctest::Approx(std::sqrt(2.5)));
}

TEST_CASE("polar_wrt examples and involution") {
  const Ellipsoid p = polar_wrt(unit_ball(2), diag({0.25, 1}));
  CHECK(rel(p.form(), SymMatrix::diagonal(vec({4, 1}))) < 1e-14);
  const Ellipsoid two = make_ellipsoid(SymMatrix::identity(2) * 2.0);
  CHECK(rel(polar_wrt(two, unit_ball(2)).form(), SymMatrix::identity(2) * 4.0) < 1e-14);

  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 3;
    const Ellipsoid e = make_ellipsoid(random_spd(n, 20.0, rng));
    const Ellipsoid f = make_ellipsoid(random_spd(n, 20.0, rng));
    CHECK(rel(polar_wrt(e, e).form(), e.form()) < 1e-9);
    CHECK(rel(polar_wrt(e, polar_wrt(e, f)).form(), f.form()) < 1e-9);
    CHECK(m_star(e, f) == doctest::Approx(m_ellipsoid(e, polar_wrt(e, f))).epsilon(1e-10));
  }
}

TEST_CASE("M and M* properties") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + trial % 3;
    const Ellipsoid e = make_ellipsoid(random_spd(n, 20.0, rng));
    const Ellipsoid f = make_ellipsoid(random_spd(n, 20.0, rng));
    CHECK(m_ellipsoid(e, f) * m_star(e, f) >= 1.0 - 1e-10);
    const Ellipsoid multiple = make_ellipsoid(e.form() * 3.7);
    CHECK(m_ellipsoid(e, multiple) * m_star(e, multiple) == doctest::Approx(1.0).epsilon(1e-10));

    const Matrix t = random_transform(n, 10.0, rng);
    CHECK(m_ellipsoid(ellipsoid_linear_image(t, e), ellipsoid_linear_image(t, f)) ==
          doctest::Approx(m_ellipsoid(e, f)).epsilon(1e-9));
    for (double s : {0.5, 3.0}) {
      CHECK(m_ellipsoid(scaled(e, s), f) == doctest::Approx(s * m_ellipsoid(e, f)).epsilon(1e-10));
    }
  }
}

TEST_CASE("ellipsoid_linear_image") {
  const Ellipsoid e = diag({0.25, 1});
  CHECK(rel(ellipsoid_linear_image(Matrix::Identity(2, 2), e).form(), e.form()) < 1e-15);
  const Ellipsoid img = ellipsoid_linear_image(vec({2, 1}).asDiagonal().toDenseMatrix(), unit_ball(2));
  CHECK(rel(img.form(), SymMatrix::diagonal(vec({0.25, 1}))) < 1e-15);
  const Ellipsoid rot = ellipsoid_linear_image(rotation(std::numbers::pi / 4), e);
  const SymEigen eig = sym_eigen(rot.form());
  CHECK(eig.values(0) == doctest::Approx(1.0));
  CHECK(eig.values(1) == doctest::Approx(0.25));
  CHECK(error_of([&] { ellipsoid_linear_image(Matrix::Zero(2, 2), e); }) == Errc::SingularTransform);
}

TEST_CASE("scaled") {
  const Ellipsoid e = scaled(unit_ball(2), 2.0);
  CHECK(e.norm(vec({2, 0})) == doctest::Approx(1.0));
  CHECK(error_of([] { scaled(unit_ball(2), 0.0); }) == Errc::InvalidInput);
}

TEST_CASE("sample_mu") {
  const Ellipsoid e = diag({1, 0.25});
  const auto pts = sample_mu(e, 1000, 3);
  REQUIRE(pts.size() == 1000);
  for (const auto& x : pts) CHECK(e.form().quad(x) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(sample_mu(e, 10, 3)[7] == pts[7]);
  CHECK(sample_mu(e, 10, 4)[7] != pts[7]);

  const int count = 100000;
  Matrix second = Matrix::Zero(2, 2);
  for (const auto& x : sample_mu(unit_ball(2), count, 5)) second += x * x.transpose() / count;
  CHECK((second - 0.5 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 3.0 / std::sqrt(count));

  double mean = 0.0;
  for (const auto& x : sample_mu(e, count, 6)) mean += x.squaredNorm() / count;
  CHECK(mean == doctest::Approx(2.5).epsilon(0.01));
  CHECK(error_of([] { sample_mu(unit_ball(2), 0, 1); }) == Errc::InvalidInput);
}

TEST_CASE("sample_mu is equivariant under orthogonal conjugation") {
  std::mt19937_64 rng(24);
  const Ellipsoid e = make_ellipsoid(random_spd(3, 5.0, rng));
  const Matrix o = Eigen::HouseholderQR<Matrix>(random_matrix(3, 3, rng)).householderQ();
  const Ellipsoid oe = ellipsoid_linear_image(o, e);
  double a = 0.0, b = 0.0;
  const int count = 50000;
  for (const auto& x : sample_mu(e, count, 9)) a += std::pow(x(0), 4) / count;
  for (const auto& x : sample_mu(oe, count, 9)) b += std::pow((o.transpose() * x)(0), 4) / count;
  CHECK(a == doctest::Approx(b).epsilon(0.05));
}

}  // TEST_SUITE
