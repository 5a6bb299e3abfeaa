#include <doctest.h>

#include <functional>
#include <numbers>

#include "ellmap/oracle.hpp"
#include "ellmap/solver.hpp"
#include "helpers.hpp"

using namespace ellmap;
using namespace testing;

namespace {

ConvexBody square() { return ConvexBody::polytope_h({vec({1, 0}), vec({0, 1})}); }
ConvexBody rectangle() { return ConvexBody::polytope_h({vec({0.5, 0}), vec({0, 1})}); }
Ellipsoid diag(std::initializer_list<double> d) { return make_ellipsoid(SymMatrix::diagonal(vec(d))); }

double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
               double whole, double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = f(0.5 * (a + m)), rm = f(0.5 * (m + b));
  const double left = (m - a) / 6 * (fa + 4 * lm + fm);
  const double right = (b - m) / 6 * (fm + 4 * rm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15 * eps) return left + right + (left + right - whole) / 15;
  return simpson(f, a, m, fa, lm, fm, left, eps / 2, depth - 1) +
         simpson(f, m, b, fm, rm, fb, right, eps / 2, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b) {
  const double fa = f(a), fm = f(0.5 * (a + b)), fb = f(b);
  return simpson(f, a, b, fa, fm, fb, (b - a) / 6 * (fa + 4 * fm + fb), 1e-13, 40);
}

void check_agreement(const ConvexBody& k, const Ellipsoid& e) {
  const OracleResult o = brute_force_u(k, e);
  const SolveReport r = solve_u(k, e);
  CHECK(std::abs(o.j - r.j_value) <= 1e-3);
  CHECK(rel(o.q, r.minimizer.form()) <= 1e-2);
  // Any contained ellipse is a competitor, so the solver value is a lower bound.
  CHECK(o.j >= r.j_value * (1.0 - 1e-6));
  // Sampled containment lets the oracle poke out slightly between samples.
  const ContainmentVerdict c = contains_ellipsoid(k, make_ellipsoid(o.q), 1e-4);
  MESSAGE("oracle J ", o.j, " solver J ", r.j_value, " form gap ", rel(o.q, r.minimizer.form()),
          " oracle containment margin ", c.worst_margin);
  CHECK(c.contained);
  CHECK(o.a > 0.0);
  CHECK(o.b > 0.0);
  CHECK(m_ellipsoid(e, make_ellipsoid(o.q)) == doctest::Approx(o.j));
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("brute_force_u examples") {
  OracleResult o = brute_force_u(square(), unit_ball(2));
  CHECK(o.j == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(rel(o.q, SymMatrix::identity(2)) <= 5e-3);

  o = brute_force_u(rectangle(), unit_ball(2));
  CHECK(o.j * o.j == doctest::Approx(5.0 / 8).epsilon(1e-3));
  CHECK(rel(o.q, SymMatrix::diagonal(vec({0.25, 1}))) <= 5e-3);

  o = brute_force_u(ConvexBody::cross_polytope(2), unit_ball(2));
  CHECK(o.j == doctest::Approx(std::sqrt(2.0)).epsilon(1e-3));
}

TEST_CASE("brute_force_u agrees with the solver") {
  check_agreement(square(), diag({1, 3}));
  check_agreement(ConvexBody::lp_ball(2, 3.0, 1.0), diag({2, 1}));
  check_agreement(ConvexBody::polytope_v({vec({1, 0.3}), vec({-0.2, 1})}), unit_ball(2));
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 4; ++trial) {
    check_agreement(random_polytope_h(2, 3 + trial, rng), make_ellipsoid(random_spd(2, 10.0, rng)));
  }
}

TEST_CASE("brute_force_u errors") {
  CHECK(error_of([] { brute_force_u(ConvexBody::cube(3), unit_ball(3)); }) == Errc::InvalidInput);
  CHECK(error_of([] { brute_force_u(square(), unit_ball(3)); }) == Errc::InvalidInput);
  GridConfig g;
  g.axis_steps = 0;
  CHECK(error_of([&] { brute_force_u(square(), unit_ball(2), g); }) == Errc::InvalidInput);
  g = {};
  g.axis_steps = 1;
  g.angle_steps = 1;
  g.refine_rounds = 0;
  CHECK(error_of([&] { brute_force_u(square(), unit_ball(2), g); }) == Errc::NoFeasiblePoint);
}

TEST_CASE("brute_force_u is deterministic") {
  const OracleResult a = brute_force_u(rectangle(), diag({1, 2}));
  const OracleResult b = brute_force_u(rectangle(), diag({1, 2}));
  CHECK(a.q.matrix() == b.q.matrix());
  CHECK(a.j == b.j);
}

TEST_CASE("quadrature_m examples") {
  QuadratureResult q = quadrature_m(unit_ball(2), ConvexBody::lp_ball(2, 2.0, 1.0), 1000, 1);
  CHECK(q.estimate == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(q.standard_error <= 1e-12);

  q = quadrature_m(unit_ball(2), ellipsoid_body(diag({0.25, 1})), 100000, 2);
  CHECK(std::abs(q.estimate - std::sqrt(5.0 / 8)) <= 3 * q.standard_error);

  const double integral = adaptive_simpson(
      [](double t) {
        const double c = std::cos(t), s = std::sin(t);
        return std::max(c * c, s * s);
      },
      0.0, std::numbers::pi / 2);
  const double square_m = std::sqrt(integral / (std::numbers::pi / 2));
  CHECK(square_m == doctest::Approx(std::sqrt(0.5 + 1.0 / std::numbers::pi)).epsilon(1e-10));
  q = quadrature_m(unit_ball(2), square(), 100000, 3);
  CHECK(std::abs(q.estimate - square_m) <= 3 * q.standard_error);

  CHECK(error_of([] { quadrature_m(unit_ball(2), square(), 99, 1); }) == Errc::InvalidInput);
}

TEST_CASE("quadrature_m is a linear invariant") {
  std::mt19937_64 rng(72);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 2 + trial % 2;
    const ConvexBody k = random_polytope_h(n, n + 2, rng);
    const Ellipsoid e = make_ellipsoid(random_spd(n, 5.0, rng));
    const Matrix t = random_transform(n, 5.0, rng);
    const QuadratureResult a = quadrature_m(e, k, 50000, 10 + trial);
    const QuadratureResult b = quadrature_m(ellipsoid_linear_image(t, e), linear_image(t, k), 50000, 20 + trial);
    const double se = std::hypot(a.standard_error, b.standard_error);
    CHECK(std::abs(a.estimate - b.estimate) <= 3 * se);
  }
}

}  // TEST_SUITE
