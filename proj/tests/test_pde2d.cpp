#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nltorsion/geometry.hpp"
#include "nltorsion/pde2d.hpp"
#include "nltorsion/radial.hpp"

using namespace nltorsion;
using std::numbers::pi;

namespace {

MaskPtr mask_of(const Domain2D& d, double h) { return std::make_shared<const GridMask>(build_mask(d, h)); }

LinearOptions tight() {
  LinearOptions o;
  o.correction_tol = 1e-14;
  return o;
}

// Classical series for the torsion function of the unit square, evaluated at the center.
double unit_square_center() {
  double u = 0.125;
  for (int n = 1; n < 200; n += 2) {
    u -= 4.0 / (pi * pi * pi * n * n * n) * std::sin(n * pi / 2) / std::cosh(n * pi / 2);
  }
  return u;
}

}  // namespace

TEST_SUITE("pde2d") {
  TEST_CASE("torsion on the unit disk") {
    auto m = mask_of(Domain2D::disk(1.0), 0.01);
    const Solution s = solve_linear_drift(VectorField::zero(m), 1e-9);
    CHECK(std::abs(s.u.at({0, 0}) - 0.25) < 5e-4);
    CHECK(s.report.residual <= 1e-9);
    CHECK(linear_residual(s.u, VectorField::zero(m)) <= 1e-9);
  }

  TEST_CASE("torsion on the unit square") {
    CHECK(unit_square_center() == doctest::Approx(0.0736713532815).epsilon(1e-11));
    auto m = mask_of(Domain2D::rectangle(1.0, 1.0), 1.0 / 128);
    const Solution s = solve_linear_drift(VectorField::zero(m), 1e-9, tight());
    CHECK(std::abs(s.u.at({0, 0}) - unit_square_center()) < 5e-4);
  }

  TEST_CASE("second-order convergence on the square") {
    double prev = 0.0;
    for (double h : {1.0 / 32, 1.0 / 64, 1.0 / 128}) {
      auto m = mask_of(Domain2D::rectangle(1.0, 1.0), h);
      const double err =
          std::abs(solve_linear_drift(VectorField::zero(m), 1e-10, tight()).u.at({0, 0}) -
                   unit_square_center());
      if (prev > 0.0) CHECK(std::log2(prev / err) >= 1.8);
      prev = err;
    }
  }

  TEST_CASE("quadratic torsion of the disk is reproduced exactly") {
    auto m = mask_of(Domain2D::disk(1.0), 1.0 / 32);
    const Solution s = solve_linear_drift(VectorField::zero(m), 1e-11, tight());
    double err = 0.0;
    for (std::size_t k = 0; k < m->size(); ++k) {
      const Vec2 p = m->position(k);
      err = std::max(err, std::abs(s.u[k] - (1 - p.x * p.x - p.y * p.y) / 4));
    }
    CHECK(err < 1e-12);
  }

  TEST_CASE("mirror symmetry of constant drifts") {
    const double B = 1.5;
    auto m = mask_of(Domain2D::disk(1.0), 1.0 / 32);
    const Solution a = solve_linear_drift(VectorField::constant(m, {B, 0}), 1e-11, tight());
    const Solution b = solve_linear_drift(VectorField::constant(m, {-B, 0}), 1e-11, tight());
    double diff = 0.0;
    for (std::size_t k = 0; k < m->size(); ++k) {
      const Vec2 p = m->position(k);
      const auto j = m->find({-p.x, p.y});
      REQUIRE(j.has_value());
      diff = std::max(diff, std::abs(a.u[k] - b.u[*j]));
    }
    CHECK(diff <= 1e-12);
  }

  TEST_CASE("coupled drift of a radial field points outward in the PDE convention") {
    auto m = mask_of(Domain2D::disk(1.0), 1.0 / 32);
    const Solution s = solve_linear_drift(VectorField::zero(m), 1e-11, tight());
    const VectorField b = optimal_drift_of(s.u, 2.0);
    int checked = 0;
    for (std::size_t k = 0; k < m->size(); ++k) {
      const Vec2 p = m->position(k);
      const double r = norm(p);
      if (r == 0.0) {
        CHECK(norm(b[k]) == 0.0);
        continue;
      }
      CHECK(norm(b[k]) == doctest::Approx(2.0).epsilon(1e-12));
      // the physical drift -b points at the center
      const Vec2 beta = -0.5 * b[k];
      CHECK((beta.x * (-p.x) + beta.y * (-p.y)) / r >= 1 - 1e-6);
      ++checked;
    }
    CHECK(checked > 0);
  }

  TEST_CASE("coupled drift vanishes for zero field or zero cap") {
    auto m = mask_of(Domain2D::disk(1.0), 0.1);
    const VectorField z = optimal_drift_of(ScalarField(m), 1.0);
    for (std::size_t k = 0; k < m->size(); ++k) CHECK(norm(z[k]) == 0.0);
    const Solution s = solve_linear_drift(VectorField::zero(m), 1e-10);
    const VectorField c = optimal_drift_of(s.u, 0.0);
    for (std::size_t k = 0; k < m->size(); ++k) CHECK(norm(c[k]) == 0.0);
  }

  TEST_CASE("zero cap reduces to the torsion solve") {
    auto m = mask_of(Domain2D::ellipse(1.2, 0.8), 1.0 / 32);
    const Solution a = solve_nonlinear(m, 0.0, 1e-10);
    const Solution b = solve_linear_drift(VectorField::zero(m), 1e-10, tight());
    for (std::size_t k = 0; k < m->size(); ++k) CHECK(a.u[k] == doctest::Approx(b.u[k]).epsilon(1e-12));
    CHECK(a.report.policy_sweeps == 0);
  }

  TEST_CASE("nonlinear disk against the radial profile") {
    auto m = mask_of(Domain2D::disk(1.0), 1.0 / 128);
    const Solution s = solve_nonlinear(m, 1.0, 1e-9);
    CHECK(std::abs(s.u.at({0, 0}) - 0.3179) < 1e-2);
    CHECK(s.report.residual <= 1e-8);
    CHECK(nonlinear_residual(s.u, 1.0) <= 1e-8);
    CHECK(s.report.min_increment >= -1e-12);
  }

  TEST_CASE("maximum principle and monotonicity in the cap") {
    auto m = mask_of(Domain2D::stadium(0.6, 1.0), 1.0 / 48);
    const Solution u0 = solve_nonlinear(m, 0.0, 1e-10);
    const Solution u1 = solve_nonlinear(m, 1.0, 1e-10);
    const Solution u2 = solve_nonlinear(m, 2.0, 1e-10);
    for (std::size_t k = 0; k < m->size(); ++k) {
      CHECK(u0.u[k] > 0.0);
      CHECK(u1.u[k] >= u0.u[k]);
      CHECK(u2.u[k] >= u1.u[k]);
    }
  }

  TEST_CASE("domain monotonicity") {
    auto big = mask_of(Domain2D::disk(1.0), 1.0 / 40);
    auto small = mask_of(Domain2D::disk(0.8), 1.0 / 40);
    const Solution ub = solve_nonlinear(big, 1.0, 1e-10);
    const Solution us = solve_nonlinear(small, 1.0, 1e-10);
    for (std::size_t k = 0; k < small->size(); ++k) {
      const auto j = big->find(small->position(k));
      REQUIRE(j.has_value());
      CHECK(us.u[k] <= ub.u[*j]);
    }
  }

  TEST_CASE("policy iteration never decreases u") {
    auto m = mask_of(Domain2D::annulus(0.4, 1.0), 1.0 / 48);
    const Solution s = solve_nonlinear(m, 2.0, 1e-10);
    CHECK(s.report.policy_sweeps >= 1);
    CHECK(s.report.min_increment >= -1e-12);
  }

  TEST_CASE("start-independence of policy iteration") {
    auto m = mask_of(Domain2D::disk(1.0), 1.0 / 32);
    const Solution base = solve_nonlinear(m, 1.0, 1e-11);
    const Solution above = solve_nonlinear(m, 3.0, 1e-11);
    NonlinearOptions opts;
    opts.initial = &above.u;
    const Solution again = solve_nonlinear(m, 1.0, 1e-11, opts);
    for (std::size_t k = 0; k < m->size(); ++k) CHECK(again.u[k] == doctest::Approx(base.u[k]).epsilon(1e-9));
  }

  TEST_CASE("central gradient is exact for quadratics") {
    auto m = mask_of(Domain2D::ellipse(1.0, 0.7), 0.05);
    std::vector<double> v(m->size());
    for (std::size_t k = 0; k < m->size(); ++k) {
      const Vec2 p = m->position(k);
      v[k] = 1 - p.x * p.x / 1.0 - p.y * p.y / 0.49;
    }
    const ScalarField u(m, v);
    for (std::size_t k = 0; k < m->size(); ++k) {
      const Vec2 p = m->position(k);
      const Vec2 g = central_gradient(u, k);
      CHECK(g.x == doctest::Approx(-2 * p.x).epsilon(1e-9));
      CHECK(g.y == doctest::Approx(-2 * p.y / 0.49).epsilon(1e-9));
    }
  }

  TEST_CASE("errors") {
    auto m = mask_of(Domain2D::disk(1.0), 0.1);
    CHECK_THROWS_AS(solve_nonlinear(m, 30.0, 1e-8), SolverError);
    CHECK_THROWS_AS(solve_linear_drift(VectorField::zero(m), 0.0), std::invalid_argument);
    LinearOptions few;
    few.max_sweeps = 3;
    try {
      solve_linear_drift(VectorField::zero(m), 1e-12, few);
      FAIL("expected SolverError");
    } catch (const SolverError& e) {
      CHECK(e.last_residual() > 1e-12);
      CHECK(std::isfinite(e.last_residual()));
    }
    std::vector<double> bx(m->size(), 2.0), by(m->size(), 0.0);
    CHECK_THROWS_AS(VectorField(m, bx, by, 1.0), std::invalid_argument);
  }
}
