#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "nltorsion/radial.hpp"

using namespace nltorsion;
using std::numbers::e;
using std::numbers::pi;

namespace {
// Independent oracle: u(0) on the unit disk is ∫_0^1 (e^{bs} - 1 - bs)/(b² s) ds.
double disk_center_oracle(double b) {
  boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate([b](double s) {
    const double x = b * s;
    if (x < 1e-4) return s / 2 + b * s * s / 6;
    return (std::expm1(x) - x) / (b * b * s);
  }, 0.0, 1.0);
}
}  // namespace

TEST_SUITE("radial") {
  TEST_CASE("flux closed forms") {
    CHECK(flux_w(2, 0.0, 0.5) == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(std::abs(flux_w(2, 1.0, 1.0) / (e - 2) - 1) < 1e-12);
    CHECK(std::abs(flux_w(1, 2.0, 0.5) / ((e - 1) / 2) - 1) < 1e-12);
    CHECK(flux_w(3, 0.0, 2.0) == doctest::Approx(8.0 / 3));
  }

  TEST_CASE("series and closed-form branches agree") {
    for (int d : {1, 2, 3}) {
      for (double x : {0.49, 0.5, 0.51}) {
        const double lo = flux_w(d, 1.0, x * (1 - 1e-9));
        const double hi = flux_w(d, 1.0, x * (1 + 1e-9));
        CHECK(std::abs(hi - lo) / lo < 1e-8);
      }
    }
  }

  TEST_CASE("quadrature branch matches the series for d = 4") {
    // w = (d-1)! r^d Σ (br)^j/(d+j)!
    const double b = 1.3, r = 0.9;
    double term = 1.0 / 24, sum = 0.0;
    for (int j = 0; j < 60; ++j) {
      sum += term;
      term *= b * r / (5 + j);
    }
    CHECK(flux_w(4, b, r) == doctest::Approx(6 * std::pow(r, 4) * sum).epsilon(1e-13));
  }

  TEST_CASE("solve_radial examples") {
    CHECK(solve_radial(2, 0.0, 1.0, 256).center_value() == doctest::Approx(0.25).epsilon(1e-13));
    CHECK(solve_radial(3, 0.0, 1.0, 256).center_value() == doctest::Approx(1.0 / 6).epsilon(1e-13));
    const double oracle = disk_center_oracle(1.0);
    CHECK(oracle == doctest::Approx(0.3179021514544).epsilon(1e-11));
    CHECK(std::abs(solve_radial(2, 1.0, 1.0, 4096).center_value() - oracle) < 1e-12);
    for (double b : {0.5, 2.0}) {
      CHECK(std::abs(solve_radial(2, b, 1.0, 1024).center_value() - disk_center_oracle(b)) < 1e-12);
    }
  }

  TEST_CASE("profile invariants") {
    const RadialSolution s = solve_radial(2, 1.5, 1.2, 512);
    CHECK(s.g.back() == 0.0);
    CHECK(s.w.front() == 0.0);
    for (std::size_t i = 1; i < s.r.size(); ++i) {
      CHECK(s.g[i] <= s.g[i - 1]);
      CHECK(s.w[i] > s.w[i - 1]);
    }
    CHECK(s.ode_residual() < 1e-6);
  }

  TEST_CASE("monotone in the drift cap") {
    std::vector<RadialSolution> sols;
    for (double b : {0.0, 0.5, 1.0, 2.0}) sols.push_back(solve_radial(2, b, 1.0, 128));
    for (std::size_t k = 1; k < sols.size(); ++k) {
      for (std::size_t i = 0; i < sols[k].g.size(); ++i) CHECK(sols[k].g[i] >= sols[k - 1].g[i]);
    }
  }

  TEST_CASE("small-cap limit is first order") {
    auto err = [](double b) {
      const RadialSolution s = solve_radial(2, b, 1.0, 256);
      double m = 0.0;
      for (std::size_t i = 0; i < s.r.size(); ++i) {
        m = std::max(m, std::abs(s.g[i] - (1 - s.r[i] * s.r[i]) / 4));
      }
      return m;
    };
    double prev = err(0.4);
    for (double b : {0.2, 0.1, 0.05}) {
      const double cur = err(b);
      CHECK(cur < prev);
      CHECK(prev / cur == doctest::Approx(2.0).epsilon(0.1));
      prev = cur;
    }
  }

  TEST_CASE("quadrature refinement") {
    const double a = solve_radial(2, 1.0, 1.0, 4096).center_value();
    const double b = solve_radial(2, 1.0, 1.0, 8192).center_value();
    CHECK(std::abs(a - b) < 1e-10);
  }

  TEST_CASE("hermite interpolation") {
    const RadialSolution s = solve_radial(2, 1.0, 1.0, 1024);
    for (double r : {0.0, 0.123, 0.5, 0.987}) {
      CHECK(s.at(r) == doctest::Approx(radial_value(2, 1.0, 1.0, r)).epsilon(1e-10));
    }
    CHECK(s.at(1.5) == 0.0);
  }

  TEST_CASE("ball constants") {
    CHECK(ball_volume(2, 1.0) == doctest::Approx(pi));
    CHECK(ball_volume(3, 1.0) == doctest::Approx(4 * pi / 3));
    CHECK(sphere_area(3, 2.0) == doctest::Approx(16 * pi));
    CHECK(ball_volume(1, 1.0) == doctest::Approx(2.0));
    CHECK(ball_radius_for_volume(2, pi) == doctest::Approx(1.0));
  }

  TEST_CASE("ball flux profile") {
    CHECK(std::abs(ball_flux_profile(2, 0.0, pi).h) < 1e-14);
    const BallFlux f = ball_flux_profile(2, 1.0, pi);
    CHECK(f.flux == doctest::Approx(2 * pi * (e - 2)).epsilon(1e-12));
    CHECK(f.h == doctest::Approx(2 * pi * (e - 2) - pi).epsilon(1e-12));
    CHECK(ball_flux_profile(1, 1.0, 2.0).flux == doctest::Approx(2 * (e - 1)).epsilon(1e-12));
  }

  TEST_CASE("ball flux ODE identity") {
    const std::vector<double> cs = {1, 2, 4, 7, 10};
    CHECK(verify_ball_flux_ode(2, 0.0, cs) < 1e-12);  // h vanishes up to rounding
    CHECK(verify_ball_flux_ode(2, 1.0, std::vector<double>{2.5, 2.8, pi, 3.5, 4.0}) < 1e-4);
    CHECK(verify_ball_flux_ode(3, 0.5, cs) < 1e-4);
    // right side at c = π, b = 1 is e - 2
    CHECK(1.0 * ball_flux_profile(2, 1.0, pi).flux / sphere_area(2, 1.0) ==
          doctest::Approx(e - 2).epsilon(1e-12));
    CHECK_THROWS_AS(verify_ball_flux_ode(2, 1.0, std::vector<double>{1, 2, 3}), std::invalid_argument);
    CHECK_THROWS_AS(verify_ball_flux_ode(2, 1.0, std::vector<double>{1, 2, 2, 3, 4}),
                    std::invalid_argument);
  }

  TEST_CASE("ball integrals") {
    // torsion on the unit disk: ∫u = π/8, ∫u² = π/48, ∫|∇u| = π/3
    CHECK(ball_u_power_integral(2, 0.0, pi, 1) == doctest::Approx(pi / 8).epsilon(1e-12));
    CHECK(ball_u_power_integral(2, 0.0, pi, 2) == doctest::Approx(pi / 48).epsilon(1e-12));
    CHECK(ball_u_power_integral(2, 0.0, pi, 0) == pi);
    CHECK(ball_grad_l1(2, 0.0, pi) == doctest::Approx(pi / 3).epsilon(1e-12));
    CHECK(ball_u_max(2, 0.0, pi) == doctest::Approx(0.25).epsilon(1e-13));
  }

  TEST_CASE("argument errors") {
    CHECK_THROWS_AS(solve_radial(2, 1.0, 1.0, 8), std::invalid_argument);
    CHECK_THROWS_AS(flux_w(0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(flux_w(2, -1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ball_u_power_integral(2, 1.0, 1.0, -1), std::invalid_argument);
  }
}
