#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nltorsion/geometry.hpp"

using namespace nltorsion;
using std::numbers::pi;

TEST_SUITE("geometry") {
  TEST_CASE("disk mask nodes lie strictly inside") {
    const GridMask m = build_mask(Domain2D::disk(1.0), 0.5);
    CHECK(m.size() > 0);
    for (std::size_t k = 0; k < m.size(); ++k) {
      const Vec2 p = m.position(k);
      CHECK(p.x * p.x + p.y * p.y < 1.0);
    }
  }

  TEST_CASE("unit square at h = 0.25 has a 3x3 interior") {
    const GridMask m = build_mask(Domain2D::rectangle(1.0, 1.0), 0.25);
    CHECK(m.size() == 9);
    for (std::size_t k = 0; k < m.size(); ++k) {
      const Vec2 p = m.position(k);
      CHECK(std::abs(p.x) < 0.5);
      CHECK(std::abs(p.y) < 0.5);
      // boundary lies exactly one cell away or closer
      for (double c : m.cut(k)) {
        CHECK(c > 0.0);
        CHECK(c <= 1.0);
      }
    }
  }

  TEST_CASE("node count approximates the disk area") {
    const double h = 0.01;
    const GridMask m = build_mask(Domain2D::disk(1.0), h);
    CHECK(std::abs(m.size() * h * h - pi) / pi < 0.01);
  }

  TEST_CASE("node-count area error is bounded by a boundary layer") {
    for (double h : {0.05, 0.025, 0.0125, 0.00625}) {
      const GridMask m = build_mask(Domain2D::disk(1.0), h);
      CHECK(std::abs(m.size() * h * h - pi) <= 2 * pi * h);
    }
  }

  TEST_CASE("cut fractions hit the analytic boundary") {
    const Domain2D d = Domain2D::ellipse(1.3, 0.7);
    const double h = 0.05;
    const GridMask m = build_mask(d, h);
    const int di[4] = {1, -1, 0, 0};
    const int dj[4] = {0, 0, 1, -1};
    int cuts = 0;
    for (std::size_t k = 0; k < m.size(); ++k) {
      for (int dir = 0; dir < 4; ++dir) {
        const double c = m.cut(k)[dir];
        if (c == 1.0) continue;
        ++cuts;
        const Vec2 p = m.position(k) + (c * h) * Vec2{double(di[dir]), double(dj[dir])};
        CHECK(std::abs(d.level(p)) < 1e-12);
      }
    }
    CHECK(cuts > 0);
  }

  TEST_CASE("quadrature weights sum to the area") {
    for (const Domain2D& d : equal_area_family(pi)) {
      const GridMask m = build_mask(d, 1.0 / 64);
      CAPTURE(d.describe());
      // 16x16 midpoint samples per boundary cell: at most half a sample row lost per cell
      CHECK(std::abs(m.measure() - pi) <= d.perimeter() * (1.0 / 64) / 32);
    }
  }

  TEST_CASE("equal-area family") {
    const auto fam = equal_area_family(pi);
    REQUIRE(fam.size() == 6);
    for (const auto& d : fam) CHECK(std::abs(d.area() - pi) / pi <= 1e-12);
    CHECK(std::get<Disk>(fam[0].shape()).radius == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(fam[1].name() == "square");
    CHECK(std::get<Rectangle>(fam[1].shape()).width == doctest::Approx(std::sqrt(pi)).epsilon(1e-14));
    const auto e = std::get<Ellipse>(fam[2].shape());
    CHECK(e.a == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(e.b == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-14));
    for (std::size_t i = 1; i < fam.size(); ++i) CHECK(fam[0].perimeter() < fam[i].perimeter());
  }

  TEST_CASE("isoperimetric ratio") {
    CHECK(std::abs(Domain2D::disk(2.5).isoperimetric_ratio() - 1.0) <= 1e-12);
    for (const auto& d : equal_area_family(2.0)) {
      if (d.name() != "disk") CHECK(d.isoperimetric_ratio() > 1.0);
    }
  }

  TEST_CASE("analytic perimeters") {
    CHECK(Domain2D::stadium(1.0, 2.0).perimeter() == doctest::Approx(2 * pi + 4).epsilon(1e-14));
    // circle as a degenerate ellipse
    CHECK(Domain2D::ellipse(1.0, 1.0).perimeter() == doctest::Approx(2 * pi).epsilon(1e-12));
    // Ramanujan's second approximation is accurate to ~1e-10 at this eccentricity
    const double a = 2.0, b = 1.0;
    const double hh = (a - b) * (a - b) / ((a + b) * (a + b));
    const double ram = pi * (a + b) * (1 + 3 * hh / (10 + std::sqrt(4 - 3 * hh)));
    CHECK(Domain2D::ellipse(a, b).perimeter() == doctest::Approx(ram).epsilon(1e-9));
  }

  TEST_CASE("boundary distance") {
    CHECK(Domain2D::disk(1.0).boundary_distance({0.3, 0.4}) == doctest::Approx(0.5));
    CHECK(Domain2D::rectangle(2.0, 1.0).boundary_distance({0.5, 0.1}) == doctest::Approx(0.4));
    CHECK(Domain2D::annulus(0.5, 1.0).boundary_distance({0.6, 0.0}) == doctest::Approx(0.1));
    CHECK(Domain2D::stadium(1.0, 2.0).boundary_distance({1.5, 0.0}) == doctest::Approx(0.5));
    // ellipse: compare with brute-force sampling of the boundary
    const Domain2D e = Domain2D::ellipse(2.0, 1.0);
    const Vec2 p{0.7, 0.3};
    double best = 1e9;
    for (int i = 0; i < 200000; ++i) {
      const double t = 2 * pi * i / 200000;
      best = std::min(best, norm(Vec2{2 * std::cos(t), std::sin(t)} - p));
    }
    CHECK(e.boundary_distance(p) == doctest::Approx(best).epsilon(1e-8));
  }

  TEST_CASE("invalid parameters and discretizations") {
    CHECK_THROWS_AS(Domain2D::disk(0.0), GeometryError);
    CHECK_THROWS_AS(Domain2D::annulus(1.0, 0.5), GeometryError);
    CHECK_THROWS_AS(Domain2D::ellipse(-1.0, 1.0), GeometryError);
    CHECK_THROWS_AS(build_mask(Domain2D::disk(1.0), 0.0), GeometryError);
    CHECK_THROWS_AS(build_mask(Domain2D::disk(1.0), 1.5), GeometryError);
  }

  TEST_CASE("annulus mask excludes the hole") {
    const GridMask m = build_mask(Domain2D::annulus(0.5, 1.0), 0.05);
    for (std::size_t k = 0; k < m.size(); ++k) {
      const double r = norm(m.position(k));
      CHECK(r > 0.5);
      CHECK(r < 1.0);
    }
    CHECK_FALSE(m.find({0.0, 0.0}).has_value());
  }
}
