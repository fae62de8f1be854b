#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nltorsion/experiments.hpp"

using namespace nltorsion;
using std::numbers::pi;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.shapes = {"disk", "square", "annulus"};
  cfg.caps = {0.0, 1.0};
  cfg.spacings = {1.0 / 16, 1.0 / 32};
  cfg.drift_fields = 3;
  cfg.dominance_spacing = 1.0 / 32;
  cfg.volumes = {1, 2, 3, 4, 5};
  cfg.family_volumes = {2};
  cfg.family_resolution = 40;
  cfg.ball_dims = {2};
  return cfg;
}

}  // namespace

TEST_SUITE("experiments") {
  TEST_CASE("config parsing") {
    const ExperimentConfig cfg = parse_config(
        "# comment\n"
        "area = 2.0\n"
        "shapes = disk, square  # trailing\n"
        "caps = 0, 0.5\n"
        "spacings = 0.1, 0.05\n"
        "seed = 7\n"
        "ball_dims = 2, 3\n");
    CHECK(cfg.area == 2.0);
    REQUIRE(cfg.shapes.size() == 2);
    CHECK(cfg.shapes[1] == "square");
    CHECK(cfg.caps[1] == 0.5);
    CHECK(cfg.spacings[1] == 0.05);
    CHECK(cfg.seed == 7);
    CHECK(cfg.ball_dims == std::vector<int>{2, 3});
    CHECK_THROWS_AS(parse_config("bogus = 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("spacings = 0.05, 0.1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("caps = -1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("area 3\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("tol = abc\n"), std::invalid_argument);
    CHECK_THROWS(load_config("/nonexistent/config.txt"));
  }

  TEST_CASE("family lookup") {
    CHECK(family_member("stadium", 2.0).area() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK_THROWS_AS(family_member("triangle", 1.0), std::invalid_argument);
  }

  TEST_CASE("rectangle torsion series") {
    CHECK(rectangle_torsion(1, 1, {0, 0}) == doctest::Approx(0.0736713532815).epsilon(1e-11));
    const double s = std::sqrt(pi);
    CHECK(rectangle_torsion(s, s, {0, 0}) == doctest::Approx(0.231445382249).epsilon(1e-10));
    CHECK(std::abs(rectangle_torsion(2, 1, {0.3, 0.5})) < 1e-12);
    CHECK(rectangle_torsion(2, 1, {0.3, 0.2}) == doctest::Approx(rectangle_torsion(2, 1, {-0.3, -0.2})));
    // thin strip approaches the one-dimensional profile (h² - 4y²)/8
    CHECK(rectangle_torsion(40, 1, {0, 0.1}) == doctest::Approx((1 - 0.04) / 8).epsilon(1e-10));
  }

  TEST_CASE("large-cap trend") {
    const TrendResult t = large_b_trend(2, {5, 10, 20, 40});
    CHECK(t.increasing);
    CHECK(t.increments_shrink);
    CHECK(t.ratio[0] == doctest::Approx(0.11104).epsilon(1e-4));
    CHECK(large_b_trend(1, {5, 10, 20, 40}).increasing);
    CHECK_THROWS_AS(large_b_trend(2, {0, 5}), std::invalid_argument);
    CHECK_THROWS_AS(large_b_trend(2, {10, 5}), std::invalid_argument);
  }

  TEST_CASE("random drifts") {
    auto m = std::make_shared<const GridMask>(build_mask(Domain2D::disk(1.0), 0.05));
    const VectorField a = random_fourier_drift(m, 1.0, 5);
    const VectorField b = random_fourier_drift(m, 1.0, 5);
    const VectorField c = random_fourier_drift(m, 1.0, 6);
    double top = 0.0, diff = 0.0;
    for (std::size_t k = 0; k < m->size(); ++k) {
      top = std::max(top, norm(a[k]));
      CHECK(a[k].x == b[k].x);
      diff = std::max(diff, norm(a[k] - c[k]));
    }
    CHECK(top == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(diff > 0.1);
  }

  TEST_CASE("shape comparison on a coarse grid") {
    const ComparisonTable t = run_shape_comparison(small_config());
    CHECK(t.rows.size() == 6);
    for (const auto& r : t.rows) {
      CHECK(r.report.volume == doctest::Approx(pi).epsilon(1e-12));
      CHECK(r.report.flux == doctest::Approx(r.report.volume + r.cap * r.report.grad_l1));
    }
    for (Column c : all_columns) {
      if (c == Column::flux) {
        CHECK(t.verdict(0.0, c).tied_by_identity);
        CHECK_FALSE(t.disk_is_max(0.0, c));
      } else {
        CHECK(t.disk_is_max(0.0, c));
      }
      CHECK(t.disk_is_max(1.0, c));
    }
    REQUIRE(t.start_checks.size() == 1);
    CHECK(t.start_checks[0].from_zero < 1e-12);
    CHECK(t.start_checks[0].from_above < 1e-8);
  }

  TEST_CASE("coupled solution dominates random drifts") {
    const DominanceResult r = verify_coupled_dominance(small_config());
    REQUIRE(r.domains.size() == 2);
    CHECK(r.worst_excess <= 5e-3);
    CHECK(r.min_policy_increment >= -1e-12);
    CHECK(r.outward_margin > 0.01);
    for (const auto& d : r.domains) {
      CHECK(d.self_violation < 1e-10);
      CHECK(d.torsion_gap >= -1e-10);
      CHECK(d.fields == 3);
    }
  }

  TEST_CASE("profile inequalities") {
    const InequalityTable t = verify_differential_inequalities(small_config());
    CHECK(t.worst_ball_defect < 1e-3);
    CHECK(t.worst_family_defect < 0.0);
    for (const auto& r : t.rows) {
      if (r.ball && r.b == 0.0 && r.profile == Profile::maximum) {
        CHECK(r.lhs == doctest::Approx(1 / (4 * pi)).epsilon(1e-6));
        CHECK(r.rhs == doctest::Approx(1 / (4 * pi)).epsilon(1e-12));
      }
      if (r.b == 0.0) CHECK(r.profile != Profile::gradient);
    }
  }

  TEST_CASE("superlevel induction on a coarse grid") {
    ExperimentConfig cfg = small_config();
    cfg.caps = {1.0};
    const InductionResult r = verify_level_set_induction(cfg);
    CHECK(r.rows.size() == 6);
    CHECK(r.max_defect < 5e-3);
    for (const auto& row : r.rows) {
      if (row.shape == "disk") CHECK(std::abs(row.radius_error) < 2e-2);
    }
  }

  TEST_CASE("convergence study") {
    const auto rows = convergence_study(Domain2D::rectangle(1, 1), 0.0, {1.0 / 16, 1.0 / 32}, 1e-11);
    REQUIRE(rows.size() == 2);
    CHECK(std::isnan(rows[0].order));
    CHECK(rows[1].order > 1.8);
    CHECK_THROWS_AS(convergence_study(Domain2D::ellipse(1, 0.5), 0.0, {0.1}, 1e-9),
                    std::invalid_argument);
    CHECK_THROWS_AS(convergence_study(Domain2D::rectangle(1, 1), 1.0, {0.1}, 1e-9),
                    std::invalid_argument);
  }
}
