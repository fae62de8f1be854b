#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nltorsion/experiments.hpp"
#include "nltorsion/functionals.hpp"
#include "nltorsion/geometry.hpp"
#include "nltorsion/montecarlo.hpp"
#include "nltorsion/pde2d.hpp"
#include "nltorsion/radial.hpp"

using namespace nltorsion;
using nlohmann::json;

namespace {

struct ShapeArgs {
  std::string shape = "disk";
  double radius = 1.0;
  double a = std::numbers::sqrt2;
  double b = std::numbers::sqrt2 / 2;
  double width = 1.0;
  double height = 1.0;
  double inner = 0.5;
  double outer = 1.0;
  double length = 1.0;
  double area = 0.0;

  void add_to(CLI::App* app) {
    app->add_option("--shape", shape, "disk|ellipse|rectangle|square|annulus|stadium")
        ->capture_default_str();
    app->add_option("--radius", radius, "disk or stadium cap radius")->capture_default_str();
    app->add_option("--a", a, "ellipse semi-axis along x")->capture_default_str();
    app->add_option("--b", b, "ellipse semi-axis along y")->capture_default_str();
    app->add_option("--width", width, "rectangle width (square side)")->capture_default_str();
    app->add_option("--height", height, "rectangle height")->capture_default_str();
    app->add_option("--inner", inner, "annulus inner radius")->capture_default_str();
    app->add_option("--outer", outer, "annulus outer radius")->capture_default_str();
    app->add_option("--length", length, "stadium straight length")->capture_default_str();
    app->add_option("--area", area, "take the equal-area family member with this area instead");
  }

  Domain2D build() const {
    if (area > 0.0) return family_member(shape, area);
    if (shape == "disk") return Domain2D::disk(radius);
    if (shape == "ellipse") return Domain2D::ellipse(a, b);
    if (shape == "rectangle") return Domain2D::rectangle(width, height);
    if (shape == "square") return Domain2D::rectangle(width, width);
    if (shape == "annulus") return Domain2D::annulus(inner, outer);
    if (shape == "stadium") return Domain2D::stadium(radius, length);
    throw std::invalid_argument("unknown shape '" + shape + "'");
  }
};

Vec2 parse_point(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw std::invalid_argument("point must be x,y");
  return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f.precision(12);
  return f;
}

void write_json(const std::string& path, const json& j) {
  auto f = open_out(path);
  f << j.dump(2) << "\n";
}

json report_json(const FunctionalReport& r) {
  return {{"volume", r.volume},     {"cap", r.cap},
          {"u_max", r.u_max},       {"u_l1", r.u_l1},
          {"u_l2", r.u_l2},         {"u_l3", r.u_l3},
          {"grad_l1", r.grad_l1},   {"flux", r.flux},
          {"flux_boundary", r.flux_boundary},
          {"hopf_ratio", std::isnan(r.hopf_ratio) ? json(nullptr) : json(r.hopf_ratio)}};
}

void write_field(const std::string& path, const ScalarField& u) {
  auto f = open_out(path);
  f << "x,y,u\n";
  for (std::size_t k = 0; k < u.size(); ++k) {
    const Vec2 p = u.mask().position(k);
    f << p.x << "," << p.y << "," << u[k] << "\n";
  }
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

ExperimentConfig config_from(const std::string& path) {
  return path.empty() ? ExperimentConfig{} : load_config(path);
}

std::string out_path(const ExperimentConfig& cfg, const std::string& file) {
  std::filesystem::create_directories(cfg.output_dir);
  return (std::filesystem::path(cfg.output_dir) / file).string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exit-time and optimal-drift torsion solvers"};
  app.require_subcommand(1);
  // --h is the grid spacing, so help is long-form only
  app.set_help_flag("--help", "Print this help message and exit");

  // solve-radial
  int dim = 2;
  double rb = 1.0, rradius = 1.0;
  int nodes = 4096;
  std::string rout;
  auto* radial = app.add_subcommand("solve-radial", "radial profile on a ball in dimension d");
  radial->add_option("--dim", dim)->capture_default_str();
  radial->add_option("--b", rb, "drift cap")->capture_default_str();
  radial->add_option("--radius", rradius)->capture_default_str();
  radial->add_option("--nodes", nodes)->capture_default_str();
  radial->add_option("--out", rout, "CSV with columns r,g,w");

  // solve2d
  ShapeArgs s2;
  double h = 1.0 / 128, cap = 0.0, tol = 1e-9, eps = 0.0;
  std::string out, report;
  auto* solve2d = app.add_subcommand("solve2d", "nonlinear (or torsion) solve on a planar shape");
  s2.add_to(solve2d);
  solve2d->add_option("--h", h)->capture_default_str();
  solve2d->add_option("--cap", cap)->capture_default_str();
  solve2d->add_option("--tol", tol)->capture_default_str();
  solve2d->add_option("--out", out, "CSV with columns x,y,u");
  solve2d->add_option("--report", report, "JSON report");
  solve2d->add_option("--eps", eps, "also re-solve on the superlevel set {u > eps}");

  // simulate
  ShapeArgs sm;
  std::string policy = "zero", x0s = "0,0";
  double dt = 1e-5, mc_cap = 1.0, mc_h = 1.0 / 64;
  std::int64_t paths = 100000;
  std::uint64_t seed = 42;
  std::string mc_out;
  auto* simulate = app.add_subcommand("simulate", "Euler-Maruyama exit-time estimate");
  sm.add_to(simulate);
  simulate->add_option("--policy", policy, "zero|radial-inward|coupled")->capture_default_str();
  simulate->add_option("--cap", mc_cap)->capture_default_str();
  simulate->add_option("--x0", x0s)->capture_default_str();
  simulate->add_option("--dt", dt)->capture_default_str();
  simulate->add_option("--paths", paths)->capture_default_str();
  simulate->add_option("--seed", seed)->capture_default_str();
  simulate->add_option("--h", mc_h, "grid for the coupled policy")->capture_default_str();
  simulate->add_option("--out", mc_out, "JSON estimate");

  // compare-shapes / verify-lemmas
  std::string config;
  auto* compare = app.add_subcommand("compare-shapes", "equal-area shape comparison table");
  compare->add_option("--config", config, "key = value experiment file");
  auto* verify = app.add_subcommand("verify-lemmas", "dominance, profile and induction checks");
  verify->add_option("--config", config, "key = value experiment file");

  // levelsets
  ShapeArgs sl;
  int levels = 10;
  std::string ls_out = "contours.dat", per_out;
  double ls_h = 1.0 / 128, ls_cap = 0.0;
  auto* lsets = app.add_subcommand("levelsets", "contour segments and perimeters of u");
  sl.add_to(lsets);
  lsets->add_option("--h", ls_h)->capture_default_str();
  lsets->add_option("--cap", ls_cap)->capture_default_str();
  lsets->add_option("--levels", levels)->capture_default_str();
  lsets->add_option("--out", ls_out, "segments, one blank-line separated pair per segment")
      ->capture_default_str();
  lsets->add_option("--perimeter", per_out, "two-column t, perimeter(t)");

  // convergence
  ShapeArgs sc;
  double cv_cap = 0.0;
  std::string spacings = "0.03125,0.015625,0.0078125", cv_out;
  auto* conv = app.add_subcommand("convergence", "grid study at the origin against an oracle");
  sc.add_to(conv);
  conv->add_option("--cap", cv_cap)->capture_default_str();
  conv->add_option("--spacings", spacings)->capture_default_str();
  conv->add_option("--out", cv_out, "two-column h, error");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*radial) {
      const RadialSolution sol = solve_radial(dim, rb, rradius, nodes);
      std::printf("u(0) = %.12g  ode residual %.3g\n", sol.center_value(), sol.ode_residual());
      if (!rout.empty()) {
        auto f = open_out(rout);
        f << "r,g,w\n";
        for (std::size_t i = 0; i < sol.r.size(); ++i) {
          f << sol.r[i] << "," << sol.g[i] << "," << sol.w[i] << "\n";
        }
      }
    } else if (*solve2d) {
      const Domain2D dom = s2.build();
      auto mask = std::make_shared<const GridMask>(build_mask(dom, h));
      const Solution sol = solve_nonlinear(mask, cap, tol);
      const FunctionalReport r = evaluate(sol.u, cap);
      std::printf("%s  nodes %zu  u_max %.10g  policy sweeps %d  residual %.3g\n",
                  dom.describe().c_str(), mask->size(), r.u_max, sol.report.policy_sweeps,
                  sol.report.residual);
      if (!out.empty()) write_field(out, sol.u);
      json j = report_json(r);
      j["shape"] = dom.describe();
      j["h"] = h;
      j["iterations"] = sol.report.iterations;
      j["residual"] = sol.report.residual;
      j["policy_sweeps"] = sol.report.policy_sweeps;
      j["min_increment"] = sol.report.min_increment;
      if (eps > 0.0) {
        const Superlevel sup = superlevel_restrict(sol.u, eps);
        const Solution again = solve_nonlinear(sup.mask, cap, tol);
        double defect = 0.0;
        for (std::size_t k = 0; k < again.u.size(); ++k) {
          defect = std::max(defect, std::abs(again.u[k] - sup.shifted[k]));
        }
        std::printf("superlevel eps=%g: nodes %zu  area %.6g  re-solve defect %.3g\n", eps,
                    sup.mask->size(), sup.mask->measure(), defect);
        j["superlevel"] = report_json(evaluate(sup.shifted, cap));
        j["superlevel"]["eps"] = eps;
        j["superlevel"]["resolve_defect"] = defect;
      }
      if (!report.empty()) write_json(report, j);
    } else if (*simulate) {
      const Domain2D dom = sm.build();
      DriftPolicy pol = DriftPolicy::zero();
      if (policy == "radial-inward") {
        pol = DriftPolicy::radial_inward(mc_cap);
      } else if (policy == "coupled") {
        auto mask = std::make_shared<const GridMask>(build_mask(dom, mc_h));
        const Solution sol = solve_nonlinear(mask, mc_cap, 1e-9);
        pol = DriftPolicy::interpolated(upwind_optimal_drift(sol.u, mc_cap), true);
      } else if (policy != "zero") {
        throw std::invalid_argument("unknown policy '" + policy + "'");
      }
      const ExitTimeEstimate e = simulate_exit(dom, pol, parse_point(x0s), dt, paths, seed);
      std::printf("mean %.8g  stderr %.3g  (%lld paths, dt %g, seed %llu)\n", e.mean, e.std_error,
                  static_cast<long long>(e.n_paths), e.dt, static_cast<unsigned long long>(e.seed));
      if (!mc_out.empty()) {
        write_json(mc_out, {{"mean", e.mean},
                            {"stderr", e.std_error},
                            {"n_paths", e.n_paths},
                            {"dt", e.dt},
                            {"seed", e.seed},
                            {"policy", policy},
                            {"shape", dom.describe()}});
      }
    } else if (*compare) {
      const ExperimentConfig cfg = config_from(config);
      const ComparisonTable t = run_shape_comparison(cfg);
      auto f = open_out(out_path(cfg, "comparison.csv"));
      f << "shape,params,cap,h,volume";
      for (Column c : all_columns) f << "," << column_name(c) << "," << column_name(c) << "_err";
      f << ",flux_boundary,hopf_ratio\n";
      for (const auto& r : t.rows) {
        f << r.shape << ",\"" << r.params << "\"," << r.cap << "," << r.h << "," << r.report.volume;
        for (Column c : all_columns) f << "," << column_value(r.report, c) << "," << r.error(c);
        f << "," << r.report.flux_boundary << "," << r.report.hopf_ratio << "\n";
      }
      json verdicts = json::array();
      for (const auto& v : t.verdicts) {
        std::printf("cap %-4g %-8s disk_is_max %-5s worst ratio %-10.4g runner-up %s%s\n", v.cap,
                    column_name(v.column).c_str(), v.disk_is_max ? "true" : "false",
                    v.worst_ratio, v.runner_up.c_str(),
                    v.tied_by_identity ? "  (flux = volume for every shape)" : "");
        verdicts.push_back({{"cap", v.cap},
                            {"column", column_name(v.column)},
                            {"disk_is_max", v.disk_is_max},
                            {"tied_by_identity", v.tied_by_identity},
                            {"worst_ratio", v.worst_ratio},
                            {"runner_up", v.runner_up}});
      }
      json starts = json::array();
      for (const auto& s : t.start_checks) {
        std::printf("disk cap %g: start from zero differs by %.3g, from above by %.3g\n", s.cap,
                    s.from_zero, s.from_above);
        starts.push_back({{"cap", s.cap}, {"from_zero", s.from_zero}, {"from_above", s.from_above}});
      }
      write_json(out_path(cfg, "comparison.json"),
                 {{"target_volume", t.target_volume}, {"verdicts", verdicts}, {"start_checks", starts}});
    } else if (*verify) {
      const ExperimentConfig cfg = config_from(config);
      json j;
      const DominanceResult dom = verify_coupled_dominance(cfg);
      std::printf("dominance: worst excess %.3g, min policy increment %.3g, outward margin %.4g\n",
                  dom.worst_excess, dom.min_policy_increment, dom.outward_margin);
      j["dominance"] = {{"worst_excess", dom.worst_excess},
                        {"min_policy_increment", dom.min_policy_increment},
                        {"outward_margin", dom.outward_margin}};

      double flux_ode = 0.0;
      for (int d : cfg.ball_dims) {
        for (double b : cfg.caps) flux_ode = std::max(flux_ode, verify_ball_flux_ode(d, b, cfg.volumes));
      }
      std::printf("ball flux ODE: max relative defect %.3g\n", flux_ode);
      j["ball_flux_ode_defect"] = flux_ode;

      const InequalityTable iq = verify_differential_inequalities(cfg);
      std::printf("profiles (f, h_p read as ball profiles): ball defect %.3g, worst family %.3g\n",
                  iq.worst_ball_defect, iq.worst_family_defect);
      auto f = open_out(out_path(cfg, "inequalities.csv"));
      f << "profile,family,d,b,c,lhs,rhs,defect\n";
      for (const auto& r : iq.rows) {
        f << profile_name(r.profile) << "," << r.family << "," << r.d << "," << r.b << "," << r.c
          << "," << r.lhs << "," << r.rhs << "," << r.defect() << "\n";
      }
      j["inequalities"] = {{"worst_ball_defect", iq.worst_ball_defect},
                           {"worst_family_defect", iq.worst_family_defect},
                           {"reading", "profiles are the ball's, taken as the supremum over shapes"}};

      const InductionResult ind = verify_level_set_induction(cfg);
      std::printf("superlevel induction: max defect %.3g\n", ind.max_defect);
      j["induction_max_defect"] = ind.max_defect;

      for (int d : {1, 2}) {
        const TrendResult tr = large_b_trend(d, cfg.large_caps);
        std::printf("large-cap trend d=%d:", d);
        for (double r : tr.ratio) std::printf(" %.5f", r);
        std::printf("  increasing %s\n", tr.increasing ? "yes" : "no");
        j["trend_d" + std::to_string(d)] = tr.ratio;
      }
      write_json(out_path(cfg, "verification.json"), j);
    } else if (*lsets) {
      const Domain2D dom = sl.build();
      auto mask = std::make_shared<const GridMask>(build_mask(dom, ls_h));
      const Solution sol = solve_nonlinear(mask, ls_cap, 1e-9);
      const double top = sol.u.max();
      auto f = open_out(ls_out);
      std::ofstream p;
      if (!per_out.empty()) p = open_out(per_out);
      for (int i = 0; i < levels; ++i) {
        const double t = top * i / levels;
        for (const Segment& s : level_set_segments(sol.u, t)) {
          f << s.a.x << " " << s.a.y << "\n" << s.b.x << " " << s.b.y << "\n\n";
        }
        if (p.is_open()) p << t << " " << level_set_perimeter(sol.u, t) << "\n";
      }
      std::printf("wrote %d levels of %s up to u_max %.8g\n", levels, dom.describe().c_str(), top);
    } else if (*conv) {
      const Domain2D dom = sc.build();
      const auto rows = convergence_study(dom, cv_cap, parse_list(spacings), 1e-10);
      std::ofstream f;
      if (!cv_out.empty()) f = open_out(cv_out);
      for (const auto& r : rows) {
        std::printf("h %-10g u(0) %.12f  error %.3e  order %.3f\n", r.h, r.value, r.error, r.order);
        if (f.is_open()) f << r.h << " " << r.error << "\n";
      }
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
