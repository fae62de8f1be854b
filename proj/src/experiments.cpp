#include "nltorsion/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include <boost/math/tools/roots.hpp>

#include "nltorsion/radial.hpp"

namespace nltorsion {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double nan = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad number for " + key + ": " + v);
  }
  if (used != v.size()) throw std::invalid_argument("config: bad number for " + key + ": " + v);
  return x;
}

std::vector<double> to_doubles(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& item : split_list(v)) out.push_back(to_double(key, item));
  return out;
}

LinearOptions accurate_linear() {
  LinearOptions o;
  o.correction_tol = 1e-14;
  return o;
}

double sup_diff(const ScalarField& a, const ScalarField& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
  return d;
}

double isoperimetric_constant(int d) {
  return sphere_area(d, 1.0) / std::pow(ball_volume(d, 1.0), (d - 1.0) / d);
}

// Profile values of one solution: f = b∫|∇u|, g = max u, h_p = ∫u^p.
struct ProfilePoint {
  double f, g, h1, h2, h3;
};

double profile_value(const ProfilePoint& pt, Profile p) {
  switch (p) {
    case Profile::gradient:
      return pt.f;
    case Profile::maximum:
      return pt.g;
    case Profile::power1:
      return pt.h1;
    case Profile::power2:
      return pt.h2;
    case Profile::power3:
      return pt.h3;
  }
  return nan;
}

ProfilePoint ball_point(int d, double b, double c) {
  return {b * ball_grad_l1(d, b, c), ball_u_max(d, b, c), ball_u_power_integral(d, b, c, 1),
          ball_u_power_integral(d, b, c, 2), ball_u_power_integral(d, b, c, 3)};
}

ProfilePoint family_point(const std::string& name, double b, double c, double resolution,
                          double tol) {
  const Domain2D dom = family_member(name, c);
  auto mask = std::make_shared<const GridMask>(build_mask(dom, std::sqrt(c) / resolution));
  const Solution s = solve_nonlinear(mask, b, tol);
  const FunctionalReport r = evaluate(s.u, b);
  return {b * r.grad_l1, r.u_max, r.u_l1, r.u_l2, r.u_l3};
}

// Right-hand sides from the ball profiles at volume c.
double profile_rhs(Profile p, int d, double b, double c, const ProfilePoint& ball) {
  const double cd = isoperimetric_constant(d);
  const double flux = ball.f + c;
  const double perim2 = cd * cd * std::pow(c, (2.0 * d - 2.0) / d);
  switch (p) {
    case Profile::gradient:
      return b * flux / (cd * std::pow(c, (d - 1.0) / d));
    case Profile::maximum:
      return flux / perim2;
    case Profile::power1:
      return 1.0 * c * flux / perim2;
    case Profile::power2:
      return 2.0 * ball.h1 * flux / perim2;
    case Profile::power3:
      return 3.0 * ball.h2 * flux / perim2;
  }
  return nan;
}

constexpr std::array<Profile, 5> all_profiles = {Profile::gradient, Profile::maximum,
                                                 Profile::power1, Profile::power2, Profile::power3};

}  // namespace

void ExperimentConfig::validate() const {
  if (!(area > 0.0)) throw std::invalid_argument("config: area must be positive");
  if (shapes.empty() || caps.empty() || spacings.empty()) {
    throw std::invalid_argument("config: shapes, caps and spacings must be non-empty");
  }
  for (double c : caps) {
    if (!(c >= 0.0)) throw std::invalid_argument("config: caps must be >= 0");
  }
  for (std::size_t i = 0; i < spacings.size(); ++i) {
    if (!(spacings[i] > 0.0)) throw std::invalid_argument("config: spacings must be positive");
    if (i > 0 && !(spacings[i] < spacings[i - 1])) {
      throw std::invalid_argument("config: spacings must be strictly decreasing");
    }
  }
  if (!(tol > 0.0)) throw std::invalid_argument("config: tol must be positive");
  if (drift_fields < 1) throw std::invalid_argument("config: drift_fields must be >= 1");
  if (!(dominance_cap >= 0.0)) throw std::invalid_argument("config: dominance_cap must be >= 0");
  if (!(family_resolution >= 8.0)) throw std::invalid_argument("config: family_resolution too small");
  for (double v : volumes) {
    if (!(v > 0.0)) throw std::invalid_argument("config: volumes must be positive");
  }
  for (double f : induction_fractions) {
    if (!(f > 0.0 && f < 1.0)) throw std::invalid_argument("config: induction fractions in (0,1)");
  }
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string v = trim(line.substr(eq + 1));
    if (key == "area") {
      cfg.area = to_double(key, v);
    } else if (key == "shapes") {
      cfg.shapes = split_list(v);
    } else if (key == "caps") {
      cfg.caps = to_doubles(key, v);
    } else if (key == "spacings") {
      cfg.spacings = to_doubles(key, v);
    } else if (key == "tol") {
      cfg.tol = to_double(key, v);
    } else if (key == "seed") {
      cfg.seed = std::stoull(v);
    } else if (key == "output_dir") {
      cfg.output_dir = v;
    } else if (key == "drift_fields") {
      cfg.drift_fields = std::stoi(v);
    } else if (key == "dominance_cap") {
      cfg.dominance_cap = to_double(key, v);
    } else if (key == "dominance_spacing") {
      cfg.dominance_spacing = to_double(key, v);
    } else if (key == "volumes") {
      cfg.volumes = to_doubles(key, v);
    } else if (key == "family_volumes") {
      cfg.family_volumes = to_doubles(key, v);
    } else if (key == "family_resolution") {
      cfg.family_resolution = to_double(key, v);
    } else if (key == "ball_dims") {
      cfg.ball_dims.clear();
      for (double d : to_doubles(key, v)) cfg.ball_dims.push_back(static_cast<int>(d));
    } else if (key == "induction_fractions") {
      cfg.induction_fractions = to_doubles(key, v);
    } else if (key == "large_caps") {
      cfg.large_caps = to_doubles(key, v);
    } else {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

Domain2D family_member(const std::string& name, double area) {
  for (const Domain2D& d : equal_area_family(area)) {
    if (d.name() == name) return d;
  }
  throw std::invalid_argument("unknown shape '" + name + "'");
}

std::string column_name(Column c) {
  switch (c) {
    case Column::u_max:
      return "u_max";
    case Column::u_l1:
      return "u_l1";
    case Column::u_l2:
      return "u_l2";
    case Column::u_l3:
      return "u_l3";
    case Column::grad_l1:
      return "grad_l1";
    case Column::flux:
      return "flux";
  }
  return "?";
}

double column_value(const FunctionalReport& r, Column c) {
  switch (c) {
    case Column::u_max:
      return r.u_max;
    case Column::u_l1:
      return r.u_l1;
    case Column::u_l2:
      return r.u_l2;
    case Column::u_l3:
      return r.u_l3;
    case Column::grad_l1:
      return r.grad_l1;
    case Column::flux:
      return r.flux;
  }
  return nan;
}

double ComparisonRow::error(Column c) const {
  return std::abs(column_value(report, c) - column_value(coarse, c));
}

const ColumnVerdict& ComparisonTable::verdict(double cap, Column c) const {
  for (const auto& v : verdicts) {
    if (v.cap == cap && v.column == c) return v;
  }
  throw std::out_of_range("no verdict for column " + column_name(c));
}

ComparisonTable run_shape_comparison(const ExperimentConfig& cfg) {
  cfg.validate();
  ComparisonTable table;
  table.target_volume = cfg.area;
  table.spacings = cfg.spacings;

  for (const std::string& name : cfg.shapes) {
    const Domain2D dom = family_member(name, cfg.area);
    if (std::abs(dom.area() - cfg.area) > 1e-6 * cfg.area) {
      throw std::runtime_error("shape " + name + " does not have the target area");
    }
    std::vector<MaskPtr> masks;
    for (double h : cfg.spacings) masks.push_back(std::make_shared<const GridMask>(build_mask(dom, h)));

    for (double cap : cfg.caps) {
      ComparisonRow row;
      row.shape = name;
      row.params = dom.describe();
      row.cap = cap;
      row.h = cfg.spacings.back();
      for (std::size_t i = 0; i < masks.size(); ++i) {
        const Solution s = solve_nonlinear(masks[i], cap, cfg.tol);
        const FunctionalReport r = evaluate(s.u, cap);
        if (i + 2 == masks.size()) row.coarse = r;
        if (i + 1 == masks.size()) {
          row.report = r;
          row.policy_sweeps = s.report.policy_sweeps;
          row.residual = s.report.residual;
          if (masks.size() == 1) row.coarse = r;
        }
      }
      table.rows.push_back(row);
    }

    if (name == "disk") {
      const MaskPtr& fine = masks.back();
      for (double cap : cfg.caps) {
        if (cap <= 0.0) continue;
        const Solution base = solve_nonlinear(fine, cap, cfg.tol);
        StartCheck sc;
        sc.cap = cap;
        NonlinearOptions zero_start;
        const ScalarField zero(fine);
        zero_start.initial = &zero;
        sc.from_zero = sup_diff(solve_nonlinear(fine, cap, cfg.tol, zero_start).u, base.u);
        const Solution above = solve_nonlinear(fine, 2.0 * cap, cfg.tol);
        NonlinearOptions above_start;
        above_start.initial = &above.u;
        sc.from_above = sup_diff(solve_nonlinear(fine, cap, cfg.tol, above_start).u, base.u);
        table.start_checks.push_back(sc);
      }
    }
  }

  auto find_row = [&](const std::string& shape, double cap) -> const ComparisonRow* {
    for (const auto& r : table.rows) {
      if (r.shape == shape && r.cap == cap) return &r;
    }
    return nullptr;
  };
  for (double cap : cfg.caps) {
    const ComparisonRow* disk = find_row("disk", cap);
    if (!disk) continue;
    for (Column col : all_columns) {
      ColumnVerdict v;
      v.cap = cap;
      v.column = col;
      v.tied_by_identity = cap == 0.0 && col == Column::flux;
      v.worst_ratio = std::numeric_limits<double>::infinity();
      for (const auto& r : table.rows) {
        if (r.cap != cap || r.shape == "disk") continue;
        const double margin = column_value(disk->report, col) - column_value(r.report, col);
        const double noise = 3.0 * (disk->error(col) + r.error(col));
        double ratio;
        if (noise > 0.0) {
          ratio = margin / noise;
        } else {
          ratio = margin > 0.0 ? std::numeric_limits<double>::infinity() : margin < 0.0 ? -1.0 : 0.0;
        }
        if (ratio < v.worst_ratio) {
          v.worst_ratio = ratio;
          v.runner_up = r.shape;
        }
      }
      v.disk_is_max = !v.tied_by_identity && v.worst_ratio > 1.0;
      table.verdicts.push_back(v);
    }
  }
  return table;
}

VectorField random_fourier_drift(MaskPtr mask, double cap, std::uint64_t seed) {
  constexpr int modes = 8;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> amp;
  std::uniform_real_distribution<double> wave(-3.0, 3.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * pi);
  struct Mode {
    double a, kx, ky, phi;
  };
  std::array<std::array<Mode, modes>, 2> comp;
  for (auto& c : comp) {
    for (auto& m : c) m = {amp(rng), wave(rng), wave(rng), phase(rng)};
  }
  const std::size_t n = mask->size();
  std::vector<double> bx(n), by(n);
  double largest = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const Vec2 p = mask->position(k);
    double v[2] = {0.0, 0.0};
    for (int c = 0; c < 2; ++c) {
      for (const Mode& m : comp[c]) v[c] += m.a * std::cos(m.kx * p.x + m.ky * p.y + m.phi);
    }
    bx[k] = v[0];
    by[k] = v[1];
    largest = std::max(largest, std::hypot(v[0], v[1]));
  }
  const double scale = largest > 0.0 ? cap / largest : 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    bx[k] *= scale;
    by[k] *= scale;
    const double len = std::hypot(bx[k], by[k]);
    if (len > cap) {
      bx[k] *= cap / len;
      by[k] *= cap / len;
    }
  }
  return VectorField(mask, std::move(bx), std::move(by), cap);
}

DominanceResult verify_coupled_dominance(const ExperimentConfig& cfg) {
  cfg.validate();
  const double cap = cfg.dominance_cap;
  DominanceResult res;
  res.worst_excess = -std::numeric_limits<double>::infinity();
  res.min_policy_increment = std::numeric_limits<double>::infinity();
  const std::vector<Domain2D> domains = {Domain2D::disk(1.0), family_member("square", pi)};
  for (std::size_t di = 0; di < domains.size(); ++di) {
    auto mask =
        std::make_shared<const GridMask>(build_mask(domains[di], cfg.dominance_spacing));
    const Solution coupled = solve_nonlinear(mask, cap, cfg.tol);
    const LinearOptions lin = accurate_linear();

    DominanceDomain dd;
    dd.shape = domains[di].name();
    dd.min_policy_increment = coupled.report.min_increment;
    dd.worst_excess = -std::numeric_limits<double>::infinity();

    const Solution torsion = solve_linear_drift(VectorField::zero(mask), cfg.tol, lin);
    dd.torsion_gap = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < mask->size(); ++k) {
      dd.torsion_gap = std::min(dd.torsion_gap, coupled.u[k] - torsion.u[k]);
    }
    const Solution self = solve_linear_drift(upwind_optimal_drift(coupled.u, cap), cfg.tol, lin);
    dd.self_violation = sup_diff(self.u, coupled.u);

    for (int f = 0; f < cfg.drift_fields; ++f) {
      const VectorField b = random_fourier_drift(mask, cap, cfg.seed + 1000 * di + f);
      const Solution ub = solve_linear_drift(b, cfg.tol, lin);
      for (std::size_t k = 0; k < mask->size(); ++k) {
        dd.worst_excess = std::max(dd.worst_excess, ub.u[k] - coupled.u[k]);
      }
      ++dd.fields;
    }
    res.worst_excess = std::max(res.worst_excess, dd.worst_excess);
    res.min_policy_increment = std::min(res.min_policy_increment, dd.min_policy_increment);

    if (domains[di].name() == "disk") {
      // Physical drift +cap·x/|x| pushes outward; in the PDE convention b = -cap·x/|x|.
      std::vector<double> bx(mask->size()), by(mask->size());
      for (std::size_t k = 0; k < mask->size(); ++k) {
        const Vec2 p = mask->position(k);
        const double r = norm(p);
        bx[k] = r > 0.0 ? -cap * p.x / r : 0.0;
        by[k] = r > 0.0 ? -cap * p.y / r : 0.0;
      }
      const Solution out = solve_linear_drift(VectorField(mask, bx, by, cap), cfg.tol, lin);
      res.outward_margin = coupled.u.at({0.0, 0.0}) - out.u.at({0.0, 0.0});
    }
    res.domains.push_back(dd);
  }
  return res;
}

std::string profile_name(Profile p) {
  switch (p) {
    case Profile::gradient:
      return "gradient";
    case Profile::maximum:
      return "maximum";
    case Profile::power1:
      return "power1";
    case Profile::power2:
      return "power2";
    case Profile::power3:
      return "power3";
  }
  return "?";
}

double InequalityRow::defect() const {
  if (rhs == 0.0) return lhs == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), lhs);
  return (lhs - rhs) / std::abs(rhs);
}

InequalityTable verify_differential_inequalities(const ExperimentConfig& cfg) {
  cfg.validate();
  InequalityTable table;
  table.worst_family_defect = -std::numeric_limits<double>::infinity();

  for (int d : cfg.ball_dims) {
    for (double b : cfg.caps) {
      for (double c : cfg.volumes) {
        const double dc = 1e-3 * c;
        const ProfilePoint lo = ball_point(d, b, c - dc);
        const ProfilePoint hi = ball_point(d, b, c + dc);
        const ProfilePoint mid = ball_point(d, b, c);
        for (Profile p : all_profiles) {
          if (p == Profile::gradient && b == 0.0) continue;
          InequalityRow row;
          row.profile = p;
          row.family = "ball";
          row.ball = true;
          row.d = d;
          row.b = b;
          row.c = c;
          row.lhs = (profile_value(hi, p) - profile_value(lo, p)) / (2 * dc);
          row.rhs = profile_rhs(p, d, b, c, mid);
          table.worst_ball_defect = std::max(table.worst_ball_defect, std::abs(row.defect()));
          table.rows.push_back(row);
        }
      }
    }
  }

  for (const std::string& name : cfg.shapes) {
    if (name == "disk") continue;
    for (double b : cfg.caps) {
      for (double c : cfg.family_volumes) {
        const double dc = 0.02 * c;
        const ProfilePoint lo = family_point(name, b, c - dc, cfg.family_resolution, cfg.tol);
        const ProfilePoint hi = family_point(name, b, c + dc, cfg.family_resolution, cfg.tol);
        const ProfilePoint ball = ball_point(2, b, c);
        for (Profile p : all_profiles) {
          if (p == Profile::gradient && b == 0.0) continue;
          InequalityRow row;
          row.profile = p;
          row.family = name;
          row.d = 2;
          row.b = b;
          row.c = c;
          row.lhs = (profile_value(hi, p) - profile_value(lo, p)) / (2 * dc);
          row.rhs = profile_rhs(p, 2, b, c, ball);
          table.worst_family_defect = std::max(table.worst_family_defect, row.defect());
          table.rows.push_back(row);
        }
      }
    }
  }
  return table;
}

InductionResult verify_level_set_induction(const ExperimentConfig& cfg) {
  cfg.validate();
  InductionResult res;
  const double h = cfg.spacings.back();
  const std::vector<Domain2D> domains = {Domain2D::disk(1.0), family_member("square", pi)};
  for (const Domain2D& dom : domains) {
    auto mask = std::make_shared<const GridMask>(build_mask(dom, h));
    for (double cap : cfg.caps) {
      const Solution base = solve_nonlinear(mask, cap, cfg.tol);
      const double top = base.u.max();
      for (double frac : cfg.induction_fractions) {
        InductionRow row;
        row.shape = dom.name();
        row.cap = cap;
        row.fraction = frac;
        row.eps = frac * top;
        const Superlevel sl = superlevel_restrict(base.u, row.eps);
        const Solution again = solve_nonlinear(sl.mask, cap, cfg.tol);
        row.defect = sup_diff(again.u, sl.shifted);
        row.radius_error = nan;
        if (dom.name() == "disk") {
          auto f = [&](double r) { return radial_value(2, cap, 1.0, r) - row.eps; };
          boost::math::tools::eps_tolerance<double> tol(50);
          std::uintmax_t iters = 100;
          const auto br = boost::math::tools::toms748_solve(f, 0.0, 1.0, tol, iters);
          const double rho = 0.5 * (br.first + br.second);
          row.radius_error = std::sqrt(sl.mask->measure() / pi) - rho;
        }
        res.max_defect = std::max(res.max_defect, row.defect);
        res.rows.push_back(row);
      }
    }
  }
  return res;
}

TrendResult large_b_trend(int d, const std::vector<double>& caps) {
  if (caps.size() < 2) throw std::invalid_argument("large_b_trend needs at least two caps");
  for (std::size_t i = 0; i < caps.size(); ++i) {
    if (!(caps[i] > 0.0)) throw std::invalid_argument("large_b_trend: caps must be positive");
    if (i > 0 && !(caps[i] > caps[i - 1])) {
      throw std::invalid_argument("large_b_trend: caps must be increasing");
    }
  }
  TrendResult t;
  t.d = d;
  t.caps = caps;
  for (double b : caps) t.ratio.push_back(std::log(radial_value(d, b, 1.0, 0.0)) / (0.5 * b));
  t.increasing = true;
  t.increments_shrink = true;
  for (std::size_t i = 1; i < t.ratio.size(); ++i) {
    const double inc = t.ratio[i] - t.ratio[i - 1];
    if (!(inc > 0.0)) t.increasing = false;
    if (i > 1 && !(inc < t.ratio[i - 1] - t.ratio[i - 2])) t.increments_shrink = false;
  }
  return t;
}

double rectangle_torsion(double width, double height, Vec2 p) {
  const double x = p.x + 0.5 * width;
  const double y = std::abs(p.y);
  const double half = 0.5 * height;
  double u = 0.5 * x * (width - x);
  const double c0 = 4.0 * width * width / (pi * pi * pi);
  for (int n = 1;; n += 2) {
    const double k = n * pi / width;
    // cosh(k y)/cosh(k half) without overflow
    const double ratio = std::exp(k * (y - half)) * (1.0 + std::exp(-2.0 * k * y)) /
                         (1.0 + std::exp(-2.0 * k * half));
    const double bound = c0 / (double(n) * n * n) * ratio;
    u -= bound * std::sin(k * x);
    if (bound < 1e-16 * std::max(u, 1e-300) || n > 2000001) break;
  }
  return u;
}

std::vector<ConvergenceRow> convergence_study(const Domain2D& domain, double cap,
                                              const std::vector<double>& spacings, double tol) {
  const Disk* disk = std::get_if<Disk>(&domain.shape());
  const Rectangle* rect = std::get_if<Rectangle>(&domain.shape());
  if (!disk && !(rect && cap == 0.0)) {
    throw std::invalid_argument("convergence_study: oracle only for the disk or a zero-cap rectangle");
  }
  double oracle;
  std::optional<RadialSolution> profile;
  if (disk) {
    profile = solve_radial(2, cap, disk->radius, 4096);
    oracle = radial_value(2, cap, disk->radius, 0.0);
  } else {
    oracle = rectangle_torsion(rect->width, rect->height, {0.0, 0.0});
  }
  std::vector<ConvergenceRow> rows;
  for (std::size_t i = 0; i < spacings.size(); ++i) {
    auto mask = std::make_shared<const GridMask>(build_mask(domain, spacings[i]));
    const Solution s = cap == 0.0
                           ? solve_linear_drift(VectorField::zero(mask), tol, accurate_linear())
                           : solve_nonlinear(mask, cap, tol);
    ConvergenceRow row;
    row.h = spacings[i];
    row.value = s.u.at({0.0, 0.0});
    row.error = std::abs(row.value - oracle);
    row.sup_error = nan;
    if (profile) {
      row.sup_error = 0.0;
      for (std::size_t k = 0; k < mask->size(); ++k) {
        row.sup_error =
            std::max(row.sup_error, std::abs(s.u[k] - profile->at(norm(mask->position(k)))));
      }
    }
    row.order = nan;
    if (i > 0) {
      row.order = std::log(rows.back().error / row.error) / std::log(rows.back().h / row.h);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace nltorsion
