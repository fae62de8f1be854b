#include "nltorsion/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

namespace nltorsion {

namespace {

constexpr double pi = std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double segment_distance(Vec2 p, double half_length) {
  const double dx = std::max(std::abs(p.x) - half_length, 0.0);
  return std::hypot(dx, p.y);
}

// Root of the bisection equation for the closest point on an ellipse
// (D. Eberly, "Distance from a Point to an Ellipse").
double ellipse_root(double r0, double z0, double z1, double g) {
  const double n0 = r0 * z0;
  double s0 = z1 - 1.0;
  double s1 = g < 0.0 ? 0.0 : std::hypot(n0, z1) - 1.0;
  double s = 0.0;
  for (int it = 0; it < 1100; ++it) {
    s = 0.5 * (s0 + s1);
    if (s == s0 || s == s1) break;
    const double ratio0 = n0 / (s + r0);
    const double ratio1 = z1 / (s + 1.0);
    g = ratio0 * ratio0 + ratio1 * ratio1 - 1.0;
    if (g > 0.0) {
      s0 = s;
    } else if (g < 0.0) {
      s1 = s;
    } else {
      break;
    }
  }
  return s;
}

// Distance from (y0, y1), first quadrant, to the ellipse with semi-axes e0 >= e1.
double ellipse_distance(double e0, double e1, double y0, double y1) {
  if (y1 > 0.0) {
    if (y0 > 0.0) {
      const double z0 = y0 / e0;
      const double z1 = y1 / e1;
      const double g = z0 * z0 + z1 * z1 - 1.0;
      if (g == 0.0) return 0.0;
      const double r0 = (e0 / e1) * (e0 / e1);
      const double sbar = ellipse_root(r0, z0, z1, g);
      const double x0 = r0 * y0 / (sbar + r0);
      const double x1 = y1 / (sbar + 1.0);
      return std::hypot(x0 - y0, x1 - y1);
    }
    return std::abs(y1 - e1);
  }
  const double numer0 = e0 * y0;
  const double denom0 = e0 * e0 - e1 * e1;
  if (numer0 < denom0) {
    const double xde0 = numer0 / denom0;
    const double x0 = e0 * xde0;
    const double x1 = e1 * std::sqrt(1.0 - xde0 * xde0);
    return std::hypot(x0 - y0, x1);
  }
  return std::abs(y0 - e0);
}

double ellipse_perimeter(double a, double b) {
  using boost::math::quadrature::gauss_kronrod;
  auto integrand = [a, b](double t) {
    const double s = std::sin(t);
    const double c = std::cos(t);
    return std::sqrt(a * a * s * s + b * b * c * c);
  };
  const double quarter = gauss_kronrod<double, 31>::integrate(integrand, 0.0, pi / 2, 15, 1e-14);
  return 4.0 * quarter;
}

}  // namespace

double norm(Vec2 v) { return std::hypot(v.x, v.y); }

Domain2D::Domain2D(Shape shape) : shape_(shape) {
  auto positive = [](double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw GeometryError(std::string("shape parameter must be positive: ") + what);
    }
  };
  std::visit(overloaded{
                 [&](const Disk& s) { positive(s.radius, "radius"); },
                 [&](const Ellipse& s) {
                   positive(s.a, "a");
                   positive(s.b, "b");
                 },
                 [&](const Rectangle& s) {
                   positive(s.width, "width");
                   positive(s.height, "height");
                 },
                 [&](const Annulus& s) {
                   positive(s.inner, "inner radius");
                   positive(s.outer, "outer radius");
                   if (!(s.inner < s.outer)) throw GeometryError("annulus requires inner < outer");
                 },
                 [&](const Stadium& s) {
                   positive(s.radius, "radius");
                   positive(s.length, "length");
                 },
             },
             shape_);
}

std::string Domain2D::name() const {
  return std::visit(overloaded{
                        [](const Disk&) { return std::string("disk"); },
                        [](const Ellipse&) { return std::string("ellipse"); },
                        [](const Rectangle& s) {
                          return std::string(s.width == s.height ? "square" : "rectangle");
                        },
                        [](const Annulus&) { return std::string("annulus"); },
                        [](const Stadium&) { return std::string("stadium"); },
                    },
                    shape_);
}

std::string Domain2D::describe() const {
  std::ostringstream os;
  os.precision(10);
  std::visit(overloaded{
                 [&](const Disk& s) { os << "disk radius=" << s.radius; },
                 [&](const Ellipse& s) { os << "ellipse a=" << s.a << " b=" << s.b; },
                 [&](const Rectangle& s) {
                   os << "rectangle width=" << s.width << " height=" << s.height;
                 },
                 [&](const Annulus& s) { os << "annulus r0=" << s.inner << " r1=" << s.outer; },
                 [&](const Stadium& s) {
                   os << "stadium radius=" << s.radius << " length=" << s.length;
                 },
             },
             shape_);
  return os.str();
}

double Domain2D::area() const {
  return std::visit(overloaded{
                        [](const Disk& s) { return pi * s.radius * s.radius; },
                        [](const Ellipse& s) { return pi * s.a * s.b; },
                        [](const Rectangle& s) { return s.width * s.height; },
                        [](const Annulus& s) {
                          return pi * (s.outer * s.outer - s.inner * s.inner);
                        },
                        [](const Stadium& s) {
                          return pi * s.radius * s.radius + 2.0 * s.radius * s.length;
                        },
                    },
                    shape_);
}

double Domain2D::perimeter() const {
  return std::visit(overloaded{
                        [](const Disk& s) { return 2.0 * pi * s.radius; },
                        [](const Ellipse& s) { return ellipse_perimeter(s.a, s.b); },
                        [](const Rectangle& s) { return 2.0 * (s.width + s.height); },
                        [](const Annulus& s) { return 2.0 * pi * (s.inner + s.outer); },
                        [](const Stadium& s) { return 2.0 * pi * s.radius + 2.0 * s.length; },
                    },
                    shape_);
}

double Domain2D::inradius() const {
  return std::visit(overloaded{
                        [](const Disk& s) { return s.radius; },
                        [](const Ellipse& s) { return std::min(s.a, s.b); },
                        [](const Rectangle& s) { return 0.5 * std::min(s.width, s.height); },
                        [](const Annulus& s) { return 0.5 * (s.outer - s.inner); },
                        [](const Stadium& s) { return s.radius; },
                    },
                    shape_);
}

Box Domain2D::bounding_box() const {
  const Vec2 half = std::visit(overloaded{
                                   [](const Disk& s) { return Vec2{s.radius, s.radius}; },
                                   [](const Ellipse& s) { return Vec2{s.a, s.b}; },
                                   [](const Rectangle& s) {
                                     return Vec2{0.5 * s.width, 0.5 * s.height};
                                   },
                                   [](const Annulus& s) { return Vec2{s.outer, s.outer}; },
                                   [](const Stadium& s) {
                                     return Vec2{s.radius + 0.5 * s.length, s.radius};
                                   },
                               },
                               shape_);
  return {{-half.x, -half.y}, half};
}

double Domain2D::level(Vec2 p) const {
  return std::visit([p](const auto& s) { return nltorsion::level(s, p); }, shape_);
}

double Domain2D::boundary_distance(Vec2 p) const {
  return std::visit(
      overloaded{
          [&](const Disk& s) { return std::abs(s.radius - norm(p)); },
          [&](const Ellipse& s) {
            const double x = std::abs(p.x);
            const double y = std::abs(p.y);
            return s.a >= s.b ? ellipse_distance(s.a, s.b, x, y) : ellipse_distance(s.b, s.a, y, x);
          },
          [&](const Rectangle& s) {
            const double dx = std::abs(p.x) - 0.5 * s.width;
            const double dy = std::abs(p.y) - 0.5 * s.height;
            if (dx <= 0.0 && dy <= 0.0) return std::min(-dx, -dy);
            return std::hypot(std::max(dx, 0.0), std::max(dy, 0.0));
          },
          [&](const Annulus& s) {
            const double r = norm(p);
            return std::min(std::abs(r - s.inner), std::abs(r - s.outer));
          },
          [&](const Stadium& s) { return std::abs(segment_distance(p, 0.5 * s.length) - s.radius); },
      },
      shape_);
}

bool Domain2D::smooth_boundary() const { return !std::holds_alternative<Rectangle>(shape_); }

double isoperimetric_constant_2d() { return 2.0 * std::sqrt(pi); }

double Domain2D::isoperimetric_ratio() const {
  return perimeter() / (isoperimetric_constant_2d() * std::sqrt(area()));
}

std::vector<Domain2D> equal_area_family(double area) {
  if (!(area > 0.0)) throw GeometryError("family area must be positive");
  const double side = std::sqrt(area);
  // pi a b = area with a = 2 b
  const double eb = std::sqrt(area / (2.0 * pi));
  // w h = area with w = 4 h
  const double rh = std::sqrt(area / 4.0);
  // pi r^2 + 2 r l = area with l = 2 r
  const double sr = std::sqrt(area / (pi + 4.0));
  // pi (r1^2 - r0^2) = area with r1 = 2 r0
  const double r0 = std::sqrt(area / (3.0 * pi));
  return {
      Domain2D::disk(std::sqrt(area / pi)),
      Domain2D::rectangle(side, side),
      Domain2D::ellipse(2.0 * eb, eb),
      Domain2D::rectangle(4.0 * rh, rh),
      Domain2D::stadium(sr, 2.0 * sr),
      Domain2D::annulus(r0, 2.0 * r0),
  };
}

// ---------------------------------------------------------------------------
// GridMask

GridMask::GridMask(double h, int nx, int ny, Vec2 origin, std::vector<int> node_index,
                   std::vector<std::array<double, 4>> cut, std::vector<double> weight,
                   std::optional<std::vector<double>> distance, double area)
    : h_(h),
      nx_(nx),
      ny_(ny),
      origin_(origin),
      node_index_(std::move(node_index)),
      cut_(std::move(cut)),
      weight_(std::move(weight)),
      distance_(std::move(distance)),
      area_(area) {
  nodes_.resize(cut_.size());
  for (int j = 0; j < ny_; ++j) {
    for (int i = 0; i < nx_; ++i) {
      const int k = node_index_[static_cast<std::size_t>(j) * nx_ + i];
      if (k != no_node) nodes_[k] = {i, j};
    }
  }
  if (weight_.size() != cut_.size() || (distance_ && distance_->size() != cut_.size())) {
    throw GeometryError("GridMask: inconsistent per-node array sizes");
  }
}

Vec2 GridMask::lattice_point(int i, int j) const {
  return {origin_.x + i * h_, origin_.y + j * h_};
}

Vec2 GridMask::position(std::size_t k) const { return lattice_point(nodes_[k].i, nodes_[k].j); }

int GridMask::index(int i, int j) const {
  if (!in_lattice(i, j)) return no_node;
  return node_index_[static_cast<std::size_t>(j) * nx_ + i];
}

int GridMask::neighbor(std::size_t k, Dir d) const {
  static constexpr int di[4] = {1, -1, 0, 0};
  static constexpr int dj[4] = {0, 0, 1, -1};
  return index(nodes_[k].i + di[d], nodes_[k].j + dj[d]);
}

double GridMask::measure() const {
  double s = 0.0;
  for (double w : weight_) s += w;
  return s;
}

std::optional<std::size_t> GridMask::find(Vec2 p) const {
  const int i = static_cast<int>(std::lround((p.x - origin_.x) / h_));
  const int j = static_cast<int>(std::lround((p.y - origin_.y) / h_));
  const int k = index(i, j);
  if (k == no_node) return std::nullopt;
  return static_cast<std::size_t>(k);
}

Lattice lattice_for(const Box& box, double h) {
  const double half_x = std::max(std::abs(box.lo.x), std::abs(box.hi.x));
  const double half_y = std::max(std::abs(box.lo.y), std::abs(box.hi.y));
  const int ix = static_cast<int>(std::floor(half_x / h)) + 1;
  const int iy = static_cast<int>(std::floor(half_y / h)) + 1;
  return {h, 2 * ix + 1, 2 * iy + 1, {-ix * h, -iy * h}};
}

std::vector<double> cut_cell_weights(const Lattice& lat, const std::vector<int>& node_index,
                                     std::size_t count,
                                     const std::function<bool(Vec2)>& inside) {
  constexpr int sub = 16;
  const double h = lat.h;
  const double cell = h * h;
  const double sample_area = cell / (sub * sub);
  std::vector<double> weight(count, 0.0);

  auto at = [&](int i, int j) -> int {
    if (i < 0 || j < 0 || i >= lat.nx || j >= lat.ny) return GridMask::no_node;
    return node_index[static_cast<std::size_t>(j) * lat.nx + i];
  };

  for (int j = 0; j < lat.ny; ++j) {
    for (int i = 0; i < lat.nx; ++i) {
      const bool self_in = at(i, j) != GridMask::no_node;
      bool mixed = false;
      for (int dj = -1; dj <= 1 && !mixed; ++dj) {
        for (int di = -1; di <= 1; ++di) {
          if ((at(i + di, j + dj) != GridMask::no_node) != self_in) {
            mixed = true;
            break;
          }
        }
      }
      if (!mixed) {
        if (self_in) weight[at(i, j)] += cell;
        continue;
      }
      const Vec2 c{lat.origin.x + i * h, lat.origin.y + j * h};
      for (int sj = 0; sj < sub; ++sj) {
        for (int si = 0; si < sub; ++si) {
          const double ox = ((si + 0.5) / sub - 0.5) * h;
          const double oy = ((sj + 0.5) / sub - 0.5) * h;
          const Vec2 p{c.x + ox, c.y + oy};
          if (!inside(p)) continue;
          int best = GridMask::no_node;
          double best_d2 = 0.0;
          for (int dj = -1; dj <= 1; ++dj) {
            for (int di = -1; di <= 1; ++di) {
              const int k = at(i + di, j + dj);
              if (k == GridMask::no_node) continue;
              const double ex = ox - di * h;
              const double ey = oy - dj * h;
              const double d2 = ex * ex + ey * ey;
              if (best == GridMask::no_node || d2 < best_d2) {
                best = k;
                best_d2 = d2;
              }
            }
          }
          if (best != GridMask::no_node) weight[best] += sample_area;
        }
      }
    }
  }
  return weight;
}

GridMask build_mask(const Domain2D& domain, double h) {
  if (!(h > 0.0)) throw GeometryError("grid spacing must be positive");
  if (!(h < domain.inradius())) {
    throw GeometryError("grid spacing " + std::to_string(h) + " is not below the inradius of " +
                        domain.describe());
  }
  const Lattice lat = lattice_for(domain.bounding_box(), h);
  std::vector<int> node_index(static_cast<std::size_t>(lat.nx) * lat.ny, GridMask::no_node);
  int count = 0;
  for (int j = 0; j < lat.ny; ++j) {
    for (int i = 0; i < lat.nx; ++i) {
      const Vec2 p{lat.origin.x + i * h, lat.origin.y + j * h};
      if (domain.contains(p)) node_index[static_cast<std::size_t>(j) * lat.nx + i] = count++;
    }
  }
  if (count == 0) throw GeometryError("grid spacing too coarse: no interior nodes");

  static constexpr int di[4] = {1, -1, 0, 0};
  static constexpr int dj[4] = {0, 0, 1, -1};
  std::vector<std::array<double, 4>> cut(count);
  std::vector<double> distance(count);
  boost::math::tools::eps_tolerance<double> tol(52);
  for (int j = 0; j < lat.ny; ++j) {
    for (int i = 0; i < lat.nx; ++i) {
      const int k = node_index[static_cast<std::size_t>(j) * lat.nx + i];
      if (k == GridMask::no_node) continue;
      const Vec2 p{lat.origin.x + i * h, lat.origin.y + j * h};
      distance[k] = domain.boundary_distance(p);
      for (int d = 0; d < 4; ++d) {
        const int ni = i + di[d];
        const int nj = j + dj[d];
        const Vec2 q{lat.origin.x + ni * h, lat.origin.y + nj * h};
        const double lq = domain.level(q);
        if (lq <= 0.0) {
          cut[k][d] = 1.0;
          continue;
        }
        auto along = [&](double t) { return domain.level(p + (t * h) * Vec2{double(di[d]), double(dj[d])}); };
        std::uintmax_t iters = 200;
        const auto [lo, hi] =
            boost::math::tools::toms748_solve(along, 0.0, 1.0, domain.level(p), lq, tol, iters);
        const double theta = 0.5 * (lo + hi);
        cut[k][d] = std::clamp(theta, std::numeric_limits<double>::min(), 1.0);
      }
    }
  }
  auto weight = cut_cell_weights(lat, node_index, static_cast<std::size_t>(count),
                                 [&](Vec2 p) { return domain.contains(p); });
  return GridMask(h, lat.nx, lat.ny, lat.origin, std::move(node_index), std::move(cut),
                  std::move(weight), std::move(distance), domain.area());
}

}  // namespace nltorsion
