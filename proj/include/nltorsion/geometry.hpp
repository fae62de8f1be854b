#pragma once

/// Analytic planar domains and their finite-difference discretizations.
///
/// Every domain is centered at the origin. The implicit `level` function is
/// negative inside, zero on the boundary and positive outside; it is what the
/// grid builder, the Monte Carlo exit test and the cut-fraction root finder
/// all agree on.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace nltorsion {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
double norm(Vec2 v);

struct Box {
  Vec2 lo;
  Vec2 hi;
};

/// Thrown for invalid shape parameters or discretizations that cannot be built.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Disk {
  double radius;
};
struct Ellipse {
  double a;  // semi-axis along x
  double b;  // semi-axis along y
};
struct Rectangle {
  double width;
  double height;
};
struct Annulus {
  double inner;
  double outer;
};
/// Two half-disks of `radius` joined by a straight section of `length`
/// (the straight part runs along x).
struct Stadium {
  double radius;
  double length;
};

using Shape = std::variant<Disk, Ellipse, Rectangle, Annulus, Stadium>;

// Implicit functions per shape, negative inside.
inline double level(const Disk& s, Vec2 p) { return std::hypot(p.x, p.y) - s.radius; }
inline double level(const Ellipse& s, Vec2 p) {
  const double u = p.x / s.a;
  const double v = p.y / s.b;
  return u * u + v * v - 1.0;
}
inline double level(const Rectangle& s, Vec2 p) {
  return std::max(std::abs(p.x) - 0.5 * s.width, std::abs(p.y) - 0.5 * s.height);
}
inline double level(const Annulus& s, Vec2 p) {
  const double r = std::hypot(p.x, p.y);
  return std::max(s.inner - r, r - s.outer);
}
inline double level(const Stadium& s, Vec2 p) {
  const double dx = std::max(std::abs(p.x) - 0.5 * s.length, 0.0);
  return std::hypot(dx, p.y) - s.radius;
}

class Domain2D {
 public:
  /// Validates the parameters; throws GeometryError otherwise.
  explicit Domain2D(Shape shape);

  static Domain2D disk(double radius) { return Domain2D(Disk{radius}); }
  static Domain2D ellipse(double a, double b) { return Domain2D(Ellipse{a, b}); }
  static Domain2D rectangle(double w, double h) { return Domain2D(Rectangle{w, h}); }
  static Domain2D annulus(double r0, double r1) { return Domain2D(Annulus{r0, r1}); }
  static Domain2D stadium(double r, double l) { return Domain2D(Stadium{r, l}); }

  const Shape& shape() const { return shape_; }
  std::string name() const;
  /// Parameters in a human-readable `key=value` form.
  std::string describe() const;

  double area() const;
  double perimeter() const;
  double inradius() const;
  Box bounding_box() const;

  double level(Vec2 p) const;
  bool contains(Vec2 p) const { return level(p) < 0.0; }
  /// Euclidean distance from p to the boundary.
  double boundary_distance(Vec2 p) const;

  /// Boundary is C^{1,1} (everything except the rectangle).
  bool smooth_boundary() const;

  /// perimeter / (c_2 area^{1/2}); equals 1 only for the disk.
  double isoperimetric_ratio() const;

 private:
  Shape shape_;
};

/// Sharp isoperimetric constant in |∂Ω| >= c_2 |Ω|^{1/2}.
double isoperimetric_constant_2d();

/// Disk, square, 2:1 ellipse, 4:1 rectangle, stadium and annulus (outer = 2 inner),
/// all with the given area.
std::vector<Domain2D> equal_area_family(double area);

/// Finite-difference discretization of a planar region on a uniform lattice
/// that always contains the origin as a node.
///
/// Interior nodes carry Shortley-Weller cut fractions: the distance, in units of h,
/// to the boundary along +x, -x, +y, -y. A fraction of exactly 1 means the
/// neighbor is the next lattice node (interior, or lying on the boundary).
class GridMask {
 public:
  enum Dir : int { east = 0, west = 1, north = 2, south = 3 };
  static constexpr int no_node = -1;

  struct Node {
    int i;
    int j;
  };

  GridMask(double h, int nx, int ny, Vec2 origin, std::vector<int> node_index,
           std::vector<std::array<double, 4>> cut, std::vector<double> weight,
           std::optional<std::vector<double>> distance, double area);

  double h() const { return h_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  Vec2 origin() const { return origin_; }

  std::size_t size() const { return nodes_.size(); }
  const Node& node(std::size_t k) const { return nodes_[k]; }
  Vec2 position(std::size_t k) const;
  Vec2 lattice_point(int i, int j) const;
  bool in_lattice(int i, int j) const { return i >= 0 && j >= 0 && i < nx_ && j < ny_; }
  /// Compact interior index of lattice node (i, j), or no_node.
  int index(int i, int j) const;
  /// Interior index of the lattice neighbor of node k in direction d, or no_node.
  int neighbor(std::size_t k, Dir d) const;
  const std::array<double, 4>& cut(std::size_t k) const { return cut_[k]; }

  /// Quadrature weight (area share of the region) attached to node k.
  double weight(std::size_t k) const { return weight_[k]; }
  /// Distance to the boundary, when the region admits one.
  bool has_distance() const { return distance_.has_value(); }
  double distance(std::size_t k) const { return (*distance_)[k]; }

  /// Nominal area of the region (analytic when built from a Domain2D).
  double area() const { return area_; }
  /// Sum of quadrature weights.
  double measure() const;

  /// Index of the interior node nearest to p, if p lies within half a cell of one.
  std::optional<std::size_t> find(Vec2 p) const;

 private:
  double h_;
  int nx_;
  int ny_;
  Vec2 origin_;
  std::vector<int> node_index_;
  std::vector<Node> nodes_;
  std::vector<std::array<double, 4>> cut_;
  std::vector<double> weight_;
  std::optional<std::vector<double>> distance_;
  double area_;
};

/// Lattice geometry shared by masks built on the same grid.
struct Lattice {
  double h;
  int nx;
  int ny;
  Vec2 origin;
};

/// Lattice with spacing h covering `box` with at least one exterior node layer.
Lattice lattice_for(const Box& box, double h);

/// Cell-area quadrature weights for an interior set on a lattice. Cells near the
/// boundary are sub-sampled against `inside`; each inside sample is credited to
/// the nearest interior node of its 3x3 block.
std::vector<double> cut_cell_weights(const Lattice& lat, const std::vector<int>& node_index,
                                     std::size_t count,
                                     const std::function<bool(Vec2)>& inside);

/// Discretize `domain` with spacing h. Requires 0 < h < inradius.
GridMask build_mask(const Domain2D& domain, double h);

}  // namespace nltorsion
