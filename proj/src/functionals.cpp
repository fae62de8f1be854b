#include "nltorsion/functionals.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace nltorsion {

namespace {

constexpr int di[4] = {1, -1, 0, 0};
constexpr int dj[4] = {0, 0, 1, -1};
constexpr int opposite[4] = {1, 0, 3, 2};

bool full_arm(const GridMask& m, std::size_t k, int d) {
  return m.cut(k)[d] == 1.0 && m.neighbor(k, static_cast<GridMask::Dir>(d)) != GridMask::no_node;
}

double bilinear(const ScalarField& u, Vec2 p) {
  const GridMask& m = u.mask();
  const double fx = (p.x - m.origin().x) / m.h();
  const double fy = (p.y - m.origin().y) / m.h();
  const int i = static_cast<int>(std::floor(fx));
  const int j = static_cast<int>(std::floor(fy));
  const double tx = fx - i;
  const double ty = fy - j;
  return (1 - tx) * (1 - ty) * u.at_lattice(i, j) + tx * (1 - ty) * u.at_lattice(i + 1, j) +
         (1 - tx) * ty * u.at_lattice(i, j + 1) + tx * ty * u.at_lattice(i + 1, j + 1);
}

}  // namespace

double FunctionalReport::u_power(int p) const {
  switch (p) {
    case 1:
      return u_l1;
    case 2:
      return u_l2;
    case 3:
      return u_l3;
    default:
      throw std::invalid_argument("u_power: p must be 1, 2 or 3");
  }
}

double power_integral(const ScalarField& u, int p) {
  const GridMask& m = u.mask();
  double s = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) s += m.weight(k) * std::pow(u[k], p);
  return s;
}

double gradient_l1(const ScalarField& u) {
  const GridMask& m = u.mask();
  double s = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) s += m.weight(k) * norm(central_gradient(u, k));
  return s;
}

double boundary_flux(const ScalarField& u) {
  const GridMask& m = u.mask();
  const double h = m.h();
  double total = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    for (int d = 0; d < 4; ++d) {
      if (full_arm(m, k, d)) continue;
      // Inward derivative at the boundary point, along the lattice line.
      const double s1 = m.cut(k)[d] * h;
      const double u1 = u[k];
      double slope = u1 / s1;
      const int od = opposite[d];
      if (full_arm(m, k, od)) {
        const double s2 = s1 + h;
        const double u2 = u[m.neighbor(k, static_cast<GridMask::Dir>(od))];
        slope = (u1 * s2 * s2 - u2 * s1 * s1) / (s1 * s2 * (s2 - s1));
      }
      total += h * slope;
    }
  }
  return total;
}

double hopf_ratio(const ScalarField& u) {
  const GridMask& m = u.mask();
  if (!m.has_distance()) return std::numeric_limits<double>::quiet_NaN();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < u.size(); ++k) best = std::min(best, u[k] / m.distance(k));
  return best;
}

FunctionalReport evaluate(const ScalarField& u, double cap) {
  FunctionalReport r;
  r.volume = u.mask().area();
  r.cap = cap;
  r.u_max = u.max();
  r.u_l1 = power_integral(u, 1);
  r.u_l2 = power_integral(u, 2);
  r.u_l3 = power_integral(u, 3);
  r.grad_l1 = gradient_l1(u);
  r.flux = r.volume + cap * r.grad_l1;
  r.flux_boundary = boundary_flux(u);
  r.hopf_ratio = hopf_ratio(u);
  return r;
}

Superlevel superlevel_restrict(const ScalarField& u, double eps) {
  const GridMask& m = u.mask();
  const double top = u.max();
  if (!(eps > 0.0) || !(eps < top)) {
    throw std::invalid_argument("superlevel_restrict: eps must lie in (0, max u)");
  }
  const Lattice lat{m.h(), m.nx(), m.ny(), m.origin()};
  std::vector<int> index(static_cast<std::size_t>(lat.nx) * lat.ny, GridMask::no_node);
  std::vector<std::size_t> old_of;
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (u[k] > eps) {
      const auto& nd = m.node(k);
      index[static_cast<std::size_t>(nd.j) * lat.nx + nd.i] = static_cast<int>(old_of.size());
      old_of.push_back(k);
    }
  }
  std::vector<std::array<double, 4>> cut(old_of.size());
  std::vector<double> shifted(old_of.size());
  for (std::size_t n = 0; n < old_of.size(); ++n) {
    const std::size_t k = old_of[n];
    shifted[n] = u[k] - eps;
    for (int d = 0; d < 4; ++d) {
      const bool full = full_arm(m, k, d);
      const double far = full ? u[m.neighbor(k, static_cast<GridMask::Dir>(d))] : 0.0;
      if (full && far > eps) {
        cut[n][d] = 1.0;
        continue;
      }
      cut[n][d] = m.cut(k)[d] * (u[k] - eps) / (u[k] - far);
    }
  }
  auto weight = cut_cell_weights(lat, index, old_of.size(),
                                 [&](Vec2 p) { return bilinear(u, p) > eps; });
  double area = 0.0;
  for (double w : weight) area += w;
  auto mask = std::make_shared<const GridMask>(lat.h, lat.nx, lat.ny, lat.origin, std::move(index),
                                               std::move(cut), std::move(weight), std::nullopt,
                                               area);
  return {mask, ScalarField(mask, std::move(shifted))};
}

std::vector<Segment> level_set_segments(const ScalarField& u, double t) {
  const GridMask& m = u.mask();
  const double h = m.h();
  std::vector<Segment> out;
  // Corners counter-clockwise from the lower left; edge e joins corner e and e+1.
  constexpr int ci[4] = {0, 1, 1, 0};
  constexpr int cj[4] = {0, 0, 1, 1};

  auto above = [&](int i, int j) {
    const int k = m.index(i, j);
    return k != GridMask::no_node && u[k] >= t;
  };
  // Crossing on the lattice edge between (i, j) and its neighbor in direction d.
  auto crossing = [&](int i, int j, int d) {
    int pi = i, pj = j, dir = d;
    if (!above(i, j)) {
      pi = i + di[d];
      pj = j + dj[d];
      dir = opposite[d];
    }
    const int k = m.index(pi, pj);
    const double up = u[k];
    const int qi = pi + di[dir];
    const int qj = pj + dj[dir];
    const int q = m.index(qi, qj);
    double s;
    if (q != GridMask::no_node && m.cut(k)[dir] == 1.0) {
      s = (up - t) / (up - u[q]);
    } else {
      s = up > 0.0 ? m.cut(k)[dir] * (up - t) / up : 0.0;
    }
    const Vec2 p = m.lattice_point(pi, pj);
    return Vec2{p.x + s * h * di[dir], p.y + s * h * dj[dir]};
  };

  for (int j = 0; j + 1 < m.ny(); ++j) {
    for (int i = 0; i + 1 < m.nx(); ++i) {
      std::array<bool, 4> a;
      int n_above = 0;
      for (int c = 0; c < 4; ++c) {
        a[c] = above(i + ci[c], j + cj[c]);
        n_above += a[c];
      }
      if (n_above == 0 || n_above == 4) continue;
      // Edge e runs from corner e to corner (e+1)%4.
      std::array<std::optional<Vec2>, 4> x;
      for (int e = 0; e < 4; ++e) {
        const int c0 = e;
        const int c1 = (e + 1) % 4;
        if (a[c0] == a[c1]) continue;
        const int dx = ci[c1] - ci[c0];
        const int dy = cj[c1] - cj[c0];
        const int d = dx == 1 ? 0 : dx == -1 ? 1 : dy == 1 ? 2 : 3;
        x[e] = crossing(i + ci[c0], j + cj[c0], d);
      }
      std::vector<int> edges;
      for (int e = 0; e < 4; ++e) {
        if (x[e]) edges.push_back(e);
      }
      if (edges.size() == 2) {
        out.push_back({*x[edges[0]], *x[edges[1]]});
        continue;
      }
      // Saddle: isolate the corners whose status differs from the cell center.
      double centre = 0.0;
      for (int c = 0; c < 4; ++c) centre += 0.25 * u.at_lattice(i + ci[c], j + cj[c]);
      const bool centre_above = centre >= t;
      for (int c = 0; c < 4; ++c) {
        if (a[c] == centre_above) continue;
        const int before = (c + 3) % 4;  // edge entering corner c
        out.push_back({*x[before], *x[c]});
      }
    }
  }
  return out;
}

double level_set_perimeter(const ScalarField& u, double t) {
  double len = 0.0;
  for (const Segment& s : level_set_segments(u, t)) len += norm(s.b - s.a);
  return len;
}

double coarea_integral(const ScalarField& u, double t0, double t1, int levels) {
  if (levels < 1) throw std::invalid_argument("coarea_integral: levels must be positive");
  const double dt = (t1 - t0) / levels;
  double s = 0.0;
  for (int i = 0; i < levels; ++i) s += level_set_perimeter(u, t0 + (i + 0.5) * dt);
  return s * dt;
}

}  // namespace nltorsion
