#include "nltorsion/pde2d.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace nltorsion {

namespace {

constexpr double dead_zone = 1e-12;
constexpr double monotonicity_slack = 1e-12;

// Per-node arm lengths and lattice neighbors. A neighbor is kept only when the arm
// is a full lattice step ending at an interior node; otherwise the far end carries
// the Dirichlet value 0.
struct Arms {
  std::vector<std::array<double, 4>> len;
  std::vector<std::array<int, 4>> nbr;  // index, or size() for the zero slot
};

Arms arms_of(const GridMask& m) {
  Arms a;
  const std::size_t n = m.size();
  a.len.resize(n);
  a.nbr.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (int d = 0; d < 4; ++d) {
      const double c = m.cut(k)[d];
      a.len[k][d] = c * m.h();
      const int q = m.neighbor(k, static_cast<GridMask::Dir>(d));
      a.nbr[k][d] = (c == 1.0 && q != GridMask::no_node) ? q : static_cast<int>(n);
    }
  }
  return a;
}

// Row k reads: diag u_k - Σ coef_d u_{nbr_d} = 1.
struct Stencil {
  std::vector<double> diag;
  std::vector<std::array<double, 4>> coef;
  std::vector<std::array<int, 4>> nbr;
  std::vector<int> red;
  std::vector<int> black;
};

Stencil assemble(const GridMask& m, const VectorField* drift) {
  const Arms arms = arms_of(m);
  const std::size_t n = m.size();
  Stencil s;
  s.diag.assign(n, 0.0);
  s.coef.assign(n, {0.0, 0.0, 0.0, 0.0});
  s.nbr = arms.nbr;
  for (std::size_t k = 0; k < n; ++k) {
    const auto& L = arms.len[k];
    auto& c = s.coef[k];
    // -u_xx ≈ 2/(hE+hW) [ (uP-uE)/hE + (uP-uW)/hW ]
    const double ax = 2.0 / (L[0] + L[1]);
    const double ay = 2.0 / (L[2] + L[3]);
    c[0] = ax / L[0];
    c[1] = ax / L[1];
    c[2] = ay / L[2];
    c[3] = ay / L[3];
    if (drift) {
      const Vec2 b = (*drift)[k];
      // b > 0: backward difference; b <= 0: forward difference.
      if (b.x > 0.0) c[1] += b.x / L[1];
      else c[0] += -b.x / L[0];
      if (b.y > 0.0) c[3] += b.y / L[3];
      else c[2] += -b.y / L[2];
    }
    s.diag[k] = c[0] + c[1] + c[2] + c[3];
    const auto& nd = m.node(k);
    ((nd.i + nd.j) % 2 == 0 ? s.red : s.black).push_back(static_cast<int>(k));
  }
  return s;
}

// Max-norm of 1 - (A u) for values padded with a trailing zero slot.
double stencil_residual(const Stencil& s, const std::vector<double>& u) {
  const std::size_t n = s.diag.size();
  double worst = 0.0;
#pragma omp parallel for reduction(max : worst)
  for (std::size_t k = 0; k < n; ++k) {
    const auto& c = s.coef[k];
    const auto& q = s.nbr[k];
    const double au = s.diag[k] * u[k] - c[0] * u[q[0]] - c[1] * u[q[1]] - c[2] * u[q[2]] -
                      c[3] * u[q[3]];
    worst = std::max(worst, std::abs(1.0 - au));
  }
  return worst;
}

// Returns the largest correction applied.
double sor_color(const Stencil& s, const std::vector<int>& color, std::vector<double>& u,
                 double omega) {
  const std::size_t n = color.size();
  double largest = 0.0;
#pragma omp parallel for reduction(max : largest)
  for (std::size_t t = 0; t < n; ++t) {
    const int k = color[t];
    const auto& c = s.coef[k];
    const auto& q = s.nbr[k];
    const double gs =
        (1.0 + c[0] * u[q[0]] + c[1] * u[q[1]] + c[2] * u[q[2]] + c[3] * u[q[3]]) / s.diag[k];
    const double step = omega * (gs - u[k]);
    u[k] += step;
    largest = std::max(largest, std::abs(step));
  }
  return largest;
}

// One-sided differences along the four arms, Dirichlet 0 at cut ends.
struct OneSided {
  double fx, bx, fy, by;  // D⁺x, D⁻x, D⁺y, D⁻y
};

OneSided one_sided(const ScalarField& u, const Arms& arms, std::size_t k) {
  const auto& L = arms.len[k];
  const auto& q = arms.nbr[k];
  const std::size_t n = u.size();
  auto val = [&](int idx) { return static_cast<std::size_t>(idx) == n ? 0.0 : u[idx]; };
  const double up = u[k];
  return {(val(q[0]) - up) / L[0], (up - val(q[1])) / L[1], (val(q[2]) - up) / L[2],
          (up - val(q[3])) / L[3]};
}

// Most negative achievable slope per unit |b| along one axis, and the sign of b that
// achieves it. Ties go to the forward difference (b < 0).
struct AxisChoice {
  double slope;  // <= 0
  double sign;   // +1 backward, -1 forward, 0 none
};

AxisChoice axis_choice(double forward, double backward) {
  const double via_forward = -forward;  // b < 0 contributes -|b| D⁺u
  const double via_backward = backward;  // b > 0 contributes |b| D⁻u
  if (via_forward <= via_backward) {
    return via_forward < 0.0 ? AxisChoice{via_forward, -1.0} : AxisChoice{0.0, 0.0};
  }
  return via_backward < 0.0 ? AxisChoice{via_backward, 1.0} : AxisChoice{0.0, 0.0};
}

double laplacian_defect(const ScalarField& u, const Arms& arms, std::size_t k) {
  const auto& L = arms.len[k];
  const OneSided d = one_sided(u, arms, k);
  const double ax = 2.0 / (L[0] + L[1]);
  const double ay = 2.0 / (L[2] + L[3]);
  return -ax * (d.fx - d.bx) - ay * (d.fy - d.by);  // -Δ_h u
}

}  // namespace

// ---------------------------------------------------------------------------

ScalarField::ScalarField(MaskPtr mask, std::vector<double> values)
    : mask_(std::move(mask)), values_(std::move(values)) {
  if (values_.size() != mask_->size()) throw std::invalid_argument("ScalarField: size mismatch");
}

double ScalarField::at_lattice(int i, int j) const {
  const int k = mask_->index(i, j);
  return k == GridMask::no_node ? 0.0 : values_[k];
}

double ScalarField::at(Vec2 p) const {
  const auto k = mask_->find(p);
  if (!k) throw std::out_of_range("ScalarField::at: point is not an interior node");
  return values_[*k];
}

double ScalarField::max() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, v);
  return m;
}

VectorField::VectorField(MaskPtr mask, std::vector<double> bx, std::vector<double> by, double cap)
    : mask_(std::move(mask)), bx_(std::move(bx)), by_(std::move(by)), cap_(cap) {
  if (bx_.size() != mask_->size() || by_.size() != mask_->size()) {
    throw std::invalid_argument("VectorField: size mismatch");
  }
  if (!(cap_ >= 0.0)) throw std::invalid_argument("VectorField: cap must be >= 0");
  for (std::size_t k = 0; k < bx_.size(); ++k) {
    if (std::hypot(bx_[k], by_[k]) > cap_ * (1.0 + 1e-12)) {
      throw std::invalid_argument("VectorField: drift exceeds its cap");
    }
  }
}

VectorField VectorField::zero(MaskPtr mask, double cap) {
  const std::size_t n = mask->size();
  return VectorField(std::move(mask), std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), cap);
}

VectorField VectorField::constant(MaskPtr mask, Vec2 b) {
  const std::size_t n = mask->size();
  return VectorField(std::move(mask), std::vector<double>(n, b.x), std::vector<double>(n, b.y),
                     norm(b));
}

double estimate_sor_omega(const GridMask& mask) {
  const Stencil s = assemble(mask, nullptr);
  const std::size_t n = mask.size();
  std::vector<double> v(n + 1, 0.0);
  std::vector<double> next(n + 1, 0.0);
  for (std::size_t k = 0; k < n; ++k) v[k] = mask.has_distance() ? mask.distance(k) : 1.0;
  double rho = 0.0;
  for (int it = 0; it < 300; ++it) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const auto& c = s.coef[k];
      const auto& q = s.nbr[k];
      next[k] = (c[0] * v[q[0]] + c[1] * v[q[1]] + c[2] * v[q[2]] + c[3] * v[q[3]]) / s.diag[k];
      num += next[k] * next[k];
      den += v[k] * v[k];
    }
    rho = std::sqrt(num / den);
    const double scale = 1.0 / std::sqrt(num);
    for (std::size_t k = 0; k < n; ++k) v[k] = next[k] * scale;
  }
  rho = std::min(rho, 1.0 - 1e-12);
  return 2.0 / (1.0 + std::sqrt(1.0 - rho * rho));
}

Solution solve_linear_drift(const VectorField& drift, double tol, const LinearOptions& opts) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  const GridMask& m = drift.mask();
  const std::size_t n = m.size();
  const Stencil s = assemble(m, &drift);
  const double omega = opts.omega > 0.0 ? opts.omega : estimate_sor_omega(m);

  std::vector<double> u(n + 1, 0.0);
  if (opts.initial) {
    if (opts.initial->size() != n) throw std::invalid_argument("initial guess size mismatch");
    std::copy(opts.initial->values().begin(), opts.initial->values().end(), u.begin());
  }
  constexpr int check_every = 10;
  SolveReport rep;
  rep.omega = omega;
  rep.residual = stencil_residual(s, u);
  double correction = std::numeric_limits<double>::infinity();
  auto done = [&] {
    if (rep.residual > tol) return false;
    if (opts.correction_tol <= 0.0) return true;
    double top = 0.0;
    for (double v : u) top = std::max(top, std::abs(v));
    return correction <= opts.correction_tol * top;
  };
  while (!done()) {
    if (rep.iterations >= opts.max_sweeps) {
      std::ostringstream os;
      os << "linear solve did not converge in " << rep.iterations << " sweeps (residual "
         << rep.residual << ", tolerance " << tol << ")";
      throw SolverError(os.str(), rep.residual);
    }
    for (int it = 0; it < check_every; ++it) {
      correction = sor_color(s, s.red, u, omega);
      correction = std::max(correction, sor_color(s, s.black, u, omega));
    }
    rep.iterations += check_every;
    rep.residual = stencil_residual(s, u);
  }
  u.pop_back();
  return {ScalarField(drift.mask_ptr(), std::move(u)), rep};
}

double linear_residual(const ScalarField& u, const VectorField& drift) {
  const Stencil s = assemble(u.mask(), &drift);
  std::vector<double> padded(u.values());
  padded.push_back(0.0);
  return stencil_residual(s, padded);
}

Vec2 central_gradient(const ScalarField& u, std::size_t k) {
  const GridMask& m = u.mask();
  const auto& cut = m.cut(k);
  auto val = [&](GridMask::Dir d) {
    if (cut[d] < 1.0) return 0.0;
    const int q = m.neighbor(k, d);
    return q == GridMask::no_node ? 0.0 : u[q];
  };
  auto three_point = [](double plus, double minus, double centre, double hp, double hm) {
    return (hm * hm * (plus - centre) + hp * hp * (centre - minus)) / (hp * hm * (hp + hm));
  };
  const double h = m.h();
  return {three_point(val(GridMask::east), val(GridMask::west), u[k], cut[0] * h, cut[1] * h),
          three_point(val(GridMask::north), val(GridMask::south), u[k], cut[2] * h, cut[3] * h)};
}

VectorField optimal_drift_of(const ScalarField& u, double cap) {
  if (!(cap >= 0.0)) throw std::invalid_argument("cap must be >= 0");
  const std::size_t n = u.size();
  std::vector<double> bx(n, 0.0);
  std::vector<double> by(n, 0.0);
  if (cap > 0.0) {
    for (std::size_t k = 0; k < n; ++k) {
      const Vec2 g = central_gradient(u, k);
      const double len = norm(g);
      if (len < dead_zone) continue;
      bx[k] = -cap * g.x / len;
      by[k] = -cap * g.y / len;
    }
  }
  return VectorField(u.mask_ptr(), std::move(bx), std::move(by), cap);
}

VectorField upwind_optimal_drift(const ScalarField& u, double cap) {
  if (!(cap >= 0.0)) throw std::invalid_argument("cap must be >= 0");
  const Arms arms = arms_of(u.mask());
  const std::size_t n = u.size();
  std::vector<double> bx(n, 0.0);
  std::vector<double> by(n, 0.0);
  if (cap > 0.0) {
    for (std::size_t k = 0; k < n; ++k) {
      const OneSided d = one_sided(u, arms, k);
      const AxisChoice cx = axis_choice(d.fx, d.bx);
      const AxisChoice cy = axis_choice(d.fy, d.by);
      const double len = std::hypot(cx.slope, cy.slope);
      if (len < dead_zone) continue;
      bx[k] = cx.sign * cap * std::abs(cx.slope) / len;
      by[k] = cy.sign * cap * std::abs(cy.slope) / len;
    }
  }
  return VectorField(u.mask_ptr(), std::move(bx), std::move(by), cap);
}

double upwind_gradient_norm(const ScalarField& u, std::size_t k) {
  const Arms arms = arms_of(u.mask());
  const OneSided d = one_sided(u, arms, k);
  return std::hypot(axis_choice(d.fx, d.bx).slope, axis_choice(d.fy, d.by).slope);
}

double nonlinear_residual(const ScalarField& u, double cap) {
  const Arms arms = arms_of(u.mask());
  double worst = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const OneSided d = one_sided(u, arms, k);
    const double grad = std::hypot(axis_choice(d.fx, d.bx).slope, axis_choice(d.fy, d.by).slope);
    worst = std::max(worst, std::abs(laplacian_defect(u, arms, k) - cap * grad - 1.0));
  }
  return worst;
}

Solution solve_nonlinear(MaskPtr mask, double cap, double tol, const NonlinearOptions& opts) {
  if (!(cap >= 0.0)) throw std::invalid_argument("cap must be >= 0");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (cap * mask->h() > 2.0) {
    std::ostringstream os;
    os << "cap*h = " << cap * mask->h() << " exceeds 2; refine the grid to h <= " << 2.0 / cap;
    throw SolverError(os.str(), std::numeric_limits<double>::quiet_NaN());
  }
  // Inner solves run until the SOR correction reaches roundoff so that successive
  // policy iterates are comparable to 1e-12.
  const double inner_tol = tol;
  LinearOptions lin = opts.linear;
  if (lin.correction_tol <= 0.0) lin.correction_tol = 1e-14;
  if (lin.omega <= 0.0) lin.omega = estimate_sor_omega(*mask);

  SolveReport rep;
  rep.omega = lin.omega;
  rep.min_increment = std::numeric_limits<double>::infinity();
  const bool from_policy_solution = opts.initial == nullptr;
  ScalarField u = [&] {
    if (opts.initial) return *opts.initial;
    Solution first = solve_linear_drift(VectorField::zero(mask), inner_tol, lin);
    rep.iterations += first.report.iterations;
    return std::move(first.u);
  }();
  if (cap == 0.0 && from_policy_solution) {
    rep.residual = nonlinear_residual(u, cap);
    rep.min_increment = 0.0;
    return {std::move(u), rep};
  }

  for (int sweep = 1; sweep <= opts.max_policy_sweeps; ++sweep) {
    const VectorField policy = upwind_optimal_drift(u, cap);
    LinearOptions warm = lin;
    warm.initial = &u;
    Solution next = solve_linear_drift(policy, inner_tol, warm);
    rep.iterations += next.report.iterations;
    rep.policy_sweeps = sweep;

    double delta = 0.0;
    double lowest = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < u.size(); ++k) {
      const double inc = next.u[k] - u[k];
      delta = std::max(delta, std::abs(inc));
      lowest = std::min(lowest, inc);
    }
    if (from_policy_solution || sweep > 1) {
      rep.min_increment = std::min(rep.min_increment, lowest);
      if (lowest < -monotonicity_slack) {
        std::ostringstream os;
        os << "policy iteration decreased u by " << -lowest << " at sweep " << sweep
           << "; the discrete comparison principle is violated";
        throw SolverError(os.str(), next.report.residual);
      }
    }
    u = std::move(next.u);
    if (delta <= tol) {
      rep.residual = nonlinear_residual(u, cap);
      if (rep.residual <= 10.0 * tol) {
        if (!std::isfinite(rep.min_increment)) rep.min_increment = 0.0;
        return {std::move(u), rep};
      }
    }
  }
  rep.residual = nonlinear_residual(u, cap);
  std::ostringstream os;
  os << "policy iteration did not converge in " << opts.max_policy_sweeps << " sweeps (residual "
     << rep.residual << ")";
  throw SolverError(os.str(), rep.residual);
}

}  // namespace nltorsion
