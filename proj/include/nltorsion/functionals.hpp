#pragma once

#include <vector>

#include "nltorsion/pde2d.hpp"

namespace nltorsion {

/// Integral quantities of one solution of -Δu - cap|∇u| = 1 (or of the torsion
/// problem when cap = 0).
///
/// `u_l1`, `u_l2`, `u_l3` are ∫u^p (the p-th power of the L^p norm). `flux` is the
/// Green-identity value c + cap·∫|∇u|; `flux_boundary` sums one-sided normal
/// derivatives along every lattice-line crossing of the boundary. `hopf_ratio` is
/// min u/dist(·,∂Ω) over interior nodes, NaN when the mask has no distance data.
struct FunctionalReport {
  double volume = 0.0;
  double cap = 0.0;
  double u_max = 0.0;
  double u_l1 = 0.0;
  double u_l2 = 0.0;
  double u_l3 = 0.0;
  double grad_l1 = 0.0;
  double flux = 0.0;
  double flux_boundary = 0.0;
  double hopf_ratio = 0.0;

  /// ∫u^p for p in {1, 2, 3}.
  double u_power(int p) const;
};

FunctionalReport evaluate(const ScalarField& u, double cap);

/// Σ weight·u^p over the mask.
double power_integral(const ScalarField& u, int p);
/// Σ weight·|∇u| with central-difference gradients.
double gradient_l1(const ScalarField& u);
/// ∫_{∂Ω} ∂u/∂n (inward normal) from second-order one-sided derivatives at cuts.
double boundary_flux(const ScalarField& u);
double hopf_ratio(const ScalarField& u);

struct Superlevel {
  MaskPtr mask;
  ScalarField shifted;  // u - eps on the new mask
};

/// Mask of {u > eps} on the same lattice, with cut fractions from linear
/// interpolation of u along lattice edges, and the field u - eps on it.
/// Requires 0 < eps < max u.
Superlevel superlevel_restrict(const ScalarField& u, double eps);

struct Segment {
  Vec2 a;
  Vec2 b;
};

/// Marching-squares pieces of {u = t}; lattice edges crossing the boundary use the
/// stored cut fractions so that t = 0 traces the boundary itself.
std::vector<Segment> level_set_segments(const ScalarField& u, double t);

/// Length of {u = t}, 0 <= t < max u.
double level_set_perimeter(const ScalarField& u, double t);

/// ∫_{t0}^{t1} perimeter(t) dt by the midpoint rule on `levels` sub-intervals.
double coarea_integral(const ScalarField& u, double t0, double t1, int levels = 400);

}  // namespace nltorsion
