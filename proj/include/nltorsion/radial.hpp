#pragma once

/// Radial solutions of -Δu - b|∇u| = 1 on balls in R^d.
///
/// Writing u(x) = g(|x|) and w(r) = -r^{d-1} g'(r), the radial equation becomes
/// the linear first-order problem w' = b w + r^{d-1}, w(0) = 0, whose solution is
///
///   w(r) = e^{br} ∫_0^r e^{-bs} s^{d-1} ds = (d-1)! r^d Σ_{j>=0} (br)^j / (d+j)!.
///
/// Because the equation only involves derivatives of u, the solution on the ball of
/// radius R is g(r) = ∫_r^R w(s)/s^{d-1} ds for every R; no shooting is needed.
///
/// Surface measure: |∂B_r| = σ_d r^{d-1} with σ_d = d·|B_1| the area of the unit
/// sphere, so σ_d·w(R) is the inward flux ∫_{∂B_R} ∂u/∂n.

#include <span>
#include <vector>

namespace nltorsion {

/// |B_R| = π^{d/2} R^d / Γ(d/2 + 1).
double ball_volume(int d, double radius);
/// |∂B_R| = d |B_1| R^{d-1}.
double sphere_area(int d, double radius);
double ball_radius_for_volume(int d, double volume);

/// w(r) for the radial flux ODE. Closed forms for d <= 3, quadrature otherwise.
double flux_w(int d, double b, double r);

/// -g'(r) = w(r) / r^{d-1}, with the removable singularity at r = 0 expanded.
double radial_slope(int d, double b, double r);

/// g(rho) on the ball of radius R: ∫_rho^R w(s)/s^{d-1} ds by adaptive quadrature.
double radial_value(int d, double b, double radius, double rho);

struct RadialSolution {
  int d = 2;
  double b = 0.0;
  double radius = 1.0;
  std::vector<double> r;
  std::vector<double> g;
  std::vector<double> w;

  double center_value() const { return g.front(); }
  /// Cubic Hermite interpolation of g using g' = -w/r^{d-1}; zero for rho >= radius.
  double at(double rho) const;
  /// Largest relative defect of w' = b w + r^{d-1} at interior nodes
  /// (fourth-order differences of the stored w).
  double ode_residual() const;
};

/// Tabulates g and w on n uniform panels of [0, R]; requires n >= 16.
RadialSolution solve_radial(int d, double b, double radius, int n);

struct BallFlux {
  double h;     // flux - volume
  double flux;  // ∫_{∂B_c} ∂u/∂n (inward normal)
};

/// Flux profile of the ball with volume c.
BallFlux ball_flux_profile(int d, double b, double volume);

/// Max relative deviation between a central-difference h'(c) and b (h(c)+c)/|∂B_c|
/// over the given volumes (strictly increasing, at least five of them).
double verify_ball_flux_ode(int d, double b, std::span<const double> volumes);

/// Ball profiles as functions of the volume c.
double ball_u_max(int d, double b, double volume);
/// ∫_{B_c} u^p dx for integer p >= 0 (p = 0 gives the volume).
double ball_u_power_integral(int d, double b, double volume, int p);
/// ∫_{B_c} |∇u| dx.
double ball_grad_l1(int d, double b, double volume);

}  // namespace nltorsion
