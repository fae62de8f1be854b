#pragma once

/// Finite-difference solvers for the exit-time problems on a GridMask.
///
/// Sign convention: drifts are stored as they appear in the PDE
///
///   -Δu + b·∇u = 1,   u = 0 on ∂Ω.
///
/// The physical drift of the diffusion dX = β dt + √2 dB is β = -b. The optimal
/// trapping field is b = -B ∇u/|∇u| (physically: push up the gradient of u), and it
/// turns the problem into -Δu - B|∇u| = 1.
///
/// Discretization: five-point Laplacian with Shortley-Weller arms at cut edges and
/// first-order upwinding of b·∇u chosen per component from the sign of b. Every row
/// is then an M-matrix row, so the discrete maximum principle and discrete
/// comparison hold for any bounded drift.

#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "nltorsion/geometry.hpp"

namespace nltorsion {

using MaskPtr = std::shared_ptr<const GridMask>;

/// One value per interior node; Dirichlet value 0 is implied off the mask.
class ScalarField {
 public:
  ScalarField(MaskPtr mask, std::vector<double> values);
  explicit ScalarField(MaskPtr mask) : ScalarField(mask, std::vector<double>(mask->size(), 0.0)) {}

  const GridMask& mask() const { return *mask_; }
  const MaskPtr& mask_ptr() const { return mask_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t k) const { return values_[k]; }
  double& operator[](std::size_t k) { return values_[k]; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  /// Value at lattice node (i, j), 0 off the mask.
  double at_lattice(int i, int j) const;
  /// Value at the node nearest to p (p must be within half a cell of an interior node).
  double at(Vec2 p) const;
  double max() const;

 private:
  MaskPtr mask_;
  std::vector<double> values_;
};

class VectorField {
 public:
  /// Throws std::invalid_argument if some |b| exceeds cap by more than 1e-12 relative.
  VectorField(MaskPtr mask, std::vector<double> bx, std::vector<double> by, double cap);
  static VectorField zero(MaskPtr mask, double cap = 0.0);
  static VectorField constant(MaskPtr mask, Vec2 b);

  const GridMask& mask() const { return *mask_; }
  const MaskPtr& mask_ptr() const { return mask_; }
  std::size_t size() const { return bx_.size(); }
  Vec2 operator[](std::size_t k) const { return {bx_[k], by_[k]}; }
  double cap() const { return cap_; }
  const std::vector<double>& bx() const { return bx_; }
  const std::vector<double>& by() const { return by_; }

 private:
  MaskPtr mask_;
  std::vector<double> bx_;
  std::vector<double> by_;
  double cap_;
};

struct SolveReport {
  int iterations = 0;          // SOR sweeps, summed over all linear solves
  double residual = 0.0;       // max-norm defect of the discrete equations
  int policy_sweeps = 0;       // policy updates (nonlinear solve only)
  double min_increment = 0.0;  // min over sweeps k >= 1 of min_x (u_{k+1} - u_k)
  double omega = 1.0;          // relaxation factor used
};

/// Iteration budget exhausted or a monotonicity check failed.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double last_residual)
      : std::runtime_error(what), last_residual_(last_residual) {}
  double last_residual() const { return last_residual_; }

 private:
  double last_residual_;
};

struct LinearOptions {
  int max_sweeps = 400000;
  /// 0 selects the relaxation factor from the mask's spectral estimate.
  double omega = 0.0;
  /// When positive, also require the largest SOR correction of a sweep to drop below
  /// this fraction of max |u|.
  double correction_tol = 0.0;
  const ScalarField* initial = nullptr;
};

struct NonlinearOptions {
  int max_policy_sweeps = 200;
  LinearOptions linear;
  /// Start from this field instead of the zero-drift solution.
  const ScalarField* initial = nullptr;
};

struct Solution {
  ScalarField u;
  SolveReport report;
};

/// Red-black SOR solve of -Δu + b·∇u = 1 to max-norm residual <= tol.
Solution solve_linear_drift(const VectorField& drift, double tol, const LinearOptions& opts = {});

/// Max-norm defect of the linear discrete equations.
double linear_residual(const ScalarField& u, const VectorField& drift);

/// Coupled drift b = -cap ∇u/|∇u| from central differences (Shortley-Weller arms at
/// the boundary). Nodes with |∇u| < 1e-12 get the zero vector.
VectorField optimal_drift_of(const ScalarField& u, double cap);

/// Drift minimizing the upwinded b·∇u over |b| <= cap at every node. This is the
/// discrete counterpart of optimal_drift_of and the policy-improvement step.
VectorField upwind_optimal_drift(const ScalarField& u, double cap);

/// Policy iteration for -Δu - cap|∇u| = 1 with |∇u| discretized as
/// sqrt(Σ_axis max(D⁺u, -D⁻u, 0)²). Requires cap·h <= 2.
Solution solve_nonlinear(MaskPtr mask, double cap, double tol, const NonlinearOptions& opts = {});

/// Max-norm defect of the discrete nonlinear equations.
double nonlinear_residual(const ScalarField& u, double cap);

/// Central-difference gradient at node k (nonuniform three-point rule at cut arms).
Vec2 central_gradient(const ScalarField& u, std::size_t k);

/// Upwind gradient magnitude used by the nonlinear scheme.
double upwind_gradient_norm(const ScalarField& u, std::size_t k);

/// Jacobi spectral-radius estimate of the zero-drift operator and the matching
/// optimal SOR factor.
double estimate_sor_omega(const GridMask& mask);

}  // namespace nltorsion
