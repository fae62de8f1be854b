#pragma once

/// Euler-Maruyama estimates of the expected exit time of
///
///   dX = β(X) dt + √2 dB
///
/// from a planar domain. β is the physical drift; a PDE drift field b from pde2d
/// enters as β = -b (see DriftPolicy::interpolated).

#include <cstdint>
#include <memory>
#include <variant>

#include "nltorsion/geometry.hpp"
#include "nltorsion/pde2d.hpp"

namespace nltorsion {

struct ExitTimeEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t n_paths = 0;
  double dt = 0.0;
  std::uint64_t seed = 0;
};

class DriftPolicy {
 public:
  struct Zero {};
  struct RadialInward {
    double cap;
  };
  struct Interpolated {
    std::shared_ptr<const VectorField> field;
    double sign;
  };

  static DriftPolicy zero() { return DriftPolicy(Zero{}); }
  /// β(x) = -cap·x/|x|, zero at the origin.
  static DriftPolicy radial_inward(double cap);
  /// Bilinear interpolation of a grid field, clamped to |β| <= cap. With sign_flip
  /// the field is read in the PDE convention and negated; outside the lattice cells
  /// touching interior nodes the drift is zero.
  static DriftPolicy interpolated(VectorField field, bool sign_flip = true);

  double cap() const;
  /// Physical drift at x.
  Vec2 operator()(Vec2 x) const;

  using Kind = std::variant<Zero, RadialInward, Interpolated>;
  const Kind& kind() const { return kind_; }

 private:
  explicit DriftPolicy(Kind k) : kind_(std::move(k)) {}
  Kind kind_;
};

struct SimulationOptions {
  /// A path still inside after this many steps aborts the run.
  std::int64_t max_steps = 200'000'000;
};

/// Mean of τ = (first step index with X outside or on the boundary)·dt over n_paths
/// paths. Path i draws from its own counter-based stream keyed by (seed, i), so the
/// result is bitwise identical for any thread count. Throws std::invalid_argument unless
/// x0 is strictly inside, dt > 0 and n_paths >= 100.
ExitTimeEstimate simulate_exit(const Domain2D& domain, const DriftPolicy& policy, Vec2 x0,
                               double dt, std::int64_t n_paths, std::uint64_t seed,
                               const SimulationOptions& opts = {});

}  // namespace nltorsion
