#include "nltorsion/montecarlo.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/random/normal_distribution.hpp>

namespace nltorsion {

namespace {

double pairwise_sum(std::span<const double> x) {
  if (x.size() <= 16) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
  }
  const std::size_t half = x.size() / 2;
  return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

// Counter-based generator: output k of a stream is mix(base + k·γ), the SplitMix64
// finalizer applied to a Weyl sequence. Each path gets its own base from (seed, path).
class CounterEngine {
 public:
  using result_type = std::uint64_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  CounterEngine(std::uint64_t seed, std::uint64_t path)
      : base_(mix(mix(seed) ^ (path * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL))) {}

  result_type operator()() { return mix(base_ + (++counter_) * gamma); }

 private:
  static constexpr std::uint64_t gamma = 0x9e3779b97f4a7c15ULL;
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  std::uint64_t base_;
  std::uint64_t counter_ = 0;
};

// Squared form for the disk keeps the hot loop free of hypot.
struct Outside {
  template <class S>
  bool operator()(const S& s, Vec2 p) const {
    return level(s, p) >= 0.0;
  }
  bool operator()(const Disk& s, Vec2 p) const {
    return p.x * p.x + p.y * p.y >= s.radius * s.radius;
  }
};

struct RadialDrift {
  double cap;
  Vec2 operator()(Vec2 x) const {
    const double r2 = x.x * x.x + x.y * x.y;
    if (r2 == 0.0) return {0.0, 0.0};
    const double s = -cap / std::sqrt(r2);
    return {s * x.x, s * x.y};
  }
};

struct ZeroDrift {
  Vec2 operator()(Vec2) const { return {0.0, 0.0}; }
};

Vec2 interpolate(const DriftPolicy::Interpolated& g, Vec2 x) {
  const VectorField& f = *g.field;
  const GridMask& m = f.mask();
  const double fx = (x.x - m.origin().x) / m.h();
  const double fy = (x.y - m.origin().y) / m.h();
  const int i = static_cast<int>(std::floor(fx));
  const int j = static_cast<int>(std::floor(fy));
  const double tx = fx - i;
  const double ty = fy - j;
  const double w[4] = {(1 - tx) * (1 - ty), tx * (1 - ty), (1 - tx) * ty, tx * ty};
  const int ci[4] = {0, 1, 0, 1};
  const int cj[4] = {0, 0, 1, 1};
  double total = 0.0;
  Vec2 b{0.0, 0.0};
  for (int c = 0; c < 4; ++c) {
    const int k = m.in_lattice(i + ci[c], j + cj[c]) ? m.index(i + ci[c], j + cj[c]) : GridMask::no_node;
    if (k == GridMask::no_node) continue;
    total += w[c];
    b = b + w[c] * f[static_cast<std::size_t>(k)];
  }
  if (total <= 0.0) return {0.0, 0.0};
  b = (g.sign / total) * b;
  const double len = norm(b);
  if (len > f.cap() && len > 0.0) b = (f.cap() / len) * b;
  return b;
}

// One path per lane; a lane that exits picks up the next path of the block. Several
// independent paths in flight hide the latency of the drift evaluation.
constexpr int lanes = 4;
constexpr std::int64_t block = 256;

template <class S, class Drift>
void run_paths(const S& shape, const Drift& drift, Vec2 x0, double dt, std::uint64_t seed,
               std::int64_t max_steps, std::vector<double>& tau) {
  const double noise = std::sqrt(2.0 * dt);
  const std::int64_t n = static_cast<std::int64_t>(tau.size());
  const std::int64_t n_blocks = (n + block - 1) / block;
  bool overrun = false;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t blk = 0; blk < n_blocks; ++blk) {
    const std::int64_t end = std::min(n, (blk + 1) * block);
    std::int64_t next = blk * block;
    struct Lane {
      std::int64_t path = -1;
      CounterEngine eng{0, 0};
      Vec2 x;
      std::int64_t steps = 0;
    };
    std::array<Lane, lanes> lane;
    boost::random::normal_distribution<double> normal;
    auto start = [&](Lane& l) {
      if (next < end) {
        l.path = next++;
        l.eng = CounterEngine(seed, static_cast<std::uint64_t>(l.path));
        l.x = x0;
        l.steps = 0;
      } else {
        l.path = -1;
      }
    };
    int active = 0;
    for (Lane& l : lane) {
      start(l);
      active += l.path >= 0;
    }
    while (active > 0) {
      for (Lane& l : lane) {
        if (l.path < 0) continue;
        const Vec2 b = drift(l.x);
        l.x.x += b.x * dt + noise * normal(l.eng);
        l.x.y += b.y * dt + noise * normal(l.eng);
        ++l.steps;
        const bool out = Outside{}(shape, l.x);
        if (!out && l.steps < max_steps) continue;
        if (!out) {
#pragma omp atomic write
          overrun = true;
        }
        tau[static_cast<std::size_t>(l.path)] = static_cast<double>(l.steps) * dt;
        start(l);
        active -= l.path < 0;
      }
    }
  }
  if (overrun) throw std::runtime_error("simulate_exit: a path exceeded the step budget");
}

}  // namespace

DriftPolicy DriftPolicy::radial_inward(double cap) {
  if (!(cap >= 0.0)) throw std::invalid_argument("radial_inward: cap must be >= 0");
  return DriftPolicy(RadialInward{cap});
}

DriftPolicy DriftPolicy::interpolated(VectorField field, bool sign_flip) {
  return DriftPolicy(Interpolated{std::make_shared<const VectorField>(std::move(field)),
                                  sign_flip ? -1.0 : 1.0});
}

double DriftPolicy::cap() const {
  if (auto* r = std::get_if<RadialInward>(&kind_)) return r->cap;
  if (auto* g = std::get_if<Interpolated>(&kind_)) return g->field->cap();
  return 0.0;
}

Vec2 DriftPolicy::operator()(Vec2 x) const {
  if (auto* r = std::get_if<RadialInward>(&kind_)) return RadialDrift{r->cap}(x);
  if (auto* g = std::get_if<Interpolated>(&kind_)) return interpolate(*g, x);
  return {0.0, 0.0};
}

ExitTimeEstimate simulate_exit(const Domain2D& domain, const DriftPolicy& policy, Vec2 x0,
                               double dt, std::int64_t n_paths, std::uint64_t seed,
                               const SimulationOptions& opts) {
  if (!domain.contains(x0)) {
    throw std::invalid_argument("simulate_exit: start point must lie strictly inside the domain");
  }
  if (!(dt > 0.0)) throw std::invalid_argument("simulate_exit: dt must be positive");
  if (n_paths < 100) throw std::invalid_argument("simulate_exit: need at least 100 paths");

  std::vector<double> tau(static_cast<std::size_t>(n_paths));
  std::visit(
      [&](const auto& shape) {
        std::visit(
            [&](const auto& k) {
              using K = std::decay_t<decltype(k)>;
              if constexpr (std::is_same_v<K, DriftPolicy::Zero>) {
                run_paths(shape, ZeroDrift{}, x0, dt, seed, opts.max_steps, tau);
              } else if constexpr (std::is_same_v<K, DriftPolicy::RadialInward>) {
                run_paths(shape, RadialDrift{k.cap}, x0, dt, seed, opts.max_steps, tau);
              } else {
                run_paths(shape, [&k](Vec2 x) { return interpolate(k, x); }, x0, dt, seed,
                          opts.max_steps, tau);
              }
            },
            policy.kind());
      },
      domain.shape());

  const double n = static_cast<double>(n_paths);
  const double mean = pairwise_sum(tau) / n;
  for (double& t : tau) t = (t - mean) * (t - mean);
  const double var = pairwise_sum(tau) / (n - 1.0);
  return {mean, std::sqrt(var / n), n_paths, dt, seed};
}

}  // namespace nltorsion
