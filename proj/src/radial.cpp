#include "nltorsion/radial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace nltorsion {

namespace {

using boost::math::quadrature::gauss;
using boost::math::quadrature::gauss_kronrod;

constexpr double series_cutoff = 1e-3;

void check_args(int d, double b) {
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  if (!(b >= 0.0) || !std::isfinite(b)) throw std::invalid_argument("drift cap must be >= 0");
}

// Σ_j x^j (d-1)!/(d+j)!, all terms positive.
double flux_series(int d, double x) {
  double term = 1.0 / d;
  double sum = term;
  for (int j = 0; j < 2000; ++j) {
    term *= x / (d + j + 1);
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

double flux_quadrature(int d, double b, double r) {
  auto integrand = [d, b, r](double s) { return std::exp(b * (r - s)) * std::pow(s, d - 1); };
  return gauss_kronrod<double, 61>::integrate(integrand, 0.0, r, 12, 1e-13);
}

}  // namespace

double ball_volume(int d, double radius) {
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  const double half = 0.5 * d;
  return std::pow(std::numbers::pi, half) * std::pow(radius, d) / std::tgamma(half + 1.0);
}

double sphere_area(int d, double radius) { return d * ball_volume(d, 1.0) * std::pow(radius, d - 1); }

double ball_radius_for_volume(int d, double volume) {
  if (!(volume > 0.0)) throw std::invalid_argument("volume must be positive");
  return std::pow(volume / ball_volume(d, 1.0), 1.0 / d);
}

double flux_w(int d, double b, double r) {
  check_args(d, b);
  if (!(r >= 0.0)) throw std::invalid_argument("radius must be >= 0");
  if (r == 0.0) return 0.0;
  if (b == 0.0) return std::pow(r, d) / d;
  const double x = b * r;
  if (d <= 3 && x < 0.5) return std::pow(r, d) * flux_series(d, x);
  switch (d) {
    case 1:
      return std::expm1(x) / b;
    case 2:
      return (std::expm1(x) - x) / (b * b);
    case 3:
      return 2.0 * (std::expm1(x) - x - 0.5 * x * x) / (b * b * b);
    default:
      return flux_quadrature(d, b, r);
  }
}

double radial_slope(int d, double b, double r) {
  check_args(d, b);
  if (r < series_cutoff) {
    // w(s)/s^{d-1} = s/d + b s^2/(d(d+1)) + b^2 s^3/(d(d+1)(d+2)) + ...
    return r * flux_series(d, b * r);
  }
  return flux_w(d, b, r) / std::pow(r, d - 1);
}

double radial_value(int d, double b, double radius, double rho) {
  check_args(d, b);
  if (rho >= radius) return 0.0;
  auto q = [d, b](double s) { return radial_slope(d, b, s); };
  return gauss_kronrod<double, 31>::integrate(q, std::max(rho, 0.0), radius, 12, 1e-13);
}

double RadialSolution::at(double rho) const {
  if (rho >= radius) return 0.0;
  rho = std::max(rho, 0.0);
  const std::size_t n = r.size() - 1;
  const double dr = radius / static_cast<double>(n);
  const std::size_t i = std::min(static_cast<std::size_t>(rho / dr), n - 1);
  const double t = (rho - r[i]) / dr;
  const double d0 = -radial_slope(d, b, r[i]) * dr;
  const double d1 = -radial_slope(d, b, r[i + 1]) * dr;
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * g[i] + (t3 - 2 * t2 + t) * d0 + (-2 * t3 + 3 * t2) * g[i + 1] +
         (t3 - t2) * d1;
}

double RadialSolution::ode_residual() const {
  const std::size_t n = r.size() - 1;
  const double dr = radius / static_cast<double>(n);
  double worst = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    double dw;
    if (i >= 2 && i + 2 <= n) {
      dw = (-w[i + 2] + 8.0 * w[i + 1] - 8.0 * w[i - 1] + w[i - 2]) / (12.0 * dr);
    } else if (i == 1) {
      dw = (-3.0 * w[0] - 10.0 * w[1] + 18.0 * w[2] - 6.0 * w[3] + w[4]) / (12.0 * dr);
    } else {
      dw = (3.0 * w[n] + 10.0 * w[n - 1] - 18.0 * w[n - 2] + 6.0 * w[n - 3] - w[n - 4]) / (12.0 * dr);
    }
    const double rhs = b * w[i] + std::pow(r[i], d - 1);
    worst = std::max(worst, std::abs(dw - rhs) / rhs);
  }
  return worst;
}

RadialSolution solve_radial(int d, double b, double radius, int n) {
  check_args(d, b);
  if (n < 16) throw std::invalid_argument("solve_radial needs at least 16 panels");
  if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
  RadialSolution sol;
  sol.d = d;
  sol.b = b;
  sol.radius = radius;
  sol.r.resize(n + 1);
  sol.g.assign(n + 1, 0.0);
  sol.w.resize(n + 1);
  for (int i = 0; i <= n; ++i) {
    sol.r[i] = radius * i / n;
    sol.w[i] = flux_w(d, b, sol.r[i]);
  }
  sol.r[n] = radius;
  auto q = [d, b](double s) { return radial_slope(d, b, s); };
  for (int i = n - 1; i >= 0; --i) {
    sol.g[i] = sol.g[i + 1] + gauss<double, 10>::integrate(q, sol.r[i], sol.r[i + 1]);
  }
  return sol;
}

BallFlux ball_flux_profile(int d, double b, double volume) {
  const double radius = ball_radius_for_volume(d, volume);
  const double flux = d * ball_volume(d, 1.0) * flux_w(d, b, radius);
  return {flux - volume, flux};
}

double verify_ball_flux_ode(int d, double b, std::span<const double> volumes) {
  if (volumes.size() < 5) throw std::invalid_argument("verify_ball_flux_ode needs at least 5 volumes");
  for (std::size_t i = 1; i < volumes.size(); ++i) {
    if (!(volumes[i] > volumes[i - 1])) {
      throw std::invalid_argument("verify_ball_flux_ode volumes must be strictly increasing");
    }
  }
  double worst = 0.0;
  for (double c : volumes) {
    const double delta = 1e-3 * c;
    const double dh =
        (ball_flux_profile(d, b, c + delta).h - ball_flux_profile(d, b, c - delta).h) / (2 * delta);
    const BallFlux here = ball_flux_profile(d, b, c);
    const double rhs = b * here.flux / sphere_area(d, ball_radius_for_volume(d, c));
    const double scale = rhs > 0.0 ? rhs : 1.0;
    worst = std::max(worst, std::abs(dh - rhs) / scale);
  }
  return worst;
}

double ball_u_max(int d, double b, double volume) {
  return radial_value(d, b, ball_radius_for_volume(d, volume), 0.0);
}

double ball_u_power_integral(int d, double b, double volume, int p) {
  if (p < 0) throw std::invalid_argument("power must be >= 0");
  if (p == 0) return volume;
  const double radius = ball_radius_for_volume(d, volume);
  auto integrand = [&](double r) {
    return std::pow(radial_value(d, b, radius, r), p) * std::pow(r, d - 1);
  };
  const double radial = gauss_kronrod<double, 31>::integrate(integrand, 0.0, radius, 10, 1e-12);
  return d * ball_volume(d, 1.0) * radial;
}

double ball_grad_l1(int d, double b, double volume) {
  const double radius = ball_radius_for_volume(d, volume);
  auto integrand = [d, b](double r) { return flux_w(d, b, r); };
  return d * ball_volume(d, 1.0) *
         gauss_kronrod<double, 31>::integrate(integrand, 0.0, radius, 12, 1e-13);
}

}  // namespace nltorsion
