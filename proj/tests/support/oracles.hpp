#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "alab/signal.hpp"

namespace alab::oracle {

inline constexpr double kPi = std::numbers::pi;

// ||g(t)||^p from the public reconstruction, weights from the norm.
inline double pointwise_power(const SpectralSignal& g, double t, double p, const std::vector<double>& w) {
  const auto v = g.value_at(t);
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += w[i] * v[i] * v[i];
  return std::pow(s, 0.5 * p);
}

// Adaptive Gauss-Kronrod over every sampling interval met by [a, b].
inline double integrate_power(const SpectralSignal& g, double p, double a, double b, SpaceNorm norm) {
  const auto w = norm_weights(g.basis(), norm);
  const double dt = g.grid().dt;
  const double t0 = g.grid().t0;
  double total = 0.0;
  double lo = a;
  while (lo < b - 1e-14) {
    const double k = std::floor((lo - t0) / dt + 1e-9);
    const double hi = std::min(b, t0 + (k + 1.0) * dt);
    const double mid = 0.5 * (lo + hi);
    const SpectralSignal& sig = g;
    // piecewise-constant cells are evaluated at their midpoint to stay inside the cell
    auto f = [&](double t) {
      return g.reconstruction() == Reconstruction::PiecewiseConstant ? pointwise_power(sig, mid, p, w)
                                                                     : pointwise_power(sig, t, p, w);
    };
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, lo, hi, 5, 1e-13);
    lo = hi;
  }
  return total;
}

// Brute-force sup over grid-aligned unit windows.
inline double lpb_brute(const SpectralSignal& g, double p, SpaceNorm norm) {
  const auto& grid = g.grid();
  double best = 0.0;
  for (std::size_t k = 0; grid.time(k) + 1.0 <= grid.end() + 1e-12; ++k) {
    best = std::max(best, integrate_power(g, p, grid.time(k), grid.time(k) + 1.0, norm));
  }
  return std::pow(best, 1.0 / p);
}

// Classical RK4 for a scalar ODE y' = f(t, y).
inline double rk4(const std::function<double(double, double)>& f, double t0, double y0, double t1, std::size_t steps) {
  const double h = (t1 - t0) / static_cast<double>(steps);
  double y = y0, t = t0;
  for (std::size_t i = 0; i < steps; ++i) {
    const double k1 = f(t, y);
    const double k2 = f(t + 0.5 * h, y + 0.5 * h * k1);
    const double k3 = f(t + 0.5 * h, y + 0.5 * h * k2);
    const double k4 = f(t + h, y + h * k3);
    y += h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
    t += h;
  }
  return y;
}

inline SpectralSignal constant_signal(const std::vector<double>& c, double dt, double span, Reconstruction r) {
  TimeGrid grid{0.0, dt, TimeGrid::samples_for(span, dt)};
  SpectralSignal g(grid, BasisDescriptor::sine(c.size()), r);
  for (std::size_t k = 0; k < grid.count; ++k) std::copy(c.begin(), c.end(), g.sample(k).begin());
  return g;
}

// Coefficients fn(t) on mode 1..M sampled on a uniform grid.
inline SpectralSignal sampled_signal(const std::function<std::vector<double>(double)>& fn, std::size_t M, double t0,
                                     double dt, double span, Reconstruction r) {
  TimeGrid grid{t0, dt, TimeGrid::samples_for(span, dt)};
  SpectralSignal g(grid, BasisDescriptor::sine(M), r);
  for (std::size_t k = 0; k < grid.count; ++k) {
    const auto v = fn(grid.time(k));
    std::copy(v.begin(), v.end(), g.sample(k).begin());
  }
  return g;
}

}  // namespace alab::oracle
