#include <cmath>
#include <numbers>

#include "alab/error.hpp"
#include "alab/solvers.hpp"
#include "propagators.hpp"

namespace alab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kRule = 8;

// Quantities of X' = -D + F at one instant.
struct Rates {
  double x = 0.0;
  double d = 0.0;
  double f = 0.0;
};

void check_grids(const SpectralSignal& traj, const SpectralSignal& force, IdentityKind kind) {
  const TimeGrid& a = traj.grid();
  const TimeGrid& b = force.grid();
  const double tol = 1e-12 * std::max(1.0, std::abs(b.t0));
  if (std::abs(a.t0 - b.t0) > tol || a.dt != b.dt || a.count > b.count) {
    fail(ErrorCode::GridMismatch, "trajectory and force must share the time grid");
  }
  const BasisDescriptor& tb = traj.basis();
  const BasisDescriptor& fb = force.basis();
  const bool wave = kind == IdentityKind::WaveE || kind == IdentityKind::WaveMultiplier;
  const bool line = kind == IdentityKind::RDL2;
  if (tb.kind != fb.kind || tb.modeCount != fb.modeCount || fb.components != 1 ||
      tb.components != (wave ? 2u : 1u) ||
      (line != (fb.kind == BasisKind::TruncatedLineGrid))) {
    fail(ErrorCode::GridMismatch, "trajectory and force bases are incompatible with the identity");
  }
}

Rates sine_rates(std::span<const double> z, std::span<const double> f, IdentityKind kind, const BalanceParams& p) {
  const std::size_t M = f.size();
  Rates r;
  if (kind == IdentityKind::HeatL2) {
    double l2 = 0.0, h1 = 0.0, gu = 0.0;
    for (std::size_t i = 0; i < M; ++i) {
      const double n2 = static_cast<double>((i + 1) * (i + 1));
      l2 += z[i] * z[i];
      h1 += n2 * z[i] * z[i];
      gu += f[i] * z[i];
    }
    r.x = kPi * l2;
    r.d = 2.0 * kPi * (h1 + p.alpha * l2);
    r.f = 2.0 * kPi * gu;
    return r;
  }
  double uu = 0.0, grad = 0.0, vv = 0.0, uv = 0.0, gv = 0.0, gu = 0.0;
  for (std::size_t i = 0; i < M; ++i) {
    const double n2 = static_cast<double>((i + 1) * (i + 1));
    const double u = z[i], v = z[M + i];
    uu += u * u;
    grad += n2 * u * u;
    vv += v * v;
    uv += u * v;
    gv += f[i] * v;
    gu += f[i] * u;
  }
  const double e = kPi * (grad + vv);
  const double gam = p.gamma;
  if (kind == IdentityKind::WaveE) {
    r.x = e;
    r.d = 2.0 * gam * kPi * vv;
    r.f = 2.0 * kPi * gv;
  } else {
    const double G = -gam * kPi * uv - 0.5 * gam * gam * kPi * uu;
    r.x = e - G;
    r.d = gam * r.x + gam * G;
    r.f = kPi * (2.0 * gv + gam * gu);
  }
  return r;
}

Rates line_rates(std::span<const double> u, std::span<const double> f, double dx, const BalanceParams& p) {
  const std::size_t m = u.size();
  double l2 = 0.0, q4 = 0.0, gu = 0.0, grad = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double w = (j == 0 || j + 1 == m) ? 0.5 * dx : dx;
    l2 += w * u[j] * u[j];
    q4 += w * u[j] * u[j] * u[j] * u[j];
    gu += w * f[j] * u[j];
  }
  for (std::size_t j = 0; j + 1 < m; ++j) grad += (u[j + 1] - u[j]) * (u[j + 1] - u[j]) / dx;
  const double react = p.reaction == RDNonlinearity::Cubic ? q4 : 0.0;
  return {l2, 2.0 * (p.alpha * l2 + p.a * grad + react), 2.0 * gu};
}

}  // namespace

WeightedBalance weighted_energy_balance(const SpectralSignal& traj, const SpectralSignal& force, double N,
                                        IdentityKind kind, const BalanceParams& params) {
  if (!(N > 0.0)) fail(ErrorCode::InvalidParameter, "N must be positive");
  check_grids(traj, force, kind);
  const TimeGrid& grid = traj.grid();
  if (grid.span() < 1.0 * (1.0 - 1e-12)) fail(ErrorCode::SpanTooShort, "trajectory shorter than one unit window");
  const double T = grid.end();
  const double h = grid.dt;
  const std::size_t last = grid.count - 1;
  const bool linear_force = force.reconstruction() == Reconstruction::PiecewiseLinear;

  auto weight = [N](double s) { return std::exp(N * s) * (s + 1.0); };
  auto weight_d = [N](double s) { return std::exp(N * s) * (1.0 + N * (s + 1.0)); };

  WeightedBalance out;
  double dInt = 0.0, xInt = 0.0, fInt = 0.0;
  Rates endRates;

  if (kind == IdentityKind::RDL2) {
    const long long W = grid_steps(1.0, h);
    const double dx = traj.basis().dx();
    const std::size_t k0 = last - static_cast<std::size_t>(W);
    for (std::size_t k = k0; k <= last; ++k) {
      const Rates r = line_rates(traj.sample(k), force.sample(k), dx, params);
      const double s = grid.time(k) - T;
      const double c = (k == k0 || k == last) ? 0.5 * h : h;
      dInt += c * weight(s) * r.d;
      xInt += c * weight_d(s) * r.x;
      fInt += c * weight(s) * r.f;
      if (k == last) endRates = r;
    }
  } else {
    const bool wave = kind != IdentityKind::HeatL2;
    const std::size_t M = force.basis().modeCount;
    const auto& rule = detail::gauss_legendre(kRule);
    const double tStart = T - 1.0;
    const double q0 = (tStart - grid.t0) / h;
    std::size_t k0 = static_cast<std::size_t>(std::max(0.0, std::floor(q0 + 1e-9)));
    std::vector<double> z(traj.width()), f(M), delta(M, 0.0);
    for (std::size_t k = k0; k < last; ++k) {
      const double a = std::max(grid.time(k), tStart);
      const double b = grid.time(k + 1);
      if (b - a <= 1e-14 * h) continue;
      auto z0 = traj.sample(k);
      auto f0 = force.sample(k);
      if (linear_force) {
        auto f1 = force.sample(k + 1);
        for (std::size_t i = 0; i < M; ++i) delta[i] = f1[i] - f0[i];
      }
      for (int q = 0; q < kRule; ++q) {
        const double t = a + rule.nodes[q] * (b - a);
        const double s = t - grid.time(k);
        for (std::size_t i = 0; i < M; ++i) {
          const double n2 = static_cast<double>((i + 1) * (i + 1));
          if (wave) {
            const auto w = detail::wave_step(n2, params.gamma, s, h);
            const double u0 = z0[i], v0 = z0[M + i];
            z[i] = w.phi[0] * u0 + w.phi[1] * v0 + w.g0[0] * f0[i] + w.g1[0] * delta[i];
            z[M + i] = w.phi[2] * u0 + w.phi[3] * v0 + w.g0[1] * f0[i] + w.g1[1] * delta[i];
          } else {
            const auto w = detail::heat_step(n2 + params.alpha, s, h);
            z[i] = w.e * z0[i] + w.p1 * f0[i] + w.p2 * delta[i];
          }
          f[i] = f0[i] + (s / h) * delta[i];
        }
        const Rates r = sine_rates(z, f, kind, params);
        const double c = rule.weights[q] * (b - a);
        const double sr = t - T;
        dInt += c * weight(sr) * r.d;
        xInt += c * weight_d(sr) * r.x;
        fInt += c * weight(sr) * r.f;
      }
    }
    endRates = sine_rates(traj.sample(last), force.sample(last), kind, params);
  }
  out.lhs = endRates.x + dInt;
  out.rhs = xInt + fInt;
  out.forceTerm = fInt;
  out.residual = out.lhs - out.rhs;
  return out;
}

}  // namespace alab
