#include <algorithm>
#include <cmath>

#include "alab/error.hpp"
#include "alab/solvers.hpp"
#include "solver_common.hpp"

namespace alab {

namespace {

struct LineQuantities {
  double l2 = 0.0;    // ||u||^2
  double grad = 0.0;  // ||u_x||^2, forward differences
  double quartic = 0.0;
};

LineQuantities line_quantities(std::span<const double> u, double dx) {
  LineQuantities q;
  const std::size_t m = u.size();
  for (std::size_t j = 0; j < m; ++j) {
    const double w = (j == 0 || j + 1 == m) ? 0.5 * dx : dx;
    const double u2 = u[j] * u[j];
    q.l2 += w * u2;
    q.quartic += w * u2 * u2;
  }
  for (std::size_t j = 0; j + 1 < m; ++j) {
    const double d = u[j + 1] - u[j];
    q.grad += d * d / dx;
  }
  return q;
}

double line_inner(std::span<const double> a, std::span<const double> b, double dx) {
  const std::size_t m = a.size();
  double s = 0.0;
  for (std::size_t j = 0; j < m; ++j) s += ((j == 0 || j + 1 == m) ? 0.5 * dx : dx) * a[j] * b[j];
  return s;
}

}  // namespace

RDResult rd_solve(const RDProblem& prob, const std::vector<double>& u0, double tEnd) {
  const SpectralSignal& g = prob.force;
  const BasisDescriptor& b = g.basis();
  if (b.kind != BasisKind::TruncatedLineGrid) fail(ErrorCode::InvalidParameter, "reaction-diffusion needs a line grid force");
  if (!(prob.a > 0.0) || !(prob.alpha > 0.0)) fail(ErrorCode::InvalidParameter, "diffusion and damping must be positive");
  g.validate();
  const std::size_t m = b.modeCount;
  if (u0.size() != m) fail(ErrorCode::InvalidState, "initial values must match the grid nodes");
  if (u0.front() != 0.0 || u0.back() != 0.0) fail(ErrorCode::InvalidState, "initial values must vanish at the boundary nodes");

  const std::size_t steps = detail::steps_until(g, tEnd);
  const double h = g.grid().dt;
  const double dx = b.dx();
  const bool cubic = prob.nonlinearity == RDNonlinearity::Cubic;
  const double r = h * prob.a / (dx * dx);
  const double diag = 1.0 + h * prob.alpha + 2.0 * r;

  // Thomas factorization of the constant interior matrix.
  const std::size_t n = m - 2;
  std::vector<double> cprime(n), denom(n);
  for (std::size_t i = 0; i < n; ++i) {
    denom[i] = diag - (i > 0 ? -r * cprime[i - 1] : 0.0);
    cprime[i] = -r / denom[i];
  }

  TimeGrid grid = g.grid();
  grid.count = steps + 1;
  RDResult res{SpectralSignal(grid, b, Reconstruction::PiecewiseLinear), {}, {}};
  EnergyLedger& L = res.ledger;
  L.identityKind = IdentityKind::RDL2;
  L.times.resize(grid.count);
  L.energyValues.resize(grid.count);
  L.identityResiduals.resize(steps);
  std::copy(u0.begin(), u0.end(), res.trajectory.sample(0).begin());

  std::vector<double> rate(grid.count), h1(grid.count), lp(grid.count);
  auto record = [&](std::size_t k) {
    auto u = res.trajectory.sample(k);
    const LineQuantities q = line_quantities(u, dx);
    L.times[k] = grid.time(k);
    L.energyValues[k] = q.l2;
    const double react = cubic ? q.quartic : 0.0;
    rate[k] = prob.alpha * q.l2 + prob.a * q.grad + react - line_inner(g.sample(k), u, dx);
    h1[k] = q.l2 + q.grad;
    lp[k] = cubic ? q.quartic : q.l2;
  };
  record(0);

  std::vector<double> rhs(n);
  for (std::size_t k = 0; k < steps; ++k) {
    auto uk = res.trajectory.sample(k);
    auto fk = g.sample(k);
    double umax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double u = uk[i + 1];
      umax = std::max(umax, std::abs(u));
      rhs[i] = u + h * (fk[i + 1] - (cubic ? u * u * u : 0.0));
    }
    if (cubic && 6.0 * umax * umax * h > 1.0) {
      fail(ErrorCode::UnstableStep, "dt exceeds the explicit reaction bound 1/(2 max|f'|)");
    }
    // Forward sweep, then back substitution.
    for (std::size_t i = 0; i < n; ++i) rhs[i] = (rhs[i] - (i > 0 ? -r * rhs[i - 1] : 0.0)) / denom[i];
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= cprime[i] * rhs[i + 1];
    auto u1 = res.trajectory.sample(k + 1);
    u1[0] = 0.0;
    u1[m - 1] = 0.0;
    std::copy(rhs.begin(), rhs.end(), u1.begin() + 1);
    record(k + 1);
    const double e0 = L.energyValues[k], e1 = L.energyValues[k + 1];
    if (!std::isfinite(e1)) fail(ErrorCode::UnstableStep, "non-finite reaction-diffusion state");
    const double fnorm = std::sqrt(line_inner(fk, fk, dx));
    if (std::sqrt(e1) > 10.0 * (std::sqrt(e0) + h * fnorm) + 1e-300) {
      fail(ErrorCode::UnstableStep, "state norm grew more than tenfold in one step");
    }
    L.identityResiduals[k] = 0.5 * (e1 - e0) + 0.5 * h * (rate[k] + rate[k + 1]);
  }

  RDDissipation& D = res.dissipation;
  D.p = cubic ? 4.0 : 2.0;
  const long long W = std::llround(1.0 / h);
  if (W >= 1) {
    const auto w = static_cast<std::size_t>(W);
    double a1 = 0.0, a2 = 0.0;
    std::vector<double> c1(grid.count, 0.0), c2(grid.count, 0.0);
    for (std::size_t k = 0; k + 1 < grid.count; ++k) {
      a1 += 0.5 * h * (h1[k] + h1[k + 1]);
      a2 += 0.5 * h * (lp[k] + lp[k + 1]);
      c1[k + 1] = a1;
      c2[k + 1] = a2;
    }
    for (std::size_t k = 0; k + w < grid.count; k += w) {
      D.windowStart.push_back(grid.time(k));
      D.stateL2Sq.push_back(L.energyValues[k]);
      D.h1Integral.push_back(c1[k + w] - c1[k]);
      D.lpIntegral.push_back(c2[k + w] - c2[k]);
    }
  }
  return res;
}

}  // namespace alab
