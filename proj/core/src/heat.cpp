#include <cmath>
#include <numbers>
#include <ostream>

#include "alab/error.hpp"
#include "alab/signal_io.hpp"
#include "alab/solvers.hpp"
#include "propagators.hpp"
#include "solver_common.hpp"

namespace alab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kRule = 8;

void check_heat(const HeatProblem& prob) {
  const auto& b = prob.force.basis();
  if (b.kind != BasisKind::DirichletSine || b.components != 1) {
    fail(ErrorCode::InvalidParameter, "heat force must be a scalar DirichletSine signal");
  }
  if (!(prob.alpha >= 0.0)) fail(ErrorCode::InvalidParameter, "alpha must be >= 0");
  prob.force.validate();
}

double eigenvalue(std::size_t i, double alpha) {
  const double n = static_cast<double>(i + 1);
  return n * n + alpha;
}

}  // namespace

std::string_view to_string(IdentityKind k) {
  switch (k) {
    case IdentityKind::HeatL2: return "HeatL2";
    case IdentityKind::WaveE: return "WaveE";
    case IdentityKind::WaveMultiplier: return "WaveMultiplier";
    case IdentityKind::RDL2: return "RDL2";
  }
  return "";
}

double EnergyLedger::max_abs_residual() const {
  double m = 0.0;
  for (double r : identityResiduals) m = std::max(m, std::abs(r));
  return m;
}

double EnergyLedger::sum_abs_residual() const {
  double s = 0.0;
  for (double r : identityResiduals) s += std::abs(r);
  return s;
}

void write_ledger(std::ostream& out, const EnergyLedger& ledger) {
  out << "t,energy,residual\n";
  for (std::size_t k = 0; k < ledger.times.size(); ++k) {
    const double r = k == 0 ? 0.0 : ledger.identityResiduals[k - 1];
    out << format_real(ledger.times[k]) << ',' << format_real(ledger.energyValues[k]) << ',' << format_real(r) << '\n';
  }
}

SolveResult heat_solve(const HeatProblem& prob, const std::vector<double>& u0, double tEnd) {
  check_heat(prob);
  const SpectralSignal& g = prob.force;
  const std::size_t M = g.basis().modeCount;
  if (u0.size() != M) fail(ErrorCode::InvalidState, "initial data has the wrong dimension");
  const std::size_t steps = detail::steps_until(g, tEnd);
  const double h = g.grid().dt;
  const bool linear = g.reconstruction() == Reconstruction::PiecewiseLinear;

  const auto& rule = detail::gauss_legendre(kRule);
  std::vector<detail::HeatStep> full(M);
  std::vector<detail::HeatStep> nodes(M * kRule);
  std::vector<double> lambda(M);
  for (std::size_t i = 0; i < M; ++i) {
    lambda[i] = eigenvalue(i, prob.alpha);
    full[i] = detail::heat_step(lambda[i], h, h);
    for (int q = 0; q < kRule; ++q) nodes[i * kRule + q] = detail::heat_step(lambda[i], rule.nodes[q] * h, h);
  }

  TimeGrid grid = g.grid();
  grid.count = steps + 1;
  SolveResult res{SpectralSignal(grid, g.basis(), Reconstruction::PiecewiseLinear), {}};
  res.ledger.identityKind = IdentityKind::HeatL2;
  res.ledger.times.resize(grid.count);
  res.ledger.energyValues.resize(grid.count);
  res.ledger.identityResiduals.resize(steps);
  std::copy(u0.begin(), u0.end(), res.trajectory.sample(0).begin());

  auto energy = [&](std::span<const double> a) {
    double s = 0.0;
    for (double x : a) s += x * x;
    return kPi * s;
  };
  res.ledger.times[0] = grid.time(0);
  res.ledger.energyValues[0] = energy(res.trajectory.sample(0));

  std::vector<double> delta(M, 0.0);
  for (std::size_t k = 0; k < steps; ++k) {
    auto a0 = res.trajectory.sample(k);
    auto a1 = res.trajectory.sample(k + 1);
    auto f0 = g.sample(k);
    if (linear) {
      auto f1 = g.sample(k + 1);
      for (std::size_t i = 0; i < M; ++i) delta[i] = f1[i] - f0[i];
    }
    for (std::size_t i = 0; i < M; ++i) a1[i] = full[i].e * a0[i] + full[i].p1 * f0[i] + full[i].p2 * delta[i];

    double integral = 0.0;
    for (int q = 0; q < kRule; ++q) {
      double s = 0.0;
      for (std::size_t i = 0; i < M; ++i) {
        const auto& st = nodes[i * kRule + q];
        const double a = st.e * a0[i] + st.p1 * f0[i] + st.p2 * delta[i];
        const double f = f0[i] + rule.nodes[q] * delta[i];
        s += lambda[i] * a * a - f * a;
      }
      integral += rule.weights[q] * s;
    }
    const double e1 = energy(a1);
    res.ledger.times[k + 1] = grid.time(k + 1);
    res.ledger.energyValues[k + 1] = e1;
    res.ledger.identityResiduals[k] = 0.5 * (e1 - res.ledger.energyValues[k]) + h * kPi * integral;
  }
  return res;
}

std::vector<double> heat_state_at(const HeatProblem& prob, const SpectralSignal& traj, double t) {
  check_heat(prob);
  const SpectralSignal& g = prob.force;
  const auto [k, s] = detail::locate(traj.grid(), t);
  auto a0 = traj.sample(k);
  std::vector<double> out(a0.begin(), a0.end());
  if (s < 1e-12 * traj.grid().dt || k + 1 >= g.count()) return out;
  const double h = g.grid().dt;
  const bool linear = g.reconstruction() == Reconstruction::PiecewiseLinear;
  auto f0 = g.sample(k);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto st = detail::heat_step(eigenvalue(i, prob.alpha), s, h);
    const double d = linear ? g.sample(k + 1)[i] - f0[i] : 0.0;
    out[i] = st.e * a0[i] + st.p1 * f0[i] + st.p2 * d;
  }
  return out;
}

}  // namespace alab
