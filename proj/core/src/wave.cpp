#include <cmath>
#include <numbers>

#include "alab/error.hpp"
#include "alab/solvers.hpp"
#include "propagators.hpp"
#include "solver_common.hpp"

namespace alab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kRule = 8;

void check_wave(const WaveProblem& prob) {
  const auto& b = prob.force.basis();
  if (b.kind != BasisKind::DirichletSine || b.components != 1) {
    fail(ErrorCode::InvalidParameter, "wave force must be a scalar DirichletSine signal");
  }
  if (!(prob.gamma > 0.0)) fail(ErrorCode::InvalidParameter, "gamma must be positive");
  prob.force.validate();
}

double mode_sq(std::size_t i) {
  const double n = static_cast<double>(i + 1);
  return n * n;
}

// Collocation of u^3 on x_j = j pi / J, J = 2M + 1; exact for the cubic.
class CubicCollocation {
 public:
  explicit CubicCollocation(std::size_t M) : M_(M), J_(2 * M + 1), sines_((J_ - 1) * M), values_(J_ - 1) {
    for (std::size_t j = 1; j < J_; ++j) {
      for (std::size_t k = 1; k <= M; ++k) {
        sines_[(j - 1) * M + (k - 1)] =
            std::sin(static_cast<double>(k) * kPi * static_cast<double>(j) / static_cast<double>(J_));
      }
    }
  }

  void evaluate(std::span<const double> u) {
    for (std::size_t j = 0; j + 1 < J_; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < M_; ++k) s += u[k] * sines_[j * M_ + k];
      values_[j] = s;
    }
  }

  // Galerkin coefficients (1/pi) int f(u) sin(kx) dx after evaluate().
  void project_cube(std::span<double> out) const {
    const double scale = 2.0 / static_cast<double>(J_);
    for (std::size_t k = 0; k < M_; ++k) {
      double s = 0.0;
      for (std::size_t j = 0; j + 1 < J_; ++j) s += values_[j] * values_[j] * values_[j] * sines_[j * M_ + k];
      out[k] = scale * s;
    }
  }

  // 2 (F(u), 1) with F(u) = u^4/4, after evaluate().
  double potential() const {
    double s = 0.0;
    for (double v : values_) s += v * v * v * v;
    return kPi / static_cast<double>(J_) * s;
  }

 private:
  std::size_t M_;
  std::size_t J_;
  std::vector<double> sines_;
  std::vector<double> values_;
};

double quad_energy(std::span<const double> z, std::size_t M) {
  double s = 0.0;
  for (std::size_t i = 0; i < M; ++i) s += mode_sq(i) * z[i] * z[i] + z[M + i] * z[M + i];
  return kPi * s;
}

void advance(const detail::WaveStep& w, double u0, double v0, double f0, double d, double& u, double& v) {
  u = w.phi[0] * u0 + w.phi[1] * v0 + w.g0[0] * f0 + w.g1[0] * d;
  v = w.phi[2] * u0 + w.phi[3] * v0 + w.g0[1] * f0 + w.g1[1] * d;
}

}  // namespace

double wave_dt_max(std::size_t modeCount) { return 1.0 / static_cast<double>(modeCount); }

SolveResult wave_solve(const WaveProblem& prob, const std::vector<double>& xi0, double tEnd) {
  check_wave(prob);
  const SpectralSignal& g = prob.force;
  const std::size_t M = g.basis().modeCount;
  if (xi0.size() != 2 * M) fail(ErrorCode::InvalidState, "initial state needs position and velocity blocks");
  const std::size_t steps = detail::steps_until(g, tEnd);
  const double h = g.grid().dt;
  const bool cubic = prob.nonlinearity == WaveNonlinearity::Cubic;
  if (cubic && h > wave_dt_max(M) * (1.0 + 1e-12)) {
    fail(ErrorCode::UnstableStep, "dt exceeds the cubic splitting bound 1/modeCount");
  }
  const bool linear_force = g.reconstruction() == Reconstruction::PiecewiseLinear;

  const auto& rule = detail::gauss_legendre(kRule);
  std::vector<detail::WaveStep> full(M);
  std::vector<detail::WaveStep> nodes(cubic ? 0 : M * kRule);
  for (std::size_t i = 0; i < M; ++i) {
    full[i] = detail::wave_step(mode_sq(i), prob.gamma, h, h);
    if (!cubic) {
      for (int q = 0; q < kRule; ++q) nodes[i * kRule + q] = detail::wave_step(mode_sq(i), prob.gamma, rule.nodes[q] * h, h);
    }
  }

  TimeGrid grid = g.grid();
  grid.count = steps + 1;
  SolveResult res{SpectralSignal(grid, BasisDescriptor::sine(M, 2), Reconstruction::PiecewiseLinear), {}};
  EnergyLedger& L = res.ledger;
  L.identityKind = IdentityKind::WaveE;
  L.times.resize(grid.count);
  L.energyValues.resize(grid.count);
  L.identityResiduals.resize(steps);
  std::copy(xi0.begin(), xi0.end(), res.trajectory.sample(0).begin());

  CubicCollocation colloc(cubic ? M : 1);
  std::vector<double> nl(M, 0.0);
  auto total_energy = [&](std::span<const double> z) {
    double e = quad_energy(z, M);
    if (cubic) {
      colloc.evaluate(z.subspan(0, M));
      e += colloc.potential();
    }
    return e;
  };
  auto dissipation_rate = [&](std::span<const double> z, std::span<const double> f) {
    double s = 0.0;
    for (std::size_t i = 0; i < M; ++i) s += 2.0 * prob.gamma * z[M + i] * z[M + i] - 2.0 * f[i] * z[M + i];
    return kPi * s;
  };
  L.times[0] = grid.time(0);
  L.energyValues[0] = total_energy(res.trajectory.sample(0));

  std::vector<double> delta(M, 0.0), z(2 * M);
  for (std::size_t k = 0; k < steps; ++k) {
    auto z0 = res.trajectory.sample(k);
    auto z1 = res.trajectory.sample(k + 1);
    auto f0 = g.sample(k);
    if (linear_force) {
      auto f1 = g.sample(k + 1);
      for (std::size_t i = 0; i < M; ++i) delta[i] = f1[i] - f0[i];
    }
    double residual_integral = 0.0;
    if (!cubic) {
      for (std::size_t i = 0; i < M; ++i) advance(full[i], z0[i], z0[M + i], f0[i], delta[i], z1[i], z1[M + i]);
      for (int q = 0; q < kRule; ++q) {
        double s = 0.0;
        for (std::size_t i = 0; i < M; ++i) {
          double u = 0.0, v = 0.0;
          advance(nodes[i * kRule + q], z0[i], z0[M + i], f0[i], delta[i], u, v);
          const double f = f0[i] + rule.nodes[q] * delta[i];
          s += 2.0 * prob.gamma * v * v - 2.0 * f * v;
        }
        residual_integral += rule.weights[q] * s;
      }
      residual_integral *= kPi * h;
    } else {
      std::copy(z0.begin(), z0.end(), z.begin());
      colloc.evaluate(std::span<const double>(z).subspan(0, M));
      colloc.project_cube(nl);
      for (std::size_t i = 0; i < M; ++i) z[M + i] -= 0.5 * h * nl[i];
      for (std::size_t i = 0; i < M; ++i) advance(full[i], z[i], z[M + i], f0[i], delta[i], z1[i], z1[M + i]);
      colloc.evaluate(z1.subspan(0, M));
      colloc.project_cube(nl);
      for (std::size_t i = 0; i < M; ++i) z1[M + i] -= 0.5 * h * nl[i];
      std::vector<double> f_end(f0.begin(), f0.end());
      if (linear_force) {
        auto f1 = g.sample(k + 1);
        f_end.assign(f1.begin(), f1.end());
      }
      residual_integral = 0.5 * h * (dissipation_rate(z0, f0) + dissipation_rate(z1, f_end));
    }
    const double e1 = total_energy(z1);
    if (!std::isfinite(e1)) fail(ErrorCode::UnstableStep, "non-finite wave energy");
    double force_sq = 0.0;
    for (std::size_t i = 0; i < M; ++i) {
      const double f = std::max(std::abs(f0[i]), std::abs(f0[i] + delta[i]));
      force_sq += f * f;
    }
    if (std::sqrt(std::max(e1, 0.0)) >
        10.0 * (std::sqrt(std::max(L.energyValues[k], 0.0)) + h * std::sqrt(kPi * force_sq)) + 1e-300) {
      fail(ErrorCode::UnstableStep, "wave energy grew more than tenfold in one step");
    }
    L.times[k + 1] = grid.time(k + 1);
    L.energyValues[k + 1] = e1;
    L.identityResiduals[k] = e1 - L.energyValues[k] + residual_integral;
  }
  return res;
}

std::vector<double> wave_state_at(const WaveProblem& prob, const SpectralSignal& traj, double t) {
  check_wave(prob);
  if (prob.nonlinearity != WaveNonlinearity::None) fail(ErrorCode::InvalidParameter, "sub-step states need a linear problem");
  const SpectralSignal& g = prob.force;
  const std::size_t M = g.basis().modeCount;
  const auto [k, s] = detail::locate(traj.grid(), t);
  auto z0 = traj.sample(k);
  std::vector<double> out(z0.begin(), z0.end());
  if (s < 1e-12 * traj.grid().dt || k + 1 >= g.count()) return out;
  const double h = g.grid().dt;
  const bool linear_force = g.reconstruction() == Reconstruction::PiecewiseLinear;
  auto f0 = g.sample(k);
  for (std::size_t i = 0; i < M; ++i) {
    const auto w = detail::wave_step(mode_sq(i), prob.gamma, s, h);
    const double d = linear_force ? g.sample(k + 1)[i] - f0[i] : 0.0;
    advance(w, z0[i], z0[M + i], f0[i], d, out[i], out[M + i]);
  }
  return out;
}

}  // namespace alab
