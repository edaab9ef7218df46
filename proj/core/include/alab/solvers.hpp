#pragma once

#include <iosfwd>
#include <string_view>
#include <vector>

#include "alab/signal.hpp"

namespace alab {

enum class IdentityKind { HeatL2, WaveE, WaveMultiplier, RDL2 };

std::string_view to_string(IdentityKind k);

// energyValues[k] at times[k]; identityResiduals[k] belongs to the step ending at times[k + 1].
struct EnergyLedger {
  std::vector<double> times;
  std::vector<double> energyValues;
  std::vector<double> identityResiduals;
  IdentityKind identityKind = IdentityKind::HeatL2;

  double max_abs_residual() const;
  double sum_abs_residual() const;
};

// CSV `t,energy,residual`; the first row carries residual 0.
void write_ledger(std::ostream& out, const EnergyLedger& ledger);

// u_t + alpha u - u_xx = g on (-pi, pi), Dirichlet, modes n = 1..modeCount of the force basis.
struct HeatProblem {
  SpectralSignal force;
  double alpha = 0.0;
};

struct SolveResult {
  SpectralSignal trajectory;
  EnergyLedger ledger;
};

SolveResult heat_solve(const HeatProblem& prob, const std::vector<double>& u0, double tEnd);

// Exact state at any time between samples of a heat_solve trajectory.
std::vector<double> heat_state_at(const HeatProblem& prob, const SpectralSignal& traj, double t);

enum class WaveNonlinearity { None, Cubic };

// u_tt + gamma u_t - u_xx + f(u) = g, state (u, u_t) stored as two coefficient blocks.
struct WaveProblem {
  SpectralSignal force;
  double gamma = 1.0;
  WaveNonlinearity nonlinearity = WaveNonlinearity::None;
};

// Step bound for the cubic splitting: the fastest retained mode is resolved.
double wave_dt_max(std::size_t modeCount);

SolveResult wave_solve(const WaveProblem& prob, const std::vector<double>& xi0, double tEnd);

// Exact state between samples; linear problems only.
std::vector<double> wave_state_at(const WaveProblem& prob, const SpectralSignal& traj, double t);

enum class RDNonlinearity { None, Cubic };

// u_t = a u_xx - alpha u - f(u) + g on a TruncatedLineGrid; f(u) = u^3 satisfies
// f(u) u >= beta |u|^4 with beta = 1 and f' >= -K with K = 0.
struct RDProblem {
  SpectralSignal force;
  double a = 1.0;
  double alpha = 1.0;
  RDNonlinearity nonlinearity = RDNonlinearity::None;
};

struct RDDissipation {
  double p = 2.0;
  std::vector<double> windowStart;
  std::vector<double> stateL2Sq;   // ||u(t)||^2
  std::vector<double> h1Integral;  // int_t^{t+1} ||u||_{H^1}^2
  std::vector<double> lpIntegral;  // int_t^{t+1} ||u||_{L^p}^p
};

struct RDResult {
  SpectralSignal trajectory;
  EnergyLedger ledger;
  RDDissipation dissipation;
};

RDResult rd_solve(const RDProblem& prob, const std::vector<double>& u0, double tEnd);

struct BalanceParams {
  double alpha = 0.0;  // HeatL2, RDL2
  double gamma = 1.0;  // WaveE, WaveMultiplier
  double a = 1.0;      // RDL2
  RDNonlinearity reaction = RDNonlinearity::None;
};

struct WeightedBalance {
  double residual = 0.0;   // lhs - rhs
  double lhs = 0.0;
  double rhs = 0.0;
  double forceTerm = 0.0;  // the weighted force integral on the right-hand side
};

// e^{Ns} weighted energy identity over the final unit window, s relative to its end.
WeightedBalance weighted_energy_balance(const SpectralSignal& traj, const SpectralSignal& force, double N,
                                        IdentityKind kind, const BalanceParams& params = {});

}  // namespace alab
