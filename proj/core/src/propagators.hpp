#pragma once

#include <array>
#include <vector>

namespace alab::detail {

// phi1(z) = (e^z - 1)/z, phi2(z) = (e^z - 1 - z)/z^2
double phi1(double z);
double phi2(double z);

// a' = -lambda a + f0 + (f1 - f0) r/h on [0, h], evaluated at r = s:
// a(s) = e a0 + p1 f0 + p2 (f1 - f0)
struct HeatStep {
  double e = 1.0;
  double p1 = 0.0;
  double p2 = 0.0;
};
HeatStep heat_step(double lambda, double s, double h);

// z = (u, u'), z' = A z + b f with A = [[0, 1], [-n2, -gamma]], b = (0, 1),
// f linear over [0, h]; z(s) = Phi z0 + g0 f0 + g1 (f1 - f0)
struct WaveStep {
  std::array<double, 4> phi{};  // row major
  std::array<double, 2> g0{};
  std::array<double, 2> g1{};
};
WaveStep wave_step(double n2, double gamma, double s, double h);

struct GaussRule {
  std::vector<double> nodes;    // on [0, 1]
  std::vector<double> weights;  // sum to 1
};
const GaussRule& gauss_legendre(int n);

}  // namespace alab::detail
