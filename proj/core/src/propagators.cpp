#include "propagators.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

namespace alab::detail {

double phi1(double z) {
  if (std::abs(z) < 0.5) {
    double term = 1.0, sum = 1.0;
    for (int k = 2; k < 24; ++k) {
      term *= z / k;
      sum += term;
    }
    return sum;
  }
  return std::expm1(z) / z;
}

double phi2(double z) {
  if (std::abs(z) < 0.5) {
    double term = 0.5, sum = 0.5;
    for (int k = 3; k < 26; ++k) {
      term *= z / k;
      sum += term;
    }
    return sum;
  }
  return (std::expm1(z) - z) / (z * z);
}

HeatStep heat_step(double lambda, double s, double h) {
  const double z = -lambda * s;
  return {std::exp(z), s * phi1(z), s * s / h * phi2(z)};
}

WaveStep wave_step(double n2, double gamma, double s, double h) {
  Eigen::Matrix4d M = Eigen::Matrix4d::Zero();
  M(0, 1) = s;
  M(1, 0) = -n2 * s;
  M(1, 1) = -gamma * s;
  M(1, 2) = s;
  M(2, 3) = 1.0;
  const Eigen::Matrix4d E = M.exp();
  WaveStep w;
  w.phi = {E(0, 0), E(0, 1), E(1, 0), E(1, 1)};
  w.g0 = {E(0, 2), E(1, 2)};
  const double scale = s / h;
  w.g1 = {E(0, 3) * scale, E(1, 3) * scale};
  return w;
}

namespace {

GaussRule build_rule(int n) {
  GaussRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    r.nodes[n - 1 - i] = 0.5 * (1.0 + x);
    r.weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, GaussRule> rules;
  std::lock_guard<std::mutex> lock(mu);
  auto it = rules.find(n);
  if (it == rules.end()) it = rules.emplace(n, build_rule(n)).first;
  return it->second;
}

}  // namespace alab::detail
