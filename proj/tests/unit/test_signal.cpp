#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "alab/error.hpp"
#include "alab/gallery.hpp"
#include "alab/signal.hpp"
#include "oracles.hpp"

using namespace alab;
using oracle::kPi;

namespace {

SpectralSignal smooth(double dt, double span, Reconstruction r = Reconstruction::PiecewiseLinear) {
  return oracle::sampled_signal([](double t) { return std::vector<double>{std::sin(t)}; }, 1, 0.0, dt, span, r);
}

SpectralSignal heat_pulse8() {
  ForceSpec s;
  s.name = ForceName::HeatPulse;
  s.nmax = 8;
  const auto d = gallery_defaults(s);
  return generate(s, d.grid, d.basis);
}

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::ParseError;  // sentinel: nothing thrown
}

}  // namespace

TEST(TimeGrid, ValidatesAndCountsSamples) {
  EXPECT_EQ(TimeGrid::samples_for(1.0, 0.125), 9u);
  EXPECT_EQ(TimeGrid::samples_for(1.0, 0.3), 5u);
  EXPECT_EQ(code_of([] { TimeGrid{0.0, 0.0, 4}.validate(); }), ErrorCode::InvalidParameter);
  EXPECT_EQ(code_of([] { TimeGrid{0.0, 0.1, 1}.validate(); }), ErrorCode::InvalidParameter);
}

TEST(Norms, SineWeightsCarryPi) {
  const auto b = BasisDescriptor::sine(3);
  const auto l2 = norm_weights(b, SpaceNorm::L2);
  const auto h1 = norm_weights(b, SpaceNorm::H1);
  const auto hm = norm_weights(b, SpaceNorm::Hminus1);
  for (int n = 1; n <= 3; ++n) {
    EXPECT_DOUBLE_EQ(l2[n - 1], kPi);
    EXPECT_DOUBLE_EQ(h1[n - 1], kPi * n * n);
    EXPECT_DOUBLE_EQ(hm[n - 1], kPi / (n * n));
  }
  const auto e = norm_weights(BasisDescriptor::sine(2, 2), SpaceNorm::Energy);
  EXPECT_DOUBLE_EQ(e[1], 4.0 * kPi);
  EXPECT_DOUBLE_EQ(e[3], kPi);
}

TEST(Norms, ParsevalMatchesPhysicalQuadrature) {
  const std::vector<double> c = {0.7, -0.2, 0.05, 0.3, -0.11};
  const std::size_t Q = 512;
  double quad = 0.0;
  for (std::size_t j = 0; j < Q; ++j) {
    const double x = -kPi + 2.0 * kPi * static_cast<double>(j) / Q;
    double u = 0.0;
    for (std::size_t n = 0; n < c.size(); ++n) u += c[n] * std::sin(static_cast<double>(n + 1) * x);
    quad += u * u * 2.0 * kPi / Q;
  }
  const auto w = norm_weights(BasisDescriptor::sine(c.size()), SpaceNorm::L2);
  EXPECT_NEAR(weighted_inner(w, c, c) / quad, 1.0, 1e-6);
}

TEST(Lpb, ConstantSineIsSqrtPi) {
  for (auto r : {Reconstruction::PiecewiseConstant, Reconstruction::PiecewiseLinear}) {
    const auto g = oracle::constant_signal({1.0}, 1.0 / 16.0, 5.0, r);
    EXPECT_NEAR(lpb_norm(g, 2.0), std::sqrt(kPi), 1e-14);
  }
}

TEST(Lpb, ZeroSignalAndErrors) {
  EXPECT_EQ(lpb_norm(oracle::constant_signal({0.0, 0.0}, 0.1, 3.0, Reconstruction::PiecewiseLinear), 2.0), 0.0);
  const auto shortSig = oracle::constant_signal({1.0}, 0.125, 0.5, Reconstruction::PiecewiseLinear);
  EXPECT_EQ(code_of([&] { (void)lpb_norm(shortSig, 2.0); }), ErrorCode::SpanTooShort);
  auto bad = oracle::constant_signal({1.0}, 0.125, 2.0, Reconstruction::PiecewiseLinear);
  bad.sample(3)[0] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_EQ(code_of([&] { (void)lpb_norm(bad, 2.0); }), ErrorCode::InvalidSignal);
}

TEST(Lpb, HeatPulseMatchesWindowOracle) {
  // The window [1.25, 2.25] holds three quarters of pulse 1 and all of pulse 2.
  const auto g = heat_pulse8();
  const double v = lpb_norm(g, 2.0);
  EXPECT_NEAR(v, std::sqrt(1.75 * kPi), 1e-12);
  EXPECT_NEAR(v, oracle::lpb_brute(g, 2.0, SpaceNorm::L2), 1e-9);
}

TEST(Lpb, NonQuadraticExponentAgainstAdaptiveQuadrature) {
  const auto g = oracle::sampled_signal(
      [](double t) { return std::vector<double>{std::sin(t), 0.5 * std::cos(2.0 * t)}; }, 2, 0.0, 1.0 / 32.0, 4.0,
      Reconstruction::PiecewiseLinear);
  for (double p : {1.5, 3.0}) {
    EXPECT_NEAR(lpb_norm(g, p), oracle::lpb_brute(g, p, SpaceNorm::L2), 1e-6) << "p=" << p;
  }
}

TEST(Lpb, ScalesExactly) {
  const auto g = smooth(1.0 / 64.0, 6.0);
  auto g2 = g;
  for (double& x : g2.data()) x *= -2.0;
  EXPECT_EQ(lpb_norm(g2, 2.0), 2.0 * lpb_norm(g, 2.0));
  const std::vector<double> taus = {1.0 / 32.0, 0.25};
  const auto w1 = modulus_of_continuity(g, 2.0, taus);
  const auto w2 = modulus_of_continuity(g2, 2.0, taus);
  const auto n1 = normality_modulus(g, 2.0, taus);
  const auto n2 = normality_modulus(g2, 2.0, taus);
  for (std::size_t i = 0; i < taus.size(); ++i) {
    EXPECT_EQ(w2.values[i], 4.0 * w1.values[i]);
    EXPECT_EQ(n2.values[i], 4.0 * n1.values[i]);
  }
}

TEST(Continuity, ConstantSignalHasZeroModulus) {
  const auto g = oracle::constant_signal({1.0, 2.0}, 1.0 / 16.0, 4.0, Reconstruction::PiecewiseLinear);
  const auto c = modulus_of_continuity(g, 2.0, {0.125, 0.5, 1.0});
  for (double v : c.values) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(c.kind, CurveKind::Continuity);
}

TEST(Continuity, SineInTimeMatchesClosedForm) {
  const double dt = 1.0 / 256.0;
  const auto g = smooth(dt, 20.0);
  const std::vector<double> taus = {1.0 / 128.0, 1.0 / 16.0, 0.25, 1.0};
  const auto c = modulus_of_continuity(g, 2.0, taus);
  for (std::size_t i = 0; i < taus.size(); ++i) {
    const double tau = taus[i];
    const double s = std::sin(0.5 * tau);
    const double exact = 2.0 * kPi * s * s * (1.0 + std::sin(1.0));
    EXPECT_NEAR(c.values[i] / exact, 1.0, 1e-4) << "tau=" << tau;
    EXPECT_LE(c.values[i], kPi * tau * tau * (1.0 + 1e-6));
  }
}

TEST(Continuity, MisalignedOffsetRejected) {
  const auto g = smooth(1.0 / 16.0, 4.0);
  EXPECT_EQ(code_of([&] { (void)modulus_of_continuity(g, 2.0, {0.1}); }), ErrorCode::MisalignedOffset);
  EXPECT_EQ(code_of([&] { (void)normality_modulus(g, 2.0, {0.03}); }), ErrorCode::MisalignedOffset);
}

TEST(Continuity, WaveForceKeepsOrderOneModulus) {
  ForceSpec s;
  s.name = ForceName::WaveResonant;
  const auto d = gallery_defaults(s);
  const auto g = generate(s, d.grid, d.basis);
  const double dt = g.grid().dt;
  const auto c = modulus_of_continuity(g, 2.0, {2.0 * dt, 4.0 * dt, 8.0 * dt});
  // In the n = 16 block, cos(16(s + tau)) - cos(16 s) carries mass pi (1 - cos(16 tau)) per unit time.
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double tau = c.taus[i];
    EXPECT_GE(c.values[i], 0.9 * kPi * (1.0 - std::cos(16.0 * tau))) << "tau=" << tau;
  }
  EXPECT_GT(c.values.front(), 0.1);
}

TEST(Normality, HeatPulseFullPulseFits) {
  // Pulse 8 fits whole once tau >= 1/64; past tau = 1/4 pulse 2 picks up the tail of pulse 1.
  const auto g = heat_pulse8();
  const auto c = normality_modulus(g, 2.0, {1.0 / 64.0, 1.0 / 32.0, 0.125, 0.25, 0.5});
  for (std::size_t i = 0; i + 1 < c.size(); ++i) EXPECT_NEAR(c.values[i], kPi, 1e-12);
  EXPECT_NEAR(c.values.back(), 1.25 * kPi, 1e-12);
}

TEST(Normality, AmplitudeBoundAndMonotone) {
  const auto g = oracle::sampled_signal(
      [](double t) { return std::vector<double>{std::sin(3.0 * t), 0.5 * std::cos(t)}; }, 2, 0.0, 1.0 / 64.0, 8.0,
      Reconstruction::PiecewiseLinear);
  const double A2 = kPi * (1.0 + 0.25);
  std::vector<double> taus;
  for (double t = 1.0 / 32.0; t <= 1.0; t *= 2.0) taus.push_back(t);
  const auto c = normality_modulus(g, 2.0, taus);
  for (std::size_t i = 0; i < c.size(); ++i) {
    EXPECT_LE(c.values[i], A2 * taus[i] * (1.0 + 1e-12));
    if (i > 0) {
      EXPECT_GE(c.values[i], c.values[i - 1]);
    }
  }
  const auto z = normality_modulus(oracle::constant_signal({0.0}, 1.0 / 8.0, 3.0, Reconstruction::PiecewiseConstant), 2.0,
                                   {0.25, 0.5});
  for (double v : z.values) EXPECT_EQ(v, 0.0);
}

TEST(ExpKernel, ConstantPowerClosedForm) {
  for (auto r : {Reconstruction::PiecewiseConstant, Reconstruction::PiecewiseLinear}) {
    const auto g = oracle::constant_signal({0.5}, 1.0 / 32.0, 4.0, r);
    const double c = kPi * 0.25;
    const double tol = r == Reconstruction::PiecewiseConstant ? 1e-13 : 1e-8;
    for (double N : {0.5, 3.0, 40.0}) {
      const double exact = c * (1.0 - std::exp(-N)) / N;
      EXPECT_NEAR(exp_kernel_tail(g, 2.0, N) / exact, 1.0, tol) << "N=" << N;
    }
  }
}

TEST(ExpKernel, MonotoneZeroAndErrors) {
  const auto g = smooth(1.0 / 64.0, 6.0);
  double prev = INFINITY;
  for (double N : {1.0, 2.0, 8.0, 32.0, 128.0}) {
    const double v = exp_kernel_tail(g, 2.0, N);
    EXPECT_LE(v, prev);
    prev = v;
  }
  EXPECT_EQ(exp_kernel_tail(oracle::constant_signal({0.0}, 0.125, 3.0, Reconstruction::PiecewiseLinear), 2.0, 5.0), 0.0);
  EXPECT_EQ(code_of([&] { (void)exp_kernel_tail(g, 2.0, 0.0); }), ErrorCode::InvalidParameter);
}

TEST(ExpKernel, SplitIntegralBound) {
  const auto g = smooth(1.0 / 256.0, 8.0);
  const double lpbp = std::pow(lpb_norm(g, 2.0), 2.0);
  for (double N : {16.0, 64.0, 256.0}) {
    const double tau = 1.0 / std::sqrt(N);
    const double nu = normality_modulus(g, 2.0, {tau}).values[0];
    EXPECT_LE(exp_kernel_tail(g, 2.0, N), nu + std::exp(-std::sqrt(N)) * lpbp) << "N=" << N;
  }
}

TEST(Shift, GroupIdentityAndRestriction) {
  const auto g = smooth(1.0 / 32.0, 6.0);
  const auto back = shift(shift(g, 0.5), -0.5);
  EXPECT_DOUBLE_EQ(back.grid().t0, 0.5);
  for (std::size_t k = 0; k < back.count(); ++k) {
    const std::size_t j = k + 16;
    EXPECT_EQ(back.sample(k)[0], g.sample(j)[0]);
  }
  EXPECT_LE(lpb_norm(shift(g, 1.0), 2.0), lpb_norm(g, 2.0));
  EXPECT_EQ(code_of([&] { (void)shift(g, 0.01); }), ErrorCode::MisalignedOffset);
}

TEST(Shift, PeriodicSignalIsInvariant) {
  const auto g = oracle::sampled_signal([](double t) { return std::vector<double>{std::sin(2.0 * kPi * t)}; }, 1, 0.0,
                                        1.0 / 64.0, 4.0, Reconstruction::PiecewiseLinear);
  const auto s = shift(g, 1.0);
  for (std::size_t k = 0; k < s.count(); ++k) EXPECT_NEAR(s.sample(k)[0], g.sample(k)[0], 1e-12);
}

TEST(Shift, WindowIntegralsShiftExactly) {
  const auto g = heat_pulse8();
  const double s = 0.75;
  const auto sg = shift(g, s);
  for (double t : {0.0, 1.0, 1.5, 3.25}) {
    EXPECT_EQ(unit_window_integral(sg, 2.0, t), unit_window_integral(g, 2.0, t + s)) << "t=" << t;
  }
}

TEST(Signal, ValueAtReconstructs) {
  const auto g = oracle::sampled_signal([](double t) { return std::vector<double>{t}; }, 1, 0.0, 0.25, 2.0,
                                        Reconstruction::PiecewiseLinear);
  EXPECT_NEAR(g.value_at(0.6)[0], 0.6, 1e-15);
  const auto p = oracle::sampled_signal([](double t) { return std::vector<double>{t}; }, 1, 0.0, 0.25, 2.0,
                                        Reconstruction::PiecewiseConstant);
  EXPECT_EQ(p.value_at(0.6)[0], 0.5);
  EXPECT_EQ(code_of([&] { (void)g.value_at(3.0); }), ErrorCode::OutOfWindow);
}

TEST(Signal, DeterministicRepeatedEvaluation) {
  const auto g = heat_pulse8();
  EXPECT_EQ(lpb_norm(g, 3.0), lpb_norm(g, 3.0));
  const auto a = unit_window_integrals(g, 2.0);
  const auto b = unit_window_integrals(g, 2.0);
  EXPECT_EQ(a, b);
}
