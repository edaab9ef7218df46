#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "alab/error.hpp"
#include "alab/gallery.hpp"
#include "oracles.hpp"

using namespace alab;
using oracle::kPi;

namespace {

ForceSpec spec_of(ForceName n, std::size_t nmax = 16) {
  ForceSpec s;
  s.name = n;
  s.nmax = nmax;
  return s;
}

SpectralSignal generate_default(const ForceSpec& s) {
  const auto d = gallery_defaults(s);
  return generate(s, d.grid, d.basis);
}

}  // namespace

TEST(Gallery, NamesRoundTrip) {
  for (ForceName n : kAllForces) EXPECT_EQ(parse_force_name(to_string(n)), n);
  EXPECT_THROW((void)parse_force_name("Nope"), Error);
}

TEST(HeatPulse, OffPulseIsZeroOnPulseIsN) {
  const auto s = spec_of(ForceName::HeatPulse, 8);
  const TimeGrid grid{0.0, 1.0 / 128.0, TimeGrid::samples_for(10.0, 1.0 / 128.0)};
  for (auto rec : {Reconstruction::PiecewiseConstant, Reconstruction::PiecewiseLinear}) {
    auto sp = s;
    sp.reconstruction = rec;
    const auto g = generate(sp, grid, BasisDescriptor::sine(8));
    const auto on = g.value_at(4.0 + 1.0 / 32.0);
    for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(on[i], i == 3 ? 4.0 : 0.0);
    for (double t : {0.5, 2.5, 3.5, 4.5, 9.5}) {
      for (double v : g.value_at(t)) EXPECT_EQ(v, 0.0) << "t=" << t;
    }
  }
}

TEST(HeatPulse, ResolutionPrecondition) {
  const auto s = spec_of(ForceName::HeatPulse, 8);
  const TimeGrid coarse{0.0, 1.0 / 64.0, 700};
  try {
    (void)generate(s, coarse, BasisDescriptor::sine(8));
    FAIL() << "expected ResolutionTooCoarse";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ResolutionTooCoarse);
  }
  EXPECT_THROW((void)generate(spec_of(ForceName::HeatPulse, 65), coarse, BasisDescriptor::sine(65)), Error);
}

TEST(WaveResonant, WindowStartAndAmplitude) {
  const auto s = spec_of(ForceName::WaveResonant, 4);
  const auto g = generate_default(s);
  const double dt = g.grid().dt;
  const auto k = static_cast<std::size_t>(std::llround(6.0 * kPi / dt));
  EXPECT_NEAR(g.sample(k)[1], 1.0, 1e-12);
  const auto w = norm_weights(g.basis(), SpaceNorm::L2);
  for (std::size_t j = 0; j < g.count(); ++j) {
    const auto c = g.sample(j);
    const double nrm = std::sqrt(weighted_inner(w, c, c));
    const double frac = g.time(j) / (3.0 * kPi);
    // away from block edges the amplitude is 0 or sqrt(pi) up to the cosine value
    int live = 0;
    for (double v : c) live += v != 0.0;
    EXPECT_LE(live, 1);
    if (frac >= 1.0 && frac < 5.0) {
      EXPECT_LE(nrm, std::sqrt(kPi) + 1e-12);
    } else {
      EXPECT_EQ(nrm, 0.0);
    }
  }
}

TEST(WaveResonant, PeakAmplitudeIsSqrtPi) {
  const auto g = generate_default(spec_of(ForceName::WaveResonant, 4));
  const auto n = sample_norms(g, SpaceNorm::L2);
  double peak = 0.0;
  for (double v : n) peak = std::max(peak, v);
  EXPECT_NEAR(peak, std::sqrt(kPi), 1e-12);
}

TEST(TravellingBump, NormIsTranslationInvariant) {
  const auto g = generate_default(spec_of(ForceName::TravellingBump));
  const auto n = sample_norms(g, SpaceNorm::L2Line);
  const double ref = n.front();
  EXPECT_GT(ref, 0.0);
  const double dt = g.grid().dt;
  for (double t = 0.0; t <= 6.0; t += 0.25) {
    EXPECT_NEAR(n[static_cast<std::size_t>(std::llround(t / dt))], ref, 1e-8 * (1.0 + ref)) << "t=" << t;
  }
}

TEST(TravellingBump, ProfileDerivativesMatchFiniteDifferences) {
  const double h = 1e-4;
  for (double x : {-0.9, -0.5, 0.0, 0.3, 0.75}) {
    for (double w : {1.0, 0.5}) {
      const double xs = x * w;
      const double d1 = (bump(xs + h, w) - bump(xs - h, w)) / (2.0 * h);
      const double d2 = (bump(xs + h, w) - 2.0 * bump(xs, w) + bump(xs - h, w)) / (h * h);
      EXPECT_NEAR(bump_d1(xs, w), d1, 1e-6 * (1.0 + std::abs(d1)));
      EXPECT_NEAR(bump_d2(xs, w), d2, 1e-4 * (1.0 + std::abs(d2)));
    }
  }
  EXPECT_EQ(bump(1.0), 0.0);
  EXPECT_EQ(bump(0.0), std::exp(-1.0));
}

TEST(TravellingBump, NeedsLineGrid) {
  const auto s = spec_of(ForceName::TravellingBump);
  EXPECT_THROW((void)generate(s, {0.0, 0.01, 200}, BasisDescriptor::sine(4)), Error);
  EXPECT_THROW((void)generate(s, {0.0, 0.01, 200}, BasisDescriptor::line(4.0, 257)), Error);
}

TEST(RapidOscillation, SampledFormula) {
  const auto g = generate_default(spec_of(ForceName::RapidOscillation));
  for (std::size_t k = 0; k < g.count(); k += 997) {
    const double t = g.time(k);
    EXPECT_EQ(g.sample(k)[0], t > 0.0 ? t * std::sin(std::exp(t)) : 0.0);
  }
}

TEST(HeatOracle, PaperValueAtPulseEnd) {
  for (int n : {1, 2, 3, 8, 16, 32}) {
    const double t = n + 1.0 / (n * n);
    EXPECT_NEAR(heat_mode_oracle(n, t) * n / (1.0 - std::exp(-1.0)), 1.0, 1e-14) << "n=" << n;
    EXPECT_EQ(heat_mode_oracle(n, n - 0.5), 0.0);
    EXPECT_EQ(heat_mode_oracle(n, static_cast<double>(n)), 0.0);
  }
  const double e = std::exp(-1.0);
  EXPECT_NEAR(heat_mode_oracle(2, 2.5), 0.5 * (1.0 - e) * e, 1e-15);
}

TEST(HeatOracle, AgreesWithRk4) {
  for (int n : {1, 2, 5}) {
    const double a = n, lam = a * a, end = a + 1.0 / lam;
    auto rhs = [&](double, double y) { return -lam * y + a; };
    const double onPulse = oracle::rk4(rhs, a, 0.0, end, 20000);
    EXPECT_NEAR(onPulse, heat_mode_oracle(n, end), 1e-12);
    const double after = oracle::rk4([&](double, double y) { return -lam * y; }, end, onPulse, end + 0.7, 20000);
    EXPECT_NEAR(after, heat_mode_oracle(n, end + 0.7), 1e-12);
  }
}

TEST(HeatOracle, SatisfiesOdeBetweenBreakpoints) {
  for (int n : {2, 7}) {
    const double a = n, lam = a * a, end = a + 1.0 / lam, h = 1e-6;
    for (double t : {a + 0.3 / lam, a + 0.8 / lam, end + 0.1, end + 0.4}) {
      const double d = (heat_mode_oracle(n, t + h) - heat_mode_oracle(n, t - h)) / (2.0 * h);
      const double f = t < end ? a : 0.0;
      EXPECT_NEAR(d, -lam * heat_mode_oracle(n, t) + f, 1e-6) << "n=" << n << " t=" << t;
    }
  }
}

TEST(WaveOracle, ZeroDataAtWindowStart) {
  for (int n : {1, 4, 9}) {
    const auto [u, v] = wave_mode_oracle(n, 3.0 * n * kPi);
    EXPECT_NEAR(u, 0.0, 1e-15);
    EXPECT_NEAR(v, 0.0, 1e-15);
  }
  EXPECT_THROW((void)wave_mode_oracle(2, 1.0), Error);
  EXPECT_THROW((void)wave_mode_oracle(2, 9.0 * kPi), Error);
}

TEST(WaveOracle, OdeResidualAtRandomTimes) {
  std::mt19937_64 rng(20261014);
  const double h = 1e-3;
  double worst = 0.0;
  for (int n = 1; n <= 8; ++n) {
    const double t0 = 3.0 * n * kPi;
    std::uniform_real_distribution<double> pick(t0 + 2.0 * h, t0 + 3.0 * kPi - 2.0 * h);
    for (int i = 0; i < 1000 / 8 + 1; ++i) {
      const double t = pick(rng);
      auto v = [&](double s) { return wave_mode_oracle(n, s).second; };
      auto u = [&](double s) { return wave_mode_oracle(n, s).first; };
      // sixth-order central differences
      const double dv = (v(t + 3 * h) - 9 * v(t + 2 * h) + 45 * v(t + h) - 45 * v(t - h) + 9 * v(t - 2 * h) -
                         v(t - 3 * h)) / (60.0 * h);
      const double du = (u(t + 3 * h) - 9 * u(t + 2 * h) + 45 * u(t + h) - 45 * u(t - h) + 9 * u(t - 2 * h) -
                         u(t - 3 * h)) / (60.0 * h);
      EXPECT_NEAR(du, v(t), 1e-9);
      const double res = dv + v(t) + n * n * u(t) - std::cos(n * (t - t0));
      worst = std::max(worst, std::abs(res));
    }
  }
  EXPECT_LE(worst, 1e-9);
}

TEST(WaveOracle, LowerBoundAtProbeTime) {
  EXPECT_NEAR(wave_probe_time(4), kPi * (14.0 + 1.0 / 8.0), 1e-13);
  EXPECT_NEAR(wave_lower_bound(4), 0.25 * (1.0 - 2.0 * std::exp(-kPi) / std::sqrt(3.0)) + 0.0, 0.02);
  for (int n = 1; n <= 16; ++n) {
    const double u = wave_mode_oracle(n, wave_probe_time(n)).first;
    EXPECT_GE(u, wave_lower_bound(n)) << "n=" << n;
    EXPECT_GE(u, (1.0 - 2.0 * std::exp(-kPi) / std::sqrt(3.0)) / n) << "n=" << n;
  }
  EXPECT_GE(wave_mode_oracle(4, wave_probe_time(4)).first, 0.2376);
}
