#include <vector>

#include <benchmark/benchmark.h>

#include "alab/classes.hpp"
#include "alab/compactness.hpp"
#include "alab/gallery.hpp"
#include "alab/signal.hpp"
#include "alab/solvers.hpp"

namespace {

alab::SpectralSignal gallery(alab::ForceName n, std::size_t nmax = 16) {
  alab::ForceSpec s;
  s.name = n;
  s.nmax = nmax;
  const auto d = alab::gallery_defaults(s);
  return alab::generate(s, d.grid, d.basis);
}

void BM_LpbNorm(benchmark::State& st) {
  const auto g = gallery(alab::ForceName::HeatPulse, static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(alab::lpb_norm(g, 2.0));
  st.SetItemsProcessed(static_cast<long>(st.iterations() * g.count()));
}
BENCHMARK(BM_LpbNorm)->Arg(8)->Arg(16)->Arg(32);

void BM_NormalityModulus(benchmark::State& st) {
  const auto g = gallery(alab::ForceName::SmoothReference);
  const auto taus = alab::tau_ladder(g.grid());
  for (auto _ : st) benchmark::DoNotOptimize(alab::normality_modulus(g, 2.0, taus));
}
BENCHMARK(BM_NormalityModulus);

void BM_HeatSolve(benchmark::State& st) {
  const auto nmax = static_cast<std::size_t>(st.range(0));
  const auto g = gallery(alab::ForceName::HeatPulse, nmax);
  for (auto _ : st) {
    auto r = alab::heat_solve({g, 0.0}, std::vector<double>(nmax, 0.0), g.grid().end());
    benchmark::DoNotOptimize(r.trajectory.data().data());
  }
  st.SetItemsProcessed(static_cast<long>(st.iterations() * g.count()));
}
BENCHMARK(BM_HeatSolve)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_WaveSolveCubic(benchmark::State& st) {
  const std::size_t M = 16;
  const double dt = 1.0 / 64.0;
  alab::SpectralSignal f({0.0, dt, alab::TimeGrid::samples_for(4.0, dt)}, alab::BasisDescriptor::sine(M),
                         alab::Reconstruction::PiecewiseLinear);
  std::vector<double> xi(2 * M, 0.0);
  xi[0] = 0.5;
  for (auto _ : st) {
    auto r = alab::wave_solve({f, 1.0, alab::WaveNonlinearity::Cubic}, xi, 4.0);
    benchmark::DoNotOptimize(r.trajectory.data().data());
  }
}
BENCHMARK(BM_WaveSolveCubic)->Unit(benchmark::kMillisecond);

void BM_RdSolve(benchmark::State& st) {
  alab::ForceSpec s;
  s.name = alab::ForceName::TravellingBump;
  const auto nodes = static_cast<std::size_t>(st.range(0));
  const double dt = 1.0 / 512.0;
  const auto f = alab::generate(s, {0.0, dt, alab::TimeGrid::samples_for(2.0, dt)}, alab::BasisDescriptor::line(8.0, nodes));
  std::vector<double> u0(nodes, 0.0);
  for (std::size_t j = 1; j + 1 < nodes; ++j) u0[j] = alab::bump(f.basis().node(j));
  for (auto _ : st) {
    auto r = alab::rd_solve({f, 1.0, 1.0, alab::RDNonlinearity::Cubic}, u0, 2.0);
    benchmark::DoNotOptimize(r.trajectory.data().data());
  }
}
BENCHMARK(BM_RdSolve)->Arg(257)->Arg(1025)->Unit(benchmark::kMillisecond);

void BM_Classify(benchmark::State& st) {
  const auto g = gallery(alab::ForceName::WaveResonant);
  for (auto _ : st) benchmark::DoNotOptimize(alab::classify(g, 2.0).lpb);
}
BENCHMARK(BM_Classify)->Unit(benchmark::kMillisecond);

void BM_CompactnessVerdict(benchmark::State& st) {
  const auto g = gallery(alab::ForceName::HeatPulse);
  const auto r = alab::heat_solve({g, 0.0}, std::vector<double>(16, 0.0), g.grid().end());
  const auto cloud = alab::TrajectoryCloud::from_signal(r.trajectory, alab::NormKind::H1, 64);
  for (auto _ : st) benchmark::DoNotOptimize(alab::verdict(cloud).verdict);
}
BENCHMARK(BM_CompactnessVerdict)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
