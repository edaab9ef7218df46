#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "alab/signal.hpp"

namespace alab {

enum class NormKind { L2, H1, EnergyE, L2Line };

std::string_view to_string(NormKind k);

struct TrajectoryCloud {
  BasisDescriptor basis;
  std::vector<std::vector<double>> snapshots;
  std::vector<double> times;
  NormKind normKind = NormKind::L2;

  std::size_t size() const { return snapshots.size(); }
  void validate() const;

  // Every `stride`-th sample of a trajectory, starting at sample `first`.
  static TrajectoryCloud from_signal(const SpectralSignal& traj, NormKind kind, std::size_t stride = 1,
                                     std::size_t first = 0);
};

double cloud_distance(const TrajectoryCloud& cloud, std::size_t i, std::size_t j);
double cloud_norm(const TrajectoryCloud& cloud, std::size_t i);

// T(M): largest norm energy carried by modes above M.
ModulusCurve tail_modulus(const TrajectoryCloud& cloud, const std::vector<std::size_t>& Ms);

// Size of a greedy eps-net, snapshots visited in order.
std::size_t epsilon_entropy(const TrajectoryCloud& cloud, double eps);

struct NormGap {
  double gap = 0.0;
  double limsupNorm = 0.0;
  double candidateNorm = 0.0;
  double stability = 0.0;  // ||avg(last quarter) - avg(third quarter)||
  std::vector<double> candidate;
};

NormGap norm_gap_detail(const TrajectoryCloud& cloud);
double norm_gap(const TrajectoryCloud& cloud);

// R -> largest ||u||_{L2(|x| > R)} over the snapshots; line grids only.
ModulusCurve spatial_tail(const TrajectoryCloud& cloud, const std::vector<double>& Rs);

enum class CompactnessVerdict { CompactConsistent, NonCompactWitness, Inconclusive };

std::string_view to_string(CompactnessVerdict v);

struct CompactnessThresholds {
  double decayFactor = 1e-3;       // decay = decayFactor * max snapshot energy
  double gapFactor = 1e-3;         // gap and stability limits relative to the max snapshot norm
  double plateauTolerance = 0.05;  // relative spread over the last three curve points
  double floorFactor = 10.0;       // plateau must stay above floorFactor * decay
  std::optional<std::vector<std::size_t>> Ms;
  std::optional<std::vector<double>> epsilons;
  std::optional<std::vector<double>> Rs;
};

inline constexpr std::string_view kFiniteCloudLimitation =
    "A finite snapshot cloud is only a witness: asymptotic compactness quantifies over all bounded "
    "sequences and all hull forces, which no finite computation covers.";

struct CompactnessReport {
  ModulusCurve tailCurve;
  std::optional<ModulusCurve> spatialCurve;
  std::vector<std::pair<double, std::size_t>> entropyCounts;
  NormGap normGap;
  double decay = 0.0;
  double gapThreshold = 0.0;
  bool stable = true;
  std::optional<double> plateau;
  std::optional<std::pair<std::size_t, std::size_t>> witness;
  double witnessDistance = 0.0;
  CompactnessVerdict verdict = CompactnessVerdict::Inconclusive;
  std::string note;
  std::string limitation{kFiniteCloudLimitation};
};

CompactnessReport verdict(const TrajectoryCloud& cloud, const CompactnessThresholds& thresholds = {});

void write_report(std::ostream& out, const CompactnessReport& report);
void write_tail_csv(std::ostream& out, const CompactnessReport& report);
void write_entropy_csv(std::ostream& out, const CompactnessReport& report);

}  // namespace alab
