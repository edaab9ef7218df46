#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "alab/signal.hpp"

namespace alab {

// Bump c*exp(-1/(z(1-z))) on (0, 1) with unit integral.
double mollifier(double z);

SpectralSignal mollify(const SpectralSignal& g, double eps);
SpectralSignal time_average(const SpectralSignal& g, double h);
SpectralSignal truncate_amplitude(const SpectralSignal& g, double N, std::optional<SpaceNorm> norm = {});
SpectralSignal project_finite_rank(const SpectralSignal& g, std::size_t M);

enum class Verdict { Yes, No, Inconclusive };

enum class ForceClass {
  TranslationBounded,
  TimeRegular,
  SpaceRegular,
  Normal,
  StronglyNormal,
  WeaklyNormal,
  TranslationCompact,
};

inline constexpr std::size_t kClassCount = 7;
inline constexpr std::array<ForceClass, kClassCount> kAllClasses = {
    ForceClass::TranslationBounded, ForceClass::TimeRegular,    ForceClass::SpaceRegular,
    ForceClass::Normal,             ForceClass::StronglyNormal, ForceClass::WeaklyNormal,
    ForceClass::TranslationCompact};

std::string_view to_string(Verdict v);
std::string_view to_string(ForceClass c);

struct ClassThresholds {
  double decayFactor = 1e-3;   // decay = decayFactor * lpb_norm^p
  double growthFactor = 10.0;  // translation-bounded window growth limit
  double floorFactor = 10.0;   // "no" needs the limit value above floorFactor * decay
  double retention = 0.1;      // ... and above retention * curve maximum
  std::optional<SpaceNorm> norm;
};

struct ClassEvidence {
  Verdict holds = Verdict::Inconclusive;
  Verdict measured = Verdict::Inconclusive;
  ModulusCurve curve;
  double limitValue = 0.0;
  double threshold = 0.0;
  std::string rule;
  std::string note;
};

struct ClassReport {
  double p = 2.0;
  double lpb = 0.0;
  double decay = 0.0;
  ClassThresholds thresholds;
  std::array<ClassEvidence, kClassCount> classes;
  // Spatial tail R -> ||g||_{L^p_b(|x|>R)}^p, line grids only.
  std::optional<ClassEvidence> uniformTail;
  std::vector<std::string> conflicts;

  const ClassEvidence& at(ForceClass c) const { return classes[static_cast<std::size_t>(c)]; }
  ClassEvidence& at(ForceClass c) { return classes[static_cast<std::size_t>(c)]; }
  Verdict verdict(ForceClass c) const { return at(c).holds; }
};

// Decision rule for a curve whose value at the resolution limit is `limit`.
Verdict decide_decay(double limit, double curveMax, double decay, const ClassThresholds& th);

ClassReport classify(const SpectralSignal& g, double p, const ClassThresholds& thresholds = {});

// Implication failures on a finished report; empty when consistent.
std::vector<std::string> lattice_violations(const ClassReport& report);

// Dyadic ladders used by the classifier.
std::vector<double> tau_ladder(const TimeGrid& grid);
std::vector<std::size_t> mode_ladder(std::size_t available);

}  // namespace alab
