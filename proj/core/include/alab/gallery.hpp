#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "alab/signal.hpp"

namespace alab {

enum class ForceName { HeatPulse, WaveResonant, TravellingBump, RapidOscillation, SmoothReference };

inline constexpr ForceName kAllForces[] = {ForceName::HeatPulse, ForceName::WaveResonant, ForceName::TravellingBump,
                                           ForceName::RapidOscillation, ForceName::SmoothReference};

std::string_view to_string(ForceName n);
ForceName parse_force_name(std::string_view s);

struct ForceSpec {
  ForceName name = ForceName::HeatPulse;
  std::size_t nmax = 16;  // HeatPulse, WaveResonant
  double alpha = 1.0;     // TravellingBump damping in g0 = -V' + alpha V - V''
  double width = 1.0;     // bump half-width
  std::optional<Reconstruction> reconstruction;  // default depends on the force
  std::string description() const;
};

Reconstruction default_reconstruction(ForceName n);

// Samples the closed-form force on the grid. HeatPulse with piecewise-constant
// reconstruction stores the exact cell average over [t_k, t_k + dt).
SpectralSignal generate(const ForceSpec& spec, const TimeGrid& grid, const BasisDescriptor& basis);

// Grid and basis used for a force when nothing else is requested.
struct GalleryDefaults {
  TimeGrid grid;
  BasisDescriptor basis;
};
GalleryDefaults gallery_defaults(const ForceSpec& spec);

// Bump profile V(x) = exp(-1/(1-(x/w)^2)) and its first two derivatives.
double bump(double x, double w = 1.0);
double bump_d1(double x, double w = 1.0);
double bump_d2(double x, double w = 1.0);

double heat_mode_oracle(int n, double t);
std::pair<double, double> wave_mode_oracle(int n, double t);

// t_n = pi (3n + 2 + 1/(2n)) and the lower bound 1/n - 2 e^{-pi}/sqrt(4n^2 - 1).
double wave_probe_time(int n);
double wave_lower_bound(int n);

}  // namespace alab
