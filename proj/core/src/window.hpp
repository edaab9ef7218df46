#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "alab/signal.hpp"

namespace alab::detail {

// Per-sample squared norms and inner products of neighbours; enough to
// integrate ||x(t)||^p over each reconstruction interval.
struct GramSeries {
  std::vector<double> sq;
  std::vector<double> cross;
};

GramSeries gram_series(const SpectralSignal& g, std::span<const double> w);

// Series of d_k = g_{k+sigma} - g_k.
GramSeries gram_series_diff(const SpectralSignal& g, std::span<const double> w, std::size_t sigma);

// Integral over theta in [f0, f1] of the interval k in units of dt (multiply by dt).
double interval_part(double a, double b, double c, double p, Reconstruction r, double f0, double f1);

std::vector<double> interval_integrals(const GramSeries& s, double p, Reconstruction r, double dt);

struct WindowLayout {
  std::size_t full = 0;  // whole intervals
  double frac = 0.0;     // trailing fraction of one interval
};

WindowLayout window_layout(double length, double dt);

// Window sums for every start index whose window fits in the series.
std::vector<double> sliding_windows(const GramSeries& s, const std::vector<double>& integrals,
                                    const WindowLayout& layout, double p, Reconstruction r, double dt);

double window_at(const GramSeries& s, const std::vector<double>& integrals, const WindowLayout& layout,
                 std::size_t start, double p, Reconstruction r, double dt);

double max_of(const std::vector<double>& v);

// Four point Gauss-Legendre rule on [0, 1].
inline constexpr double kGauss4Nodes[4] = {0.06943184420297371, 0.33000947820757187,
                                           0.66999052179242813, 0.93056815579702629};
inline constexpr double kGauss4Weights[4] = {0.17392742256872693, 0.32607257743127307,
                                             0.32607257743127307, 0.17392742256872693};

}  // namespace alab::detail
