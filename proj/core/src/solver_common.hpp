#pragma once

#include <cmath>
#include <cstddef>
#include <string>

#include "alab/error.hpp"
#include "alab/signal.hpp"

namespace alab::detail {

// Number of force intervals covered up to tEnd.
inline std::size_t steps_until(const SpectralSignal& force, double tEnd) {
  const TimeGrid& g = force.grid();
  const double q = (tEnd - g.t0) / g.dt;
  const double r = std::round(q);
  const double steps = std::abs(q - r) <= 1e-9 * std::max(1.0, r) ? r : std::floor(q);
  if (steps < 1.0) fail(ErrorCode::SpanTooShort, "tEnd must lie at least one step after t0");
  if (steps > static_cast<double>(force.count() - 1)) {
    fail(ErrorCode::SpanTooShort, "tEnd " + std::to_string(tEnd) + " beyond the force span");
  }
  return static_cast<std::size_t>(steps);
}

// Locates t in the trajectory grid: interval index and offset inside it.
inline std::pair<std::size_t, double> locate(const TimeGrid& g, double t) {
  const double q = (t - g.t0) / g.dt;
  const double last = static_cast<double>(g.count - 1);
  if (q < -1e-9 || q > last + 1e-9) fail(ErrorCode::OutOfWindow, "time outside the trajectory");
  double k = std::floor(q + 1e-9);
  if (k > last) k = last;
  if (k < 0.0) k = 0.0;
  const double s = std::max(0.0, t - g.time(static_cast<std::size_t>(k)));
  return {static_cast<std::size_t>(k), s};
}

}  // namespace alab::detail
