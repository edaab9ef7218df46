#include "alab/line_modes.hpp"

#include <cmath>
#include <numbers>

#include "alab/error.hpp"

namespace alab {

LineModes::LineModes(const BasisDescriptor& basis) : J_(basis.modeCount - 1), L_(basis.halfLength) {
  if (basis.kind != BasisKind::TruncatedLineGrid) fail(ErrorCode::InvalidParameter, "line modes need a line grid");
  sines_.resize(2 * J_);
  for (std::size_t r = 0; r < 2 * J_; ++r) {
    sines_[r] = std::sin(std::numbers::pi * static_cast<double>(r) / static_cast<double>(J_));
  }
}

void LineModes::analyze(std::span<const double> values, std::span<double> coeffs) const {
  const double scale = 2.0 / static_cast<double>(J_);
  for (std::size_t k = 1; k < J_; ++k) {
    double s = 0.0;
    for (std::size_t j = 1; j < J_; ++j) s += values[j] * sin_at(k, j);
    coeffs[k - 1] = scale * s;
  }
}

void LineModes::synthesize(std::span<const double> coeffs, std::span<double> values) const {
  values[0] = 0.0;
  values[J_] = 0.0;
  for (std::size_t j = 1; j < J_; ++j) {
    double s = 0.0;
    for (std::size_t k = 1; k < J_; ++k) s += coeffs[k - 1] * sin_at(k, j);
    values[j] = s;
  }
}

void LineModes::truncate(std::span<double> values, std::size_t M) const {
  std::vector<double> c(mode_count());
  analyze(values, c);
  for (std::size_t k = M; k < c.size(); ++k) c[k] = 0.0;
  synthesize(c, values);
}

}  // namespace alab
