#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "alab/signal.hpp"

namespace alab {

// Discrete sine modes of a TruncatedLineGrid: phi_k(x_j) = sin(pi k j / J),
// J = nodes - 1, k = 1..J-1. Orthogonal for the trapezoidal inner product,
// with ||phi_k||^2 = L.
class LineModes {
 public:
  explicit LineModes(const BasisDescriptor& basis);

  std::size_t mode_count() const { return J_ - 1; }
  double mode_norm_sq() const { return L_; }

  void analyze(std::span<const double> values, std::span<double> coeffs) const;
  void synthesize(std::span<const double> coeffs, std::span<double> values) const;

  // Keep modes 1..M of every sample.
  void truncate(std::span<double> values, std::size_t M) const;

 private:
  double sin_at(std::size_t k, std::size_t j) const { return sines_[(k * j) % (2 * J_)]; }

  std::size_t J_;
  double L_;
  std::vector<double> sines_;
};

}  // namespace alab
