#pragma once

#include <array>
#include <cstdint>

namespace alab {

// Fixed-point accumulator wide enough to hold any finite double exactly.
// Sums are independent of the order of additions; value() rounds once.
class ExactSum {
 public:
  void add(double x);
  void subtract(double x);
  double value() const;
  void clear() { limbs_.fill(0); }

 private:
  static constexpr int kLimbs = 36;
  static constexpr int kOffset = 1152;  // bit index of 2^0

  void accumulate(double magnitude, bool negate);

  std::array<std::uint64_t, kLimbs> limbs_{};
};

}  // namespace alab
