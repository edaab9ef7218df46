#include "alab/exact_sum.hpp"

#include <bit>
#include <cmath>

#include "alab/error.hpp"

namespace alab {

namespace {
__extension__ typedef unsigned __int128 u128;
}

void ExactSum::add(double x) {
  if (x != 0.0) accumulate(std::fabs(x), x < 0.0);
}

void ExactSum::subtract(double x) {
  if (x != 0.0) accumulate(std::fabs(x), x > 0.0);
}

void ExactSum::accumulate(double magnitude, bool negate) {
  if (!std::isfinite(magnitude)) throw Error(ErrorCode::InvalidSignal, "non-finite summand");
  int e = 0;
  const double m = std::frexp(magnitude, &e);
  const auto mant = static_cast<std::uint64_t>(std::ldexp(m, 53));
  const int bit = e - 53 + kOffset;
  const int idx = bit / 64;
  const int sh = bit % 64;
  const u128 v = static_cast<u128>(mant) << sh;
  const std::uint64_t parts[2] = {static_cast<std::uint64_t>(v), static_cast<std::uint64_t>(v >> 64)};

  if (!negate) {
    std::uint64_t carry = 0;
    for (int i = idx; i < kLimbs; ++i) {
      const std::uint64_t addend = (i - idx < 2) ? parts[i - idx] : 0;
      if (i - idx >= 2 && carry == 0) break;
      const u128 s = static_cast<u128>(limbs_[i]) + addend + carry;
      limbs_[i] = static_cast<std::uint64_t>(s);
      carry = static_cast<std::uint64_t>(s >> 64);
    }
  } else {
    std::uint64_t borrow = 0;
    for (int i = idx; i < kLimbs; ++i) {
      const std::uint64_t sub = (i - idx < 2) ? parts[i - idx] : 0;
      if (i - idx >= 2 && borrow == 0) break;
      const std::uint64_t before = limbs_[i];
      const u128 need = static_cast<u128>(sub) + borrow;
      limbs_[i] = before - sub - borrow;
      borrow = static_cast<u128>(before) < need ? 1 : 0;
    }
  }
}

double ExactSum::value() const {
  std::array<std::uint64_t, kLimbs> a = limbs_;
  const bool negative = (a[kLimbs - 1] >> 63) != 0;
  if (negative) {
    std::uint64_t carry = 1;
    for (auto& limb : a) {
      limb = ~limb;
      const std::uint64_t s = limb + carry;
      carry = (carry && s == 0) ? 1 : 0;
      limb = s;
    }
  }
  int h = kLimbs - 1;
  while (h >= 0 && a[h] == 0) --h;
  if (h < 0) return 0.0;

  const int lz = std::countl_zero(a[h]);
  std::uint64_t top = a[h] << lz;
  bool sticky = false;
  if (h > 0) {
    if (lz > 0) {
      top |= a[h - 1] >> (64 - lz);
      sticky = (a[h - 1] << lz) != 0;
    } else {
      sticky = a[h - 1] != 0;
    }
    for (int i = h - 2; i >= 0 && !sticky; --i) sticky = a[i] != 0;
  }
  // top holds 64 significant bits, its msb has weight 2^(64h + 63 - lz - kOffset)
  const int msb = 64 * h + 63 - lz - kOffset;
  std::uint64_t mant = top >> 11;
  const std::uint64_t rem = top & 0x7FF;
  if (rem > 0x400 || (rem == 0x400 && (sticky || (mant & 1)))) ++mant;
  const double r = std::ldexp(static_cast<double>(mant), msb - 52);
  return negative ? -r : r;
}

}  // namespace alab
