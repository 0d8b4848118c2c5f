#include "fppu/reciprocal.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fppu {

Fixed Fixed::from_double(double x, int frac_bits) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw std::domain_error("fixed-point constant must be finite and >= 0");
  if (frac_bits < 1 || frac_bits > ReciprocalParams::kMaxFracWidth)
    throw std::invalid_argument("fixed-point width out of range: " + std::to_string(frac_bits));
  if (x == 0.0) return {0, frac_bits};
  int exp;
  const double m = std::frexp(x, &exp);  // x = m * 2^exp, m in [0.5, 1)
  const auto mant = static_cast<std::uint64_t>(std::ldexp(m, 53));
  const int shift = exp - 53 + frac_bits;
  uint128 raw;
  if (shift >= 0) {
    raw = static_cast<uint128>(mant) << shift;
  } else if (shift <= -64) {
    raw = 0;
  } else {
    const int s = -shift;
    raw = mant >> s;
    const std::uint64_t rem = mant & ((std::uint64_t{1} << s) - 1);
    const std::uint64_t half = std::uint64_t{1} << (s - 1);
    if (rem > half || (rem == half && (raw & 1))) ++raw;
  }
  return {raw, frac_bits};
}

double Fixed::to_double() const {
  const auto hi = static_cast<std::uint64_t>(raw >> 64);
  const auto lo = static_cast<std::uint64_t>(raw);
  return std::ldexp(static_cast<double>(hi), 64 - frac_bits) + std::ldexp(static_cast<double>(lo), -frac_bits);
}

uint128 mul_shift(uint128 a, uint128 b, int shift) {
  const std::uint64_t a0 = static_cast<std::uint64_t>(a), a1 = static_cast<std::uint64_t>(a >> 64);
  const std::uint64_t b0 = static_cast<std::uint64_t>(b), b1 = static_cast<std::uint64_t>(b >> 64);
  const uint128 p00 = static_cast<uint128>(a0) * b0;
  const uint128 p01 = static_cast<uint128>(a0) * b1;
  const uint128 p10 = static_cast<uint128>(a1) * b0;
  const uint128 p11 = static_cast<uint128>(a1) * b1;

  // 256-bit product as (hi, lo).
  uint128 lo = p00;
  uint128 hi = p11;
  const uint128 mid = p01 + p10;
  const uint128 mid_carry = mid < p01 ? (uint128{1} << 64) : 0;
  const uint128 mid_lo = mid << 64;
  lo += mid_lo;
  hi += (mid >> 64) + mid_carry + (lo < mid_lo ? 1 : 0);

  if (shift == 0) return lo;
  if (shift >= 128) return hi >> (shift - 128);
  return (lo >> shift) | (hi << (128 - shift));
}

Fixed recip_approx(const Fixed& x, const ReciprocalParams& params) {
  const int w = x.frac_bits;
  const uint128 one = uint128{1} << w;
  if (x.raw < (one >> 1) || x.raw > one)
    throw std::domain_error("reciprocal seed is defined on [0.5, 1] only");
  const uint128 k1 = Fixed::from_double(params.k1, w).raw;
  const uint128 k2 = Fixed::from_double(params.k2, w).raw;

  const uint128 b = k1 - x.raw;
  const uint128 c = mul_shift(x.raw, b, w);
  const uint128 d = k2 - c;
  const uint128 e = mul_shift(d, b, w);
  return {e << 2, w};
}

Fixed nr_refine(const Fixed& x, const Fixed& y) {
  if (x.frac_bits != y.frac_bits) throw std::invalid_argument("nr_refine: operand widths differ");
  const int w = x.frac_bits;
  const uint128 two = uint128{2} << w;
  const uint128 xy = mul_shift(x.raw, y.raw, w);
  if (xy >= two) return {0, w};
  return {mul_shift(y.raw, two - xy, w), w};
}

Fixed reciprocal(const Fixed& x, const ReciprocalParams& params) {
  Fixed y = recip_approx(x, params);
  for (int i = 0; i < params.nr_rounds; ++i) y = nr_refine(x, y);
  return y;
}

}  // namespace fppu
