#pragma once

#include <cstdint>

#include "fppu/posit.hpp"

namespace fppu {

/// Unsigned fixed-point number raw * 2^-frac_bits.
struct Fixed {
  uint128 raw = 0;
  int frac_bits = 0;

  /// Nearest fixed-point value to x (x >= 0, finite).
  static Fixed from_double(double x, int frac_bits);
  double to_double() const;

  friend bool operator==(const Fixed&, const Fixed&) = default;
};

/// (a * b) >> shift over the full 256-bit product, truncated. The result must
/// fit 128 bits.
uint128 mul_shift(uint128 a, uint128 b, int shift);

/// Constants and widths of the polynomial reciprocal seed plus Newton-Raphson
/// refinement used by the divider.
struct ReciprocalParams {
  static constexpr double kDefaultK1 = 1.4567844114901045;
  static constexpr double kDefaultK2 = 1.0009290026616422;
  static constexpr int kMaxFracWidth = 96;

  double k1 = kDefaultK1;
  double k2 = kDefaultK2;
  int nr_rounds = 1;
  /// Internal fixed-point width; 0 selects 2N for the posit width in use.
  int frac_width = 0;

  int width_for(const PositConfig& cfg) const { return frac_width > 0 ? frac_width : 2 * cfg.n_bits(); }
};

/// Seed y = 4 (k2 - x (k1 - x)) (k1 - x): two truncating multiplies and a
/// shift by two. x must lie in [0.5, 1]; the result has x's width.
/// Throws std::domain_error otherwise.
Fixed recip_approx(const Fixed& x, const ReciprocalParams& params);

/// One Newton-Raphson step y (2 - x y) at x's width, truncating.
Fixed nr_refine(const Fixed& x, const Fixed& y);

/// Seed followed by params.nr_rounds refinements.
Fixed reciprocal(const Fixed& x, const ReciprocalParams& params);

}  // namespace fppu
