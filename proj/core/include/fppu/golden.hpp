#pragma once

#include <cstdint>

#include "fppu/exact.hpp"
#include "fppu/posit.hpp"

// Exact, single-rounding reference arithmetic. Every result is the exact
// real result rounded once to the nearest posit (ties to the even pattern),
// which makes these functions the oracle the datapath model is checked
// against.
namespace fppu::golden {

PositBits add(const PositBits& a, const PositBits& b);
PositBits sub(const PositBits& a, const PositBits& b);
PositBits mul(const PositBits& a, const PositBits& b);
/// NaR when the divisor is zero.
PositBits div(const PositBits& a, const PositBits& b);
/// a*b + c with one rounding at the end.
PositBits fma(const PositBits& a, const PositBits& b, const PositBits& c);

/// binary32 -> posit. NaN and infinities become NaR; magnitudes beyond
/// maxpos saturate, nonzero magnitudes below minpos become minpos.
PositBits float_to_posit(std::uint32_t binary32, const PositConfig& cfg);
/// posit -> binary32 with round-to-nearest-even. NaR gives the quiet NaN
/// 0x7FC00000, Zero gives +0, out-of-range magnitudes go to infinity or
/// (signed) zero as IEEE rounding dictates.
std::uint32_t posit_to_float(const PositBits& p);

/// Round an exact value to a posit. Finite values never round to Zero or NaR.
PositBits round_exact(const ExactValue& v, const PositConfig& cfg);
/// Round the exact quotient num/den (den nonzero, both finite) to a posit.
PositBits round_quotient(const ExactValue& num, const ExactValue& den, const PositConfig& cfg);
/// Round an exact value to binary32 (RNE). NaR gives the quiet NaN.
std::uint32_t round_to_binary32(const ExactValue& v);

}  // namespace fppu::golden
