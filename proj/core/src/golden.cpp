#include "fppu/golden.hpp"

#include <stdexcept>

namespace fppu::golden {
namespace {

void require_same(const PositConfig& a, const PositConfig& b, const char* op) {
  if (a != b)
    throw ConfigMismatch(std::string(op) + ": operands are " + a.to_string() + " and " + b.to_string());
}

// |num| / |den| as a positive rational with a power-of-two scale.
struct Magnitude {
  mpz_class num;
  mpz_class den;
  long exp2;

  // Sign of (this - sig * 2^e) for a positive dyadic sig * 2^e.
  int compare(const Dyadic& d) const {
    mpz_class lhs = num;
    mpz_class rhs = den * static_cast<long>(d.significand);
    const long rhs_exp = d.exp2;
    if (exp2 > rhs_exp)
      lhs <<= static_cast<mp_bitcnt_t>(exp2 - rhs_exp);
    else
      rhs <<= static_cast<mp_bitcnt_t>(rhs_exp - exp2);
    return cmp(lhs, rhs);
  }
};

Dyadic value_at(std::uint32_t word, int n_bits, int es_bits) {
  return detail::value_of_word(word, n_bits, es_bits).value;
}

// Nearest positive pattern: find the bracketing pair u <= x < w by bisection
// over the (monotone) positive patterns, then compare with the rounding
// midpoint, which is the (N+1)-bit posit whose pattern is u followed by a 1.
std::uint32_t round_magnitude(const Magnitude& x, const PositConfig& cfg) {
  const int n = cfg.n_bits();
  const int es = cfg.es_bits();
  const std::uint32_t maxpos = cfg.maxpos_word();
  if (x.compare(value_at(maxpos, n, es)) >= 0) return maxpos;
  if (x.compare(value_at(1, n, es)) <= 0) return 1;

  std::uint32_t lo = 1;
  std::uint32_t hi = maxpos;
  while (hi - lo > 1) {
    const std::uint32_t mid = lo + (hi - lo) / 2;
    if (x.compare(value_at(mid, n, es)) >= 0)
      lo = mid;
    else
      hi = mid;
  }
  if (x.compare(value_at(lo, n, es)) == 0) return lo;
  const std::uint64_t midpoint = (std::uint64_t{lo} << 1) | 1u;
  const int c = x.compare(detail::value_of_word(midpoint, n + 1, es).value);
  if (c < 0) return lo;
  if (c > 0) return hi;
  return (lo & 1u) == 0 ? lo : hi;
}

PositBits with_sign(std::uint32_t magnitude, bool negative, const PositConfig& cfg) {
  return {negative ? ((~magnitude + 1) & cfg.mask()) : magnitude, cfg};
}

}  // namespace

PositBits round_exact(const ExactValue& v, const PositConfig& cfg) {
  if (v.is_nar()) return PositBits::nar(cfg);
  if (v.is_zero()) return PositBits::zero(cfg);
  Magnitude m{abs(v.numerator()), mpz_class(1), v.exponent2()};
  return with_sign(round_magnitude(m, cfg), v.negative(), cfg);
}

PositBits round_quotient(const ExactValue& num, const ExactValue& den, const PositConfig& cfg) {
  if (num.is_nar() || den.is_nar() || den.is_zero()) return PositBits::nar(cfg);
  if (num.is_zero()) return PositBits::zero(cfg);
  Magnitude m{abs(num.numerator()), abs(den.numerator()), num.exponent2() - den.exponent2()};
  return with_sign(round_magnitude(m, cfg), num.negative() != den.negative(), cfg);
}

PositBits add(const PositBits& a, const PositBits& b) {
  require_same(a.config(), b.config(), "add");
  return round_exact(ExactValue::from_posit(a) + ExactValue::from_posit(b), a.config());
}

PositBits sub(const PositBits& a, const PositBits& b) {
  require_same(a.config(), b.config(), "sub");
  return round_exact(ExactValue::from_posit(a) - ExactValue::from_posit(b), a.config());
}

PositBits mul(const PositBits& a, const PositBits& b) {
  require_same(a.config(), b.config(), "mul");
  return round_exact(ExactValue::from_posit(a) * ExactValue::from_posit(b), a.config());
}

PositBits div(const PositBits& a, const PositBits& b) {
  require_same(a.config(), b.config(), "div");
  return round_quotient(ExactValue::from_posit(a), ExactValue::from_posit(b), a.config());
}

PositBits fma(const PositBits& a, const PositBits& b, const PositBits& c) {
  require_same(a.config(), b.config(), "fma");
  require_same(a.config(), c.config(), "fma");
  const ExactValue product = ExactValue::from_posit(a) * ExactValue::from_posit(b);
  return round_exact(product + ExactValue::from_posit(c), a.config());
}

PositBits float_to_posit(std::uint32_t binary32, const PositConfig& cfg) {
  return round_exact(ExactValue::from_binary32(binary32), cfg);
}

std::uint32_t posit_to_float(const PositBits& p) {
  return round_to_binary32(ExactValue::from_posit(p));
}

std::uint32_t round_to_binary32(const ExactValue& v) {
  if (v.is_nar()) return 0x7FC00000u;
  if (v.is_zero()) return 0;
  const std::uint32_t sign = v.negative() ? 0x80000000u : 0u;
  const mpz_class mag = abs(v.numerator());
  const long e = v.exponent2();
  const long top = e + static_cast<long>(mpz_sizeinbase(mag.get_mpz_t(), 2)) - 1;
  // Quantum of the result: 24 significant bits, never below the subnormal step.
  const long quantum = std::max(top - 23, -149L);

  mpz_class scaled;
  if (quantum <= e) {
    scaled = mag << static_cast<mp_bitcnt_t>(e - quantum);
  } else {
    const mp_bitcnt_t shift = static_cast<mp_bitcnt_t>(quantum - e);
    mpz_class rem;
    mpz_fdiv_q_2exp(scaled.get_mpz_t(), mag.get_mpz_t(), shift);
    mpz_fdiv_r_2exp(rem.get_mpz_t(), mag.get_mpz_t(), shift);
    const mpz_class half = mpz_class(1) << (shift - 1);
    if (rem > half || (rem == half && mpz_odd_p(scaled.get_mpz_t()))) ++scaled;
  }

  std::uint32_t significand = static_cast<std::uint32_t>(scaled.get_ui());
  long q = quantum;
  if (significand == (1u << 24)) {
    significand >>= 1;
    ++q;
  }
  if (significand < (1u << 23)) return sign | significand;  // subnormal or zero
  const long biased = q + 23 + 127;
  if (biased >= 255) return sign | 0x7F800000u;
  return sign | (static_cast<std::uint32_t>(biased) << 23) | (significand & 0x7FFFFFu);
}

}  // namespace fppu::golden
