#include "oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace oracle {
namespace {

mpq_class pow2(long e) {
  mpz_class p = 1;
  if (e >= 0) {
    mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(e));
    return mpq_class(p);
  }
  mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(-e));
  return mpq_class(mpz_class(1), p);
}

}  // namespace

std::optional<mpq_class> value(std::uint64_t word, int n, int es) {
  const std::uint64_t mask = (std::uint64_t{1} << n) - 1;
  word &= mask;
  if (word == 0) return mpq_class(0);
  if (word == std::uint64_t{1} << (n - 1)) return std::nullopt;

  const bool negative = (word >> (n - 1)) & 1u;
  if (negative) word = (~word + 1) & mask;

  // Bits after the sign, most significant first.
  std::string bits;
  for (int i = n - 2; i >= 0; --i) bits += ((word >> i) & 1u) ? '1' : '0';

  std::size_t pos = 0;
  const char lead = bits[0];
  while (pos < bits.size() && bits[pos] == lead) ++pos;
  const long run = static_cast<long>(pos);
  const long k = lead == '1' ? run - 1 : -run;
  if (pos < bits.size()) ++pos;  // terminating bit

  long e = 0;
  for (int i = 0; i < es; ++i) {
    e <<= 1;
    if (pos < bits.size()) e |= bits[pos++] == '1' ? 1 : 0;
  }

  mpq_class frac(0);
  mpq_class weight(1, 2);
  for (; pos < bits.size(); ++pos) {
    if (bits[pos] == '1') frac += weight;
    weight /= 2;
  }

  mpq_class v = (1 + frac) * pow2(k * (1L << es) + e);
  v.canonicalize();
  return negative ? mpq_class(-v) : v;
}

Rounder::Rounder(int n, int es) : n_(n), es_(es) {
  if (n < 3 || n > 20) throw std::invalid_argument("oracle shape out of range");
  const std::uint32_t count = std::uint32_t{1} << n;
  values_.resize(count);
  for (std::uint32_t w = 0; w < count; ++w)
    if (auto v = value(w, n, es)) values_[w] = *v;

  for (std::uint32_t w = 1; w < count; ++w)
    if (w != nar() && values_[w] > 0) positive_.push_back(w);
  std::sort(positive_.begin(), positive_.end(), [&](std::uint32_t a, std::uint32_t b) { return values_[a] < values_[b]; });

  for (std::size_t i = 0; i + 1 < positive_.size(); ++i) {
    const std::uint32_t lo = positive_[i];
    if (positive_[i + 1] != lo + 1) throw std::logic_error("positive patterns are not ordered by value");
    boundary_.push_back(*value((std::uint64_t{lo} << 1) | 1u, n + 1, es));
  }
}

const mpq_class& Rounder::value_of(std::uint32_t w) const { return values_.at(w); }

std::uint32_t Rounder::round(const mpq_class& x) const {
  if (x == 0) return 0;
  const std::uint32_t mask = (std::uint32_t{1} << n_) - 1;
  if (x < 0) {
    const std::uint32_t p = round(-x);
    return (~p + 1) & mask;
  }
  // First positive posit not below x; [i-1, i] brackets x.
  const auto it = std::lower_bound(positive_.begin(), positive_.end(), x,
                                   [&](std::uint32_t w, const mpq_class& v) { return values_[w] < v; });
  const auto i = static_cast<std::size_t>(it - positive_.begin());
  if (i == positive_.size()) return positive_.back();
  if (values_[positive_[i]] == x || i == 0) return positive_[i];
  const std::uint32_t lo = positive_[i - 1], hi = positive_[i];
  const int c = cmp(x, boundary_[i - 1]);
  if (c < 0) return lo;
  if (c > 0) return hi;
  return (lo & 1u) == 0 ? lo : hi;
}

mpq_class binary32_value(std::uint32_t w) {
  const float f = std::bit_cast<float>(w);
  if (!std::isfinite(f)) throw std::domain_error("not finite");
  int exp = 0;
  const double m = std::frexp(static_cast<double>(f), &exp);
  // m * 2^25 is an integer for every binary32 (24-bit significand).
  const auto scaled = static_cast<long>(std::ldexp(m, 25));
  mpq_class v = mpq_class(scaled) * pow2(exp - 25);
  v.canonicalize();
  return v;
}

}  // namespace oracle
