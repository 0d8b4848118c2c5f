#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <limits>
#include <random>

#include "../oracle/oracle.hpp"
#include "fppu/golden.hpp"
#include "helpers.hpp"

using namespace fppu;

namespace {

std::uint32_t f2w(float f) { return std::bit_cast<std::uint32_t>(f); }

// Oracle result of a two-operand op, or NaR.
std::uint32_t oracle_op(char op, const oracle::Rounder& r, std::uint32_t a, std::uint32_t b) {
  if (a == r.nar() || b == r.nar()) return r.nar();
  const mpq_class& x = r.value_of(a);
  const mpq_class& y = r.value_of(b);
  switch (op) {
    case '+': return r.round(x + y);
    case '-': return r.round(x - y);
    case '*': return r.round(x * y);
    default:
      if (y == 0) return r.nar();
      return r.round(x / y);
  }
}

}  // namespace

TEST(Golden, MatchesOracleOnSmallShapesExhaustive) {
  for (auto [n, es] : testing_helpers::small_shapes()) {
    if (n == 8 && es != 1 && es != 3) continue;  // the acceptance suite covers the rest of N=8
    const PositConfig c(n, es);
    const oracle::Rounder r(n, es);
    for (std::uint32_t a = 0; a < (1u << n); ++a)
      for (std::uint32_t b = 0; b < (1u << n); ++b) {
        const PositBits pa{a, c}, pb{b, c};
        ASSERT_EQ(golden::add(pa, pb).word(), oracle_op('+', r, a, b)) << c.to_string() << ' ' << a << '+' << b;
        ASSERT_EQ(golden::sub(pa, pb).word(), oracle_op('-', r, a, b)) << c.to_string() << ' ' << a << '-' << b;
        ASSERT_EQ(golden::mul(pa, pb).word(), oracle_op('*', r, a, b)) << c.to_string() << ' ' << a << '*' << b;
        ASSERT_EQ(golden::div(pa, pb).word(), oracle_op('/', r, a, b)) << c.to_string() << ' ' << a << '/' << b;
      }
  }
}

TEST(Golden, FmaMatchesOracleOnRandomTriples) {
  std::mt19937_64 rng(11);
  for (auto [n, es] : {std::pair{8, 0}, std::pair{8, 2}, std::pair{12, 1}, std::pair{16, 2}}) {
    const PositConfig c(n, es);
    const oracle::Rounder r(n, es);
    for (int i = 0; i < 20000; ++i) {
      const auto a = static_cast<std::uint32_t>(rng()) & c.mask();
      const auto b = static_cast<std::uint32_t>(rng()) & c.mask();
      const auto d = static_cast<std::uint32_t>(rng()) & c.mask();
      const std::uint32_t got = golden::fma({a, c}, {b, c}, {d, c}).word();
      if (a == r.nar() || b == r.nar() || d == r.nar()) {
        ASSERT_EQ(got, r.nar());
        continue;
      }
      ASSERT_EQ(got, r.round(r.value_of(a) * r.value_of(b) + r.value_of(d))) << c.to_string();
    }
  }
}

TEST(Golden, FusedDiffersFromUnfusedSomewhere) {
  const PositConfig c(8, 0);
  bool witness = false;
  for (std::uint32_t a = 0; a < 256 && !witness; ++a)
    for (std::uint32_t b = 0; b < 256 && !witness; b += 3) {
      const PositBits pa{a, c}, pb{b, c}, pc{0x41, c};
      witness = golden::fma(pa, pb, pc) != golden::add(golden::mul(pa, pb), pc);
    }
  EXPECT_TRUE(witness);
}

TEST(Golden, AlgebraicIdentities) {
  for (int es = 0; es <= 4; ++es) {
    const PositConfig c(8, es);
    const PositBits zero = PositBits::zero(c), one = PositBits::one(c), nar = PositBits::nar(c);
    for (std::uint32_t a = 0; a < 256; ++a) {
      const PositBits pa{a, c};
      for (std::uint32_t b = 0; b < 256; b += 7) {
        const PositBits pb{b, c};
        ASSERT_EQ(golden::add(pa, pb), golden::add(pb, pa));
        ASSERT_EQ(golden::mul(pa, pb), golden::mul(pb, pa));
        ASSERT_EQ(golden::sub(pa, pb), golden::add(pa, negate(pb)));
      }
      ASSERT_EQ(golden::add(pa, zero), pa);
      ASSERT_EQ(golden::mul(pa, one), pa);
      ASSERT_EQ(golden::div(pa, one), pa);
      ASSERT_EQ(golden::add(pa, nar), nar);
      ASSERT_EQ(golden::mul(nar, pa), nar);
      ASSERT_EQ(golden::div(pa, zero), nar);
      ASSERT_EQ(golden::fma(pa, nar, one), nar);
      if (pa.is_nar()) continue;
      ASSERT_EQ(golden::sub(pa, pa), zero);
      if (!pa.is_zero()) ASSERT_EQ(golden::div(pa, pa), one);
    }
  }
}

TEST(Golden, ConfigMismatchThrows) {
  EXPECT_THROW(golden::add({1, PositConfig(8, 0)}, {1, PositConfig(8, 1)}), ConfigMismatch);
  EXPECT_THROW(golden::fma({1, PositConfig(8, 0)}, {1, PositConfig(8, 0)}, {1, PositConfig(16, 0)}), ConfigMismatch);
}

TEST(GoldenConversions, Fig2RoundTrip) {
  const PositConfig c(16, 2);
  EXPECT_EQ(golden::posit_to_float({0x4200, c}), 0x3FA00000u);
  EXPECT_EQ(golden::float_to_posit(f2w(1.25f), c).word(), 0x4200u);
}

TEST(GoldenConversions, Posit16RoundTripsThroughBinary32) {
  const PositConfig c(16, 2);
  for (std::uint32_t w = 0; w < 65536; ++w)
    ASSERT_EQ(golden::float_to_posit(golden::posit_to_float({w, c}), c).word(), w) << w;
}

TEST(GoldenConversions, SpecialInputs) {
  const PositConfig c(16, 1);
  EXPECT_EQ(golden::float_to_posit(f2w(std::numeric_limits<float>::quiet_NaN()), c).word(), c.nar_word());
  EXPECT_EQ(golden::float_to_posit(f2w(std::numeric_limits<float>::infinity()), c).word(), c.nar_word());
  EXPECT_EQ(golden::float_to_posit(f2w(-std::numeric_limits<float>::infinity()), c).word(), c.nar_word());
  EXPECT_EQ(golden::float_to_posit(f2w(0.0f), c).word(), 0u);
  EXPECT_EQ(golden::float_to_posit(f2w(-0.0f), c).word(), 0u);
  EXPECT_EQ(golden::float_to_posit(f2w(3e38f), c).word(), c.maxpos_word());
  EXPECT_EQ(golden::float_to_posit(f2w(1e-40f), c).word(), c.minpos_word());
  EXPECT_EQ(golden::float_to_posit(f2w(-1e-40f), c).word(), (~c.minpos_word() + 1) & c.mask());
  EXPECT_EQ(golden::posit_to_float(PositBits::nar(c)), 0x7FC00000u);
  EXPECT_EQ(golden::posit_to_float(PositBits::zero(c)), 0u);

  const PositConfig wide(32, 4);
  EXPECT_EQ(golden::posit_to_float(PositBits::maxpos(wide)), 0x7F800000u);
  EXPECT_EQ(golden::posit_to_float(PositBits::minpos(wide)), 0u);
  EXPECT_EQ(golden::posit_to_float(negate(PositBits::minpos(wide))), 0x80000000u);
}

// Every posit<32,ES> value is an exact double, so a single double->float
// cast is the correctly rounded binary32.
TEST(GoldenConversions, PositToFloatMatchesCastOracle) {
  std::mt19937_64 rng(5);
  for (int es = 0; es <= 4; ++es) {
    const PositConfig c(32, es);
    for (int i = 0; i < 50000; ++i) {
      const auto w = static_cast<std::uint32_t>(rng());
      const auto v = oracle::value(w, 32, es);
      if (!v) continue;
      ASSERT_EQ(golden::posit_to_float({w, c}), f2w(static_cast<float>(v->get_d()))) << c.to_string() << ' ' << w;
    }
  }
}

TEST(GoldenConversions, FloatToPositMatchesOracle) {
  std::mt19937_64 rng(9);
  for (auto [n, es] : {std::pair{8, 0}, std::pair{8, 3}, std::pair{16, 2}}) {
    const PositConfig c(n, es);
    const oracle::Rounder r(n, es);
    for (int i = 0; i < 50000; ++i) {
      // Bias exponents toward the posit's range so rounding is exercised.
      auto w = static_cast<std::uint32_t>(rng());
      if (i % 2 == 0) w = (w & 0x807FFFFFu) | ((100u + static_cast<std::uint32_t>(rng() % 56)) << 23);
      const float f = std::bit_cast<float>(w);
      if (!std::isfinite(f)) continue;
      ASSERT_EQ(golden::float_to_posit(w, c).word(), r.round(oracle::binary32_value(w))) << c.to_string() << ' ' << f;
    }
  }
}

TEST(GoldenConversions, RoundToBinary32) {
  // 1 + 2^-24 is a tie between 1 and 1 + 2^-23: even wins.
  EXPECT_EQ(golden::round_to_binary32(ExactValue::finite(mpz_class((1 << 24) + 1), -24)), 0x3F800000u);
  EXPECT_EQ(golden::round_to_binary32(ExactValue::finite(mpz_class((1 << 24) + 3), -24)), 0x3F800002u);
  // Smallest subnormal and half of it (tie to zero).
  EXPECT_EQ(golden::round_to_binary32(ExactValue::finite(mpz_class(1), -149)), 1u);
  EXPECT_EQ(golden::round_to_binary32(ExactValue::finite(mpz_class(1), -150)), 0u);
  EXPECT_EQ(golden::round_to_binary32(ExactValue::finite(mpz_class(3), -151)), 1u);
  EXPECT_EQ(golden::round_to_binary32(ExactValue::finite(mpz_class(1), 128)), 0x7F800000u);
  EXPECT_EQ(golden::round_to_binary32(ExactValue::nar()), 0x7FC00000u);
}
