#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace fppu {

__extension__ using uint128 = unsigned __int128;
__extension__ using int128 = __int128;

/// Run-time posit<N,ES> shape. Widths are validated on construction so every
/// downstream routine may assume 3 <= N <= 32 and 0 <= ES <= 4.
class PositConfig {
public:
  static constexpr int kMinBits = 3;
  static constexpr int kMaxBits = 32;
  static constexpr int kMaxEs = 4;

  PositConfig(int n_bits, int es_bits);

  int n_bits() const { return n_bits_; }
  int es_bits() const { return es_bits_; }

  /// log2(useed) = 2^ES.
  int useed_log2() const { return 1 << es_bits_; }
  /// useed = 2^(2^ES); at most 2^16 so it always fits an integer.
  std::uint64_t useed() const { return std::uint64_t{1} << useed_log2(); }

  std::uint32_t mask() const {
    return n_bits_ == 32 ? 0xFFFFFFFFu : ((std::uint32_t{1} << n_bits_) - 1);
  }
  std::uint32_t nar_word() const { return std::uint32_t{1} << (n_bits_ - 1); }
  std::uint32_t maxpos_word() const { return nar_word() - 1; }
  std::uint32_t minpos_word() const { return 1; }
  /// Pattern of +1.0: sign 0, regime "10", everything else zero.
  std::uint32_t one_word() const { return std::uint32_t{1} << (n_bits_ - 2); }

  int max_regime() const { return n_bits_ - 2; }
  int min_regime() const { return -(n_bits_ - 1); }

  /// Largest fraction field any pattern of this shape can carry.
  int max_frac_bits() const { return n_bits_ - 3 - es_bits_ < 0 ? 0 : n_bits_ - 3 - es_bits_; }

  /// Fraction width of the intermediate format: 2(N-1)+3 bits, enough for any
  /// two-operand product plus guard/round/sticky.
  int fir_frac_bits() const { return 2 * (n_bits_ - 1) + 3; }

  std::string to_string() const;

  friend bool operator==(const PositConfig&, const PositConfig&) = default;

private:
  int n_bits_;
  int es_bits_;
};

/// Thrown when operands built for different posit shapes meet in one operation.
class ConfigMismatch : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// An N-bit two's-complement posit pattern held in the low bits of a word.
class PositBits {
public:
  /// Throws std::invalid_argument if bits above N-1 are set.
  PositBits(std::uint32_t word, PositConfig cfg);

  static PositBits zero(PositConfig cfg) { return {0, cfg}; }
  static PositBits nar(PositConfig cfg) { return {cfg.nar_word(), cfg}; }
  static PositBits one(PositConfig cfg) { return {cfg.one_word(), cfg}; }
  static PositBits maxpos(PositConfig cfg) { return {cfg.maxpos_word(), cfg}; }
  static PositBits minpos(PositConfig cfg) { return {cfg.minpos_word(), cfg}; }

  std::uint32_t word() const { return word_; }
  const PositConfig& config() const { return cfg_; }

  bool is_zero() const { return word_ == 0; }
  bool is_nar() const { return word_ == cfg_.nar_word(); }
  bool sign() const { return (word_ >> (cfg_.n_bits() - 1)) & 1u; }

  /// Pattern reinterpreted as an N-bit signed integer.
  std::int32_t as_signed() const;

  friend bool operator==(const PositBits&, const PositBits&) = default;

private:
  std::uint32_t word_;
  PositConfig cfg_;
};

enum class PositClass { Zero, NaR, Normal };

const char* to_string(PositClass c);

/// Field view of a posit. For negative posits the fields describe the
/// magnitude (the two's complement of the pattern); `sign` is kept apart.
struct DecodedPosit {
  PositClass cls = PositClass::Zero;
  bool sign = false;
  int regime_k = 0;
  int regime_len = 0;     ///< run length l, stop bit excluded
  std::uint32_t exponent = 0;  ///< already padded with zeros on the right
  int exponent_len = 0;   ///< exponent bits actually present in the pattern
  std::uint32_t frac = 0;
  int frac_len = 0;

  friend bool operator==(const DecodedPosit&, const DecodedPosit&) = default;
};

DecodedPosit decode(const PositBits& bits);

/// Exact dyadic number significand * 2^exp2, canonical with an odd
/// significand (or zero). Every posit up to 32 bits fits.
struct Dyadic {
  std::int64_t significand = 0;
  int exp2 = 0;

  static Dyadic make(std::int64_t significand, int exp2);
  double to_double() const;
  std::string to_string() const;

  friend bool operator==(const Dyadic&, const Dyadic&) = default;
};

/// Tagged exact real value of a posit.
struct RealValue {
  PositClass cls = PositClass::Zero;
  Dyadic value;  ///< meaningful only for Normal

  friend bool operator==(const RealValue&, const RealValue&) = default;
};

/// (-1)^s * useed^k * 2^e * (1 + f/2^F), evaluated exactly.
RealValue real_value(const PositBits& bits);

/// (1 - 3s + f/2^F) * 2^((1-2s)(2^ES k + e + s)), with the fields read
/// straight from the raw pattern (no two's complement for negatives).
/// Throws std::domain_error for Zero and NaR.
Dyadic real_value_alt(const PositBits& bits);

/// Floating-point intermediate record: (-1)^sign * 2^te * (1.frac), where
/// frac holds frac_width bits below the implicit one.
struct Fir {
  bool sign = false;
  std::int32_t te = 0;
  uint128 frac = 0;
  int frac_width = 0;
  bool sticky = false;  ///< nonzero bits already dropped below frac

  friend bool operator==(const Fir&, const Fir&) = default;
};

/// Throws std::domain_error for Zero and NaR.
Fir to_fir(const DecodedPosit& d, const PositConfig& cfg);

/// What the normalization stage saw while rounding.
struct RoundingTrace {
  std::int32_t regime_k = 0;  ///< k after clipping
  std::uint32_t exponent = 0;
  bool guard = false;
  bool round = false;
  bool sticky = false;
  bool rounded_up = false;
  bool saturated = false;  ///< regime clipped to maxpos/minpos
};

/// Normalize a FIR into a posit with round-to-nearest-even. frac_width may
/// be anything up to 127.
PositBits encode_round(const Fir& f, const PositConfig& cfg, RoundingTrace* trace = nullptr);

PositBits negate(const PositBits& bits);

/// Signed-integer order of the patterns; NaR sorts below every real.
std::strong_ordering compare(const PositBits& a, const PositBits& b);

namespace detail {

/// Field decode of an arbitrary-width pattern (up to 62 bits). Used for the
/// (N+1)-bit rounding midpoints as well as for ordinary decoding.
DecodedPosit decode_word(std::uint64_t word, int n_bits, int es_bits);

/// Exact value of an arbitrary-width pattern; cls tags Zero/NaR.
RealValue value_of_word(std::uint64_t word, int n_bits, int es_bits);

}  // namespace detail

}  // namespace fppu
