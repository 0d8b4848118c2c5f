#include "fppu/posit.hpp"

#include <bit>
#include <cmath>
#include <sstream>

namespace fppu {

PositConfig::PositConfig(int n_bits, int es_bits) : n_bits_(n_bits), es_bits_(es_bits) {
  if (n_bits < kMinBits || n_bits > kMaxBits)
    throw std::invalid_argument("posit width must be in [3, 32], got " + std::to_string(n_bits));
  if (es_bits < 0 || es_bits > kMaxEs)
    throw std::invalid_argument("exponent width must be in [0, 4], got " + std::to_string(es_bits));
  if (n_bits < es_bits + 2)
    throw std::invalid_argument("posit width too small for its exponent field");
}

std::string PositConfig::to_string() const {
  return "posit<" + std::to_string(n_bits_) + "," + std::to_string(es_bits_) + ">";
}

PositBits::PositBits(std::uint32_t word, PositConfig cfg) : word_(word), cfg_(cfg) {
  if ((word & ~cfg.mask()) != 0)
    throw std::invalid_argument("pattern has bits set above the posit width");
}

std::int32_t PositBits::as_signed() const {
  const int shift = 32 - cfg_.n_bits();
  return static_cast<std::int32_t>(word_ << shift) >> shift;
}

const char* to_string(PositClass c) {
  switch (c) {
    case PositClass::Zero: return "Zero";
    case PositClass::NaR: return "NaR";
    case PositClass::Normal: return "Normal";
  }
  return "?";
}

Dyadic Dyadic::make(std::int64_t significand, int exp2) {
  if (significand == 0) return {0, 0};
  const int tz = std::countr_zero(static_cast<std::uint64_t>(significand));
  return {significand >> tz, exp2 + tz};
}

double Dyadic::to_double() const {
  return std::ldexp(static_cast<double>(significand), exp2);
}

std::string Dyadic::to_string() const {
  std::ostringstream os;
  os << significand;
  if (exp2 != 0) os << " * 2^" << exp2;
  return os.str();
}

namespace detail {
namespace {

std::uint64_t width_mask(int n) {
  return n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
}

// Regime/exponent/fraction of the n-1 bits below the sign, read as-is.
DecodedPosit fields_of_body(std::uint64_t body, int n_bits, int es_bits) {
  DecodedPosit d;
  d.cls = PositClass::Normal;
  const int body_len = n_bits - 1;
  const bool run_bit = (body >> (body_len - 1)) & 1u;
  int l = 0;
  while (l < body_len && (((body >> (body_len - 1 - l)) & 1u) == run_bit)) ++l;
  d.regime_len = l;
  d.regime_k = run_bit ? l - 1 : -l;

  const int rem = l + 1 <= body_len ? body_len - l - 1 : 0;
  const int es_avail = es_bits < rem ? es_bits : rem;
  d.frac_len = rem - es_avail;
  d.exponent_len = es_avail;
  const std::uint64_t tail = body & width_mask(rem);
  d.exponent = static_cast<std::uint32_t>((tail >> d.frac_len) << (es_bits - es_avail));
  d.frac = static_cast<std::uint32_t>(tail & width_mask(d.frac_len));
  return d;
}

}  // namespace

DecodedPosit decode_word(std::uint64_t word, int n_bits, int es_bits) {
  const std::uint64_t mask = width_mask(n_bits);
  word &= mask;
  const std::uint64_t nar = std::uint64_t{1} << (n_bits - 1);
  if (word == 0) return {};
  if (word == nar) {
    DecodedPosit d;
    d.cls = PositClass::NaR;
    d.sign = true;
    return d;
  }
  const bool sign = (word & nar) != 0;
  const std::uint64_t mag = sign ? ((~word + 1) & mask) : word;
  DecodedPosit d = fields_of_body(mag, n_bits, es_bits);
  d.sign = sign;
  return d;
}

RealValue value_of_word(std::uint64_t word, int n_bits, int es_bits) {
  const DecodedPosit d = decode_word(word, n_bits, es_bits);
  if (d.cls != PositClass::Normal) return {d.cls, {}};
  const std::int64_t sig = (std::int64_t{1} << d.frac_len) + d.frac;
  const int exp2 = d.regime_k * (1 << es_bits) + static_cast<int>(d.exponent) - d.frac_len;
  return {PositClass::Normal, Dyadic::make(d.sign ? -sig : sig, exp2)};
}

}  // namespace detail

DecodedPosit decode(const PositBits& bits) {
  const auto& cfg = bits.config();
  return detail::decode_word(bits.word(), cfg.n_bits(), cfg.es_bits());
}

RealValue real_value(const PositBits& bits) {
  const auto& cfg = bits.config();
  return detail::value_of_word(bits.word(), cfg.n_bits(), cfg.es_bits());
}

Dyadic real_value_alt(const PositBits& bits) {
  if (bits.is_zero() || bits.is_nar())
    throw std::domain_error("real_value_alt is defined for Normal posits only");
  const auto& cfg = bits.config();
  const int n = cfg.n_bits();
  const int s = bits.sign() ? 1 : 0;
  const std::uint64_t body = bits.word() & ((std::uint64_t{1} << (n - 1)) - 1);
  const DecodedPosit raw = detail::fields_of_body(body, n, cfg.es_bits());
  // (1 - 3s) * 2^F + f over 2^F, scaled by 2^((1-2s)(te+s)).
  const std::int64_t num = (std::int64_t{1 - 3 * s} << raw.frac_len) + raw.frac;
  const int te = raw.regime_k * cfg.useed_log2() + static_cast<int>(raw.exponent);
  const int scale = (1 - 2 * s) * (te + s);
  return Dyadic::make(num, scale - raw.frac_len);
}

Fir to_fir(const DecodedPosit& d, const PositConfig& cfg) {
  if (d.cls != PositClass::Normal)
    throw std::domain_error(std::string("cannot lift a ") + to_string(d.cls) + " posit into a FIR");
  Fir f;
  f.sign = d.sign;
  f.te = d.regime_k * cfg.useed_log2() + static_cast<std::int32_t>(d.exponent);
  f.frac_width = cfg.fir_frac_bits();
  f.frac = static_cast<uint128>(d.frac) << (f.frac_width - d.frac_len);
  return f;
}

PositBits encode_round(const Fir& f, const PositConfig& cfg, RoundingTrace* trace) {
  const int n = cfg.n_bits();
  const int es = cfg.es_bits();
  RoundingTrace local;
  RoundingTrace& tr = trace ? *trace : local;
  tr = {};

  // Anything past 64 fraction bits can only ever feed the sticky bit.
  uint128 frac = f.frac;
  int fw = f.frac_width;
  bool sticky = f.sticky;
  if (fw > 64) {
    const int drop = fw - 64;
    sticky |= (frac & ((uint128{1} << drop) - 1)) != 0;
    frac >>= drop;
    fw = 64;
  }

  const std::int32_t k = f.te >> es;  // floor division by 2^ES
  const std::uint32_t e = static_cast<std::uint32_t>(f.te - (k << es));
  tr.exponent = e;

  std::uint32_t mag;
  if (k >= cfg.max_regime()) {
    mag = cfg.maxpos_word();
    tr.regime_k = cfg.max_regime();
    tr.saturated = k > cfg.max_regime() || e != 0 || frac != 0 || sticky;
  } else if (k < -cfg.max_regime()) {
    mag = cfg.minpos_word();
    tr.regime_k = -cfg.max_regime();
    tr.saturated = true;
  } else {
    tr.regime_k = k;
    uint128 regime;
    int regime_len;
    if (k >= 0) {
      regime_len = k + 2;
      regime = ((uint128{1} << (k + 1)) - 1) << 1;
    } else {
      regime_len = -k + 1;
      regime = 1;
    }
    const int len = regime_len + es + fw;
    const uint128 body = (regime << (es + fw)) | (static_cast<uint128>(e) << fw) | frac;
    const int avail = n - 1;
    uint128 kept;
    if (len <= avail) {
      kept = body << (avail - len);
      tr.sticky = sticky;
    } else {
      const int shift = len - avail;
      kept = body >> shift;
      tr.round = ((body >> (shift - 1)) & 1) != 0;
      tr.sticky = sticky || (body & ((uint128{1} << (shift - 1)) - 1)) != 0;
    }
    tr.guard = (kept & 1) != 0;
    tr.rounded_up = tr.round && (tr.guard || tr.sticky);
    mag = static_cast<std::uint32_t>(kept) + (tr.rounded_up ? 1u : 0u);
  }

  const std::uint32_t word = f.sign ? ((~mag + 1) & cfg.mask()) : mag;
  return {word, cfg};
}

PositBits negate(const PositBits& bits) {
  const auto& cfg = bits.config();
  return {(~bits.word() + 1) & cfg.mask(), cfg};
}

std::strong_ordering compare(const PositBits& a, const PositBits& b) {
  if (a.config() != b.config()) throw ConfigMismatch("compare: operands have different posit shapes");
  return a.as_signed() <=> b.as_signed();
}

}  // namespace fppu
