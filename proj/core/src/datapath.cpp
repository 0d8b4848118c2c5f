#include "fppu/datapath.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace fppu {
namespace {

constexpr std::uint32_t kQuietNaN = 0x7FC00000u;
constexpr std::uint32_t kFloatInf = 0x7F800000u;
// Alignment position of the implicit one inside the adder.
constexpr int kAddPoint = 125;

int msb(uint128 v) {
  const auto hi = static_cast<std::uint64_t>(v >> 64);
  if (hi != 0) return 127 - std::countl_zero(hi);
  return 63 - std::countl_zero(static_cast<std::uint64_t>(v));
}

uint128 low_mask(int bits) { return bits >= 128 ? ~uint128{0} : ((uint128{1} << bits) - 1); }

// Drop fraction bits beyond `max_width`, folding them into sticky.
Fir narrow(const Fir& f, int max_width) {
  if (f.frac_width <= max_width) return f;
  Fir r = f;
  const int drop = f.frac_width - max_width;
  r.sticky = f.sticky || (f.frac & low_mask(drop)) != 0;
  r.frac = f.frac >> drop;
  r.frac_width = max_width;
  return r;
}

// Significand 1.frac placed with its implicit one at bit `point`.
uint128 aligned_significand(const Fir& f, int point, bool& sticky) {
  const uint128 sig = (uint128{1} << f.frac_width) | f.frac;
  sticky = f.sticky;
  if (f.frac_width <= point) return sig << (point - f.frac_width);
  const int drop = f.frac_width - point;
  sticky = sticky || (sig & low_mask(drop)) != 0;
  return sig >> drop;
}

std::uint32_t negate_word(std::uint32_t w, const PositConfig& cfg) { return (~w + 1) & cfg.mask(); }

bool is_nar(std::uint32_t w, const PositConfig& cfg) { return w == cfg.nar_word(); }

Fir lift(std::uint32_t w, const PositConfig& cfg) {
  return to_fir(detail::decode_word(w, cfg.n_bits(), cfg.es_bits()), cfg);
}

void check_operand(std::uint32_t w, const PositConfig& cfg) {
  if ((w & ~cfg.mask()) != 0) throw std::invalid_argument("operand has bits set above the posit width");
}

}  // namespace

std::string_view to_string(FppuOp op) {
  switch (op) {
    case FppuOp::PADD: return "PADD";
    case FppuOp::PSUB: return "PSUB";
    case FppuOp::PMUL: return "PMUL";
    case FppuOp::PDIV: return "PDIV";
    case FppuOp::PFMADD: return "PFMADD";
    case FppuOp::FCVT_P2F: return "FCVT_P2F";
    case FppuOp::FCVT_F2P: return "FCVT_F2P";
  }
  return "?";
}

std::optional<FppuOp> parse_op(std::string_view name) {
  for (FppuOp op : kAllOps)
    if (to_string(op) == name) return op;
  return std::nullopt;
}

int operand_count(FppuOp op) {
  switch (op) {
    case FppuOp::PFMADD: return 3;
    case FppuOp::FCVT_P2F:
    case FppuOp::FCVT_F2P: return 1;
    default: return 2;
  }
}

std::optional<Fir> fir_add(const Fir& x, const Fir& y) {
  bool sticky_x = false, sticky_y = false;
  uint128 sx = aligned_significand(x, kAddPoint, sticky_x);
  uint128 sy = aligned_significand(y, kAddPoint, sticky_y);

  const Fir* big = &x;
  const Fir* small = &y;
  uint128 sb = sx, ss = sy;
  bool jam_big = sticky_x, jam_small = sticky_y;
  if (y.te > x.te || (y.te == x.te && sy > sx)) {
    std::swap(big, small);
    std::swap(sb, ss);
    std::swap(jam_big, jam_small);
  }
  const std::int64_t shift = static_cast<std::int64_t>(big->te) - small->te;
  if (shift >= 127) {
    jam_small = jam_small || ss != 0;
    ss = 0;
  } else if (shift > 0) {
    jam_small = jam_small || (ss & low_mask(static_cast<int>(shift))) != 0;
    ss >>= shift;
  }
  bool jam = jam_big || jam_small;

  Fir r;
  r.sign = big->sign;
  r.te = big->te;
  uint128 sum;
  if (x.sign == y.sign) {
    sum = sb + ss;
    if ((sum >> (kAddPoint + 1)) != 0) {
      // Carry out of [1, 2): shift right once, remembering the dropped bit.
      jam = jam || (sum & 1) != 0;
      sum >>= 1;
      ++r.te;
    }
  } else {
    sum = sb - ss;
    // Bits lost from the subtrahend make the true difference slightly
    // smaller; borrow one unit so truncation stays below the exact value.
    if (jam_small && !jam_big && sum != 0) --sum;
    if (sum == 0 && !jam) return std::nullopt;
    if (sum == 0) {
      // Only possible with inexact inputs; keep the sticky residue.
      sum = 1;
      jam = false;
    }
    const int lz = kAddPoint - msb(sum);
    sum <<= lz;
    r.te -= lz;
  }
  r.frac = sum & low_mask(kAddPoint);
  r.frac_width = kAddPoint;
  r.sticky = jam;
  return r;
}

Fir fir_mul(const Fir& x, const Fir& y) {
  const Fir a = narrow(x, 62);
  const Fir b = narrow(y, 62);
  const uint128 sa = (uint128{1} << a.frac_width) | a.frac;
  const uint128 sb = (uint128{1} << b.frac_width) | b.frac;
  const uint128 p = sa * sb;
  int width = a.frac_width + b.frac_width;
  Fir r;
  r.sign = a.sign != b.sign;
  r.te = a.te + b.te;
  if ((p >> (width + 1)) != 0) {
    ++width;
    ++r.te;
  }
  r.frac = p & low_mask(width);
  r.frac_width = width;
  r.sticky = a.sticky || b.sticky;
  return r;
}

Fir fir_from_binary32(std::uint32_t word) {
  const std::uint32_t biased = (word >> 23) & 0xFFu;
  const std::uint32_t mant = word & 0x7FFFFFu;
  if (biased == 0xFF || (biased == 0 && mant == 0))
    throw std::domain_error("fir_from_binary32: value has no FIR form");
  Fir f;
  f.sign = (word >> 31) != 0;
  if (biased != 0) {
    f.te = static_cast<std::int32_t>(biased) - 127;
    f.frac = mant;
    f.frac_width = 23;
  } else {
    const int top = 31 - std::countl_zero(mant);
    f.te = -149 + top;
    f.frac = mant & ((1u << top) - 1);
    f.frac_width = top;
  }
  return f;
}

std::uint32_t encode_binary32(const Fir& in) {
  const Fir f = narrow(in, 64);
  const std::uint32_t sign = f.sign ? 0x80000000u : 0u;
  if (f.te > 127) return sign | kFloatInf;

  const uint128 sig = (uint128{1} << f.frac_width) | f.frac;
  // Bits of sig to drop so that 23 fraction bits (or the subnormal field) remain.
  int shift = f.frac_width - 23;
  if (f.te < -126) shift += -126 - f.te;

  uint128 kept;
  bool round = false, sticky = f.sticky;
  if (shift <= 0) {
    kept = sig << -shift;
  } else if (shift > 127) {
    kept = 0;
    sticky = sticky || sig != 0;
  } else {
    kept = sig >> shift;
    round = ((sig >> (shift - 1)) & 1) != 0;
    sticky = sticky || (sig & low_mask(shift - 1)) != 0;
  }
  if (round && (sticky || (kept & 1))) ++kept;

  if (f.te < -126) {
    // Subnormal field; a carry into bit 23 lands exactly on the smallest normal.
    return sign | static_cast<std::uint32_t>(kept);
  }
  std::int32_t te = f.te;
  if ((kept >> 24) != 0) {
    kept >>= 1;
    ++te;
  }
  if (te > 127) return sign | kFloatInf;
  return sign | (static_cast<std::uint32_t>(te + 127) << 23) | (static_cast<std::uint32_t>(kept) & 0x7FFFFFu);
}

Conditioned condition(FppuOp op, std::uint32_t a, std::uint32_t b, std::uint32_t c, const PositConfig& cfg) {
  Conditioned out;
  out.op = op;
  const std::uint32_t nar = cfg.nar_word();
  switch (op) {
    case FppuOp::PADD:
    case FppuOp::PSUB: {
      check_operand(a, cfg);
      check_operand(b, cfg);
      const std::uint32_t rhs = op == FppuOp::PSUB ? negate_word(b, cfg) : b;
      if (is_nar(a, cfg) || is_nar(b, cfg)) out.resolved = nar;
      else if (a == 0) out.resolved = rhs;
      else if (b == 0) out.resolved = a;
      else {
        out.in[0] = lift(a, cfg);
        out.in[1] = lift(b, cfg);
        if (op == FppuOp::PSUB) out.in[1].sign = !out.in[1].sign;
      }
      break;
    }
    case FppuOp::PMUL:
      check_operand(a, cfg);
      check_operand(b, cfg);
      if (is_nar(a, cfg) || is_nar(b, cfg)) out.resolved = nar;
      else if (a == 0 || b == 0) out.resolved = 0;
      else {
        out.in[0] = lift(a, cfg);
        out.in[1] = lift(b, cfg);
      }
      break;
    case FppuOp::PDIV:
      check_operand(a, cfg);
      check_operand(b, cfg);
      if (is_nar(a, cfg) || is_nar(b, cfg) || b == 0) out.resolved = nar;
      else if (a == 0) out.resolved = 0;
      else {
        out.in[0] = lift(a, cfg);
        out.in[1] = lift(b, cfg);
      }
      break;
    case FppuOp::PFMADD:
      check_operand(a, cfg);
      check_operand(b, cfg);
      check_operand(c, cfg);
      if (is_nar(a, cfg) || is_nar(b, cfg) || is_nar(c, cfg)) out.resolved = nar;
      else if (a == 0 || b == 0) out.resolved = c;
      else {
        out.in[0] = lift(a, cfg);
        out.in[1] = lift(b, cfg);
        out.addend_zero = c == 0;
        if (c != 0) out.in[2] = lift(c, cfg);
      }
      break;
    case FppuOp::FCVT_P2F:
      check_operand(a, cfg);
      if (is_nar(a, cfg)) out.resolved = kQuietNaN;
      else if (a == 0) out.resolved = 0;
      else out.in[0] = lift(a, cfg);
      break;
    case FppuOp::FCVT_F2P: {
      const std::uint32_t biased = (a >> 23) & 0xFFu;
      if (biased == 0xFF) out.resolved = nar;
      else if ((a & 0x7FFFFFFFu) == 0) out.resolved = 0;
      else out.in[0] = fir_from_binary32(a);
      break;
    }
    default:
      throw std::invalid_argument("unknown FPPU op code " + std::to_string(static_cast<int>(op)));
  }
  return out;
}

Computed compute_first(const Conditioned& in, const PositConfig& cfg, const ReciprocalParams& params) {
  Computed out;
  out.op = in.op;
  if (in.resolved) {
    out.resolved = in.resolved;
    return out;
  }
  switch (in.op) {
    case FppuOp::PADD:
    case FppuOp::PSUB: {
      const auto sum = fir_add(in.in[0], in.in[1]);
      if (sum) out.result = *sum;
      else out.resolved = 0;
      break;
    }
    case FppuOp::PMUL:
      out.result = fir_mul(in.in[0], in.in[1]);
      break;
    case FppuOp::PFMADD: {
      const Fir product = fir_mul(in.in[0], in.in[1]);
      if (in.addend_zero) {
        out.result = product;
      } else {
        const auto sum = fir_add(product, in.in[2]);
        if (sum) out.result = *sum;
        else out.resolved = 0;
      }
      break;
    }
    case FppuOp::PDIV: {
      // Divisor significand 1.f in [1, 2) is halved into [0.5, 1); the
      // quotient exponent absorbs the factor of two.
      const int w = params.width_for(cfg);
      const Fir divisor = narrow(in.in[1], w - 1);
      const uint128 sig = (uint128{1} << divisor.frac_width) | divisor.frac;
      const Fixed x{sig << (w - 1 - divisor.frac_width), w};
      out.division_pending = true;
      out.dividend = narrow(in.in[0], cfg.max_frac_bits());
      out.dividend.sign = in.in[0].sign != in.in[1].sign;
      out.reciprocal = reciprocal(x, params);
      out.quotient_te = in.in[0].te - in.in[1].te - 1;
      break;
    }
    case FppuOp::FCVT_P2F:
    case FppuOp::FCVT_F2P:
      out.result = in.in[0];
      break;
  }
  return out;
}

Computed compute_second(const Computed& in) {
  if (!in.division_pending) return in;
  Computed out = in;
  out.division_pending = false;
  const Fir& a = in.dividend;
  const uint128 sig = (uint128{1} << a.frac_width) | a.frac;
  const uint128 q = sig * in.reciprocal.raw;
  const int point = a.frac_width + in.reciprocal.frac_bits;  // binary point of q
  if (q == 0) {
    // A degenerate reciprocal; report the smallest magnitude rather than zero.
    out.result = Fir{a.sign, in.quotient_te - point, 0, 0, true};
    return out;
  }
  const int top = msb(q);
  out.result.sign = a.sign;
  out.result.te = in.quotient_te + (top - point);
  out.result.frac = q & low_mask(top);
  out.result.frac_width = top;
  out.result.sticky = a.sticky;
  return out;
}

std::uint32_t normalize(const Computed& in, const PositConfig& cfg, RoundingTrace* trace) {
  if (in.resolved) return *in.resolved;
  if (in.division_pending) return normalize(compute_second(in), cfg, trace);
  if (in.op == FppuOp::FCVT_P2F) return encode_binary32(in.result);
  return encode_round(in.result, cfg, trace).word();
}

std::uint32_t fppu_exec(FppuOp op, std::uint32_t a, std::uint32_t b, std::uint32_t c, const PositConfig& cfg,
                        const ReciprocalParams& params, RoundingTrace* trace) {
  const Conditioned stage1 = condition(op, a, b, c, cfg);
  const Computed stage2 = compute_second(compute_first(stage1, cfg, params));
  return normalize(stage2, cfg, trace);
}

std::uint32_t simd_exec(FppuOp op, std::uint32_t packed_a, std::uint32_t packed_b, const PositConfig& cfg,
                        const ReciprocalParams& params) {
  const int n = cfg.n_bits();
  if (n != 8 && n != 16)
    throw std::invalid_argument("packed execution needs 8- or 16-bit posits, got " + cfg.to_string());
  if (operand_count(op) != 2) throw std::invalid_argument("packed execution supports two-source ops only");
  std::uint32_t out = 0;
  for (int lane = 0; lane < 32 / n; ++lane) {
    const int shift = lane * n;
    const std::uint32_t a = (packed_a >> shift) & cfg.mask();
    const std::uint32_t b = (packed_b >> shift) & cfg.mask();
    out |= fppu_exec(op, a, b, 0, cfg, params) << shift;
  }
  return out;
}

}  // namespace fppu
