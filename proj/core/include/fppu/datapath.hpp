#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

#include "fppu/posit.hpp"
#include "fppu/reciprocal.hpp"

namespace fppu {

enum class FppuOp { PADD, PSUB, PMUL, PDIV, PFMADD, FCVT_P2F, FCVT_F2P };

inline constexpr std::array<FppuOp, 7> kAllOps = {FppuOp::PADD,   FppuOp::PSUB,     FppuOp::PMUL,    FppuOp::PDIV,
                                                  FppuOp::PFMADD, FppuOp::FCVT_P2F, FppuOp::FCVT_F2P};

std::string_view to_string(FppuOp op);
std::optional<FppuOp> parse_op(std::string_view name);
/// Number of source operands the op reads (1 for conversions, 3 for PFMADD).
int operand_count(FppuOp op);

// Stage records. The unit is modelled as decode/condition -> compute ->
// normalize; division splits compute into reciprocal and final multiply.

/// Output of input conditioning: either a result already settled by the
/// special-case logic, or the operands lifted into FIR form.
struct Conditioned {
  FppuOp op = FppuOp::PADD;
  std::optional<std::uint32_t> resolved;
  std::array<Fir, 3> in{};
  bool addend_zero = false;  ///< PFMADD with c == 0
};

struct Computed {
  FppuOp op = FppuOp::PADD;
  std::optional<std::uint32_t> resolved;
  Fir result{};
  // Division between its two compute halves.
  bool division_pending = false;
  Fir dividend{};
  Fixed reciprocal{};
  std::int32_t quotient_te = 0;
};

Conditioned condition(FppuOp op, std::uint32_t a, std::uint32_t b, std::uint32_t c, const PositConfig& cfg);
Computed compute_first(const Conditioned& in, const PositConfig& cfg, const ReciprocalParams& params);
Computed compute_second(const Computed& in);
std::uint32_t normalize(const Computed& in, const PositConfig& cfg, RoundingTrace* trace = nullptr);

/// Un-pipelined result of the whole datapath. Posit operands are N-bit
/// patterns in the low bits; FCVT_F2P takes a binary32 word in `a` and
/// FCVT_P2F returns one. Throws std::invalid_argument for an unknown op or
/// operands wider than N bits.
std::uint32_t fppu_exec(FppuOp op, std::uint32_t a, std::uint32_t b, std::uint32_t c, const PositConfig& cfg,
                        const ReciprocalParams& params = {}, RoundingTrace* trace = nullptr);

/// Lane-wise execution on 32-bit registers holding 4 x 8-bit or 2 x 16-bit
/// posits. Only the two-source arithmetic ops are packed.
std::uint32_t simd_exec(FppuOp op, std::uint32_t packed_a, std::uint32_t packed_b, const PositConfig& cfg,
                        const ReciprocalParams& params = {});

// FIR building blocks, exposed for tests and tools.
std::optional<Fir> fir_add(const Fir& x, const Fir& y);
Fir fir_mul(const Fir& x, const Fir& y);
Fir fir_from_binary32(std::uint32_t word);  ///< finite nonzero binary32 only
std::uint32_t encode_binary32(const Fir& f);

}  // namespace fppu
