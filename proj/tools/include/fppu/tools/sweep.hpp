#pragma once

#include <cstdint>
#include <vector>

#include "fppu/datapath.hpp"

namespace fppu::tools {

/// Golden-model result for any datapath op, in the same register encoding
/// fppu_exec uses (binary32 words for the conversions).
std::uint32_t golden_exec(FppuOp op, std::uint32_t a, std::uint32_t b, std::uint32_t c, const PositConfig& cfg);

struct Operands {
  std::uint32_t a = 0, b = 0, c = 0;
};

struct SweepResult {
  FppuOp op = FppuOp::PADD;
  std::uint64_t total = 0;
  std::uint64_t matches = 0;
  std::vector<Operands> first_mismatches;  ///< at most kKeptMismatches, in sweep order

  static constexpr std::size_t kKeptMismatches = 8;

  std::uint64_t mismatches() const { return total - matches; }
  double wrong_percent() const { return total == 0 ? 0.0 : 100.0 * static_cast<double>(mismatches()) / static_cast<double>(total); }
};

/// Compare fppu_exec with golden_exec over an explicit operand list, sharded
/// across `workers` threads; the merge is in list order.
SweepResult compare(FppuOp op, const std::vector<Operands>& operands, const PositConfig& cfg,
                    const ReciprocalParams& params, unsigned workers);

/// Whether an exhaustive sweep of `op` at this width is allowed: operand
/// pairs up to N = 10, single posit operands up to N = 16.
bool exhaustive_feasible(FppuOp op, const PositConfig& cfg);

/// All operand combinations. PFMADD sweeps every (a, b) twice: once with
/// c = 0 and once with a seeded random c. Throws std::invalid_argument when
/// not exhaustive_feasible.
std::vector<Operands> exhaustive_operands(FppuOp op, const PositConfig& cfg, std::uint64_t seed);

/// `count` seeded random operand tuples (binary32 words for FCVT_F2P).
std::vector<Operands> sampled_operands(FppuOp op, const PositConfig& cfg, std::uint64_t count, std::uint64_t seed);

}  // namespace fppu::tools
