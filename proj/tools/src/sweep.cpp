#include "fppu/tools/sweep.hpp"

#include <random>
#include <stdexcept>

#include "fppu/golden.hpp"
#include "fppu/parallel.hpp"

namespace fppu::tools {

std::uint32_t golden_exec(FppuOp op, std::uint32_t a, std::uint32_t b, std::uint32_t c, const PositConfig& cfg) {
  if (op == FppuOp::FCVT_F2P) return golden::float_to_posit(a, cfg).word();
  const PositBits pa{a, cfg};
  switch (op) {
    case FppuOp::PADD: return golden::add(pa, {b, cfg}).word();
    case FppuOp::PSUB: return golden::sub(pa, {b, cfg}).word();
    case FppuOp::PMUL: return golden::mul(pa, {b, cfg}).word();
    case FppuOp::PDIV: return golden::div(pa, {b, cfg}).word();
    case FppuOp::PFMADD: return golden::fma(pa, {b, cfg}, {c, cfg}).word();
    case FppuOp::FCVT_P2F: return golden::posit_to_float(pa);
    case FppuOp::FCVT_F2P: break;
  }
  throw std::invalid_argument("unknown op");
}

SweepResult compare(FppuOp op, const std::vector<Operands>& operands, const PositConfig& cfg,
                    const ReciprocalParams& params, unsigned workers) {
  auto shard = [&](std::size_t begin, std::size_t end) {
    SweepResult r;
    r.op = op;
    for (std::size_t i = begin; i < end; ++i) {
      const Operands& o = operands[i];
      ++r.total;
      if (fppu_exec(op, o.a, o.b, o.c, cfg, params) == golden_exec(op, o.a, o.b, o.c, cfg)) ++r.matches;
      else if (r.first_mismatches.size() < SweepResult::kKeptMismatches) r.first_mismatches.push_back(o);
    }
    return r;
  };
  SweepResult total;
  total.op = op;
  for (const SweepResult& part : run_sharded(operands.size(), workers, shard)) {
    total.total += part.total;
    total.matches += part.matches;
    for (const Operands& o : part.first_mismatches)
      if (total.first_mismatches.size() < SweepResult::kKeptMismatches) total.first_mismatches.push_back(o);
  }
  return total;
}

bool exhaustive_feasible(FppuOp op, const PositConfig& cfg) {
  switch (operand_count(op)) {
    case 1: return op == FppuOp::FCVT_P2F && cfg.n_bits() <= 16;
    default: return cfg.n_bits() <= 10;
  }
}

std::vector<Operands> exhaustive_operands(FppuOp op, const PositConfig& cfg, std::uint64_t seed) {
  if (!exhaustive_feasible(op, cfg))
    throw std::invalid_argument("exhaustive " + std::string(to_string(op)) + " is infeasible at " + cfg.to_string());
  const std::uint64_t count = std::uint64_t{1} << cfg.n_bits();
  std::vector<Operands> out;
  if (operand_count(op) == 1) {
    out.reserve(count);
    for (std::uint64_t a = 0; a < count; ++a) out.push_back({static_cast<std::uint32_t>(a), 0, 0});
    return out;
  }
  std::mt19937_64 rng(seed);
  out.reserve(count * count * (op == FppuOp::PFMADD ? 2 : 1));
  for (std::uint64_t a = 0; a < count; ++a)
    for (std::uint64_t b = 0; b < count; ++b) {
      out.push_back({static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b), 0});
      if (op == FppuOp::PFMADD)
        out.push_back({static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(rng()) & cfg.mask()});
    }
  return out;
}

std::vector<Operands> sampled_operands(FppuOp op, const PositConfig& cfg, std::uint64_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::uint32_t mask = op == FppuOp::FCVT_F2P ? 0xFFFFFFFFu : cfg.mask();
  const int n = operand_count(op);
  std::vector<Operands> out(count);
  for (Operands& o : out) {
    o.a = static_cast<std::uint32_t>(rng()) & mask;
    if (n >= 2) o.b = static_cast<std::uint32_t>(rng()) & mask;
    if (n >= 3) o.c = static_cast<std::uint32_t>(rng()) & mask;
  }
  return out;
}

}  // namespace fppu::tools
