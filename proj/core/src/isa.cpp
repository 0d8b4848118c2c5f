#include "fppu/isa.hpp"

#include <stdexcept>

namespace fppu::isa {
namespace {

struct Encoding {
  Mnemonic mnemonic;
  std::uint32_t funct7;
  std::uint32_t funct3;
};

// Two-source rows on custom-0. The conversions extend the table with the
// funct3 values it leaves free.
constexpr std::array<Encoding, 6> kCustom0 = {{
    {Mnemonic::PADD, 0b1100000, 0b000},
    {Mnemonic::PSUB, 0b1101010, 0b001},
    {Mnemonic::PMUL, 0b1100000, 0b010},
    {Mnemonic::PDIV, 0b1100000, 0b100},
    {Mnemonic::FCVT_P2F, 0b1100000, 0b011},
    {Mnemonic::FCVT_F2P, 0b1100000, 0b101},
}};

std::uint32_t rtype(std::uint32_t funct7, std::uint32_t rs2, std::uint32_t rs1, std::uint32_t funct3,
                    std::uint32_t rd, std::uint32_t opcode) {
  return (funct7 << 25) | (rs2 << 20) | (rs1 << 15) | (funct3 << 12) | (rd << 7) | opcode;
}

void check_reg(std::uint8_t r, const char* name) {
  if (r > 31) throw std::invalid_argument(std::string("register index out of range for ") + name);
}

}  // namespace

std::string_view to_string(Mnemonic m) {
  switch (m) {
    case Mnemonic::PADD: return "PADD";
    case Mnemonic::PSUB: return "PSUB";
    case Mnemonic::PMUL: return "PMUL";
    case Mnemonic::PDIV: return "PDIV";
    case Mnemonic::PFMADD: return "PFMADD";
    case Mnemonic::FCVT_P2F: return "FCVT_P2F";
    case Mnemonic::FCVT_F2P: return "FCVT_F2P";
  }
  return "?";
}

std::optional<Mnemonic> parse_mnemonic(std::string_view text) {
  for (Mnemonic m : kAllMnemonics)
    if (to_string(m) == text) return m;
  return std::nullopt;
}

FppuOp to_op(Mnemonic m) {
  switch (m) {
    case Mnemonic::PADD: return FppuOp::PADD;
    case Mnemonic::PSUB: return FppuOp::PSUB;
    case Mnemonic::PMUL: return FppuOp::PMUL;
    case Mnemonic::PDIV: return FppuOp::PDIV;
    case Mnemonic::PFMADD: return FppuOp::PFMADD;
    case Mnemonic::FCVT_P2F: return FppuOp::FCVT_P2F;
    case Mnemonic::FCVT_F2P: return FppuOp::FCVT_F2P;
  }
  throw std::invalid_argument("unknown mnemonic");
}

std::string Instruction::to_string() const {
  std::string s(isa::to_string(mnemonic));
  s += " x" + std::to_string(rd) + ", x" + std::to_string(rs1) + ", x" + std::to_string(rs2);
  if (rs3) s += ", x" + std::to_string(*rs3);
  return s;
}

std::uint32_t assemble(const Instruction& insn) {
  check_reg(insn.rd, "rd");
  check_reg(insn.rs1, "rs1");
  check_reg(insn.rs2, "rs2");
  if (insn.mnemonic == Mnemonic::PFMADD) {
    if (!insn.rs3) throw std::invalid_argument("PFMADD needs rs3");
    check_reg(*insn.rs3, "rs3");
    return rtype(static_cast<std::uint32_t>(*insn.rs3) << 2, insn.rs2, insn.rs1, 0b000, insn.rd, kOpcodeFmadd);
  }
  if (insn.rs3) throw std::invalid_argument("rs3 is only valid on PFMADD");
  for (const Encoding& e : kCustom0)
    if (e.mnemonic == insn.mnemonic) return rtype(e.funct7, insn.rs2, insn.rs1, e.funct3, insn.rd, kOpcodeCustom0);
  throw std::invalid_argument("unknown mnemonic");
}

std::optional<Instruction> disassemble(std::uint32_t word) {
  const std::uint32_t opcode = word & 0x7Fu;
  const auto rd = static_cast<std::uint8_t>((word >> 7) & 0x1Fu);
  const std::uint32_t funct3 = (word >> 12) & 0x7u;
  const auto rs1 = static_cast<std::uint8_t>((word >> 15) & 0x1Fu);
  const auto rs2 = static_cast<std::uint8_t>((word >> 20) & 0x1Fu);
  const std::uint32_t funct7 = word >> 25;

  if (opcode == kOpcodeFmadd) {
    if (funct3 != 0 || (funct7 & 0b11u) != 0) return std::nullopt;
    return Instruction{Mnemonic::PFMADD, rd, rs1, rs2, static_cast<std::uint8_t>(funct7 >> 2)};
  }
  if (opcode != kOpcodeCustom0) return std::nullopt;
  for (const Encoding& e : kCustom0)
    if (e.funct7 == funct7 && e.funct3 == funct3) return Instruction{e.mnemonic, rd, rs1, rs2, std::nullopt};
  return std::nullopt;
}

}  // namespace fppu::isa
