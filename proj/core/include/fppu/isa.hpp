#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "fppu/datapath.hpp"

namespace fppu::isa {

// R-type layout: funct7[31:25] rs2[24:20] rs1[19:15] funct3[14:12] rd[11:7] opcode[6:0]
inline constexpr std::uint32_t kOpcodeCustom0 = 0b0001011;  // 0x0B, two-source ops and conversions
inline constexpr std::uint32_t kOpcodeFmadd = 0b0101011;    // PFMADD

enum class Mnemonic { PADD, PSUB, PMUL, PDIV, PFMADD, FCVT_P2F, FCVT_F2P };

inline constexpr std::array<Mnemonic, 7> kAllMnemonics = {Mnemonic::PADD,     Mnemonic::PSUB,    Mnemonic::PMUL,
                                                           Mnemonic::PDIV,     Mnemonic::PFMADD,  Mnemonic::FCVT_P2F,
                                                           Mnemonic::FCVT_F2P};

std::string_view to_string(Mnemonic m);
std::optional<Mnemonic> parse_mnemonic(std::string_view text);
FppuOp to_op(Mnemonic m);

struct Instruction {
  Mnemonic mnemonic = Mnemonic::PADD;
  std::uint8_t rd = 0;
  std::uint8_t rs1 = 0;
  std::uint8_t rs2 = 0;
  std::optional<std::uint8_t> rs3;  ///< PFMADD only

  std::string to_string() const;
  friend bool operator==(const Instruction&, const Instruction&) = default;
};

/// Throws std::invalid_argument on a register index above 31, or when rs3 is
/// missing on PFMADD / present on anything else.
std::uint32_t assemble(const Instruction& insn);

/// Recognizes exactly the posit encodings; any other word yields nullopt.
/// The two low bits of PFMADD's funct7 must be zero.
std::optional<Instruction> disassemble(std::uint32_t word);

}  // namespace fppu::isa
