#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fppu/isa.hpp"

namespace fppu::trace {

/// One executed posit instruction. Line format (single spaces, LF):
///
///   <cycle:dec> <pc:0xHEX8> <insn:0xHEX8> <MNEMONIC> rd=0xHEX8 rs1=0xHEX8 rs2=0xHEX8 [rs3=0xHEX8]
///
/// Lines starting with '#' and blank lines are skipped by parse_trace().
struct TraceRecord {
  std::uint64_t cycle = 0;
  std::uint32_t pc = 0;
  std::uint32_t insn_word = 0;
  isa::Mnemonic mnemonic = isa::Mnemonic::PADD;
  std::uint32_t rd_value = 0;
  std::uint32_t rs1_value = 0;
  std::uint32_t rs2_value = 0;
  std::optional<std::uint32_t> rs3_value;
  int line = 0;  ///< 1-based source line, 0 when built in memory

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

/// Syntax or consistency error with a 1-based line and column.
class TraceError : public std::runtime_error {
public:
  TraceError(int line, int column, const std::string& what);
  int line() const { return line_; }
  int column() const { return column_; }

private:
  int line_;
  int column_;
};

TraceRecord parse_trace_line(std::string_view text, int line_number = 1);
std::vector<TraceRecord> parse_trace(std::istream& in);
std::string format_trace_line(const TraceRecord& r);
void write_trace(std::ostream& out, const std::vector<TraceRecord>& records);

/// Builds self-consistent traces by running the datapath model; registers
/// and addresses are drawn from a seeded generator.
class TraceBuilder {
public:
  TraceBuilder(PositConfig cfg, std::uint64_t seed, ReciprocalParams params = {});

  const TraceRecord& append(isa::Mnemonic m, std::uint32_t a, std::uint32_t b = 0, std::uint32_t c = 0);
  /// Random operands (posit patterns, or binary32 words for FCVT_F2P).
  const TraceRecord& append_random(isa::Mnemonic m);

  const std::vector<TraceRecord>& records() const { return records_; }
  std::vector<TraceRecord> take() { return std::move(records_); }

private:
  PositConfig cfg_;
  ReciprocalParams params_;
  std::mt19937_64 rng_;
  std::uint64_t cycle_ = 0;
  std::uint32_t pc_ = 0x80;
  std::vector<TraceRecord> records_;
};

struct OpStats {
  std::uint64_t records = 0;
  std::uint64_t golden_matches = 0;
  std::uint64_t golden_mismatches = 0;
  std::uint64_t fppu_matches = 0;
  std::uint64_t fppu_mismatches = 0;
  /// Normalized error |r_p - r_f| / |r_f| against the binary32 operation.
  double error_sum = 0.0;
  std::uint64_t error_samples = 0;
  std::uint64_t error_excluded = 0;  ///< r_f zero or not finite, or result NaR

  double mean_error() const { return error_samples == 0 ? 0.0 : error_sum / static_cast<double>(error_samples); }
  void merge(const OpStats& o);
};

struct Mismatch {
  std::size_t index = 0;
  int line = 0;
  std::uint64_t cycle = 0;
  isa::Mnemonic mnemonic = isa::Mnemonic::PADD;
  std::uint32_t traced = 0;
  std::uint32_t golden = 0;
  std::uint32_t fppu = 0;
};

struct ValidationReport {
  std::string config;
  std::uint64_t total_records = 0;
  std::map<isa::Mnemonic, OpStats> per_op;
  std::vector<Mismatch> mismatches;  ///< records whose result differs from the golden model

  /// True when every op other than PDIV matches the golden model exactly.
  bool exact_ops_clean() const;
  std::string to_text() const;
  /// Machine-readable report; schema documented in the README.
  std::string to_json() const;
};

/// Recompute every record with the golden model (and the datapath model for
/// reference) and accumulate per-op statistics. Register values carry the
/// posit in their low N bits. Work is sharded over `workers` threads and
/// merged in record order.
ValidationReport validate_trace(const std::vector<TraceRecord>& records, const PositConfig& cfg,
                                const ReciprocalParams& params = {}, unsigned workers = 1);

}  // namespace fppu::trace
