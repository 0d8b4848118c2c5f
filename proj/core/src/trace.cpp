#include "fppu/trace.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "fppu/golden.hpp"
#include "fppu/parallel.hpp"

namespace fppu::trace {
namespace {

using isa::Mnemonic;

// Cursor over one line; columns are 1-based.
class LineScanner {
public:
  LineScanner(std::string_view text, int line) : text_(text), line_(line) {}

  int column() const { return static_cast<int>(pos_) + 1; }

  // Next space-delimited token; rejects doubled or missing separators.
  std::string_view token(const char* what) {
    if (pos_ >= text_.size()) fail(std::string("missing ") + what);
    if (pos_ > 0) {
      if (text_[pos_] != ' ') fail("expected a single space before " + std::string(what));
      ++pos_;
    }
    start_ = pos_;
    while (pos_ < text_.size() && text_[pos_] != ' ') ++pos_;
    if (pos_ == start_) fail(std::string("empty ") + what);
    return text_.substr(start_, pos_ - start_);
  }

  bool at_end() const { return pos_ >= text_.size(); }
  int token_column() const { return static_cast<int>(start_) + 1; }

  [[noreturn]] void fail(const std::string& msg, int column = 0) const {
    throw TraceError(line_, column > 0 ? column : static_cast<int>(pos_) + 1, msg);
  }

private:
  std::string_view text_;
  int line_;
  std::size_t pos_ = 0;
  std::size_t start_ = 0;
};

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::uint32_t parse_hex8(std::string_view tok, const LineScanner& sc, int column, const char* what) {
  if (tok.size() != 10 || tok[0] != '0' || (tok[1] != 'x' && tok[1] != 'X'))
    sc.fail(std::string(what) + " must be 0x followed by 8 hex digits", column);
  std::uint32_t v = 0;
  for (std::size_t i = 2; i < tok.size(); ++i) {
    const int d = hex_digit(tok[i]);
    if (d < 0) sc.fail(std::string("bad hex digit in ") + what, column + static_cast<int>(i));
    v = (v << 4) | static_cast<std::uint32_t>(d);
  }
  return v;
}

std::uint32_t parse_field(LineScanner& sc, std::string_view label) {
  const std::string what(label);
  const std::string_view tok = sc.token(what.c_str());
  const int col = sc.token_column();
  if (tok.size() <= label.size() + 1 || tok.substr(0, label.size()) != label || tok[label.size()] != '=')
    sc.fail("expected " + what + "=0xHEX8", col);
  return parse_hex8(tok.substr(label.size() + 1), sc, col + static_cast<int>(label.size()) + 1, what.c_str());
}

float as_float(std::uint32_t w) { return std::bit_cast<float>(w); }

// Binary32 counterpart of a posit instruction on the same (converted) operands.
std::optional<double> binary32_reference(const TraceRecord& r, const PositConfig& cfg) {
  auto f = [&](std::uint32_t posit) { return as_float(golden::posit_to_float({posit & cfg.mask(), cfg})); };
  switch (r.mnemonic) {
    case Mnemonic::PADD: return f(r.rs1_value) + f(r.rs2_value);
    case Mnemonic::PSUB: return f(r.rs1_value) - f(r.rs2_value);
    case Mnemonic::PMUL: return f(r.rs1_value) * f(r.rs2_value);
    case Mnemonic::PDIV: return f(r.rs1_value) / f(r.rs2_value);
    case Mnemonic::PFMADD: return std::fma(f(r.rs1_value), f(r.rs2_value), f(r.rs3_value.value_or(0)));
    case Mnemonic::FCVT_F2P: return as_float(r.rs1_value);
    case Mnemonic::FCVT_P2F: return std::nullopt;
  }
  return std::nullopt;
}

struct Shard {
  std::map<Mnemonic, OpStats> per_op;
  std::vector<Mismatch> mismatches;
};

}  // namespace

TraceError::TraceError(int line, int column, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

TraceRecord parse_trace_line(std::string_view text, int line_number) {
  if (!text.empty() && text.back() == '\r') text.remove_suffix(1);
  LineScanner sc(text, line_number);
  TraceRecord r;
  r.line = line_number;

  const std::string_view cycle = sc.token("cycle");
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    if (cycle[i] < '0' || cycle[i] > '9') sc.fail("cycle must be a decimal integer", sc.token_column() + static_cast<int>(i));
    r.cycle = r.cycle * 10 + static_cast<std::uint64_t>(cycle[i] - '0');
  }
  const std::string_view pc = sc.token("pc");
  r.pc = parse_hex8(pc, sc, sc.token_column(), "pc");
  const std::string_view word = sc.token("instruction word");
  r.insn_word = parse_hex8(word, sc, sc.token_column(), "instruction word");
  const int insn_col = sc.token_column();

  const std::string_view mn = sc.token("mnemonic");
  const int mn_col = sc.token_column();
  const auto m = isa::parse_mnemonic(mn);
  if (!m) sc.fail("unknown mnemonic '" + std::string(mn) + "'", mn_col);
  r.mnemonic = *m;

  const auto decoded = isa::disassemble(r.insn_word);
  if (!decoded) sc.fail("instruction word is not a posit instruction", insn_col);
  if (decoded->mnemonic != r.mnemonic)
    sc.fail("mnemonic " + std::string(mn) + " disagrees with instruction word (" +
                std::string(isa::to_string(decoded->mnemonic)) + ")",
            mn_col);

  r.rd_value = parse_field(sc, "rd");
  r.rs1_value = parse_field(sc, "rs1");
  r.rs2_value = parse_field(sc, "rs2");
  if (r.mnemonic == Mnemonic::PFMADD) r.rs3_value = parse_field(sc, "rs3");
  if (!sc.at_end()) {
    sc.token("end of line");
    sc.fail("unexpected trailing field", sc.token_column());
  }
  return r;
}

std::vector<TraceRecord> parse_trace(std::istream& in) {
  std::vector<TraceRecord> out;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    out.push_back(parse_trace_line(line, n));
  }
  return out;
}

std::string format_trace_line(const TraceRecord& r) {
  char buf[160];
  int len = std::snprintf(buf, sizeof buf, "%llu 0x%08X 0x%08X %s rd=0x%08X rs1=0x%08X rs2=0x%08X",
                          static_cast<unsigned long long>(r.cycle), r.pc, r.insn_word,
                          std::string(isa::to_string(r.mnemonic)).c_str(), r.rd_value, r.rs1_value, r.rs2_value);
  std::string s(buf, static_cast<std::size_t>(len));
  if (r.rs3_value) {
    len = std::snprintf(buf, sizeof buf, " rs3=0x%08X", *r.rs3_value);
    s.append(buf, static_cast<std::size_t>(len));
  }
  return s;
}

void write_trace(std::ostream& out, const std::vector<TraceRecord>& records) {
  for (const auto& r : records) out << format_trace_line(r) << '\n';
}

TraceBuilder::TraceBuilder(PositConfig cfg, std::uint64_t seed, ReciprocalParams params)
    : cfg_(cfg), params_(params), rng_(seed) {}

const TraceRecord& TraceBuilder::append(isa::Mnemonic m, std::uint32_t a, std::uint32_t b, std::uint32_t c) {
  auto reg = [&] { return static_cast<std::uint8_t>(1 + rng_() % 31); };
  isa::Instruction insn{m, reg(), reg(), reg(), std::nullopt};
  if (m == Mnemonic::PFMADD) insn.rs3 = reg();

  TraceRecord r;
  cycle_ += 1 + rng_() % 4;
  r.cycle = cycle_;
  r.pc = pc_;
  pc_ += 4;
  r.insn_word = isa::assemble(insn);
  r.mnemonic = m;
  r.rs1_value = a;
  if (isa::to_op(m) == FppuOp::FCVT_F2P || isa::to_op(m) == FppuOp::FCVT_P2F) b = 0;
  r.rs2_value = b;
  if (m == Mnemonic::PFMADD) r.rs3_value = c;
  r.rd_value = fppu_exec(isa::to_op(m), a, b, c, cfg_, params_);
  records_.push_back(r);
  return records_.back();
}

const TraceRecord& TraceBuilder::append_random(isa::Mnemonic m) {
  auto posit = [&] { return static_cast<std::uint32_t>(rng_()) & cfg_.mask(); };
  if (m == Mnemonic::FCVT_F2P) return append(m, static_cast<std::uint32_t>(rng_()));
  const std::uint32_t a = posit(), b = posit(), c = posit();
  return append(m, a, b, c);
}

void OpStats::merge(const OpStats& o) {
  records += o.records;
  golden_matches += o.golden_matches;
  golden_mismatches += o.golden_mismatches;
  fppu_matches += o.fppu_matches;
  fppu_mismatches += o.fppu_mismatches;
  error_sum += o.error_sum;
  error_samples += o.error_samples;
  error_excluded += o.error_excluded;
}

bool ValidationReport::exact_ops_clean() const {
  for (const auto& [m, s] : per_op)
    if (m != Mnemonic::PDIV && s.golden_mismatches != 0) return false;
  return true;
}

std::string ValidationReport::to_text() const {
  std::ostringstream os;
  os << "trace validation (" << config << "), " << total_records << " records\n";
  char buf[200];
  std::snprintf(buf, sizeof buf, "%-9s %9s %9s %9s %8s %9s %12s %9s\n", "op", "records", "match", "mismatch", "wrong%",
                "fppu-eq", "mean-err", "excluded");
  os << buf;
  for (const auto& [m, s] : per_op) {
    const double wrong = s.records == 0 ? 0.0 : 100.0 * static_cast<double>(s.golden_mismatches) / static_cast<double>(s.records);
    std::snprintf(buf, sizeof buf, "%-9s %9llu %9llu %9llu %8.3f %9llu %12.6g %9llu\n",
                  std::string(isa::to_string(m)).c_str(), static_cast<unsigned long long>(s.records),
                  static_cast<unsigned long long>(s.golden_matches), static_cast<unsigned long long>(s.golden_mismatches),
                  wrong, static_cast<unsigned long long>(s.fppu_matches), s.mean_error(),
                  static_cast<unsigned long long>(s.error_excluded));
    os << buf;
  }
  constexpr std::size_t kShown = 20;
  for (std::size_t i = 0; i < mismatches.size() && i < kShown; ++i) {
    const auto& mm = mismatches[i];
    std::snprintf(buf, sizeof buf, "mismatch: line %d cycle %llu %s traced=0x%08X golden=0x%08X fppu=0x%08X\n", mm.line,
                  static_cast<unsigned long long>(mm.cycle), std::string(isa::to_string(mm.mnemonic)).c_str(),
                  mm.traced, mm.golden, mm.fppu);
    os << buf;
  }
  if (mismatches.size() > kShown) os << "... " << mismatches.size() - kShown << " more mismatches\n";
  return os.str();
}

std::string ValidationReport::to_json() const {
  nlohmann::ordered_json j;
  j["config"] = config;
  j["total_records"] = total_records;
  j["exact_ops_clean"] = exact_ops_clean();
  auto& ops = j["ops"];
  ops = nlohmann::ordered_json::object();
  for (const auto& [m, s] : per_op) {
    ops[std::string(isa::to_string(m))] = {
        {"records", s.records},
        {"golden_matches", s.golden_matches},
        {"golden_mismatches", s.golden_mismatches},
        {"fppu_matches", s.fppu_matches},
        {"fppu_mismatches", s.fppu_mismatches},
        {"mean_error", s.mean_error()},
        {"error_samples", s.error_samples},
        {"error_excluded", s.error_excluded},
    };
  }
  auto& mm = j["mismatches"];
  mm = nlohmann::ordered_json::array();
  for (const auto& m : mismatches) {
    mm.push_back({{"index", m.index},
                  {"line", m.line},
                  {"cycle", m.cycle},
                  {"mnemonic", std::string(isa::to_string(m.mnemonic))},
                  {"traced", m.traced},
                  {"golden", m.golden},
                  {"fppu", m.fppu}});
  }
  return j.dump(2);
}

ValidationReport validate_trace(const std::vector<TraceRecord>& records, const PositConfig& cfg,
                                const ReciprocalParams& params, unsigned workers) {
  const std::uint32_t mask = cfg.mask();
  // Per-record errors are summed in record order afterwards so the report
  // does not depend on the worker count.
  std::vector<double> errors(records.size(), std::numeric_limits<double>::quiet_NaN());
  auto shard = [&](std::size_t begin, std::size_t end) {
    Shard out;
    for (std::size_t i = begin; i < end; ++i) {
      const TraceRecord& r = records[i];
      const FppuOp op = isa::to_op(r.mnemonic);
      const bool from_float = op == FppuOp::FCVT_F2P;
      const std::uint32_t a = from_float ? r.rs1_value : (r.rs1_value & mask);
      const std::uint32_t b = r.rs2_value & mask;
      const std::uint32_t c = r.rs3_value.value_or(0) & mask;
      const std::uint32_t traced = op == FppuOp::FCVT_P2F ? r.rd_value : (r.rd_value & mask);

      std::uint32_t expected = 0;
      const PositBits pa{from_float ? 0 : a, cfg}, pb{b, cfg}, pc{c, cfg};
      switch (op) {
        case FppuOp::PADD: expected = golden::add(pa, pb).word(); break;
        case FppuOp::PSUB: expected = golden::sub(pa, pb).word(); break;
        case FppuOp::PMUL: expected = golden::mul(pa, pb).word(); break;
        case FppuOp::PDIV: expected = golden::div(pa, pb).word(); break;
        case FppuOp::PFMADD: expected = golden::fma(pa, pb, pc).word(); break;
        case FppuOp::FCVT_P2F: expected = golden::posit_to_float(pa); break;
        case FppuOp::FCVT_F2P: expected = golden::float_to_posit(a, cfg).word(); break;
      }
      const std::uint32_t model = fppu_exec(op, a, b, c, cfg, params);

      OpStats& s = out.per_op[r.mnemonic];
      ++s.records;
      if (traced == expected) ++s.golden_matches;
      else {
        ++s.golden_mismatches;
        out.mismatches.push_back({i, r.line, r.cycle, r.mnemonic, traced, expected, model});
      }
      if (traced == model) ++s.fppu_matches;
      else ++s.fppu_mismatches;

      if (op == FppuOp::FCVT_P2F) continue;
      const auto ref = binary32_reference(r, cfg);
      const PositBits result{traced, cfg};
      if (!ref || !std::isfinite(*ref) || *ref == 0.0 || result.is_nar()) {
        ++s.error_excluded;
        continue;
      }
      const double rp = real_value(result).value.to_double();
      errors[i] = std::fabs((rp - *ref) / *ref);
      ++s.error_samples;
    }
    return out;
  };

  ValidationReport report;
  report.config = cfg.to_string();
  report.total_records = records.size();
  for (auto& part : run_sharded(records.size(), workers, shard)) {
    for (const auto& [m, s] : part.per_op) report.per_op[m].merge(s);
    report.mismatches.insert(report.mismatches.end(), part.mismatches.begin(), part.mismatches.end());
  }
  for (std::size_t i = 0; i < records.size(); ++i)
    if (!std::isnan(errors[i])) report.per_op[records[i].mnemonic].error_sum += errors[i];
  return report;
}

}  // namespace fppu::trace
