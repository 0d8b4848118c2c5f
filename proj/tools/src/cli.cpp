#include "fppu/tools/cli.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fppu/golden.hpp"
#include "fppu/kernels.hpp"
#include "fppu/parallel.hpp"
#include "fppu/trace.hpp"
#include "fppu/tools/optk.hpp"
#include "fppu/tools/sweep.hpp"

namespace fppu::tools {
namespace {

using json = nlohmann::ordered_json;

// Errors raised while validating flag combinations; reported as usage errors.
class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct ConfigFlags {
  int nbits = 8;
  int es = 0;
  int nr = 1;
  int width = 0;

  PositConfig config() const {
    try {
      return PositConfig(nbits, es);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  ReciprocalParams params() const {
    ReciprocalParams p;
    p.nr_rounds = nr;
    p.frac_width = width;
    return p;
  }
};

void add_config_flags(CLI::App* sub, ConfigFlags& f) {
  sub->add_option("--nbits,-n", f.nbits, "posit width N")->check(CLI::Range(3, 32))->capture_default_str();
  sub->add_option("--es,-e", f.es, "exponent width ES")->check(CLI::Range(0, 4))->capture_default_str();
}

void add_divider_flags(CLI::App* sub, ConfigFlags& f) {
  sub->add_option("--nr", f.nr, "Newton-Raphson rounds in the divider")->check(CLI::Range(0, 4))->capture_default_str();
  sub->add_option("--width", f.width, "divider fixed-point width (0 = 2N)")
      ->check(CLI::Range(0, ReciprocalParams::kMaxFracWidth))
      ->capture_default_str();
}

std::string hex(std::uint32_t w, int digits = 0) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "0x%0*X", digits, w);
  return buf;
}

int hex_digits(const PositConfig& cfg) { return (cfg.n_bits() + 3) / 4; }

std::optional<FppuOp> op_from_name(std::string_view s) {
  if (s == "add") return FppuOp::PADD;
  if (s == "sub") return FppuOp::PSUB;
  if (s == "mul") return FppuOp::PMUL;
  if (s == "div") return FppuOp::PDIV;
  if (s == "fma") return FppuOp::PFMADD;
  if (s == "p2f") return FppuOp::FCVT_P2F;
  if (s == "f2p") return FppuOp::FCVT_F2P;
  return std::nullopt;
}

std::string_view short_name(FppuOp op) {
  switch (op) {
    case FppuOp::PADD: return "add";
    case FppuOp::PSUB: return "sub";
    case FppuOp::PMUL: return "mul";
    case FppuOp::PDIV: return "div";
    case FppuOp::PFMADD: return "fma";
    case FppuOp::FCVT_P2F: return "p2f";
    case FppuOp::FCVT_F2P: return "f2p";
  }
  return "?";
}

std::vector<FppuOp> parse_op_list(const std::vector<std::string>& names) {
  std::vector<FppuOp> ops;
  for (const std::string& n : names) {
    const auto op = op_from_name(n);
    if (!op) throw UsageError("unknown op '" + n + "' (expected add, sub, mul, div, fma, p2f, f2p)");
    ops.push_back(*op);
  }
  return ops;
}

std::string posit_text(std::uint32_t w, const PositConfig& cfg) {
  const PositBits p{w, cfg};
  if (p.is_nar()) return hex(w, hex_digits(cfg)) + " (NaR)";
  const RealValue v = real_value(p);
  std::ostringstream os;
  os << hex(w, hex_digits(cfg)) << " (" << v.value.to_string();
  char buf[40];
  std::snprintf(buf, sizeof buf, " = %.17g)", v.value.to_double());
  os << buf;
  return os.str();
}

std::string float_text(std::uint32_t w) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "0x%08X (%.9g)", w, static_cast<double>(std::bit_cast<float>(w)));
  return buf;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

// ---------------------------------------------------------------- check

struct CheckFlags {
  ConfigFlags cfg;
  std::vector<std::string> ops{"add", "sub", "mul", "div", "fma"};
  bool exhaustive = false;
  std::uint64_t sample = 0;
  std::uint64_t seed = 1;
  unsigned workers = default_workers();
  std::string json_path;
};

int cmd_check(const CheckFlags& f, std::ostream& out) {
  const PositConfig cfg = f.cfg.config();
  const std::vector<FppuOp> ops = parse_op_list(f.ops);
  const std::uint64_t samples = f.sample == 0 ? 100000 : f.sample;
  if (f.exhaustive) {
    for (FppuOp op : ops)
      if (!exhaustive_feasible(op, cfg))
        throw UsageError("exhaustive " + std::string(short_name(op)) + " is infeasible at " + cfg.to_string() +
                         "; use --sample");
  }

  out << "check " << cfg.to_string() << (f.exhaustive ? " exhaustive" : " sampled") << " nr=" << f.cfg.nr
      << " seed=" << f.seed;
  if (!f.exhaustive) out << " samples=" << samples;
  out << '\n';
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-4s %12s %12s %10s %9s\n", "op", "total", "match", "mismatch", "wrong%");
  out << buf;

  json report;
  report["config"] = cfg.to_string();
  report["mode"] = f.exhaustive ? "exhaustive" : "sampled";
  report["seed"] = f.seed;
  report["nr_rounds"] = f.cfg.nr;
  bool exact_clean = true;
  for (FppuOp op : ops) {
    const auto operands = f.exhaustive ? exhaustive_operands(op, cfg, f.seed) : sampled_operands(op, cfg, samples, f.seed);
    const SweepResult r = compare(op, operands, cfg, f.cfg.params(), f.workers);
    std::snprintf(buf, sizeof buf, "%-4s %12llu %12llu %10llu %9.4f\n", std::string(short_name(op)).c_str(),
                  static_cast<unsigned long long>(r.total), static_cast<unsigned long long>(r.matches),
                  static_cast<unsigned long long>(r.mismatches()), r.wrong_percent());
    out << buf;
    const bool exact = op != FppuOp::PDIV;
    if (exact && r.mismatches() != 0) {
      exact_clean = false;
      for (const Operands& o : r.first_mismatches)
        out << "  mismatch " << short_name(op) << ' ' << hex(o.a) << ' ' << hex(o.b) << ' ' << hex(o.c)
            << ": fppu " << hex(fppu_exec(op, o.a, o.b, o.c, cfg, f.cfg.params())) << " golden "
            << hex(golden_exec(op, o.a, o.b, o.c, cfg)) << '\n';
    }
    report["ops"][std::string(short_name(op))] = {{"total", r.total},
                                                  {"matches", r.matches},
                                                  {"mismatches", r.mismatches()},
                                                  {"wrong_percent", r.wrong_percent()}};
  }
  report["exact_ops_clean"] = exact_clean;
  if (!f.json_path.empty()) write_file(f.json_path, report.dump(2) + "\n");
  out << (exact_clean ? "exact ops: all match\n" : "exact ops: MISMATCH\n");
  return exact_clean ? kExitOk : kExitVerificationFailed;
}

// ------------------------------------------------------------- divtable

struct DivtableFlags {
  std::vector<int> widths{8, 16};
  std::vector<int> es_list;
  std::vector<int> nr_list{1};
  int frac_width = 0;
  std::uint64_t samples = 1000000;
  std::uint64_t seed = 1;
  unsigned workers = default_workers();
};

int cmd_divtable(const DivtableFlags& f, std::ostream& out) {
  struct Row {
    PositConfig cfg;
    int nr;
  };
  std::vector<Row> rows;
  for (int n : f.widths) {
    std::vector<int> es_list = f.es_list;
    if (es_list.empty()) {
      const int top = n == 8 ? 4 : 3;
      for (int es = 0; es <= top && es <= n - 3; ++es) es_list.push_back(es);
    }
    for (int es : es_list)
      for (int nr : f.nr_list) {
        try {
          rows.push_back({PositConfig(n, es), nr});
        } catch (const std::invalid_argument& e) {
          throw UsageError(e.what());
        }
      }
  }

  out << "PDIV wrong results vs golden; seed=" << f.seed << ", sampled rows use " << f.samples << " pairs\n";
  char buf[160];
  std::snprintf(buf, sizeof buf, "%3s %3s %3s %-11s %12s %10s %8s\n", "N", "ES", "NR", "mode", "pairs", "wrong",
                "wrong%");
  out << buf;
  for (const Row& row : rows) {
    ReciprocalParams params;
    params.nr_rounds = row.nr;
    params.frac_width = f.frac_width;
    const bool exhaustive = exhaustive_feasible(FppuOp::PDIV, row.cfg);
    const auto operands = exhaustive ? exhaustive_operands(FppuOp::PDIV, row.cfg, f.seed)
                                     : sampled_operands(FppuOp::PDIV, row.cfg, f.samples, f.seed);
    const SweepResult r = compare(FppuOp::PDIV, operands, row.cfg, params, f.workers);
    std::snprintf(buf, sizeof buf, "%3d %3d %3d %-11s %12llu %10llu %8.3f\n", row.cfg.n_bits(), row.cfg.es_bits(),
                  row.nr, exhaustive ? "exhaustive" : "sampled", static_cast<unsigned long long>(r.total),
                  static_cast<unsigned long long>(r.mismatches()), r.wrong_percent());
    out << buf;
  }
  return kExitOk;
}

// ----------------------------------------------------------------- optk

struct OptkFlags {
  std::optional<double> compare_k1, compare_k2;
  double start_k1 = 1.5, start_k2 = 1.0;
};

int cmd_optk(const OptkFlags& f, std::ostream& out) {
  if (f.compare_k1.has_value() != f.compare_k2.has_value())
    throw UsageError("--compare-k1 and --compare-k2 must be given together");
  OptkOptions opt;
  opt.start_k1 = f.start_k1;
  opt.start_k2 = f.start_k2;
  const OptkResult r = optimize_k(opt);
  char buf[160];
  std::snprintf(buf, sizeof buf, "k1 = %.17g\nk2 = %.17g\n", r.k1, r.k2);
  out << buf;
  std::snprintf(buf, sizeof buf, "e2(k1, k2) = %.17g\n", r.e2);
  out << buf;
  std::snprintf(buf, sizeof buf, "e2(%.17g, %.17g) = %.17g (start)\n", f.start_k1, f.start_k2,
                seed_error_integral(f.start_k1, f.start_k2));
  out << buf;
  std::snprintf(buf, sizeof buf, "e2(%.17g, %.17g) = %.17g (divider constants)\n", ReciprocalParams::kDefaultK1,
                ReciprocalParams::kDefaultK2,
                seed_error_integral(ReciprocalParams::kDefaultK1, ReciprocalParams::kDefaultK2));
  out << buf;
  out << "simplex iterations = " << r.iterations << (r.converged ? " (converged)\n" : " (not converged)\n");
  if (f.compare_k1) {
    const double other = seed_error_integral(*f.compare_k1, *f.compare_k2);
    std::snprintf(buf, sizeof buf, "e2(%.17g, %.17g) = %.17g (comparison)\nimprovement = %.3f%%\n", *f.compare_k1,
                  *f.compare_k2, other, 100.0 * (other - r.e2) / other);
    out << buf;
  }
  return r.converged ? kExitOk : kExitVerificationFailed;
}

// --------------------------------------------------------------- kernel

struct KernelFlags {
  std::string kernel = "all";
  int size = 32;
  std::uint64_t seed = 1;
  std::string dist = "unit";
  std::vector<std::string> configs{"8,0", "16,2"};
  std::string mode = "perop";
  std::string engine = "fppu";
  std::string json_path;
};

int cmd_kernel(const KernelFlags& f, std::ostream& out) {
  using namespace kernels;
  std::vector<KernelKind> kinds;
  if (f.kernel == "all") kinds = {KernelKind::Conv3x3, KernelKind::GEMM, KernelKind::AvgPool4x4};
  else if (const auto k = parse_kernel(f.kernel)) kinds = {*k};
  else throw UsageError("unknown kernel '" + f.kernel + "'");
  const auto dist = parse_distribution(f.dist);
  if (!dist) throw UsageError("unknown distribution '" + f.dist + "' (expected unit or sym)");
  KernelOptions options;
  if (f.mode == "twin") options.mode = ErrorMode::TwinRun;
  else if (f.mode != "perop") throw UsageError("unknown mode '" + f.mode + "' (expected perop or twin)");
  if (f.engine == "binary32") options.engine = Engine::Binary32;
  else if (f.engine != "fppu") throw UsageError("unknown engine '" + f.engine + "' (expected fppu or binary32)");

  std::vector<PositConfig> cfgs;
  for (const std::string& c : f.configs) {
    int n = 0, es = 0;
    char tail = 0;
    if (std::sscanf(c.c_str(), "%d,%d%c", &n, &es, &tail) != 2) throw UsageError("bad config '" + c + "' (expected N,ES)");
    try {
      cfgs.emplace_back(n, es);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  if (f.size < 4) throw UsageError("--size must be at least 4");

  std::vector<TableColumn> columns;
  json report;
  report["size"] = f.size;
  report["seed"] = f.seed;
  report["distribution"] = std::string(to_string(*dist));
  report["mode"] = f.mode;
  report["engine"] = f.engine;
  report["columns"] = json::array();
  for (KernelKind k : kinds)
    for (const PositConfig& cfg : cfgs) {
      KernelSpec spec{k, f.size, f.seed, *dist};
      const KernelResult r = run_kernel(spec, cfg, options);
      columns.push_back({k, cfg.to_string(), r.report});
      json col{{"kernel", std::string(to_string(k))}, {"config", cfg.to_string()}, {"ops", json::object()}};
      for (const auto& [op, e] : r.report.ops)
        col["ops"][std::string(to_string(op))] = {{"mean_error", e.mean()}, {"samples", e.samples}, {"excluded", e.excluded}};
      report["columns"].push_back(col);
    }
  out << "normalized mean error vs binary32 (" << f.mode << ", size " << f.size << ", seed " << f.seed << ", "
      << f.dist << " inputs)\n";
  out << format_error_table(columns);
  for (const auto& c : columns) {
    out << to_string(c.kind) << ' ' << c.config << ':';
    for (const auto& [op, e] : c.report.ops) out << ' ' << to_string(op) << " n=" << e.samples << " excluded=" << e.excluded;
    out << '\n';
  }
  if (!f.json_path.empty()) write_file(f.json_path, report.dump(2) + "\n");
  return kExitOk;
}

// ---------------------------------------------------------------- trace

struct TraceValidateFlags {
  ConfigFlags cfg;
  std::string path;
  std::string json_path;
  unsigned workers = default_workers();
};

int cmd_trace_validate(const TraceValidateFlags& f, std::ostream& out) {
  const PositConfig cfg = f.cfg.config();
  std::ifstream in(f.path);
  if (!in) throw std::runtime_error("cannot read " + f.path);
  const auto records = trace::parse_trace(in);
  const trace::ValidationReport report = trace::validate_trace(records, cfg, f.cfg.params(), f.workers);
  out << report.to_text();
  if (!f.json_path.empty()) write_file(f.json_path, report.to_json() + "\n");
  return report.exact_ops_clean() ? kExitOk : kExitVerificationFailed;
}

struct TraceGenerateFlags {
  ConfigFlags cfg;
  std::uint64_t count = 1000;
  std::vector<std::string> ops{"add", "sub", "mul", "div", "fma", "p2f", "f2p"};
  std::uint64_t seed = 1;
  std::string out_path;
};

isa::Mnemonic mnemonic_of(FppuOp op) {
  for (isa::Mnemonic m : isa::kAllMnemonics)
    if (isa::to_op(m) == op) return m;
  throw std::invalid_argument("no mnemonic for op");
}

int cmd_trace_generate(const TraceGenerateFlags& f, std::ostream& out) {
  const PositConfig cfg = f.cfg.config();
  const std::vector<FppuOp> ops = parse_op_list(f.ops);
  if (ops.empty()) throw UsageError("--ops must name at least one op");
  trace::TraceBuilder builder(cfg, f.seed, f.cfg.params());
  std::mt19937_64 pick(f.seed ^ 0x9E3779B97F4A7C15ull);
  for (std::uint64_t i = 0; i < f.count; ++i) builder.append_random(mnemonic_of(ops[pick() % ops.size()]));
  std::ostringstream text;
  text << "# fppu trace " << cfg.to_string() << " seed=" << f.seed << '\n';
  trace::write_trace(text, builder.records());
  if (f.out_path.empty()) out << text.str();
  else write_file(f.out_path, text.str());
  return kExitOk;
}

// ----------------------------------------------------------------- eval

struct EvalFlags {
  ConfigFlags cfg;
  std::string op;
  std::vector<std::string> operands;
};

std::uint32_t parse_operand(const std::string& text, const PositConfig& cfg, bool binary32) {
  if (text == "NaR" || text == "nar") {
    if (binary32) throw UsageError("NaR is not a binary32 operand");
    return cfg.nar_word();
  }
  if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(text.substr(2), &used, 16);
    } catch (const std::exception&) {
      throw UsageError("unparsable operand '" + text + "'");
    }
    if (used != text.size() - 2) throw UsageError("unparsable operand '" + text + "'");
    const std::uint64_t limit = binary32 ? 0xFFFFFFFFull : cfg.mask();
    if (v > limit) throw UsageError("operand '" + text + "' does not fit " + (binary32 ? "32" : std::to_string(cfg.n_bits())) + " bits");
    return static_cast<std::uint32_t>(v);
  }
  std::size_t used = 0;
  double d = 0.0;
  try {
    d = std::stod(text, &used);
  } catch (const std::exception&) {
    throw UsageError("unparsable operand '" + text + "'");
  }
  if (used != text.size()) throw UsageError("unparsable operand '" + text + "'");
  const auto word = std::bit_cast<std::uint32_t>(static_cast<float>(d));
  return binary32 ? word : golden::float_to_posit(word, cfg).word();
}

void print_decode(std::uint32_t w, const PositConfig& cfg, std::ostream& out) {
  const PositBits p{w, cfg};
  const DecodedPosit d = decode(p);
  out << cfg.to_string() << ' ' << hex(w, hex_digits(cfg)) << '\n';
  out << "  class    " << to_string(d.cls) << '\n';
  if (d.cls == PositClass::Normal) {
    auto bits = [](std::uint32_t v, int len) {
      std::string s = "0b";
      for (int i = len - 1; i >= 0; --i) s += ((v >> i) & 1u) ? '1' : '0';
      return len == 0 ? std::string("(none)") : s;
    };
    out << "  sign     " << d.sign << '\n';
    out << "  regime   k=" << d.regime_k << " run=" << d.regime_len << '\n';
    out << "  exponent " << d.exponent << " (" << d.exponent_len << " bits present"
        << (d.exponent_len > 0 ? " " + bits(d.exponent >> (cfg.es_bits() - d.exponent_len), d.exponent_len) : "")
        << ")\n";
    out << "  fraction " << bits(d.frac, d.frac_len) << " (" << d.frac_len << " bits)\n";
  }
  out << "  value    " << posit_text(w, cfg) << '\n';
  out << "  binary32 " << float_text(golden::posit_to_float(p)) << '\n';
}

int cmd_eval(const EvalFlags& f, std::ostream& out) {
  const PositConfig cfg = f.cfg.config();
  if (f.op == "decode") {
    if (f.operands.size() != 1) throw UsageError("decode takes one operand");
    print_decode(parse_operand(f.operands[0], cfg, false), cfg, out);
    return kExitOk;
  }
  const auto op = op_from_name(f.op);
  if (!op) throw UsageError("unknown op '" + f.op + "'");
  const int count = operand_count(*op);
  if (static_cast<int>(f.operands.size()) != count)
    throw UsageError(f.op + " takes " + std::to_string(count) + " operand(s)");
  std::array<std::uint32_t, 3> w{};
  for (int i = 0; i < count; ++i) w[i] = parse_operand(f.operands[i], cfg, *op == FppuOp::FCVT_F2P);

  out << cfg.to_string() << ' ' << f.op << '\n';
  for (int i = 0; i < count; ++i)
    out << "  " << static_cast<char>('a' + i) << "      "
        << (*op == FppuOp::FCVT_F2P ? float_text(w[i]) : posit_text(w[i], cfg)) << '\n';
  const std::uint32_t g = golden_exec(*op, w[0], w[1], w[2], cfg);
  RoundingTrace rt;
  const std::uint32_t r = fppu_exec(*op, w[0], w[1], w[2], cfg, f.cfg.params(), &rt);
  auto show = [&](std::uint32_t v) { return *op == FppuOp::FCVT_P2F ? float_text(v) : posit_text(v, cfg); };
  out << "  golden " << show(g) << '\n';
  out << "  fppu   " << show(r) << (r == g ? "" : "  (differs from golden)") << '\n';
  out << "  round  k=" << rt.regime_k << " exp=" << rt.exponent << " G=" << rt.guard << " R=" << rt.round
      << " S=" << rt.sticky << " up=" << rt.rounded_up << " saturated=" << rt.saturated << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Posit arithmetic unit model: verification, division tables, kernels, traces", "fppu"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "fppu 0.1.0");

  CheckFlags check;
  auto* c = app.add_subcommand("check", "compare the datapath model with the golden model");
  add_config_flags(c, check.cfg);
  add_divider_flags(c, check.cfg);
  c->add_option("--ops", check.ops, "ops to check: add,sub,mul,div,fma,p2f,f2p")->delimiter(',')->capture_default_str();
  auto* exh = c->add_flag("--exhaustive", check.exhaustive, "sweep every operand combination");
  c->add_option("--sample", check.sample, "number of seeded random operand tuples (default 100000)")->excludes(exh);
  c->add_option("--seed", check.seed, "random seed")->capture_default_str();
  c->add_option("--workers,-j", check.workers, "worker threads")->check(CLI::Range(1u, 256u))->capture_default_str();
  c->add_option("--json", check.json_path, "also write a JSON report to this path");

  DivtableFlags divt;
  auto* d = app.add_subcommand("divtable", "PDIV wrong-result percentages per configuration");
  d->add_option("--nbits", divt.widths, "posit widths")->delimiter(',')->check(CLI::Range(3, 32))->capture_default_str();
  d->add_option("--es", divt.es_list, "exponent widths (default 0..4 for N=8, 0..3 otherwise)")
      ->delimiter(',')
      ->check(CLI::Range(0, 4));
  d->add_option("--nr", divt.nr_list, "Newton-Raphson rounds")->delimiter(',')->check(CLI::Range(0, 4))->capture_default_str();
  d->add_option("--width", divt.frac_width, "divider fixed-point width (0 = 2N)")
      ->check(CLI::Range(0, ReciprocalParams::kMaxFracWidth))
      ->capture_default_str();
  d->add_option("--samples", divt.samples, "pairs per sampled row")->capture_default_str();
  d->add_option("--seed", divt.seed, "random seed")->capture_default_str();
  d->add_option("--workers,-j", divt.workers, "worker threads")->check(CLI::Range(1u, 256u))->capture_default_str();

  OptkFlags optk;
  auto* o = app.add_subcommand("optk", "minimize the reciprocal seed's squared relative error over (k1, k2)");
  o->add_option("--compare-k1", optk.compare_k1, "k1 of a reference constant pair");
  o->add_option("--compare-k2", optk.compare_k2, "k2 of a reference constant pair");
  o->add_option("--start-k1", optk.start_k1, "starting k1")->capture_default_str();
  o->add_option("--start-k2", optk.start_k2, "starting k2")->capture_default_str();

  KernelFlags kern;
  auto* k = app.add_subcommand("kernel", "normalized mean error of kernel ops against binary32");
  k->add_option("--kernel", kern.kernel, "gemm, conv3x3, avgpool4x4 or all")->capture_default_str();
  k->add_option("--size", kern.size, "matrix / image edge")->capture_default_str();
  k->add_option("--seed", kern.seed, "input seed")->capture_default_str();
  k->add_option("--dist", kern.dist, "input distribution: unit [0,1) or sym (-1,1)")->capture_default_str();
  k->add_option("--configs", kern.configs, "posit configs as N,ES; separate several with ';'")
      ->delimiter(';')
      ->capture_default_str();
  k->add_option("--mode", kern.mode, "perop or twin")->capture_default_str();
  k->add_option("--engine", kern.engine, "fppu or binary32")->capture_default_str();
  k->add_option("--json", kern.json_path, "also write a JSON report to this path");

  auto* t = app.add_subcommand("trace", "validate or generate instruction traces");
  t->require_subcommand(1);
  TraceValidateFlags tv;
  auto* tval = t->add_subcommand("validate", "check every traced result against the golden model");
  add_config_flags(tval, tv.cfg);
  add_divider_flags(tval, tv.cfg);
  tval->add_option("file", tv.path, "trace file")->required();
  tval->add_option("--json", tv.json_path, "also write a JSON report to this path");
  tval->add_option("--workers,-j", tv.workers, "worker threads")->check(CLI::Range(1u, 256u))->capture_default_str();
  TraceGenerateFlags tg;
  auto* tgen = t->add_subcommand("generate", "write a self-consistent trace produced by the datapath model");
  add_config_flags(tgen, tg.cfg);
  add_divider_flags(tgen, tg.cfg);
  tgen->add_option("--count", tg.count, "number of instructions")->capture_default_str();
  tgen->add_option("--ops", tg.ops, "ops to draw from")->delimiter(',')->capture_default_str();
  tgen->add_option("--seed", tg.seed, "random seed")->capture_default_str();
  tgen->add_option("--out,-o", tg.out_path, "output file (default stdout)");

  EvalFlags ev;
  auto* e = app.add_subcommand("eval", "evaluate one operation and show every intermediate");
  add_config_flags(e, ev.cfg);
  add_divider_flags(e, ev.cfg);
  e->add_option("op", ev.op, "decode, add, sub, mul, div, fma, p2f or f2p")->required();
  e->add_option("operands", ev.operands, "hex pattern (0x..), decimal real, or NaR")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (c->parsed()) return cmd_check(check, out);
    if (d->parsed()) return cmd_divtable(divt, out);
    if (o->parsed()) return cmd_optk(optk, out);
    if (k->parsed()) return cmd_kernel(kern, out);
    if (tval->parsed()) return cmd_trace_validate(tv, out);
    if (tgen->parsed()) return cmd_trace_generate(tg, out);
    if (e->parsed()) return cmd_eval(ev, out);
  } catch (const UsageError& ex) {
    err << "fppu: " << ex.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& ex) {
    err << "fppu: " << ex.what() << '\n';
    return kExitVerificationFailed;
  }
  return kExitUsage;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"fppu"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace fppu::tools
