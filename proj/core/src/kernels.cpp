#include "fppu/kernels.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <stdexcept>

#include "fppu/golden.hpp"

namespace fppu::kernels {
namespace {

float word_to_float(std::uint32_t w) { return std::bit_cast<float>(w); }
std::uint32_t float_to_word(float f) { return std::bit_cast<std::uint32_t>(f); }

float float_op(ArithOp op, float x, float y) {
  switch (op) {
    case ArithOp::Mul: return x * y;
    case ArithOp::Add: return x + y;
    case ArithOp::Div: return x / y;
  }
  return 0.0f;
}

FppuOp fppu_op(ArithOp op) {
  switch (op) {
    case ArithOp::Mul: return FppuOp::PMUL;
    case ArithOp::Add: return FppuOp::PADD;
    case ArithOp::Div: return FppuOp::PDIV;
  }
  return FppuOp::PADD;
}

// One executed elementwise op. r_f is the binary32 op on this op's own
// operands; the twin-run mode replaces it afterwards.
struct LogEntry {
  ArithOp op;
  double r_p;
  double r_f;
};

class PositEngine {
public:
  using Value = std::uint32_t;

  PositEngine(const PositConfig& cfg, const ReciprocalParams& params) : cfg_(cfg), params_(params) {}

  Value input(float f) const { return golden::float_to_posit(float_to_word(f), cfg_).word(); }

  Value apply(ArithOp op, Value x, Value y) {
    const Value r = fppu_exec(fppu_op(op), x, y, 0, cfg_, params_);
    const float fx = to_float(x), fy = to_float(y);
    const PositBits rb{r, cfg_};
    const double rp = rb.is_nar() ? std::numeric_limits<double>::quiet_NaN() : real_value(rb).value.to_double();
    log.push_back({op, rp, float_op(op, fx, fy)});
    return r;
  }

  std::uint32_t output(Value v) const { return v; }

  std::vector<LogEntry> log;

private:
  float to_float(Value v) const { return word_to_float(golden::posit_to_float({v, cfg_})); }

  PositConfig cfg_;
  ReciprocalParams params_;
};

class FloatEngine {
public:
  using Value = float;

  Value input(float f) const { return f; }

  Value apply(ArithOp op, Value x, Value y) {
    const float r = float_op(op, x, y);
    log.push_back({op, r, r});
    return r;
  }

  std::uint32_t output(Value v) const { return float_to_word(v); }

  std::vector<LogEntry> log;
};

// Kernels share one accumulation rule: the first product seeds the
// accumulator, the rest are added in row-major, innermost-index order.
template <class E>
std::vector<typename E::Value> execute(const KernelSpec& spec, const KernelInputs& in, E& eng) {
  using V = typename E::Value;
  const int n = spec.size;
  std::vector<V> a(in.a.size()), b(in.b.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = eng.input(in.a[i]);
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = eng.input(in.b[i]);

  std::vector<V> out;
  switch (spec.kind) {
    case KernelKind::GEMM:
      out.reserve(static_cast<std::size_t>(n) * n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          V acc = eng.apply(ArithOp::Mul, a[i * n], b[j]);
          for (int k = 1; k < n; ++k) acc = eng.apply(ArithOp::Add, acc, eng.apply(ArithOp::Mul, a[i * n + k], b[k * n + j]));
          out.push_back(acc);
        }
      break;
    case KernelKind::Conv3x3: {
      const int m = n - 2;
      out.reserve(static_cast<std::size_t>(m) * m);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          V acc = eng.apply(ArithOp::Mul, a[i * n + j], b[0]);
          for (int t = 1; t < 9; ++t) {
            const int di = t / 3, dj = t % 3;
            acc = eng.apply(ArithOp::Add, acc, eng.apply(ArithOp::Mul, a[(i + di) * n + j + dj], b[t]));
          }
          out.push_back(acc);
        }
      break;
    }
    case KernelKind::AvgPool4x4: {
      const int m = n / 4;
      const V sixteen = eng.input(16.0f);
      out.reserve(static_cast<std::size_t>(m) * m);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          V acc = a[(4 * i) * n + 4 * j];
          for (int t = 1; t < 16; ++t) acc = eng.apply(ArithOp::Add, acc, a[(4 * i + t / 4) * n + 4 * j + t % 4]);
          out.push_back(eng.apply(ArithOp::Div, acc, sixteen));
        }
      break;
    }
  }
  return out;
}

void accumulate(ErrorReport& report, ArithOp op, double r_p, double r_f) {
  OpError& e = report.ops[op];
  if (r_f == 0.0 || !std::isfinite(r_f) || std::isnan(r_p)) {
    ++e.excluded;
    return;
  }
  e.sum += std::fabs((r_p - r_f) / r_f);
  ++e.samples;
}

std::size_t expected_b_size(const KernelSpec& spec) {
  switch (spec.kind) {
    case KernelKind::GEMM: return static_cast<std::size_t>(spec.size) * spec.size;
    case KernelKind::Conv3x3: return 9;
    case KernelKind::AvgPool4x4: return 0;
  }
  return 0;
}

}  // namespace

std::string_view to_string(KernelKind k) {
  switch (k) {
    case KernelKind::GEMM: return "gemm";
    case KernelKind::Conv3x3: return "conv3x3";
    case KernelKind::AvgPool4x4: return "avgpool4x4";
  }
  return "?";
}

std::string_view to_string(InputDistribution d) {
  return d == InputDistribution::UniformUnit ? "unit" : "sym";
}

std::optional<KernelKind> parse_kernel(std::string_view name) {
  for (KernelKind k : {KernelKind::GEMM, KernelKind::Conv3x3, KernelKind::AvgPool4x4})
    if (to_string(k) == name) return k;
  if (name == "conv") return KernelKind::Conv3x3;
  if (name == "pool" || name == "avgpool") return KernelKind::AvgPool4x4;
  return std::nullopt;
}

std::optional<InputDistribution> parse_distribution(std::string_view name) {
  if (name == "unit") return InputDistribution::UniformUnit;
  if (name == "sym") return InputDistribution::UniformSym;
  return std::nullopt;
}

std::string_view to_string(ArithOp op) {
  switch (op) {
    case ArithOp::Mul: return "mul";
    case ArithOp::Add: return "add";
    case ArithOp::Div: return "div";
  }
  return "?";
}

void KernelSpec::validate() const {
  if (size < 4) throw std::invalid_argument("kernel size must be at least 4");
  if (size > 1024) throw std::invalid_argument("kernel size must be at most 1024");
}

KernelInputs make_inputs(const KernelSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  auto draw = [&]() -> float {
    constexpr double kScale = 1.0 / 16777216.0;  // 2^-24
    if (spec.distribution == InputDistribution::UniformUnit) return static_cast<float>(static_cast<double>(rng() >> 40) * kScale);
    for (;;) {
      // 25 random bits give (2^25 values) / 2^24 in [-1, 1); -1 is redrawn.
      const auto v = static_cast<std::int64_t>(rng() >> 39) - (std::int64_t{1} << 24);
      if (v != -(std::int64_t{1} << 24)) return static_cast<float>(static_cast<double>(v) * kScale);
    }
  };
  KernelInputs in;
  const auto n = static_cast<std::size_t>(spec.size);
  in.a.resize(n * n);
  for (float& x : in.a) x = draw();
  in.b.resize(expected_b_size(spec));
  for (float& x : in.b) x = draw();
  return in;
}

KernelResult run_kernel(const KernelSpec& spec, const PositConfig& cfg, const KernelOptions& options) {
  return run_kernel(spec, make_inputs(spec), cfg, options);
}

KernelResult run_kernel(const KernelSpec& spec, const KernelInputs& inputs, const PositConfig& cfg,
                        const KernelOptions& options) {
  spec.validate();
  const auto n = static_cast<std::size_t>(spec.size);
  if (inputs.a.size() != n * n || inputs.b.size() != expected_b_size(spec))
    throw std::invalid_argument("kernel inputs do not match the spec");

  KernelResult result;
  FloatEngine reference;
  for (float v : execute(spec, inputs, reference)) result.float_out.push_back(v);

  std::vector<LogEntry> log;
  if (options.engine == Engine::Fppu) {
    PositEngine eng(cfg, options.params);
    for (auto v : execute(spec, inputs, eng)) result.posit_out.push_back(eng.output(v));
    log = std::move(eng.log);
  } else {
    FloatEngine eng;
    for (auto v : execute(spec, inputs, eng)) result.posit_out.push_back(eng.output(v));
    log = std::move(eng.log);
  }

  for (std::size_t i = 0; i < log.size(); ++i) {
    const double r_f = options.mode == ErrorMode::PerOp ? log[i].r_f : reference.log[i].r_p;
    accumulate(result.report, log[i].op, log[i].r_p, r_f);
  }
  return result;
}

std::string format_error_table(const std::vector<TableColumn>& columns) {
  std::string out;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%-6s", "op");
  out += buf;
  for (const auto& c : columns) {
    std::snprintf(buf, sizeof buf, " %18s", (std::string(to_string(c.kind)) + " " + c.config).c_str());
    out += buf;
  }
  out += '\n';
  for (ArithOp op : {ArithOp::Mul, ArithOp::Add, ArithOp::Div}) {
    std::snprintf(buf, sizeof buf, "%-6s", std::string(to_string(op)).c_str());
    out += buf;
    for (const auto& c : columns) {
      const auto it = c.report.ops.find(op);
      if (it == c.report.ops.end()) std::snprintf(buf, sizeof buf, " %18s", "-");
      else std::snprintf(buf, sizeof buf, " %18.6g", it->second.mean());
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace fppu::kernels
