#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fppu/datapath.hpp"

namespace fppu::kernels {

enum class KernelKind { GEMM, Conv3x3, AvgPool4x4 };
enum class InputDistribution { UniformUnit, UniformSym };  ///< [0,1) or (-1,1)

std::string_view to_string(KernelKind k);
std::string_view to_string(InputDistribution d);
std::optional<KernelKind> parse_kernel(std::string_view name);
std::optional<InputDistribution> parse_distribution(std::string_view name);

struct KernelSpec {
  KernelKind kind = KernelKind::GEMM;
  int size = 32;
  std::uint64_t seed = 1;
  InputDistribution distribution = InputDistribution::UniformUnit;

  /// Throws std::invalid_argument (size below 4, or above 1024).
  void validate() const;
};

/// Row-major inputs. GEMM: a and b are size x size. Conv3x3: a is the image,
/// b the 3x3 filter. AvgPool4x4: a is the image, b is empty.
struct KernelInputs {
  std::vector<float> a;
  std::vector<float> b;
};

/// Values carry 24 significant bits so every input is an exact binary32.
KernelInputs make_inputs(const KernelSpec& spec);

enum class ArithOp { Mul, Add, Div };
std::string_view to_string(ArithOp op);

struct OpError {
  double sum = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t excluded = 0;  ///< pairs with r_f == 0 or non-finite, or a NaR posit result

  double mean() const { return samples == 0 ? 0.0 : sum / static_cast<double>(samples); }
};

/// Only the ops a kernel executes appear in the map.
struct ErrorReport {
  std::map<ArithOp, OpError> ops;
};

/// PerOp pairs each posit op with the binary32 op applied to the same
/// operands converted to binary32. TwinRun executes the whole kernel a second
/// time in binary32 and pairs the i-th results of the two runs.
enum class ErrorMode { PerOp, TwinRun };
/// Arithmetic used for the "posit" side; Binary32 is a metric sanity check.
enum class Engine { Fppu, Binary32 };

struct KernelOptions {
  ErrorMode mode = ErrorMode::PerOp;
  Engine engine = Engine::Fppu;
  ReciprocalParams params{};
};

struct KernelResult {
  std::vector<std::uint32_t> posit_out;  ///< posit patterns (binary32 words for the Binary32 engine)
  std::vector<float> float_out;          ///< full binary32 execution on the original inputs
  ErrorReport report;
};

KernelResult run_kernel(const KernelSpec& spec, const PositConfig& cfg, const KernelOptions& options = {});
/// Same, on caller-provided inputs (sizes must match the spec).
KernelResult run_kernel(const KernelSpec& spec, const KernelInputs& inputs, const PositConfig& cfg,
                        const KernelOptions& options = {});

struct TableColumn {
  KernelKind kind;
  std::string config;
  ErrorReport report;
};

/// Rows mul/add/div, one column per kernel x config; '-' where an op is absent.
std::string format_error_table(const std::vector<TableColumn>& columns);

}  // namespace fppu::kernels
