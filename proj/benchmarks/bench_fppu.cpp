#include <benchmark/benchmark.h>

#include <cstdint>
#include <random>
#include <vector>

#include "fppu/datapath.hpp"
#include "fppu/golden.hpp"
#include "fppu/pipeline.hpp"
#include "fppu/posit.hpp"
#include "fppu/reciprocal.hpp"

using namespace fppu;

namespace {

std::vector<std::uint32_t> random_words(const PositConfig& cfg, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint32_t> out(count);
  for (auto& w : out) w = static_cast<std::uint32_t>(rng()) & cfg.mask();
  return out;
}

constexpr std::size_t kPool = 4096;

// Shapes are passed as (N, ES) benchmark arguments.
void shapes(benchmark::internal::Benchmark* b) {
  b->Args({8, 0})->Args({16, 2})->Args({32, 2});
}

void BM_Decode(benchmark::State& state) {
  const PositConfig cfg(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const auto words = random_words(cfg, kPool, 1);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(decode(PositBits{words[i], cfg}));
    i = (i + 1) % kPool;
  }
}
BENCHMARK(BM_Decode)->Apply(shapes);

void BM_EncodeRound(benchmark::State& state) {
  const PositConfig cfg(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  std::vector<Fir> firs;
  for (std::uint32_t w : random_words(cfg, kPool, 2)) {
    const DecodedPosit d = decode(PositBits{w, cfg});
    if (d.cls == PositClass::Normal) firs.push_back(to_fir(d, cfg));
  }
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(encode_round(firs[i], cfg));
    i = (i + 1) % firs.size();
  }
}
BENCHMARK(BM_EncodeRound)->Apply(shapes);

template <FppuOp Op>
void BM_Fppu(benchmark::State& state) {
  const PositConfig cfg(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const auto a = random_words(cfg, kPool, 3), b = random_words(cfg, kPool, 4), c = random_words(cfg, kPool, 5);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fppu_exec(Op, a[i], b[i], c[i], cfg));
    i = (i + 1) % kPool;
  }
}
BENCHMARK(BM_Fppu<FppuOp::PADD>)->Apply(shapes);
BENCHMARK(BM_Fppu<FppuOp::PMUL>)->Apply(shapes);
BENCHMARK(BM_Fppu<FppuOp::PDIV>)->Apply(shapes);
BENCHMARK(BM_Fppu<FppuOp::PFMADD>)->Apply(shapes);

void BM_GoldenAdd(benchmark::State& state) {
  const PositConfig cfg(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const auto a = random_words(cfg, kPool, 3), b = random_words(cfg, kPool, 4);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(golden::add(PositBits{a[i], cfg}, PositBits{b[i], cfg}));
    i = (i + 1) % kPool;
  }
}
BENCHMARK(BM_GoldenAdd)->Apply(shapes);

void BM_GoldenDiv(benchmark::State& state) {
  const PositConfig cfg(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const auto a = random_words(cfg, kPool, 3), b = random_words(cfg, kPool, 4);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(golden::div(PositBits{a[i], cfg}, PositBits{b[i], cfg}));
    i = (i + 1) % kPool;
  }
}
BENCHMARK(BM_GoldenDiv)->Apply(shapes);

void BM_Reciprocal(benchmark::State& state) {
  const int w = static_cast<int>(state.range(0));
  ReciprocalParams params;
  params.nr_rounds = static_cast<int>(state.range(1));
  std::mt19937_64 rng(6);
  std::vector<Fixed> xs(kPool);
  const uint128 half = uint128{1} << (w - 1);
  for (auto& x : xs) x = Fixed{half + (uint128{rng()} & (half - 1)), w};
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(reciprocal(xs[i], params));
    i = (i + 1) % kPool;
  }
}
BENCHMARK(BM_Reciprocal)->Args({16, 0})->Args({16, 1})->Args({32, 1})->Args({64, 1});

void BM_PipelineClock(benchmark::State& state) {
  const PositConfig cfg(16, 2);
  Pipeline p(cfg, static_cast<int>(state.range(0)));
  const auto a = random_words(cfg, kPool, 7), b = random_words(cfg, kPool, 8);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(p.clock(true, i % 2 ? FppuOp::PMUL : FppuOp::PDIV, a[i], b[i]));
    i = (i + 1) % kPool;
  }
}
BENCHMARK(BM_PipelineClock)->Arg(3)->Arg(4);

void BM_Simd(benchmark::State& state) {
  const PositConfig cfg(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  std::mt19937 rng(9);
  std::vector<std::uint32_t> a(kPool), b(kPool);
  for (std::size_t j = 0; j < kPool; ++j) a[j] = rng(), b[j] = rng();
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(simd_exec(FppuOp::PMUL, a[i], b[i], cfg));
    i = (i + 1) % kPool;
  }
}
BENCHMARK(BM_Simd)->Args({8, 0})->Args({16, 2});

}  // namespace

BENCHMARK_MAIN();
