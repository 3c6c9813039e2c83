// Serial reference kernels against their OpenMP counterparts.
//   bench_kernels --benchmark_filter=dft
// The thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "gmc/kernels.hpp"
#include "gmc/operators.hpp"

namespace {

using gmc::Complex;
using gmc::Index;
namespace k = gmc::kernels;

std::vector<Complex> random_complex(std::size_t n, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  std::vector<Complex> v(n);
  for (auto& z : v) z = {nd(gen), nd(gen)};
  return v;
}

std::vector<Complex> twiddles(Index n) {
  std::vector<Complex> t(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = std::polar(1.0, 2.0 * std::numbers::pi * i / n);
  return t;
}

template <bool Parallel>
void BM_gemv(benchmark::State& state) {
  const Index n = state.range(0);
  std::mt19937_64 gen(1);
  std::normal_distribution<double> nd;
  std::vector<double> a(static_cast<std::size_t>(n * n)), x(static_cast<std::size_t>(n)), y(x.size());
  for (auto& v : a) v = nd(gen);
  for (auto& v : x) v = nd(gen);
  for (auto _ : state) {
    if constexpr (Parallel)
      k::gemv<double>(a, n, n, x, y);
    else
      k::serial::gemv<double>(a, n, n, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}

template <bool Parallel>
void BM_dft_synthesis(benchmark::State& state) {
  const Index n = state.range(0), m = n * 100 / 256;
  const auto tw = twiddles(n);
  const auto x = random_complex(static_cast<std::size_t>(n), 2);
  std::vector<Complex> y(static_cast<std::size_t>(m));
  for (auto _ : state) {
    if constexpr (Parallel)
      k::dft_synthesis(tw, 1.0, x, y);
    else
      k::serial::dft_synthesis(tw, 1.0, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * n * m);
}

template <bool Parallel>
void BM_stft_analysis(benchmark::State& state) {
  const gmc::StftFrameOperator op(state.range(0), 64);
  const auto& g = op.geometry();
  std::vector<double> window(static_cast<std::size_t>(g.segment_len));
  for (Index i = 0; i < g.segment_len; ++i)
    window[static_cast<std::size_t>(i)] = std::sin(std::numbers::pi * i / g.segment_len);
  const auto tw = twiddles(g.segment_len);
  const auto s = random_complex(static_cast<std::size_t>(g.signal_len), 3);
  std::vector<Complex> c(static_cast<std::size_t>(g.frames * g.segment_len));
  for (auto _ : state) {
    if constexpr (Parallel)
      k::stft_analysis(g, window, tw, 1.0, s, c);
    else
      k::serial::stft_analysis(g, window, tw, 1.0, s, c);
    benchmark::DoNotOptimize(c.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.size()));
}

}  // namespace

BENCHMARK(BM_gemv<false>)->Name("gemv/serial")->Arg(256)->Arg(1024);
BENCHMARK(BM_gemv<true>)->Name("gemv/openmp")->Arg(256)->Arg(1024);
BENCHMARK(BM_dft_synthesis<false>)->Name("dft_synthesis/serial")->Arg(256)->Arg(4096);
BENCHMARK(BM_dft_synthesis<true>)->Name("dft_synthesis/openmp")->Arg(256)->Arg(4096);
BENCHMARK(BM_stft_analysis<false>)->Name("stft_analysis/serial")->Arg(400)->Arg(65536);
BENCHMARK(BM_stft_analysis<true>)->Name("stft_analysis/openmp")->Arg(400)->Arg(65536);

BENCHMARK_MAIN();
