#include <benchmark/benchmark.h>

#include <random>

#include "embgeo/ica.hpp"
#include "embgeo/kernels.hpp"

using namespace embgeo;

namespace {

RowMatrix gaussian(Eigen::Index n, Eigen::Index d, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> dist;
  RowMatrix m(n, d);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = dist(gen);
  return m;
}

template <bool Parallel>
void BM_TopK(benchmark::State& state) {
  const auto n = state.range(0);
  const auto prepared = kernels::prepare_rows(gaussian(n, 256, 1), Metric::Cosine);
  for (auto _ : state) {
    auto r = Parallel ? kernels::omp::top_k_neighbors(prepared, 10, Metric::Cosine)
                      : kernels::serial::top_k_neighbors(prepared, 10, Metric::Cosine);
    benchmark::DoNotOptimize(r.index.data());
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}

template <bool Parallel>
void BM_FasticaMoments(benchmark::State& state) {
  const auto samples = state.range(0);
  const Eigen::MatrixXd w = symmetric_decorrelation(gaussian(32, 32, 2));
  const Eigen::MatrixXd z = gaussian(32, samples, 3);
  for (auto _ : state) {
    auto m = Parallel ? kernels::omp::fastica_moments(w, z) : kernels::serial::fastica_moments(w, z);
    benchmark::DoNotOptimize(m.g_zt.data());
  }
  state.SetItemsProcessed(state.iterations() * samples);
}

}  // namespace

BENCHMARK(BM_TopK<false>)->Name("top_k/serial")->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TopK<true>)->Name("top_k/omp")->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FasticaMoments<false>)->Name("fastica_moments/serial")->Arg(4000)->Arg(10000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_FasticaMoments<true>)->Name("fastica_moments/omp")->Arg(4000)->Arg(10000)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
