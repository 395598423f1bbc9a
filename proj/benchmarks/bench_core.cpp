#include <random>

#include <benchmark/benchmark.h>

#include "sparsecp/ensemble_mc.hpp"
#include "sparsecp/grassmann.hpp"
#include "sparsecp/phase_diagram.hpp"
#include "sparsecp/susy_oracle.hpp"

using namespace sparsecp;

namespace {

void BM_SampleMatrix(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(sample_matrix(n, 4, rng));
}
BENCHMARK(BM_SampleMatrix)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_LogAbsDet(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(2);
  const auto X = sample_matrix(n, 4, rng);
  for (auto _ : state) benchmark::DoNotOptimize(log_absdet_sq(X, {0.5, 0.1}));
}
BENCHMARK(BM_LogAbsDet)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_StarSaddle(benchmark::State& state) {
  const PhasePoint pt(0.9, 0.7);
  for (auto _ : state) benchmark::DoNotOptimize(star_saddle(pt));
}
BENCHMARK(BM_StarSaddle);

void BM_ClassifyByArgmax(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ub(0, 1.45), uz(0.01, 2);
  for (auto _ : state) benchmark::DoNotOptimize(classify_by_argmax(PhasePoint(ub(rng), uz(rng))));
}
BENCHMARK(BM_ClassifyByArgmax);

void BM_ClassifyByCurves(benchmark::State& state) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> ub(0, 1.45), uz(0.01, 2);
  for (auto _ : state) benchmark::DoNotOptimize(classify_by_curves(PhasePoint(ub(rng), uz(rng))));
}
BENCHMARK(BM_ClassifyByCurves);

void BM_GaussianGrassmann(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  Eigen::MatrixXcd B(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) B(i, j) = {g(rng), g(rng)};
  for (auto _ : state) benchmark::DoNotOptimize(verify_gaussian_grassmann(B));
}
BENCHMARK(BM_GaussianGrassmann)->DenseRange(1, 4)->Unit(benchmark::kMicrosecond);

Eigen::Matrix2cd fixed_q() {
  using c = std::complex<double>;
  Eigen::Matrix2cd Q;
  Q << c{0.3, 0.1}, c{-0.2, 0.5}, c{0.7, -0.4}, c{0.1, 0.2};
  return Q;
}

void BM_VerifyJk(benchmark::State& state) {
  const Eigen::Matrix2cd Q = fixed_q();
  for (auto _ : state) benchmark::DoNotOptimize(verify_jk(Q, {0.4, -0.3}, 0.5, {0.2, 0.1}, 0.8));
}
BENCHMARK(BM_VerifyJk)->Unit(benchmark::kMicrosecond);

void BM_HFunction(benchmark::State& state) {
  const Eigen::Matrix2cd Q = fixed_q();
  for (auto _ : state) benchmark::DoNotOptimize(h_function(Q, {0.4, -0.3}, 0.5, {0.2, 0.1}, 0.8));
}
BENCHMARK(BM_HFunction);

}  // namespace
BENCHMARK_MAIN();
