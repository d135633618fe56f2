#include <benchmark/benchmark.h>

#include <random>

#include "tfr/lasso.hpp"
#include "tfr/measurement.hpp"
#include "tfr/siggen.hpp"
#include "tfr/tfd.hpp"
#include "tfr/uista.hpp"
#include "tfr/unet.hpp"

namespace {

std::vector<double> random_values(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<double> v(n);
  for (auto& x : v) x = g(rng);
  return v;
}

void BM_Forward(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const tfr::MeasurementOp op(128, {d, d});
  const auto w = random_values(op.cols(), 1);
  std::vector<tfr::Complex> out(op.rows());
  for (auto _ : state) {
    op.forward(w, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_Forward)->Arg(13)->Arg(29)->Unit(benchmark::kMicrosecond);

void BM_Adjoint(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const tfr::MeasurementOp op(128, {d, d});
  const auto w = random_values(op.cols(), 2);
  const auto y = op.forward(w);
  std::vector<double> out(op.cols());
  for (auto _ : state) {
    op.adjoint(y, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_Adjoint)->Arg(13)->Arg(29)->Unit(benchmark::kMicrosecond);

void BM_Wvd(benchmark::State& state) {
  const auto z = tfr::synthesize(tfr::benchmark_case(3, 20.0), 0);
  for (auto _ : state) benchmark::DoNotOptimize(tfr::wvd(z));
}
BENCHMARK(BM_Wvd)->Unit(benchmark::kMicrosecond);

void BM_AfDirect(benchmark::State& state) {
  const auto z = tfr::synthesize(tfr::benchmark_case(3, 20.0), 0);
  for (auto _ : state) benchmark::DoNotOptimize(tfr::af_direct(z));
}
BENCHMARK(BM_AfDirect)->Unit(benchmark::kMicrosecond);

void BM_L1App(benchmark::State& state) {
  const auto z = tfr::synthesize(tfr::benchmark_case(1, 45.0), 0);
  for (auto _ : state) benchmark::DoNotOptimize(tfr::l1app_reconstruct(z));
}
BENCHMARK(BM_L1App)->Unit(benchmark::kMillisecond);

void BM_UNetForward(benchmark::State& state) {
  const auto bundle = tfr::make_fixture_bundle(1, 128, 1);
  const tfr::TFMatrix input(128, random_values(128 * 128, 3));
  for (auto _ : state) benchmark::DoNotOptimize(tfr::unet_forward(bundle.nets[0], bundle.arch, input));
}
BENCHMARK(BM_UNetForward)->Unit(benchmark::kMillisecond);

void BM_Uista(benchmark::State& state) {
  const auto bundle = std::make_shared<tfr::WeightBundle>(
      tfr::make_fixture_bundle(static_cast<std::size_t>(state.range(0)), 128, 4));
  const auto model = tfr::UistaModel::from_bundle(bundle, 128);
  const auto a = tfr::apply_mask(tfr::af_direct(tfr::synthesize(tfr::benchmark_case(1, 20.0), 0)), {29, 29});
  for (auto _ : state) benchmark::DoNotOptimize(tfr::uista_reconstruct(model, a));
}
BENCHMARK(BM_Uista)->Arg(5)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
