// Microbenchmarks for the hot paths of the simulation loop.
#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "sclink/channel.hpp"
#include "sclink/detect.hpp"
#include "sclink/fdebank.hpp"
#include "sclink/fft.hpp"
#include "sclink/pa.hpp"
#include "sclink/postdist.hpp"
#include "sclink/qam.hpp"
#include "sclink/rng.hpp"
#include "sclink/txchain.hpp"
#include "sclink/types.hpp"

namespace {

using namespace sclink;

cvec random_block(std::size_t n, double var, std::uint64_t seed) {
  Rng rng(seed);
  return rng.cgaussian_vector(n, var);
}

void bm_saleh_apply(benchmark::State& state) {
  const cvec x = random_block(4096, 0.25, 1);
  const SalehParams pa{};
  for (auto _ : state) {
    benchmark::DoNotOptimize(saleh_apply(pa, x));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(x.size()));
}
BENCHMARK(bm_saleh_apply);

void bm_memory_poly_apply(benchmark::State& state) {
  const cvec x = random_block(4096, 0.25, 2);
  const MemoryPolyParams pa = make_default_memory_poly();
  for (auto _ : state) {
    benchmark::DoNotOptimize(memory_poly_apply(pa, x));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(x.size()));
}
BENCHMARK(bm_memory_poly_apply);

void bm_dft_unitary(benchmark::State& state) {
  const cvec x = random_block(static_cast<std::size_t>(state.range(0)), 1.0, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dft_forward_unitary(x));
  }
}
BENCHMARK(bm_dft_unitary)->Arg(512)->Arg(1024)->Arg(3000);

void bm_fde_equalize(benchmark::State& state) {
  const cvec y = random_block(1024, 1.0, 4);
  SymbolRateCsi csi;
  csi.lb = 4;
  csi.lf = 16;
  Rng rng(5);
  csi.taps = rng.cgaussian_vector(19, 0.05);
  csi.taps[3] += 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fde_equalize(y, csi, 1e-3));
  }
}
BENCHMARK(bm_fde_equalize);

void bm_gpr_predict(benchmark::State& state) {
  Rng rng(6);
  const int n = 512, d = 6, m = 256;
  Eigen::MatrixXd zt(n, d), q(m, d);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) zt(i, j) = rng.gaussian();
    y(i) = rng.gaussian();
  }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < d; ++j) q(i, j) = rng.gaussian();
  const GprSegmentModel model =
      gpr_rebuild(zt, y, 1.0, 0.1, Eigen::VectorXd::Constant(d, 1.5));
  Eigen::VectorXd mean, var;
  for (auto _ : state) {
    gpr_predict(model, q, &mean, &var);
    benchmark::DoNotOptimize(mean);
  }
  state.SetItemsProcessed(state.iterations() * m);
}
BENCHMARK(bm_gpr_predict);

void bm_nn_predict(benchmark::State& state) {
  const NnModel m = nn_init(30, 6, 7);
  const cvec z = random_block(1024, 1.0, 8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(nn_predict(m, z, 2));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(z.size()));
}
BENCHMARK(bm_nn_predict);

void bm_dassd_detect(benchmark::State& state) {
  const auto q = make_qam(64);
  Rng rng(9);
  const int mu = 4, n = 1024;
  cvec train(64);
  for (auto& v : train) v = q.points[rng.integer(64)];
  std::vector<cvec> soft_train(mu, cvec(train.size()));
  std::vector<cvec> soft(mu, cvec(n));
  for (int b = 0; b < mu; ++b) {
    for (std::size_t k = 0; k < train.size(); ++k)
      soft_train[b][k] = train[k] + rng.cgaussian(0.02);
    for (int k = 0; k < n; ++k) soft[b][k] = q.points[rng.integer(64)] + rng.cgaussian(0.02);
  }
  const DetectorParams p = train_dassd(soft_train, train);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dassd_detect(p, soft, q));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(bm_dassd_detect);

void bm_shape_and_filter(benchmark::State& state) {
  const auto q = make_qam(64);
  Rng rng(10);
  cvec syms(1024);
  for (auto& v : syms) v = q.points[rng.integer(64)];
  const PulseShape pulse = design_rrc(0.3, 16, 4);
  const ChannelRealization ch = draw_channel(ChannelProfile::kAwgn, 1, 4, 11);
  for (auto _ : state) {
    ComplexSignal x = shape(syms, pulse);
    ComplexSignal rx = propagate(x, ch, NoiseSpec{1e-4, 12});
    benchmark::DoNotOptimize(matched_filter(rx, pulse));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(syms.size()));
}
BENCHMARK(bm_shape_and_filter);

}  // namespace

BENCHMARK_MAIN();
