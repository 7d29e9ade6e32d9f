// Serial reference paths against the OpenMP kernels.

#include <benchmark/benchmark.h>

#include <cmath>

#include <random>

#include "lipcot/codebook.hpp"
#include "lipcot/kmeans.hpp"
#include "lipcot/pipeline.hpp"
#include "lipcot/testkit.hpp"

using namespace lipcot;

namespace {

pipeline::MultichannelSeries make_series(std::size_t channels, std::size_t n) {
  pipeline::MultichannelSeries s;
  s.sample_rate = 500.0;
  for (std::size_t c = 0; c < channels; ++c) {
    const double r = 0.9;
    const double w = 0.05 + 0.02 * static_cast<double>(c % 10);
    s.channels.push_back(testkit::generate_ar({{-2.0 * r * std::cos(w), r * r}, 1.0, c}, n));
    s.channel_names.push_back("ch" + std::to_string(c));
  }
  return s;
}

const pipeline::MultichannelSeries& series() {
  static const auto s = make_series(59, 30000);
  return s;
}

pipeline::CorpusConfig corpus_config(bool parallel) {
  pipeline::CorpusConfig cfg;
  cfg.order = 16;
  cfg.lambda = 0.2;
  cfg.window = 2500;
  cfg.hop = 2500;
  cfg.method = latent::lpc_coeff_method();
  cfg.parallel = parallel;
  return cfg;
}

const codebook::Codebook& trained_codebook() {
  static const auto cb = [] {
    const auto& s = series();
    const auto corpus = pipeline::fit_corpus(std::span(&s, 1), corpus_config(true));
    codebook::TrainConfig tc;
    tc.method = latent::lpc_coeff_method();
    tc.k = 64;
    return codebook::train_codebook(corpus.vectors, tc).codebook;
  }();
  return cb;
}

void BM_FitCorpus(benchmark::State& state) {
  const auto& s = series();
  const auto cfg = corpus_config(state.range(0) != 0);
  for (auto _ : state) benchmark::DoNotOptimize(pipeline::fit_corpus(std::span(&s, 1), cfg));
  state.SetItemsProcessed(state.iterations() * 59 * 12);
}
BENCHMARK(BM_FitCorpus)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_KMeansAssign(benchmark::State& state) {
  const std::size_t n = 100000, dim = 17, k = 64;
  std::mt19937_64 rng(1);
  std::normal_distribution<double> gauss;
  std::vector<double> data(n * dim), centroids(k * dim), dist(n);
  std::vector<std::uint32_t> labels(n);
  for (double& v : data) v = gauss(rng);
  for (double& v : centroids) v = gauss(rng);
  for (auto _ : state) {
    if (state.range(0) != 0)
      kmeans::assign_parallel(data, centroids, dim, labels, dist);
    else
      kmeans::assign_serial(data, centroids, dim, labels, dist);
    benchmark::DoNotOptimize(labels.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_KMeansAssign)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_EncodeSeries(benchmark::State& state) {
  const auto& cb = trained_codebook();
  pipeline::EncodeConfig cfg{2500, 2500, pipeline::Layout::ChannelsAsPositions};
  cfg.parallel = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(pipeline::encode_series(series(), cb, cfg));
  state.SetItemsProcessed(state.iterations() * 59 * 12);
}
BENCHMARK(BM_EncodeSeries)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
