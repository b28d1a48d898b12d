// Microbenchmarks for the hot paths: node integration, feature extraction and
// readout training. Run via the bench_core target; google-benchmark handles
// timing and repetition.

#include <benchmark/benchmark.h>

#include <vector>

#include "spinrc/encoding.hpp"
#include "spinrc/readout.hpp"
#include "spinrc/reservoir.hpp"
#include "spinrc/rng.hpp"
#include "spinrc/skyrmion.hpp"
#include "spinrc/stno.hpp"
#include "spinrc/tasks.hpp"

namespace {

using namespace spinrc;

void bm_skyrmion_word(benchmark::State& state) {
  SkyrmionParams params;
  PulseTrain train = stream_to_pulses(std::vector<std::uint8_t>{1, 0, 1, 1}, 20.0, 10.0);
  for (auto _ : state) {
    SkyrmionState s = skyrmion_step(skyrmion_reset(params), train, kSkyrmionDefaultDt, params);
    benchmark::DoNotOptimize(s.x);
  }
}
BENCHMARK(bm_skyrmion_word);

void bm_stno_pulse(benchmark::State& state) {
  StnoParams params = stno_params_for_diameter(240);
  PulseTrain train{Pulse{0.2, 20.0}};
  StnoState init;
  init.p = 0.1;
  for (auto _ : state) {
    StnoRun run = stno_step(init, train, kStnoDefaultDt, params);
    benchmark::DoNotOptimize(run.final.p);
  }
}
BENCHMARK(bm_stno_pulse);

void bm_msm_image_features(benchmark::State& state) {
  ImageDataset data = synth_digits(1, 1);
  BitImage img = binarize_image(data.image(0));
  SkyrmionParams params;
  for (auto _ : state) {
    std::vector<double> f = msm_features(img, OperatingPoint{20.0, 10.0}, params);
    benchmark::DoNotOptimize(f.data());
  }
}
BENCHMARK(bm_msm_image_features);

void bm_msm_batch(benchmark::State& state) {
  ImageDataset data = synth_digits(32, 1);
  std::vector<BitImage> images;
  for (std::size_t i = 0; i < data.count; ++i) images.push_back(binarize_image(data.image(i)));
  SkyrmionParams params;
  int threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    FeatureMatrix m = msm_feature_batch(images, OperatingPoint{20.0, 10.0}, params, threads);
    benchmark::DoNotOptimize(m.values.data());
  }
}
BENCHMARK(bm_msm_batch)->Arg(1)->Arg(4)->Arg(8);

void bm_stno_features(benchmark::State& state) {
  std::vector<double> u = gen_uniform_input(static_cast<std::size_t>(state.range(0)), 1);
  DriveBank bank = build_default_bank();
  for (auto _ : state) {
    FeatureMatrix m = stno_features(u, bank);
    benchmark::DoNotOptimize(m.values.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_stno_features)->Arg(50)->Arg(200);

void bm_train_classifier_epoch(benchmark::State& state) {
  Pcg32 rng(7);
  FeatureMatrix f;
  f.rows = 512;
  f.cols = 196;
  f.values.resize(f.rows * f.cols);
  for (double& v : f.values) v = 2.0 * rng.next_double() - 1.0;
  f.col_meta.resize(f.cols, 0);
  std::vector<int> labels(f.rows);
  for (int& l : labels) l = static_cast<int>(rng.next_below(10));
  TrainHyper hyper{0.1, 1, 32, 1e-4, 2};
  for (auto _ : state) {
    TrainResult r = train_classifier_gd(f, labels, hyper);
    benchmark::DoNotOptimize(r.final_loss);
  }
}
BENCHMARK(bm_train_classifier_epoch);

void bm_least_squares(benchmark::State& state) {
  Pcg32 rng(11);
  FeatureMatrix f;
  f.rows = 1000;
  f.cols = 24;
  f.values.resize(f.rows * f.cols);
  for (double& v : f.values) v = 2.0 * rng.next_double() - 1.0;
  f.col_meta.resize(f.cols, 0);
  std::vector<double> y(f.rows);
  for (double& v : y) v = rng.next_double();
  for (auto _ : state) {
    ReadoutModel m = solve_least_squares(f, y, 1e-6);
    benchmark::DoNotOptimize(m.weights.data());
  }
}
BENCHMARK(bm_least_squares);

}  // namespace

BENCHMARK_MAIN();
