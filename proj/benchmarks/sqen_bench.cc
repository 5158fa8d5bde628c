// Copyright 2026 The sqen Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <cstddef>
#include <vector>

#include "sqen/calibration.h"
#include "sqen/data.h"
#include "sqen/losses.h"
#include "sqen/mlp.h"
#include "sqen/rng.h"
#include "sqen/trainer.h"

namespace sqen {
namespace {

std::vector<double> RandomLogits(std::size_t C, Rng& rng) {
  std::vector<double> f(C);
  for (auto& v : f) v = rng.Gaussian(0.0, 2.0);
  return f;
}

void BM_Squentropy(benchmark::State& state) {
  const auto C = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  const auto f = RandomLogits(C, rng);
  for (auto _ : state) benchmark::DoNotOptimize(Squentropy(f, 0));
}
BENCHMARK(BM_Squentropy)->Arg(2)->Arg(10)->Arg(100);

void BM_CrossEntropy(benchmark::State& state) {
  const auto C = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  const auto f = RandomLogits(C, rng);
  for (auto _ : state) benchmark::DoNotOptimize(CrossEntropy(f, 0));
}
BENCHMARK(BM_CrossEntropy)->Arg(2)->Arg(10)->Arg(100);

void BM_RescaledSquare(benchmark::State& state) {
  const auto C = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  const auto f = RandomLogits(C, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(RescaledSquare(f, 0, {1.0, 5.0}));
  }
}
BENCHMARK(BM_RescaledSquare)->Arg(2)->Arg(10)->Arg(100);

// Tabular-sized network: d -> 64-128-64 -> 10.
MlpParameters TabularNet(std::size_t d) {
  Rng rng(3);
  return InitParams(Architecture{d, {64, 128, 64}, 10}, rng);
}

void BM_Forward(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const auto p = TabularNet(d);
  Rng rng(4);
  const auto x = RandomLogits(d, rng);
  for (auto _ : state) benchmark::DoNotOptimize(Forward(p, x));
}
BENCHMARK(BM_Forward)->Arg(8)->Arg(64);

void BM_ForwardBackward(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const auto p = TabularNet(d);
  Rng rng(4);
  const auto x = RandomLogits(d, rng);
  ForwardCache cache;
  for (auto _ : state) {
    const auto logits = Forward(p, x, &cache);
    benchmark::DoNotOptimize(Backward(p, cache, Squentropy(logits, 0).grad));
  }
}
BENCHMARK(BM_ForwardBackward)->Arg(8)->Arg(64);

void BM_Ece(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(5);
  std::vector<Prediction> preds(n);
  for (auto& p : preds) {
    p = {0, rng.UniformIndex(2), rng.Uniform(0.0, 1.0)};
  }
  for (auto _ : state) benchmark::DoNotOptimize(ComputeEce(preds, 15));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}
BENCHMARK(BM_Ece)->Arg(1000)->Arg(100000);

// One epoch of the spiral protocol (1000 samples, batch 8).
void BM_SpiralEpoch(benchmark::State& state) {
  SpiralOptions so;
  const auto data = GenerateSpiral(so).first;
  TrainConfig c;
  c.architecture = {2, {12, 12, 12}, 2};
  c.learning_rate = 0.01;
  c.weight_decay = 0.0;
  c.epochs = 1;
  c.batch_size = BatchSize::Of(8);
  for (auto _ : state) benchmark::DoNotOptimize(Train(data, c));
}
BENCHMARK(BM_SpiralEpoch)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace sqen

BENCHMARK_MAIN();
