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

#ifndef SQEN_TRAINER_H_
#define SQEN_TRAINER_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sqen/calibration.h"
#include "sqen/data.h"
#include "sqen/losses.h"
#include "sqen/mlp.h"

namespace sqen {

// Minibatch size: a fixed count, the whole training set, or "auto"
// (whole set up to 5000 samples, 128 beyond that).
class BatchSize {
 public:
  static constexpr std::size_t kAutoFullLimit = 5000;
  static constexpr std::size_t kAutoLargeBatch = 128;

  static BatchSize Auto() { return BatchSize(Kind::kAuto, 0); }
  static BatchSize Full() { return BatchSize(Kind::kFull, 0); }
  // Throws InvalidArgument for size 0.
  static BatchSize Of(std::size_t size);
  // "auto" | "full" | positive integer.
  static BatchSize Parse(const std::string& text);

  std::size_t Resolve(std::size_t n) const;
  std::string ToString() const;

  friend bool operator==(const BatchSize&, const BatchSize&) = default;

 private:
  enum class Kind { kAuto, kFull, kFixed };
  BatchSize(Kind kind, std::size_t size) : kind_(kind), size_(size) {}

  Kind kind_;
  std::size_t size_;
};

struct TrainConfig {
  LossSpec loss;
  double learning_rate = 0.01;
  double weight_decay = 5e-4;
  int epochs = 400;
  BatchSize batch_size = BatchSize::Auto();
  std::uint64_t seed = 0;
  Architecture architecture;
  bool shuffle_each_epoch = true;

  // Positivity constraints and a valid architecture. Throws InvalidArgument.
  void Validate() const;
};

struct EpochRecord {
  double mean_loss = 0.0;
  double train_accuracy = 0.0;
  double last_layer_norm = 0.0;
};

// One record per epoch, measured on the full training set after the epoch.
using TrainHistory = std::vector<EpochRecord>;

struct TrainResult {
  MlpParameters params;
  TrainHistory history;
};

// w <- w - lr * (g + weight_decay * w) for weights; b <- b - lr * g for
// biases. Throws InvalidArgument if the shapes differ.
void SgdStep(MlpParameters& params, const MlpGradients& grads,
             double learning_rate, double weight_decay);

// Mean loss over `indices` and its accumulated parameter gradient (summed in
// index order, scaled by 1/|indices|). Throws DivergenceError (epoch -1) on
// a non-finite per-sample loss.
double BatchLossAndGradient(const MlpParameters& params, const Dataset& data,
                            std::span<const std::size_t> indices,
                            const LossSpec& loss, MlpGradients& grads);

// Called after each epoch with the 0-based epoch index.
using EpochObserver =
    std::function<void(int epoch, const MlpParameters&, const EpochRecord&)>;

// Runs config.epochs passes of minibatch SGD. Weights are initialized from
// substream 0 of config.seed and shuffles drawn from substream 1, so the run
// is a pure function of (train_set, config).
// Throws InvalidArgument on dimension mismatch, DivergenceError naming the
// epoch on a non-finite loss.
TrainResult Train(const Dataset& train_set, const TrainConfig& config,
                  const EpochObserver& observer = nullptr);

struct EvalResult {
  double accuracy = 0.0;
  CalibrationReport calibration;
  std::vector<Prediction> predictions;
};

// Softmax over each sample's logits (for every loss, including square
// loss), then accuracy and ECE with `bin_count` bins.
EvalResult Evaluate(const MlpParameters& params, const Dataset& test_set,
                    std::size_t bin_count = kDefaultBinCount);

struct SeedRun {
  std::uint64_t seed = 0;
  TrainHistory history;
  EvalResult eval;
};

struct SeedSummary {
  std::uint64_t seed = 0;
  double test_accuracy = 0.0;
  double test_ece = 0.0;
};

struct RunSummary {
  std::vector<SeedSummary> runs;  // in the order the seeds were given
  double accuracy_mean = 0.0;
  double accuracy_std = 0.0;  // sample standard deviation (n - 1)
  double ece_mean = 0.0;
  double ece_std = 0.0;
};

struct SweepOptions {
  std::size_t bin_count = kDefaultBinCount;
  // Worker threads; 0 picks hardware concurrency. Results never depend on it.
  std::size_t threads = 0;
  bool reject_duplicate_seeds = true;
};

struct SweepResult {
  RunSummary summary;
  std::vector<SeedRun> runs;
};

// Sample mean and (n - 1) standard deviation, summed in order.
// Requires at least two values.
std::pair<double, double> MeanAndSampleStd(std::span<const double> values);

// Trains and evaluates once per seed; only config.seed varies between runs.
// Throws InvalidArgument for fewer than two seeds or duplicates (unless
// reject_duplicate_seeds is off).
SweepResult Sweep(const Dataset& train_set, const Dataset& test_set,
                  const TrainConfig& config,
                  const std::vector<std::uint64_t>& seeds,
                  const SweepOptions& options = {});

}  // namespace sqen

#endif  // SQEN_TRAINER_H_
