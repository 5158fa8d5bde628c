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

#include "sqen/trainer.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <numeric>
#include <set>
#include <thread>

#include "sqen/errors.h"
#include "sqen/rng.h"

namespace sqen {
namespace {

constexpr std::uint64_t kInitStream = 0;
constexpr std::uint64_t kShuffleStream = 1;

void CheckCompatible(const Dataset& data, const Architecture& arch,
                     const char* op) {
  if (data.dim() != arch.input_dim || data.class_count != arch.class_count) {
    throw InvalidArgument(std::string(op) + ": dataset is " +
                          std::to_string(data.dim()) + " features / " +
                          std::to_string(data.class_count) +
                          " classes, architecture is " + arch.ToString());
  }
}

void ZeroFill(MlpGradients& grads) {
  for (auto& layer : grads) {
    std::fill(layer.weights.entries().begin(), layer.weights.entries().end(),
              0.0);
    std::fill(layer.bias.begin(), layer.bias.end(), 0.0);
  }
}

}  // namespace

BatchSize BatchSize::Of(std::size_t size) {
  if (size == 0) throw InvalidArgument("batch size must be positive");
  return BatchSize(Kind::kFixed, size);
}

BatchSize BatchSize::Parse(const std::string& text) {
  if (text == "auto") return Auto();
  if (text == "full") return Full();
  std::size_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || value == 0) {
    throw InvalidArgument("batch size must be 'auto', 'full' or a positive "
                          "integer, got '" + text + "'");
  }
  return Of(value);
}

std::size_t BatchSize::Resolve(std::size_t n) const {
  switch (kind_) {
    case Kind::kAuto:
      return n <= kAutoFullLimit ? n : kAutoLargeBatch;
    case Kind::kFull:
      return n;
    case Kind::kFixed:
      return size_;
  }
  return n;
}

std::string BatchSize::ToString() const {
  switch (kind_) {
    case Kind::kAuto:
      return "auto";
    case Kind::kFull:
      return "full";
    case Kind::kFixed:
      return std::to_string(size_);
  }
  return "auto";
}

void TrainConfig::Validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw InvalidArgument("learning rate must be positive");
  }
  if (!(weight_decay >= 0.0) || !std::isfinite(weight_decay)) {
    throw InvalidArgument("weight decay must be >= 0");
  }
  if (epochs <= 0) throw InvalidArgument("epochs must be positive");
  if (loss.kind == LossKind::kSquare &&
      (!(loss.rescale.t > 0.0) || !(loss.rescale.M > 0.0))) {
    throw InvalidArgument("square loss needs t > 0 and M > 0");
  }
  architecture.Validate();
}

void SgdStep(MlpParameters& params, const MlpGradients& grads,
             double learning_rate, double weight_decay) {
  if (grads.size() != params.layers.size()) {
    throw InvalidArgument("SgdStep: " + std::to_string(grads.size()) +
                          " gradient layers for " +
                          std::to_string(params.layers.size()) +
                          " parameter layers");
  }
  for (std::size_t l = 0; l < grads.size(); ++l) {
    auto& layer = params.layers[l];
    const auto& g = grads[l];
    if (g.weights.rows() != layer.weights.rows() ||
        g.weights.cols() != layer.weights.cols() ||
        g.bias.size() != layer.bias.size()) {
      throw InvalidArgument("SgdStep: layer " + std::to_string(l) +
                            " gradient " + g.weights.ShapeString() +
                            " vs weights " + layer.weights.ShapeString());
    }
    auto w = layer.weights.entries();
    const auto gw = g.weights.entries();
    for (std::size_t i = 0; i < w.size(); ++i) {
      w[i] -= learning_rate * (gw[i] + weight_decay * w[i]);
    }
    for (std::size_t i = 0; i < layer.bias.size(); ++i) {
      layer.bias[i] -= learning_rate * g.bias[i];
    }
  }
}

double BatchLossAndGradient(const MlpParameters& params, const Dataset& data,
                            std::span<const std::size_t> indices,
                            const LossSpec& loss, MlpGradients& grads) {
  if (indices.empty()) throw InvalidArgument("BatchLossAndGradient: no rows");
  ZeroFill(grads);
  const double scale = 1.0 / static_cast<double>(indices.size());
  ForwardCache cache;
  double total = 0.0;
  for (std::size_t i : indices) {
    const auto logits = Forward(params, data.features.row(i), &cache);
    LossOutput out = EvaluateLoss(loss, logits, data.labels[i]);
    if (!std::isfinite(out.value)) {
      throw DivergenceError("non-finite loss at sample " + std::to_string(i),
                            -1);
    }
    total += out.value;
    Backward(params, cache, out.grad, grads, scale);
  }
  return total * scale;
}

TrainResult Train(const Dataset& train_set, const TrainConfig& config,
                  const EpochObserver& observer) {
  config.Validate();
  train_set.Validate();
  CheckCompatible(train_set, config.architecture, "Train");

  const std::size_t n = train_set.size();
  const std::size_t batch = std::min(config.batch_size.Resolve(n), n);

  Rng init_rng = Rng::Substream(config.seed, kInitStream);
  Rng shuffle_rng = Rng::Substream(config.seed, kShuffleStream);

  TrainResult result;
  result.params = InitParams(config.architecture, init_rng);
  result.history.reserve(static_cast<std::size_t>(config.epochs));

  MlpGradients grads = ZeroGradients(result.params);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  ForwardCache cache;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    if (config.shuffle_each_epoch) Shuffle(order, shuffle_rng);
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t stop = std::min(n, start + batch);
      const std::span<const std::size_t> rows(order.data() + start,
                                              stop - start);
      double batch_loss = 0.0;
      try {
        batch_loss = BatchLossAndGradient(result.params, train_set, rows,
                                          config.loss, grads);
      } catch (const DivergenceError& e) {
        throw DivergenceError("training diverged in epoch " +
                                  std::to_string(epoch + 1) + ": " + e.what(),
                              epoch + 1);
      }
      if (!std::isfinite(batch_loss)) {
        throw DivergenceError("training diverged in epoch " +
                                  std::to_string(epoch + 1),
                              epoch + 1);
      }
      SgdStep(result.params, grads, config.learning_rate,
              config.weight_decay);
    }

    EpochRecord record;
    std::size_t correct = 0;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto logits = Forward(result.params, train_set.features.row(i));
      const auto out = EvaluateLoss(config.loss, logits, train_set.labels[i]);
      total += out.value;
      const auto best = std::max_element(logits.begin(), logits.end());
      if (static_cast<std::size_t>(best - logits.begin()) ==
          train_set.labels[i]) {
        ++correct;
      }
    }
    record.mean_loss = total / static_cast<double>(n);
    if (!std::isfinite(record.mean_loss)) {
      throw DivergenceError("training diverged in epoch " +
                                std::to_string(epoch + 1),
                            epoch + 1);
    }
    record.train_accuracy =
        static_cast<double>(correct) / static_cast<double>(n);
    record.last_layer_norm = LastLayerWeightNorm(result.params);
    result.history.push_back(record);
    if (observer) observer(epoch, result.params, record);
  }
  return result;
}

EvalResult Evaluate(const MlpParameters& params, const Dataset& test_set,
                    std::size_t bin_count) {
  if (test_set.size() == 0) throw InvalidArgument("Evaluate: empty test set");
  CheckCompatible(test_set, params.architecture, "Evaluate");
  EvalResult result;
  result.predictions.reserve(test_set.size());
  std::size_t correct = 0;
  for (std::size_t i = 0; i < test_set.size(); ++i) {
    const auto logits = Forward(params, test_set.features.row(i));
    const auto probs = Softmax(logits);
    result.predictions.push_back(Predict(probs, test_set.labels[i]));
    if (result.predictions.back().correct()) ++correct;
  }
  result.accuracy =
      static_cast<double>(correct) / static_cast<double>(test_set.size());
  result.calibration = ComputeEce(result.predictions, bin_count);
  return result;
}

std::pair<double, double> MeanAndSampleStd(std::span<const double> values) {
  if (values.size() < 2) {
    throw InvalidArgument("sample standard deviation needs >= 2 values");
  }
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0))};
}

SweepResult Sweep(const Dataset& train_set, const Dataset& test_set,
                  const TrainConfig& config,
                  const std::vector<std::uint64_t>& seeds,
                  const SweepOptions& options) {
  if (seeds.size() < 2) {
    throw InvalidArgument("Sweep: need at least 2 seeds, got " +
                          std::to_string(seeds.size()));
  }
  if (options.reject_duplicate_seeds) {
    std::set<std::uint64_t> seen;
    for (auto s : seeds) {
      if (!seen.insert(s).second) {
        throw InvalidArgument("Sweep: duplicate seed " + std::to_string(s));
      }
    }
  }
  config.Validate();

  SweepResult result;
  result.runs.resize(seeds.size());
  std::vector<std::exception_ptr> errors(seeds.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t k = next++; k < seeds.size(); k = next++) {
      try {
        TrainConfig run_config = config;
        run_config.seed = seeds[k];
        TrainResult trained = Train(train_set, run_config);
        result.runs[k] = SeedRun{seeds[k], std::move(trained.history),
                                 Evaluate(trained.params, test_set,
                                          options.bin_count)};
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  std::size_t threads = options.threads != 0
                            ? options.threads
                            : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, seeds.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<double> accuracies;
  std::vector<double> eces;
  for (const auto& run : result.runs) {
    result.summary.runs.push_back(
        {run.seed, run.eval.accuracy, run.eval.calibration.ece});
    accuracies.push_back(run.eval.accuracy);
    eces.push_back(run.eval.calibration.ece);
  }
  std::tie(result.summary.accuracy_mean, result.summary.accuracy_std) =
      MeanAndSampleStd(accuracies);
  std::tie(result.summary.ece_mean, result.summary.ece_std) =
      MeanAndSampleStd(eces);
  return result;
}

}  // namespace sqen
