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

#include "sqen/calibration.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "sqen/errors.h"

namespace sqen {

Prediction Predict(std::span<const double> probs, std::size_t true_label) {
  if (probs.empty()) throw InvalidArgument("Predict: empty probabilities");
  if (true_label >= probs.size()) {
    throw InvalidArgument("Predict: label " + std::to_string(true_label) +
                          " out of range for " + std::to_string(probs.size()) +
                          " classes");
  }
  // max_element returns the first maximum, which is the tie rule we want.
  const auto it = std::max_element(probs.begin(), probs.end());
  Prediction p;
  p.true_label = true_label;
  p.predicted_label = static_cast<std::size_t>(it - probs.begin());
  p.confidence = *it;
  return p;
}

std::size_t BinOf(double confidence, std::size_t bin_count) {
  if (bin_count == 0) throw InvalidArgument("BinOf: bin count must be >= 1");
  if (!(confidence >= 0.0 && confidence <= 1.0)) {
    throw InvalidArgument("BinOf: confidence " + std::to_string(confidence) +
                          " outside [0, 1]");
  }
  if (confidence == 0.0) return 1;
  const double k_total = static_cast<double>(bin_count);
  auto k = static_cast<std::size_t>(std::ceil(confidence * k_total));
  k = std::clamp<std::size_t>(k, 1, bin_count);
  // Settle on the boundary as computed in double: conf <= k/K and
  // conf > (k-1)/K, which the product above can miss by one ulp.
  while (k > 1 && confidence <= static_cast<double>(k - 1) / k_total) --k;
  while (k < bin_count && confidence > static_cast<double>(k) / k_total) ++k;
  return k;
}

CalibrationReport ComputeEce(std::span<const Prediction> predictions,
                             std::size_t bin_count) {
  if (predictions.empty()) throw InvalidArgument("ComputeEce: no predictions");
  if (bin_count == 0) throw InvalidArgument("ComputeEce: bin count must be >= 1");

  std::vector<std::vector<double>> confidences(bin_count);
  std::vector<std::size_t> correct(bin_count, 0);
  std::size_t total_correct = 0;
  for (const auto& p : predictions) {
    const std::size_t k = BinOf(p.confidence, bin_count) - 1;
    confidences[k].push_back(p.confidence);
    if (p.correct()) {
      ++correct[k];
      ++total_correct;
    }
  }

  CalibrationReport report;
  report.bin_count = bin_count;
  report.n = predictions.size();
  const double n = static_cast<double>(report.n);
  report.overall_accuracy = static_cast<double>(total_correct) / n;
  report.bins.resize(bin_count);
  double ece = 0.0;
  for (std::size_t k = 0; k < bin_count; ++k) {
    BinStats& bin = report.bins[k];
    bin.index = k + 1;
    auto& confs = confidences[k];
    bin.count = confs.size();
    if (bin.count == 0) continue;
    std::sort(confs.begin(), confs.end());
    double sum = 0.0;
    for (double c : confs) sum += c;
    const double count = static_cast<double>(bin.count);
    bin.accuracy = static_cast<double>(correct[k]) / count;
    bin.confidence = sum / count;
    ece += count / n * std::abs(bin.accuracy - bin.confidence);
  }
  report.ece = ece;
  return report;
}

std::vector<double> HistogramFractions(const CalibrationReport& report) {
  std::vector<double> fractions;
  fractions.reserve(report.bins.size());
  const double n = static_cast<double>(report.n);
  for (const auto& bin : report.bins) {
    fractions.push_back(report.n == 0 ? 0.0
                                      : static_cast<double>(bin.count) / n);
  }
  return fractions;
}

}  // namespace sqen
