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

// Expected calibration error with K equal-width bins ((k-1)/K, k/K].
//
// A sample's confidence is the probability of its predicted (argmax) class.
// For each nonempty bin B_k:
//   acc(B_k)  = fraction of samples in B_k whose prediction is correct
//   conf(B_k) = mean confidence of samples in B_k
// and ECE = sum_k |B_k| / n * |acc(B_k) - conf(B_k)|.
//
// Arithmetic order (relied on by the tests): within a bin, confidences are
// summed in ascending order of value, so the report does not depend on the
// order of the input. Bins are then accumulated from k = 1 to K.

#ifndef SQEN_CALIBRATION_H_
#define SQEN_CALIBRATION_H_

#include <cstddef>
#include <span>
#include <vector>

namespace sqen {

inline constexpr std::size_t kDefaultBinCount = 15;

struct Prediction {
  std::size_t true_label = 0;
  std::size_t predicted_label = 0;
  double confidence = 0.0;

  bool correct() const { return true_label == predicted_label; }
};

struct BinStats {
  std::size_t index = 0;  // 1..K
  std::size_t count = 0;
  // Meaningful only when count > 0; zero otherwise.
  double accuracy = 0.0;
  double confidence = 0.0;

  double gap() const { return confidence - accuracy; }
};

struct CalibrationReport {
  std::size_t bin_count = 0;
  std::vector<BinStats> bins;
  double ece = 0.0;
  std::size_t n = 0;
  double overall_accuracy = 0.0;
};

// Argmax of `probs` (ties to the lowest index) and its probability.
// Throws InvalidArgument for an empty vector or label out of range.
Prediction Predict(std::span<const double> probs, std::size_t true_label);

// Bin index in 1..K. Confidence exactly 0 goes to bin 1.
// Throws InvalidArgument if confidence is outside [0, 1] or K == 0.
std::size_t BinOf(double confidence, std::size_t bin_count);

// Throws InvalidArgument on empty input or K == 0.
CalibrationReport ComputeEce(std::span<const Prediction> predictions,
                             std::size_t bin_count = kDefaultBinCount);

// count_k / n per bin (the confidence histogram).
std::vector<double> HistogramFractions(const CalibrationReport& report);

}  // namespace sqen

#endif  // SQEN_CALIBRATION_H_
