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

#ifndef SQEN_DATA_H_
#define SQEN_DATA_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "sqen/matrix.h"

namespace sqen {

// n labelled samples in R^d with labels in [0, class_count).
struct Dataset {
  Matrix features;  // n x d
  std::vector<std::size_t> labels;
  std::size_t class_count = 0;
  // Original label text per class index; empty when labels were synthesized.
  std::vector<std::string> class_names;

  std::size_t size() const { return labels.size(); }
  std::size_t dim() const { return features.cols(); }

  // Throws DataError on any broken invariant (label range, C < 2, n < 1,
  // non-finite feature, shape mismatch).
  void Validate() const;

  // Rows `indices` in that order; keeps class_count and class_names.
  Dataset Subset(const std::vector<std::size_t>& indices) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

std::vector<double> OneHot(std::size_t label, std::size_t class_count);

struct SpiralOptions {
  std::size_t n_train = 1000;
  std::size_t n_test = 500;
  double noise_sigma = 0.03;
  double rotations = 2.0;
  // Fraction of the angle range skipped at the center; 0 starts both arms at
  // the origin, where the classes are inseparable.
  double min_radius = 0.1;
  std::uint64_t seed = 0;
};

// Two interleaved Archimedean spirals. Samples come in pairs sharing one
// angle theta ~ U[2*pi*rotations*min_radius, 2*pi*rotations): class 0 at
//   r * (cos(theta), sin(theta)),  r = theta / (2*pi*rotations),
// class 1 at the same radius with phase theta + pi. Each coordinate then
// gets independent N(0, noise_sigma^2) noise. Rows alternate 0, 1, 0, 1...
// Train and test use independent substreams of `seed`.
//
// Throws InvalidArgument for odd or < 2 counts, negative sigma,
// non-positive rotations, or min_radius outside [0, 1).
std::pair<Dataset, Dataset> GenerateSpiral(const SpiralOptions& options);

struct CsvOptions {
  bool has_header = false;
  // When has_header is false: treat the first row as a header if any of its
  // feature cells is not a number.
  bool detect_header = false;
  // Column holding the label; negative counts from the end (-1 = last).
  int label_column = -1;
  char delimiter = ',';
  // Fewer distinct labels is a DataError. Evaluation files may use 1.
  std::size_t min_classes = 2;
};

// Loads a delimited text file. Features must be numeric. Labels that are all
// integers map to 0..C-1 by ascending numeric value; otherwise by sorted
// string order. class_names records the original text per class.
// Throws DataError naming the offending line.
Dataset LoadCsv(const std::filesystem::path& path,
                const CsvOptions& options = {});
Dataset ParseCsv(const std::string& text, const CsvOptions& options = {},
                 const std::string& source_name = "<memory>");

// Writes features then label, one row per sample, with a header row
// (`column_names` or x0..x{d-1}, then "label"). Values use the shortest
// round-trip representation, so parsing the output with has_header
// reproduces the features and labels bit-exactly.
std::string FormatCsv(const Dataset& dataset,
                      const std::vector<std::string>& column_names = {});
void SaveCsv(const Dataset& dataset, const std::filesystem::path& path,
             const std::vector<std::string>& column_names = {});

// Per-feature z-score statistics (population standard deviation).
struct FeatureScaling {
  std::vector<double> mean;
  std::vector<double> stddev;

  // (x - mean) / stddev, with features of stddev < 1e-12 mapped to 0.
  void Apply(Dataset& dataset) const;

  friend bool operator==(const FeatureScaling&,
                         const FeatureScaling&) = default;
};

inline constexpr double kDegenerateStddev = 1e-12;

FeatureScaling FitScaling(const Dataset& train);

struct StandardizedPair {
  Dataset train;
  Dataset test;
  FeatureScaling scaling;
};

// Z-scores both splits with statistics from `train` only.
StandardizedPair Standardize(const Dataset& train, const Dataset& test);

// Shuffled split. Stratified by class when every class has at least two
// samples, otherwise a plain shuffle. Output rows keep their original order.
// Throws InvalidArgument when either side would be empty.
std::pair<Dataset, Dataset> Split(const Dataset& dataset, double test_fraction,
                                  std::uint64_t seed);

}  // namespace sqen

#endif  // SQEN_DATA_H_
