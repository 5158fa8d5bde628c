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

// Experiment configuration and its flat key=value file format:
//
//   # comment
//   loss = squentropy        # squentropy | cross-entropy | square
//   t = 1
//   M = 5
//   lr = 0.01
//   weight_decay = 5e-4
//   epochs = 400
//   batch_size = auto        # auto | full | <n>
//   seed = 0
//   hidden = 64,128,64
//   bins_k = 15
//   standardize = true
//   shuffle = true
//
// Keys are case-sensitive; any other key is an error.

#ifndef SQEN_CONFIG_H_
#define SQEN_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "sqen/trainer.h"

namespace sqen {

struct ExperimentConfig {
  LossSpec loss;
  double learning_rate = 0.01;
  double weight_decay = 5e-4;
  int epochs = 400;
  BatchSize batch_size = BatchSize::Auto();
  std::uint64_t seed = 0;
  std::vector<std::size_t> hidden = {64, 128, 64};
  std::size_t bins_k = kDefaultBinCount;
  bool standardize = true;
  bool shuffle = true;

  // TrainConfig for a dataset with `input_dim` features and `class_count`
  // classes.
  TrainConfig ToTrainConfig(std::size_t input_dim,
                            std::size_t class_count) const;

  friend bool operator==(const ExperimentConfig&,
                         const ExperimentConfig&) = default;
};

// Tabular protocol: 64-128-64 ReLU net, SGD lr 0.01, weight decay 5e-4,
// 400 epochs, square loss at t=1, M=5 when selected.
ExperimentConfig TabularDefaults();

// Spiral protocol: 12-12-12 ReLU net, 1000 epochs, lr 0.01, batch 8, no
// weight decay.
ExperimentConfig SpiralDefaults();

// Applies one `key = value` assignment. Throws InvalidArgument on an
// unknown key or unparsable value.
void SetConfigValue(ExperimentConfig& config, const std::string& key,
                    const std::string& value);

// Applies every assignment in `text` in order. Errors carry the line number.
void ApplyConfigText(ExperimentConfig& config, const std::string& text,
                     const std::string& source_name = "<config>");
void ApplyConfigFile(ExperimentConfig& config,
                     const std::filesystem::path& path);

// Ordered (key, value) pairs using the file keys; FormatConfig joins them
// into a file that ApplyConfigText reads back to the same config.
std::vector<std::pair<std::string, std::string>> ConfigEntries(
    const ExperimentConfig& config);
std::string FormatConfig(const ExperimentConfig& config);

// "64,128,64" -> {64, 128, 64}. Empty text means no hidden layers.
std::vector<std::size_t> ParseWidthList(const std::string& text);

// Shortest round-trip decimal for a double.
std::string FormatNumber(double value);

}  // namespace sqen

#endif  // SQEN_CONFIG_H_
