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

// Text checkpoint of an MLP, byte layout in docs/checkpoint_format.md.
// Values are written as C99 hex-floats, so a save/load round trip is
// bit-exact.

#ifndef SQEN_CHECKPOINT_H_
#define SQEN_CHECKPOINT_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sqen/data.h"
#include "sqen/mlp.h"

namespace sqen {

inline constexpr int kCheckpointVersion = 1;

struct Checkpoint {
  MlpParameters params;
  // Input standardization applied before the first layer, if any.
  std::optional<FeatureScaling> scaling;
  // Original label text per class index; empty when unknown.
  std::vector<std::string> class_names;

  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

std::string SerializeCheckpoint(const Checkpoint& checkpoint);

// Throws DataError naming the line on any malformed input.
Checkpoint ParseCheckpoint(const std::string& text);

void SaveCheckpoint(const Checkpoint& checkpoint,
                    const std::filesystem::path& path);
Checkpoint LoadCheckpoint(const std::filesystem::path& path);

}  // namespace sqen

#endif  // SQEN_CHECKPOINT_H_
