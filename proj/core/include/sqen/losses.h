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

// Classification losses on raw logits.
//
// All three losses consume the logits f produced by the last linear layer
// (no softmax inside the network) and return both the per-sample value and
// the exact gradient with respect to f. Class indices are 0-based.
//
//   cross-entropy:   logsumexp(f) - f_y
//   squentropy:      logsumexp(f) - f_y + 1/(C-1) * sum_{j != y} f_j^2
//   rescaled square: 1/C * (t * (f_y - M)^2 + sum_{j != y} f_j^2)

#ifndef SQEN_LOSSES_H_
#define SQEN_LOSSES_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace sqen {

struct LossOutput {
  double value = 0.0;
  std::vector<double> grad;  // d value / d f_j
};

struct RescaleParams {
  double t = 1.0;
  double M = 1.0;

  friend bool operator==(const RescaleParams&, const RescaleParams&) = default;
};

enum class LossKind { kSquentropy, kCrossEntropy, kSquare };

// A loss selection as it appears in configs and on the command line.
struct LossSpec {
  LossKind kind = LossKind::kSquentropy;
  RescaleParams rescale;  // used only by kSquare

  friend bool operator==(const LossSpec&, const LossSpec&) = default;
};

// "squentropy" | "cross-entropy" | "square". Throws InvalidArgument.
LossKind ParseLossKind(const std::string& name);
std::string LossKindName(LossKind kind);

// Softmax with max-subtraction. Throws InvalidArgument on non-finite logits
// or an empty vector.
std::vector<double> Softmax(std::span<const double> logits);

// log(sum_j exp(f_j)), stable for any finite input.
double LogSumExp(std::span<const double> logits);

LossOutput CrossEntropy(std::span<const double> logits, std::size_t label);

// Requires C >= 2.
LossOutput Squentropy(std::span<const double> logits, std::size_t label);

// Requires t > 0 and M > 0.
LossOutput RescaledSquare(std::span<const double> logits, std::size_t label,
                          const RescaleParams& params);

// Single dispatch point used by the trainer.
LossOutput EvaluateLoss(const LossSpec& spec, std::span<const double> logits,
                        std::size_t label);

}  // namespace sqen

#endif  // SQEN_LOSSES_H_
