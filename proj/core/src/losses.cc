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

#include "sqen/losses.h"

#include <algorithm>
#include <cmath>

#include "sqen/errors.h"

namespace sqen {
namespace {

void CheckFinite(std::span<const double> logits, const char* op) {
  if (logits.empty()) {
    throw InvalidArgument(std::string(op) + ": empty logit vector");
  }
  for (std::size_t j = 0; j < logits.size(); ++j) {
    if (!std::isfinite(logits[j])) {
      throw InvalidArgument(std::string(op) + ": non-finite logit at index " +
                            std::to_string(j));
    }
  }
}

void CheckLabel(std::size_t label, std::size_t classes, const char* op) {
  if (label >= classes) {
    throw InvalidArgument(std::string(op) + ": label " +
                          std::to_string(label) + " out of range for " +
                          std::to_string(classes) + " classes");
  }
}

}  // namespace

LossKind ParseLossKind(const std::string& name) {
  if (name == "squentropy") return LossKind::kSquentropy;
  if (name == "cross-entropy") return LossKind::kCrossEntropy;
  if (name == "square") return LossKind::kSquare;
  throw InvalidArgument("unknown loss '" + name +
                        "' (expected squentropy, cross-entropy or square)");
}

std::string LossKindName(LossKind kind) {
  switch (kind) {
    case LossKind::kSquentropy:
      return "squentropy";
    case LossKind::kCrossEntropy:
      return "cross-entropy";
    case LossKind::kSquare:
      return "square";
  }
  return "unknown";
}

std::vector<double> Softmax(std::span<const double> logits) {
  CheckFinite(logits, "Softmax");
  const double max = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(logits.size());
  double z = 0.0;
  for (std::size_t j = 0; j < logits.size(); ++j) {
    p[j] = std::exp(logits[j] - max);
    z += p[j];
  }
  for (double& pj : p) pj /= z;
  return p;
}

double LogSumExp(std::span<const double> logits) {
  CheckFinite(logits, "LogSumExp");
  const double max = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  for (double f : logits) z += std::exp(f - max);
  return max + std::log(z);
}

LossOutput CrossEntropy(std::span<const double> logits, std::size_t label) {
  CheckFinite(logits, "CrossEntropy");
  CheckLabel(label, logits.size(), "CrossEntropy");
  LossOutput out;
  out.grad = Softmax(logits);
  out.value = LogSumExp(logits) - logits[label];
  // logsumexp >= max >= f_y, so only rounding can push this negative.
  if (out.value < 0.0) out.value = 0.0;
  // Tiny losses are better recovered from the complement probability mass.
  // value = -log(p_y) = log1p((1 - p_y)/p_y) = log1p(sum_{j!=y} e^{f_j - f_y}).
  if (out.value < 1e-3) {
    double rest = 0.0;
    for (std::size_t j = 0; j < logits.size(); ++j) {
      if (j != label) rest += std::exp(logits[j] - logits[label]);
    }
    out.value = std::log1p(rest);
  }
  out.grad[label] -= 1.0;
  return out;
}

LossOutput Squentropy(std::span<const double> logits, std::size_t label) {
  const std::size_t classes = logits.size();
  if (classes < 2) {
    throw InvalidArgument("Squentropy: needs at least 2 classes, got " +
                          std::to_string(classes));
  }
  LossOutput out = CrossEntropy(logits, label);
  const double scale = 1.0 / static_cast<double>(classes - 1);
  double squares = 0.0;
  for (std::size_t j = 0; j < classes; ++j) {
    if (j == label) continue;
    squares += logits[j] * logits[j];
    out.grad[j] += 2.0 * scale * logits[j];
  }
  out.value += scale * squares;
  return out;
}

LossOutput RescaledSquare(std::span<const double> logits, std::size_t label,
                          const RescaleParams& params) {
  CheckFinite(logits, "RescaledSquare");
  CheckLabel(label, logits.size(), "RescaledSquare");
  if (!(params.t > 0.0) || !(params.M > 0.0)) {
    throw InvalidArgument("RescaledSquare: t and M must be positive, got t=" +
                          std::to_string(params.t) +
                          " M=" + std::to_string(params.M));
  }
  const double classes = static_cast<double>(logits.size());
  LossOutput out;
  out.grad.resize(logits.size());
  double sum = 0.0;
  for (std::size_t j = 0; j < logits.size(); ++j) {
    if (j == label) {
      const double diff = logits[j] - params.M;
      sum += params.t * diff * diff;
      out.grad[j] = 2.0 * params.t * diff / classes;
    } else {
      sum += logits[j] * logits[j];
      out.grad[j] = 2.0 * logits[j] / classes;
    }
  }
  out.value = sum / classes;
  return out;
}

LossOutput EvaluateLoss(const LossSpec& spec, std::span<const double> logits,
                        std::size_t label) {
  switch (spec.kind) {
    case LossKind::kSquentropy:
      return Squentropy(logits, label);
    case LossKind::kCrossEntropy:
      return CrossEntropy(logits, label);
    case LossKind::kSquare:
      return RescaledSquare(logits, label, spec.rescale);
  }
  throw InvalidArgument("EvaluateLoss: unknown loss kind");
}

}  // namespace sqen
