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

#ifndef SQEN_MLP_H_
#define SQEN_MLP_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "sqen/matrix.h"
#include "sqen/rng.h"

namespace sqen {

struct Architecture {
  std::size_t input_dim = 0;
  std::vector<std::size_t> hidden_widths;
  std::size_t class_count = 2;

  // Throws InvalidArgument on a zero width or class_count < 2.
  void Validate() const;

  // Width sequence d, h_1, ..., h_L, C.
  std::vector<std::size_t> LayerWidths() const;

  std::string ToString() const;

  friend bool operator==(const Architecture&, const Architecture&) = default;
};

struct DenseLayer {
  Matrix weights;  // out x in
  std::vector<double> bias;

  friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

// Weights and biases of a ReLU MLP. layers.back() produces the logits.
struct MlpParameters {
  Architecture architecture;
  std::vector<DenseLayer> layers;

  // Throws InvalidArgument if the layer shapes do not chain per
  // `architecture` or an entry is non-finite.
  void Validate() const;

  std::size_t ParameterCount() const;

  friend bool operator==(const MlpParameters&, const MlpParameters&) = default;
};

// Gradients share the parameter layout.
using MlpGradients = std::vector<DenseLayer>;

// Activations recorded by Forward for the matching Backward call.
struct ForwardCache {
  // inputs[l] is the input to layer l; inputs[0] is x.
  std::vector<std::vector<double>> inputs;
  // pre_activations[l] = W_l * inputs[l] + b_l.
  std::vector<std::vector<double>> pre_activations;
};

// He-style uniform weights in (-sqrt(6/fan_in), sqrt(6/fan_in)), zero biases.
MlpParameters InitParams(const Architecture& arch, Rng& rng);

// Zero gradients shaped like `params`.
MlpGradients ZeroGradients(const MlpParameters& params);

// Logits for x. ReLU between layers, nothing after the last one.
std::vector<double> Forward(const MlpParameters& params,
                            std::span<const double> x,
                            ForwardCache* cache = nullptr);

// Adds scale * d(grad_logits . logits)/d(theta) into `grads`. The ReLU
// derivative at exactly zero is taken as 0.
void Backward(const MlpParameters& params, const ForwardCache& cache,
              std::span<const double> grad_logits, MlpGradients& grads,
              double scale = 1.0);

// Convenience wrapper returning fresh gradients with scale 1.
MlpGradients Backward(const MlpParameters& params, const ForwardCache& cache,
                      std::span<const double> grad_logits);

// Frobenius norm of the final weight matrix; biases excluded.
double LastLayerWeightNorm(const MlpParameters& params);

}  // namespace sqen

#endif  // SQEN_MLP_H_
