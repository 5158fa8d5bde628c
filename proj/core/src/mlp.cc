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

#include "sqen/mlp.h"

#include <algorithm>
#include <cmath>

#include "sqen/errors.h"

namespace sqen {

void Architecture::Validate() const {
  if (input_dim == 0) throw InvalidArgument("Architecture: input_dim is 0");
  if (class_count < 2) {
    throw InvalidArgument("Architecture: class_count must be >= 2, got " +
                          std::to_string(class_count));
  }
  for (std::size_t w : hidden_widths) {
    if (w == 0) throw InvalidArgument("Architecture: hidden width 0");
  }
}

std::vector<std::size_t> Architecture::LayerWidths() const {
  std::vector<std::size_t> widths;
  widths.reserve(hidden_widths.size() + 2);
  widths.push_back(input_dim);
  widths.insert(widths.end(), hidden_widths.begin(), hidden_widths.end());
  widths.push_back(class_count);
  return widths;
}

std::string Architecture::ToString() const {
  std::string s;
  for (std::size_t w : LayerWidths()) {
    if (!s.empty()) s += "-";
    s += std::to_string(w);
  }
  return s;
}

void MlpParameters::Validate() const {
  architecture.Validate();
  const auto widths = architecture.LayerWidths();
  if (layers.size() + 1 != widths.size()) {
    throw InvalidArgument("MlpParameters: " + std::to_string(layers.size()) +
                          " layers for architecture " +
                          architecture.ToString());
  }
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto& layer = layers[l];
    if (layer.weights.rows() != widths[l + 1] ||
        layer.weights.cols() != widths[l] ||
        layer.bias.size() != widths[l + 1]) {
      throw InvalidArgument(
          "MlpParameters: layer " + std::to_string(l) + " has weights " +
          layer.weights.ShapeString() + " and bias " +
          std::to_string(layer.bias.size()) + ", expected " +
          std::to_string(widths[l + 1]) + "x" + std::to_string(widths[l]));
    }
    const auto finite = [](double v) { return std::isfinite(v); };
    if (!std::all_of(layer.weights.entries().begin(),
                     layer.weights.entries().end(), finite) ||
        !std::all_of(layer.bias.begin(), layer.bias.end(), finite)) {
      throw InvalidArgument("MlpParameters: non-finite entry in layer " +
                            std::to_string(l));
    }
  }
}

std::size_t MlpParameters::ParameterCount() const {
  std::size_t count = 0;
  for (const auto& layer : layers) {
    count += layer.weights.size() + layer.bias.size();
  }
  return count;
}

MlpParameters InitParams(const Architecture& arch, Rng& rng) {
  arch.Validate();
  MlpParameters params;
  params.architecture = arch;
  const auto widths = arch.LayerWidths();
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    const std::size_t fan_in = widths[l];
    const std::size_t fan_out = widths[l + 1];
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in));
    DenseLayer layer{Matrix(fan_out, fan_in),
                     std::vector<double>(fan_out, 0.0)};
    for (double& w : layer.weights.entries()) {
      // Uniform gives [-bound, bound); reject the closed endpoint so the
      // interval is open on both sides.
      do {
        w = rng.Uniform(-bound, bound);
      } while (w == -bound);
    }
    params.layers.push_back(std::move(layer));
  }
  return params;
}

MlpGradients ZeroGradients(const MlpParameters& params) {
  MlpGradients grads;
  grads.reserve(params.layers.size());
  for (const auto& layer : params.layers) {
    grads.push_back(DenseLayer{
        Matrix(layer.weights.rows(), layer.weights.cols()),
        std::vector<double>(layer.bias.size(), 0.0)});
  }
  return grads;
}

std::vector<double> Forward(const MlpParameters& params,
                            std::span<const double> x, ForwardCache* cache) {
  if (params.layers.empty()) throw InvalidArgument("Forward: no layers");
  if (x.size() != params.layers.front().weights.cols()) {
    throw InvalidArgument("Forward: input of length " +
                          std::to_string(x.size()) + " for first layer " +
                          params.layers.front().weights.ShapeString());
  }
  if (cache != nullptr) {
    cache->inputs.resize(params.layers.size());
    cache->pre_activations.resize(params.layers.size());
  }
  std::vector<double> current(x.begin(), x.end());
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    const auto& layer = params.layers[l];
    std::vector<double> z(layer.weights.rows());
    AffineInto(layer.weights, current, layer.bias, z);
    const bool last = l + 1 == params.layers.size();
    if (cache != nullptr) {
      cache->inputs[l] = std::move(current);
      cache->pre_activations[l] = z;
    }
    if (!last) {
      for (double& v : z) v = v > 0.0 ? v : 0.0;
    }
    current = std::move(z);
  }
  return current;
}

void Backward(const MlpParameters& params, const ForwardCache& cache,
              std::span<const double> grad_logits, MlpGradients& grads,
              double scale) {
  const std::size_t depth = params.layers.size();
  if (cache.inputs.size() != depth || cache.pre_activations.size() != depth ||
      grads.size() != depth) {
    throw InvalidArgument("Backward: cache/gradients have " +
                          std::to_string(cache.inputs.size()) + "/" +
                          std::to_string(grads.size()) +
                          " layers, parameters have " + std::to_string(depth));
  }
  if (grad_logits.size() != params.layers.back().weights.rows()) {
    throw InvalidArgument("Backward: grad_logits of length " +
                          std::to_string(grad_logits.size()) + " for " +
                          std::to_string(params.layers.back().weights.rows()) +
                          " logits");
  }
  std::vector<double> delta(grad_logits.begin(), grad_logits.end());
  for (std::size_t l = depth; l-- > 0;) {
    const auto& layer = params.layers[l];
    const auto& input = cache.inputs[l];
    if (input.size() != layer.weights.cols() ||
        cache.pre_activations[l].size() != layer.weights.rows()) {
      throw InvalidArgument("Backward: cache does not match layer " +
                            std::to_string(l));
    }
    AddOuterProduct(grads[l].weights, scale, delta, input);
    for (std::size_t i = 0; i < delta.size(); ++i) {
      grads[l].bias[i] += scale * delta[i];
    }
    if (l == 0) break;
    std::vector<double> upstream(layer.weights.cols());
    TransposedMatVecInto(layer.weights, delta, upstream);
    const auto& z_prev = cache.pre_activations[l - 1];
    for (std::size_t j = 0; j < upstream.size(); ++j) {
      if (!(z_prev[j] > 0.0)) upstream[j] = 0.0;
    }
    delta = std::move(upstream);
  }
}

MlpGradients Backward(const MlpParameters& params, const ForwardCache& cache,
                      std::span<const double> grad_logits) {
  MlpGradients grads = ZeroGradients(params);
  Backward(params, cache, grad_logits, grads, 1.0);
  return grads;
}

double LastLayerWeightNorm(const MlpParameters& params) {
  if (params.layers.empty()) {
    throw InvalidArgument("LastLayerWeightNorm: no layers");
  }
  return FrobeniusNorm(params.layers.back().weights);
}

}  // namespace sqen
