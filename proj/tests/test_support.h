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

// Independent oracles and random generators shared by the tests. Nothing
// here calls into the code under test except for the types it passes around.

#ifndef SQEN_TESTS_TEST_SUPPORT_H_
#define SQEN_TESTS_TEST_SUPPORT_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "sqen/calibration.h"

namespace sqen::testing {

// Central difference (f(x+h) - f(x-h)) / 2h along coordinate i.
inline double CentralDifference(const std::function<double()>& f, double& xi,
                                double h) {
  const double saved = xi;
  xi = saved + h;
  const double plus = f();
  xi = saved - h;
  const double minus = f();
  xi = saved;
  return (plus - minus) / (2.0 * h);
}

inline double RelativeError(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

// Plain-definition loss references in long double, written straight from
// the formulas (no max-subtraction, no complement trick).
inline long double ReferenceCrossEntropy(const std::vector<long double>& f,
                                         std::size_t y) {
  long double z = 0.0L;
  for (long double v : f) z += std::exp(v);
  return std::log(z) - f[y];
}

inline long double ReferenceSquentropy(const std::vector<long double>& f,
                                       std::size_t y) {
  long double squares = 0.0L;
  for (std::size_t j = 0; j < f.size(); ++j) {
    if (j != y) squares += f[j] * f[j];
  }
  return ReferenceCrossEntropy(f, y) +
         squares / static_cast<long double>(f.size() - 1);
}

inline long double ReferenceRescaledSquare(const std::vector<long double>& f,
                                           std::size_t y, long double t,
                                           long double M) {
  long double sum = 0.0L;
  for (std::size_t j = 0; j < f.size(); ++j) {
    sum += j == y ? t * (f[j] - M) * (f[j] - M) : f[j] * f[j];
  }
  return sum / static_cast<long double>(f.size());
}

// d/df_j of `loss` by central difference with step h, evaluated in long
// double so that rounding stays far below the truncation error.
inline std::vector<double> NumericGradient(
    const std::function<long double(const std::vector<long double>&)>& loss,
    const std::vector<double>& f, double h) {
  std::vector<double> grad(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) {
    std::vector<long double> plus(f.begin(), f.end()), minus = plus;
    plus[j] += h;
    minus[j] -= h;
    grad[j] = static_cast<double>((loss(plus) - loss(minus)) /
                                  (2.0L * static_cast<long double>(h)));
  }
  return grad;
}

// Naive two-pass ECE. Pass one scans every bin against every prediction
// with the interval test written out literally; pass two combines the bins.
// Per-bin confidences are summed in ascending order, the documented order.
inline double BruteForceEce(const std::vector<Prediction>& preds,
                            std::size_t K) {
  const double n = static_cast<double>(preds.size());
  const double kd = static_cast<double>(K);
  std::vector<std::vector<double>> confs(K);
  std::vector<double> hits(K, 0.0);
  for (std::size_t k = 1; k <= K; ++k) {
    const double lo = static_cast<double>(k - 1) / kd;
    const double hi = static_cast<double>(k) / kd;
    for (const auto& p : preds) {
      const bool in = (p.confidence > lo && p.confidence <= hi) ||
                      (k == 1 && p.confidence == 0.0);
      if (!in) continue;
      confs[k - 1].push_back(p.confidence);
      if (p.true_label == p.predicted_label) hits[k - 1] += 1.0;
    }
  }
  double ece = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    if (confs[k].empty()) continue;
    std::sort(confs[k].begin(), confs[k].end());
    double sum = 0.0;
    for (double c : confs[k]) sum += c;
    const double m = static_cast<double>(confs[k].size());
    ece += m / n * std::abs(hits[k] / m - sum / m);
  }
  return ece;
}

// Generators use the standard library engine so they stay independent of
// the generator under test.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : engine_(seed) {}

  double Normal(double mean, double sd) {
    return std::normal_distribution<double>(mean, sd)(engine_);
  }
  double Uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  std::size_t Index(std::size_t lo, std::size_t hi) {  // inclusive
    return std::uniform_int_distribution<std::size_t>(lo, hi)(engine_);
  }
  bool Coin() { return Index(0, 1) == 1; }

  std::vector<double> NormalVector(std::size_t n, double sd) {
    std::vector<double> v(n);
    for (auto& x : v) x = Normal(0.0, sd);
    return v;
  }

  // Mix of interior values, exact bin edges, 0 and 1.
  Prediction RandomPrediction(std::size_t K) {
    Prediction p;
    p.true_label = Index(0, 2);
    p.predicted_label = Index(0, 2);
    switch (Index(0, 5)) {
      case 0:
        p.confidence = static_cast<double>(Index(0, K)) /
                       static_cast<double>(K);
        break;
      case 1:
        p.confidence = Coin() ? 1.0 : 0.0;
        break;
      default:
        p.confidence = Uniform(0.0, 1.0);
    }
    return p;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

// Fresh empty directory under the system temp dir.
inline std::filesystem::path ScratchDir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("sqen_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace sqen::testing

#endif  // SQEN_TESTS_TEST_SUPPORT_H_
