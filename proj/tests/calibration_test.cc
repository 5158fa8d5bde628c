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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "sqen/calibration.h"
#include "sqen/errors.h"
#include "sqen/losses.h"
#include "test_support.h"

namespace sqen {
namespace {

using testing::Gen;

Prediction P(double confidence, bool correct) {
  Prediction p;
  p.confidence = confidence;
  p.true_label = 0;
  p.predicted_label = correct ? 0 : 1;
  return p;
}

std::vector<Prediction> FourSamples() {
  return {P(0.9, true), P(0.8, false), P(0.4, true), P(0.3, true)};
}

TEST(Predict, Argmax) {
  const auto p = Predict(std::vector<double>{0.2, 0.8}, 1);
  EXPECT_EQ(p.predicted_label, 1u);
  EXPECT_EQ(p.confidence, 0.8);
  EXPECT_TRUE(p.correct());
}

TEST(Predict, TieGoesToLowestIndex) {
  const auto p = Predict(std::vector<double>{0.5, 0.5}, 1);
  EXPECT_EQ(p.predicted_label, 0u);
  EXPECT_FALSE(p.correct());
}

TEST(Predict, ThreeClass) {
  const auto p = Predict(std::vector<double>{0.1, 0.3, 0.6}, 0);
  EXPECT_EQ(p.predicted_label, 2u);
  EXPECT_EQ(p.confidence, 0.6);
  EXPECT_FALSE(p.correct());
}

TEST(Predict, LabelOutOfRange) {
  EXPECT_THROW(Predict(std::vector<double>{0.5, 0.5}, 2), InvalidArgument);
}

TEST(BinOf, Boundaries) {
  EXPECT_EQ(BinOf(1.0, 10), 10u);
  EXPECT_EQ(BinOf(0.1, 10), 1u);
  EXPECT_EQ(BinOf(0.1000001, 10), 2u);
  EXPECT_EQ(BinOf(0.0, 10), 1u);
  EXPECT_EQ(BinOf(0.5, 1), 1u);
  EXPECT_THROW(BinOf(1.5, 10), InvalidArgument);
  EXPECT_THROW(BinOf(-0.1, 10), InvalidArgument);
  EXPECT_THROW(BinOf(NAN, 10), InvalidArgument);
  EXPECT_THROW(BinOf(0.5, 0), InvalidArgument);
}

// Every k/K edge is closed on the right, as evaluated in double.
TEST(BinOf, AllEdgesClosedOnTheRight) {
  for (std::size_t K = 1; K <= 100; ++K) {
    for (std::size_t k = 1; k <= K; ++k) {
      const double edge = static_cast<double>(k) / static_cast<double>(K);
      ASSERT_EQ(BinOf(edge, K), k) << "K=" << K;
      if (k < K) {
        ASSERT_EQ(BinOf(std::nextafter(edge, 2.0), K), k + 1) << "K=" << K;
      }
    }
  }
}

TEST(ComputeEce, PerfectCalibration) {
  const std::vector<Prediction> preds(10, P(1.0, true));
  const auto r = ComputeEce(preds, 15);
  EXPECT_EQ(r.ece, 0.0);
  EXPECT_EQ(r.overall_accuracy, 1.0);
  EXPECT_EQ(r.bins.back().count, 10u);
}

TEST(ComputeEce, FourSampleExample) {
  const auto r = ComputeEce(FourSamples(), 2);
  ASSERT_EQ(r.bins.size(), 2u);
  EXPECT_EQ(r.bins[0].index, 1u);
  EXPECT_EQ(r.bins[0].count, 2u);
  EXPECT_EQ(r.bins[0].accuracy, 1.0);
  EXPECT_DOUBLE_EQ(r.bins[0].confidence, 0.35);
  EXPECT_EQ(r.bins[1].count, 2u);
  EXPECT_EQ(r.bins[1].accuracy, 0.5);
  EXPECT_DOUBLE_EQ(r.bins[1].confidence, 0.85);
  EXPECT_EQ(r.ece, 0.5);
  EXPECT_EQ(r.n, 4u);
  EXPECT_EQ(r.overall_accuracy, 0.75);
}

TEST(ComputeEce, EmptyInput) {
  EXPECT_THROW(ComputeEce({}, 15), InvalidArgument);
  EXPECT_THROW(ComputeEce(FourSamples(), 0), InvalidArgument);
}

TEST(ComputeEce, UnitOneHotLogitsAreUnderconfident) {
  std::vector<Prediction> preds;
  for (std::size_t y = 0; y < 100; ++y) {
    std::vector<double> f(100, 0.0);
    f[y] = 1.0;
    preds.push_back(Predict(Softmax(f), y));
  }
  const double e = std::numbers::e;
  for (const auto& p : preds) {
    EXPECT_NEAR(p.confidence, e / (e + 99.0), 1e-15);
    EXPECT_TRUE(p.correct());
  }
  const auto r = ComputeEce(preds, 15);
  EXPECT_EQ(r.bins[0].count, 100u);
  EXPECT_NEAR(r.ece, 1.0 - e / (e + 99.0), 1e-12);
}

TEST(ComputeEce, MatchesBruteForce) {
  Gen gen(31);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = gen.Index(1, 200), K = gen.Index(1, 20);
    std::vector<Prediction> preds;
    for (std::size_t i = 0; i < n; ++i) preds.push_back(gen.RandomPrediction(K));
    ASSERT_EQ(ComputeEce(preds, K).ece, testing::BruteForceEce(preds, K));
  }
}

TEST(ComputeEce, Properties) {
  Gen gen(32);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = gen.Index(1, 200), K = gen.Index(1, 20);
    std::vector<Prediction> preds;
    for (std::size_t i = 0; i < n; ++i) preds.push_back(gen.RandomPrediction(K));
    const auto r = ComputeEce(preds, K);
    EXPECT_GE(r.ece, 0.0);
    EXPECT_LE(r.ece, 1.0);
    std::size_t total = 0;
    for (const auto& b : r.bins) total += b.count;
    EXPECT_EQ(total, n);

    // Reordering does not change a single bit of the report.
    auto shuffled = preds;
    std::shuffle(shuffled.begin(), shuffled.end(), gen.engine());
    const auto s = ComputeEce(shuffled, K);
    EXPECT_EQ(s.ece, r.ece);
    for (std::size_t k = 0; k < K; ++k) {
      EXPECT_EQ(s.bins[k].confidence, r.bins[k].confidence);
      EXPECT_EQ(s.bins[k].accuracy, r.bins[k].accuracy);
    }

    // One bin: |overall accuracy - mean confidence|.
    const auto one = ComputeEce(preds, 1);
    EXPECT_NEAR(one.ece, std::abs(one.overall_accuracy - one.bins[0].confidence),
                1e-15);
  }
}

TEST(ComputeEce, ZeroOnlyWhenEveryBinMatches) {
  // Two bins, each internally calibrated.
  const std::vector<Prediction> preds = {P(0.5, true), P(0.5, false),
                                         P(1.0, true)};
  EXPECT_EQ(ComputeEce(preds, 2).ece, 0.0);
  const std::vector<Prediction> off = {P(0.5, true), P(0.5, true),
                                       P(1.0, true)};
  EXPECT_GT(ComputeEce(off, 2).ece, 0.0);
}

TEST(HistogramFractions, Cases) {
  EXPECT_EQ(HistogramFractions(ComputeEce(FourSamples(), 2)),
            (std::vector<double>{0.5, 0.5}));
  const auto single = HistogramFractions(ComputeEce(std::vector<Prediction>{P(0.7, true)}, 10));
  EXPECT_EQ(single[6], 1.0);
  EXPECT_EQ(std::accumulate(single.begin(), single.end(), 0.0), 1.0);

  // Power-of-two sample count: each fraction, and their sum, is exact.
  Gen gen(33);
  std::vector<Prediction> preds;
  for (int i = 0; i < 1024; ++i) preds.push_back(P(gen.Uniform(0, 1), true));
  const auto f = HistogramFractions(ComputeEce(preds, 16));
  EXPECT_EQ(std::accumulate(f.begin(), f.end(), 0.0), 1.0);
}

}  // namespace
}  // namespace sqen
