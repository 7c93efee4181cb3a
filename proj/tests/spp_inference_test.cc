// tests/spp_inference_test.cc

// Copyright 2026  The eftw-rbm Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "eftw/errors.h"
#include "eftw/spp_inference.h"
#include "oracles.h"

namespace eftw {
namespace {

// Standardized spectrogram with `bins` bins and random statistics.
Spectrogram random_standardized(Rng &rng, int bins, int frames) {
  std::uniform_real_distribution<double> mag(0.0, 5.0);
  Spectrogram lin;
  lin.values.resize(bins, frames);
  for (Eigen::Index i = 0; i < lin.values.size(); ++i)
    lin.values.data()[i] = mag(rng);
  const std::vector<Spectrogram> train = {lin};
  return standardize(lin, compute_stats(train));
}

TEST(RatioMask, ClampsIntoUnitInterval) {
  Matrix recon(2, 3), noisy(2, 3);
  recon << 1.0, 4.0, -1.0, 0.0, 2.0, 1e-12;
  noisy << 2.0, 2.0, 1.0, 3.0, 0.0, 0.0;
  const Matrix p = ratio_mask(recon, noisy);
  EXPECT_EQ(p(0, 0), 0.5);
  EXPECT_EQ(p(0, 1), 1.0);
  EXPECT_EQ(p(0, 2), 0.0);
  EXPECT_EQ(p(1, 0), 0.0);
  EXPECT_EQ(p(1, 1), 1.0);  // noisy floored at 1e-8
  EXPECT_NEAR(p(1, 2), 1e-4, 1e-16);
  EXPECT_THROW(ratio_mask(recon, Matrix::Ones(3, 2)), ShapeError);
}

TEST(EstimateSpp, RangeForArbitraryModels) {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const int bins = 6;
    FactorModel m = oracle::random_model(ModelShape::ForFrames(bins, 4, 5, 2),
                                         rng, 0.2 + trial, true);
    const Spectrogram noisy = random_standardized(rng, bins, 15);
    for (ContextMode mode : {ContextMode::kEnhanced, ContextMode::kSliding}) {
      InferenceOptions o;
      o.context_mode = mode;
      const SppMatrix spp = estimate_spp(m, noisy, o);
      ASSERT_EQ(spp.n_bins(), bins);
      ASSERT_EQ(spp.frames(), 15);
      EXPECT_GE(spp.values.minCoeff(), 0.0);
      EXPECT_LE(spp.values.maxCoeff(), 1.0);
      ASSERT_EQ(spp.frame_times.size(), 15u);
      EXPECT_EQ(spp.frame_times[3], noisy.frame_time(3));
    }
  }
}

// A model whose visible mean is exactly its bias reproduces any frame equal
// to that bias.
TEST(EstimateSpp, ExactReconstructionGivesOne) {
  const int bins = 5;
  FactorModel m(ModelShape::ForFrames(bins, 3, 4, 2));
  Rng rng(4);
  Spectrogram noisy = random_standardized(rng, bins, 8);
  const Vector frame = noisy.values.col(2);
  for (Eigen::Index t = 0; t < noisy.frames(); ++t) noisy.values.col(t) = frame;
  m.bias_y = frame;
  const SppMatrix spp = estimate_spp(m, noisy);
  for (Eigen::Index i = 0; i < spp.values.size(); ++i)
    EXPECT_NEAR(spp.values.data()[i], 1.0, 1e-12);
}

TEST(EstimateSpp, ZeroReconstructionGivesZero) {
  const int bins = 5;
  Rng rng(5);
  const Spectrogram noisy = random_standardized(rng, bins, 8);
  FactorModel m(ModelShape::ForFrames(bins, 3, 4, 2));
  // Standardized value that maps back to zero magnitude.
  const StandardizationStats &s = *noisy.stats;
  m.bias_y = (-s.mean.array() / s.deviation.array()).matrix();
  const SppMatrix spp = estimate_spp(m, noisy);
  EXPECT_LT(spp.values.cwiseAbs().maxCoeff(), 1e-12);
}

TEST(EstimateSpp, MeanFieldIsDeterministicAndSamplingIsSeeded) {
  Rng rng(6);
  const FactorModel m = oracle::random_model(
      ModelShape::ForFrames(4, 3, 3, 2), rng, 0.3, true);
  const Spectrogram noisy = random_standardized(rng, 4, 12);
  EXPECT_EQ(estimate_spp(m, noisy).values, estimate_spp(m, noisy).values);
  InferenceOptions o;
  o.sample = true;
  o.seed = 9;
  const Matrix a = estimate_spp(m, noisy, o).values;
  EXPECT_EQ(a, estimate_spp(m, noisy, o).values);
  o.seed = 10;
  EXPECT_NE(a, estimate_spp(m, noisy, o).values);
}

TEST(EstimateSpp, RejectsBadInput) {
  Rng rng(7);
  FactorModel m(ModelShape::ForFrames(4, 2, 2, 1));
  Spectrogram noisy = random_standardized(rng, 4, 5);
  Spectrogram raw = noisy;
  raw.standardized = false;
  EXPECT_THROW(estimate_spp(m, raw), ConfigError);
  Spectrogram empty = noisy;
  empty.values.resize(4, 0);
  EXPECT_THROW(estimate_spp(m, empty), ConfigError);
  EXPECT_THROW(estimate_spp(m, random_standardized(rng, 5, 5)), ShapeError);
  FactorModel broken = m;
  broken.bias_y(0) = std::nan("");
  EXPECT_THROW(estimate_spp(broken, noisy), ConfigError);
}

TEST(Integrate1d, TrivialCases) {
  SppMatrix spp;
  spp.values = Matrix::Zero(3, 4);
  for (double v : integrate_1d(spp)) EXPECT_EQ(v, 0.0);
  spp.values.col(2).setOnes();
  const std::vector<double> s = integrate_1d(spp);
  EXPECT_EQ(s, (std::vector<double>{0.0, 0.0, 1.0, 0.0}));
  spp.values = Matrix::Constant(3, 4, 0.7);
  for (double v : integrate_1d(spp)) EXPECT_EQ(v, 0.0);
}

TEST(Integrate1d, MatchesLoopSumThenAffineMap) {
  Rng rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    SppMatrix spp;
    spp.values.resize(9, 17);
    for (Eigen::Index i = 0; i < spp.values.size(); ++i)
      spp.values.data()[i] = u(rng);
    std::vector<double> sums(17, 0.0);
    for (int t = 0; t < 17; ++t)
      for (int n = 0; n < 9; ++n) sums[t] += spp.values(n, t);
    const double lo = *std::min_element(sums.begin(), sums.end());
    const double hi = *std::max_element(sums.begin(), sums.end());
    const std::vector<double> s = integrate_1d(spp);
    for (int t = 0; t < 17; ++t)
      EXPECT_NEAR(s[t], (sums[t] - lo) / (hi - lo), 1e-12);
  }
}

TEST(Decide, ThresholdEdges) {
  const std::vector<double> s = {0.0, 0.3, 1.0};
  EXPECT_EQ(decide(s, 0.0), (std::vector<int>{1, 1, 1}));
  EXPECT_EQ(decide(s, 1.0 + 1e-12), (std::vector<int>{0, 0, 0}));
  EXPECT_EQ(decide(s, 0.3), (std::vector<int>{0, 1, 1}));
  EXPECT_THROW(decide(std::vector<double>{}, 0.5), ConfigError);
}

TEST(Youden, SeparatesBimodalScores) {
  const std::vector<double> s = {0.05, 0.1, 0.12, 0.8, 0.85, 0.9, 0.2};
  const std::vector<int> l = {0, 0, 0, 1, 1, 1, 0};
  const double thr = youden_threshold(s, l);
  const std::vector<int> d = decide(s, thr);
  EXPECT_EQ(d, l);
}

TEST(Youden, MatchesExhaustiveSweep) {
  Rng rng(9);
  std::uniform_int_distribution<int> grid(0, 20);
  std::bernoulli_distribution coin(0.5);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> s(30);
    std::vector<int> l(30);
    for (int i = 0; i < 30; ++i) {
      l[i] = coin(rng);
      s[i] = 0.05 * grid(rng);
    }
    l[0] = 1;
    l[1] = 0;
    double best = -2.0;
    for (double thr : s) {
      double hits = 0, fas = 0, pos = 0, neg = 0;
      for (int i = 0; i < 30; ++i) {
        (l[i] ? pos : neg) += 1;
        if (s[i] >= thr) (l[i] ? hits : fas) += 1;
      }
      best = std::max(best, hits / pos - fas / neg);
    }
    const double thr = youden_threshold(s, l);
    double hits = 0, fas = 0, pos = 0, neg = 0;
    for (int i = 0; i < 30; ++i) {
      (l[i] ? pos : neg) += 1;
      if (s[i] >= thr) (l[i] ? hits : fas) += 1;
    }
    EXPECT_EQ(hits / pos - fas / neg, best);
  }
  EXPECT_THROW(youden_threshold(std::vector<double>{0.1, 0.2},
                                std::vector<int>{1, 1}),
               ConfigError);
}

TEST(Output, CsvLayouts) {
  SppMatrix spp;
  spp.values.resize(2, 3);
  spp.values << 0.0, 0.5, 1.0, 0.25, 0.75, 0.125;
  spp.frame_times = {0.016, 0.032, 0.048};
  std::ostringstream grid;
  write_spp_csv(grid, spp);
  EXPECT_EQ(grid.str(), "0,0.5,1\n0.25,0.75,0.125\n");
  std::ostringstream curve;
  write_curve_csv(curve, spp, integrate_1d(spp));
  std::istringstream lines(curve.str());
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "time_s,score");
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  EXPECT_EQ(rows, 3);
}

}  // namespace
}  // namespace eftw
