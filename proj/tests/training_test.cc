// tests/training_test.cc

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

#include <array>
#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "eftw/errors.h"
#include "eftw/training.h"
#include "oracles.h"

namespace eftw {
namespace {

// Visits every trainable scalar of a model together with the matching
// gradient entry.
template <typename Fn>
void for_each_parameter(FactorModel *m, const GradientSet &g, Fn fn) {
  const std::array<std::pair<double *, const double *>, 6> blocks = {{
      {m->wx_factor.data(), g.wx_factor.data()},
      {m->wy_factor.data(), g.wy_factor.data()},
      {m->wh_factor.data(), g.wh_factor.data()},
      {m->bias_x.data(), g.bias_x.data()},
      {m->bias_y.data(), g.bias_y.data()},
      {m->bias_h.data(), g.bias_h.data()},
  }};
  const std::array<Eigen::Index, 6> sizes = {
      m->wx_factor.size(), m->wy_factor.size(), m->wh_factor.size(),
      m->bias_x.size(),    m->bias_y.size(),    m->bias_h.size()};
  for (std::size_t b = 0; b < blocks.size(); ++b)
    for (Eigen::Index i = 0; i < sizes[b]; ++i)
      fn(blocks[b].first + i, blocks[b].second[i]);
}

TEST(TrainConfig, Validation) {
  TrainConfig c;
  EXPECT_NO_THROW(c.Validate());
  c.momentum = 1.0;
  EXPECT_THROW(c.Validate(), ConfigError);
  c = TrainConfig();
  c.momentum_cutoff_epoch = 41;
  EXPECT_THROW(c.Validate(), ConfigError);
  c = TrainConfig();
  c.learning_rate = 0.0;
  EXPECT_THROW(c.Validate(), ConfigError);
  c = TrainConfig();
  c.barrier_beta = -0.1;
  EXPECT_THROW(c.Validate(), ConfigError);
  c = TrainConfig();
  c.cd_steps = 0;
  EXPECT_THROW(c.Validate(), ConfigError);
}

TEST(TrainConfig, MomentumSchedule) {
  TrainConfig c;
  EXPECT_EQ(c.momentum_at(0), 0.1);
  EXPECT_EQ(c.momentum_at(19), 0.1);
  EXPECT_EQ(c.momentum_at(20), 0.0);
  EXPECT_EQ(c.momentum_at(39), 0.0);
}

TEST(EnergyGradients, ZeroStateIsZero) {
  Rng rng(1);
  FactorModel m = oracle::random_model(ModelShape::Free(3, 3, 2, 2), rng);
  m.bias_x.setZero();
  m.bias_y.setZero();
  const GradientSet g = energy_gradients(
      m, {Vector::Zero(3), Vector::Zero(3), Vector::Zero(2),
          HiddenMode::kSampled});
  EXPECT_EQ(g.wx_factor.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(g.wy_factor.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(g.wh_factor.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(g.bias_x.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(g.bias_y.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(g.bias_h.cwiseAbs().maxCoeff(), 0.0);
}

TEST(EnergyGradients, SingleUnitProduct) {
  FactorModel m(ModelShape::Free(1, 1, 1, 1));
  m.wx_factor.setOnes();
  m.wy_factor.setOnes();
  m.wh_factor.setOnes();
  const Vector one = Vector::Ones(1);
  const GradientSet g =
      energy_gradients(m, {one, one, one, HiddenMode::kSampled});
  EXPECT_EQ(g.wx_factor(0, 0), 1.0);
  EXPECT_EQ(g.wy_factor(0, 0), 1.0);
  EXPECT_EQ(g.wh_factor(0, 0), 1.0);
}

TEST(EnergyGradients, MatchCentralFiniteDifferences) {
  Rng rng(17);
  std::uniform_int_distribution<int> big(1, 20), small(1, 8);
  const double step = 1e-5;
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const ModelShape s =
        ModelShape::Free(big(rng), big(rng), small(rng), small(rng));
    FactorModel m = oracle::random_model(s, rng, 0.3);
    const Vector x = oracle::random_vector(s.input, rng);
    const Vector y = oracle::random_vector(s.visible, rng);
    const Vector h = oracle::random_binary(s.hidden, rng);
    const GradientSet g = energy_gradients(m, {x, y, h, HiddenMode::kSampled});
    for_each_parameter(&m, g, [&](double *p, double analytic) {
      const double keep = *p;
      *p = keep + step;
      const double hi = *p;
      const long double up = oracle::energy_extended(m, x, y, h);
      *p = keep - step;
      const double lo = *p;
      const long double down = oracle::energy_extended(m, x, y, h);
      *p = keep;
      const auto numeric = static_cast<double>(-(up - down) / (hi - lo));
      worst = std::max(worst, oracle::relative_error(analytic, numeric));
    });
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(EnergyGradients, ShapeMismatchThrows) {
  FactorModel m(ModelShape::Free(3, 3, 2, 2));
  EXPECT_THROW(energy_gradients(m, {Vector::Zero(3), Vector::Zero(4),
                                    Vector::Zero(2), HiddenMode::kSampled}),
               ShapeError);
}

TEST(EnergyGradients, AccumulateIsWeightedSum) {
  Rng rng(3);
  const FactorModel m =
      oracle::random_model(ModelShape::Free(4, 3, 2, 2), rng);
  const Vector x = oracle::random_vector(4, rng);
  const Vector y = oracle::random_vector(3, rng);
  const Vector h = oracle::random_binary(2, rng);
  GradientSet acc(m.shape);
  accumulate_energy_gradients(m, x, y, h, 2.0, &acc);
  accumulate_energy_gradients(m, x, y, h, -0.5, &acc);
  GradientSet want = energy_gradients(m, {x, y, h, HiddenMode::kSampled});
  want *= 1.5;
  EXPECT_LT((acc.wx_factor - want.wx_factor).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((acc.bias_y - want.bias_y).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(CdStatistics, ZeroWeightModelHasNoInteraction) {
  FactorModel m(ModelShape::Free(3, 4, 2, 2));
  m.bias_y << 0.5, -1.0, 2.0, 0.0;
  Rng rng(5);
  const Vector x = oracle::random_vector(3, rng);
  const Vector y = oracle::random_vector(4, rng);
  const CdStatistics cd = cd_statistics(m, x, y, 1, rng);
  for (const GradientSet *g : {&cd.positive, &cd.negative}) {
    EXPECT_EQ(g->wx_factor.cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(g->wy_factor.cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(g->wh_factor.cwiseAbs().maxCoeff(), 0.0);
  }
  const Vector diff = cd.positive.bias_y - cd.negative.bias_y;
  EXPECT_LT((diff - (y - cd.chain_y)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(cd.reconstruction, m.bias_y);
}

TEST(CdStatistics, Reproducible) {
  Rng init(8);
  const FactorModel m =
      oracle::random_model(ModelShape::Free(6, 4, 3, 3), init);
  const Vector x = oracle::random_vector(6, init);
  const Vector y = oracle::random_vector(4, init);
  Rng a(77), b(77);
  const CdStatistics ca = cd_statistics(m, x, y, 3, a);
  const CdStatistics cb = cd_statistics(m, x, y, 3, b);
  EXPECT_EQ(ca.negative.wx_factor, cb.negative.wx_factor);
  EXPECT_EQ(ca.negative.wy_factor, cb.negative.wy_factor);
  EXPECT_EQ(ca.negative.bias_h, cb.negative.bias_h);
  EXPECT_EQ(ca.reconstruction, cb.reconstruction);
}

TEST(CdStatistics, RejectsZeroSteps) {
  FactorModel m(ModelShape::Free(2, 2, 2, 2));
  Rng rng(1);
  EXPECT_THROW(cd_statistics(m, Vector::Zero(2), Vector::Zero(2), 0, rng),
               ConfigError);
}

// Exact model expectations for a model small enough to enumerate the
// hidden layer. With x clamped and h fixed, y is Gaussian with mean
// b + s * c(h), c_j = sum_f wy_jf fx_f fh_f, and the unnormalised weight of
// h is exp(bh . h + sum_j (c_j^2 / 2 + b_j c_j / s_j)). Every gradient
// statistic is linear in y for fixed h and linear in p(h | y) for fixed y,
// so its expectation is the h-weighted statistic at the conditional mean.
struct ExactExpectation {
  std::vector<double> values;  // flattened in for_each_parameter order
};

ExactExpectation exact_negative_phase(const FactorModel &m, const Vector &x) {
  const int I = m.bias_x.size(), J = m.bias_y.size(), K = m.bias_h.size(),
            F = m.wx_factor.cols();
  std::vector<double> fx(F, 0.0);
  for (int f = 0; f < F; ++f)
    for (int i = 0; i < I; ++i) fx[f] += m.wx_factor(i, f) * x[i] / m.sigma_x[i];

  const int configs = 1 << K;
  std::vector<double> log_w(configs);
  std::vector<std::vector<double>> mu(configs, std::vector<double>(J));
  for (int c = 0; c < configs; ++c) {
    std::vector<double> h(K), fh(F, 0.0);
    for (int k = 0; k < K; ++k) h[k] = (c >> k) & 1;
    for (int f = 0; f < F; ++f)
      for (int k = 0; k < K; ++k) fh[f] += m.wh_factor(k, f) * h[k];
    double lw = 0.0;
    for (int k = 0; k < K; ++k) lw += m.bias_h[k] * h[k];
    for (int j = 0; j < J; ++j) {
      double cj = 0.0;
      for (int f = 0; f < F; ++f) cj += m.wy_factor(j, f) * fx[f] * fh[f];
      lw += 0.5 * cj * cj + m.bias_y[j] * cj / m.sigma_y[j];
      mu[c][j] = m.bias_y[j] + m.sigma_y[j] * cj;
    }
    log_w[c] = lw;
  }
  double top = log_w[0];
  for (double v : log_w) top = std::max(top, v);
  double z = 0.0;
  for (double v : log_w) z += std::exp(v - top);

  std::vector<double> out(I * F + J * F + K * F + I + J + K, 0.0);
  for (int c = 0; c < configs; ++c) {
    const double pi = std::exp(log_w[c] - top) / z;
    std::vector<double> h(K), fh(F, 0.0), fy(F, 0.0);
    for (int k = 0; k < K; ++k) h[k] = (c >> k) & 1;
    for (int f = 0; f < F; ++f) {
      for (int k = 0; k < K; ++k) fh[f] += m.wh_factor(k, f) * h[k];
      for (int j = 0; j < J; ++j)
        fy[f] += m.wy_factor(j, f) * mu[c][j] / m.sigma_y[j];
    }
    std::size_t o = 0;
    // Column-major order, matching Eigen storage.
    for (int f = 0; f < F; ++f)
      for (int i = 0; i < I; ++i)
        out[o++] += pi * (x[i] / m.sigma_x[i]) * fy[f] * fh[f];
    for (int f = 0; f < F; ++f)
      for (int j = 0; j < J; ++j)
        out[o++] += pi * (mu[c][j] / m.sigma_y[j]) * fx[f] * fh[f];
    for (int f = 0; f < F; ++f)
      for (int k = 0; k < K; ++k) out[o++] += pi * h[k] * fx[f] * fy[f];
    for (int i = 0; i < I; ++i)
      out[o++] += pi * (x[i] - m.bias_x[i]) / (m.sigma_x[i] * m.sigma_x[i]);
    for (int j = 0; j < J; ++j)
      out[o++] +=
          pi * (mu[c][j] - m.bias_y[j]) / (m.sigma_y[j] * m.sigma_y[j]);
    for (int k = 0; k < K; ++k) out[o++] += pi * h[k];
  }
  return {out};
}

std::vector<double> flatten_gradients(const GradientSet &g) {
  std::vector<double> v;
  auto push = [&](const auto &block) {
    for (Eigen::Index i = 0; i < block.size(); ++i) v.push_back(block.data()[i]);
  };
  push(g.wx_factor);
  push(g.wy_factor);
  push(g.wh_factor);
  push(g.bias_x);
  push(g.bias_y);
  push(g.bias_h);
  return v;
}

TEST(CdStatistics, LongChainMatchesExactModelExpectation) {
  Rng init(2024);
  const FactorModel m =
      oracle::random_model(ModelShape::Free(2, 2, 2, 2), init, 0.7);
  const Vector x = oracle::random_vector(2, init);
  const Vector y0 = oracle::random_vector(2, init, 2.0);
  const ExactExpectation exact = exact_negative_phase(m, x);

  const int chains = 10000;
  std::vector<double> sum(exact.values.size(), 0.0),
      sq(exact.values.size(), 0.0);
  Rng rng(99);
  for (int c = 0; c < chains; ++c) {
    const std::vector<double> g =
        flatten_gradients(cd_statistics(m, x, y0, 500, rng).negative);
    for (std::size_t i = 0; i < g.size(); ++i) {
      sum[i] += g[i];
      sq[i] += g[i] * g[i];
    }
  }
  for (std::size_t i = 0; i < sum.size(); ++i) {
    const double mean = sum[i] / chains;
    const double var = sq[i] / chains - mean * mean;
    const double band = 3.0 * std::sqrt(std::max(var, 0.0) / chains);
    EXPECT_NEAR(mean, exact.values[i], band + 1e-12) << "statistic " << i;
  }
}

TEST(CdStatistics, FixedPointOnModelSamples) {
  Rng init(31);
  const FactorModel m =
      oracle::random_model(ModelShape::Free(3, 2, 2, 2), init, 0.6);
  const Vector x = oracle::random_vector(3, init);
  const Vector y_start = Vector::Zero(2);
  std::vector<double> sum, sq;
  Rng rng(5);
  const int draws = 20000;
  for (int d = 0; d < draws; ++d) {
    // A long chain from a fixed start gives (close to) an exact model draw.
    const Vector y = cd_statistics(m, x, y_start, 100, rng).chain_y;
    const CdStatistics cd = cd_statistics(m, x, y, 1, rng);
    std::vector<double> pos = flatten_gradients(cd.positive);
    const std::vector<double> neg = flatten_gradients(cd.negative);
    if (sum.empty()) {
      sum.assign(pos.size(), 0.0);
      sq.assign(pos.size(), 0.0);
    }
    for (std::size_t i = 0; i < pos.size(); ++i) {
      const double diff = pos[i] - neg[i];
      sum[i] += diff;
      sq[i] += diff * diff;
    }
  }
  for (std::size_t i = 0; i < sum.size(); ++i) {
    const double mean = sum[i] / draws;
    const double var = sq[i] / draws - mean * mean;
    EXPECT_NEAR(mean, 0.0, 3.0 * std::sqrt(var / draws) + 1e-12)
        << "statistic " << i;
  }
}

TEST(Barrier, OneSidedQuadratic) {
  FactorModel m(ModelShape::Free(1, 1, 1, 1));
  m.wx_factor(0, 0) = -2.0;
  m.wy_factor(0, 0) = 2.0;
  m.wh_factor(0, 0) = 0.0;
  m.bias_y[0] = -5.0;
  const GradientSet g = barrier_gradient(m, 0.5);
  EXPECT_EQ(g.wx_factor(0, 0), -1.0);
  EXPECT_EQ(g.wy_factor(0, 0), 0.0);
  EXPECT_EQ(g.wh_factor(0, 0), 0.0);
  EXPECT_EQ(g.bias_y[0], 0.0);

  // Subtracting the barrier moves a negative weight up by beta * |w|.
  TrainState st(m.shape);
  const GradientSet zero(m.shape);
  apply_update(&m, &st, zero, zero, 0.5, 1.0, 0.0);
  EXPECT_EQ(m.wx_factor(0, 0), -1.0);
  EXPECT_EQ(m.wy_factor(0, 0), 2.0);
}

TEST(Barrier, InertOnNonNegativeModels) {
  Rng rng(4);
  FactorModel m = oracle::random_model(ModelShape::Free(5, 4, 3, 3), rng);
  m.wx_factor = m.wx_factor.cwiseAbs();
  m.wy_factor = m.wy_factor.cwiseAbs();
  m.wh_factor = m.wh_factor.cwiseAbs();
  const GradientSet g = barrier_gradient(m, 0.5);
  EXPECT_EQ(g.wx_factor.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(g.wy_factor.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(g.wh_factor.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Barrier, NegativeFraction) {
  FactorModel m(ModelShape::Free(2, 1, 1, 1));
  m.wx_factor << -1.0, 1.0;
  m.wy_factor << -1.0;
  m.wh_factor << 0.0;
  EXPECT_DOUBLE_EQ(negative_weight_fraction(m), 0.5);
}

TEST(ApplyUpdate, PlainStepAddsScaledDifference) {
  Rng rng(9);
  FactorModel m = oracle::random_model(ModelShape::Free(4, 3, 2, 2), rng, 0.5,
                                       true);
  const FactorModel before = m;
  GradientSet pos(m.shape), neg(m.shape);
  pos.wx_factor.setConstant(0.3);
  neg.wx_factor.setConstant(0.1);
  pos.bias_h.setConstant(-0.2);
  TrainState st(m.shape);
  apply_update(&m, &st, pos, neg, 0.0, 0.5, 0.0);
  EXPECT_LT(((m.wx_factor - before.wx_factor).array() - 0.1).abs().maxCoeff(),
            1e-15);
  EXPECT_LT(((m.bias_h - before.bias_h).array() + 0.1).abs().maxCoeff(),
            1e-15);
  EXPECT_EQ(m.wy_factor, before.wy_factor);
}

TEST(ApplyUpdate, MomentumTwoStepsGiveTwoAndAHalf) {
  FactorModel m(ModelShape::Free(2, 2, 2, 2));
  GradientSet pos(m.shape), neg(m.shape);
  pos.wy_factor.setConstant(0.4);
  pos.bias_y.setConstant(-0.8);
  TrainState st(m.shape);
  apply_update(&m, &st, pos, neg, 0.0, 1.0, 0.5);
  apply_update(&m, &st, pos, neg, 0.0, 1.0, 0.5);
  EXPECT_LT((m.wy_factor.array() - 2.5 * 0.4).abs().maxCoeff(), 1e-15);
  EXPECT_LT((m.bias_y.array() + 2.5 * 0.8).abs().maxCoeff(), 1e-15);
}

TEST(ApplyUpdate, RejectsMomentumOne) {
  FactorModel m(ModelShape::Free(2, 2, 2, 2));
  GradientSet g(m.shape);
  TrainState st(m.shape);
  EXPECT_THROW(apply_update(&m, &st, g, g, 0.0, 1.0, 1.0), ConfigError);
}

TEST(ApplyUpdate, DivergenceNamesBlock) {
  FactorModel m(ModelShape::Free(2, 2, 2, 2));
  GradientSet pos(m.shape), neg(m.shape);
  pos.wh_factor(1, 0) = 5e6;
  TrainState st(m.shape);
  st.epoch = 3;
  try {
    apply_update(&m, &st, pos, neg, 0.0, 1.0, 0.0);
    FAIL() << "expected divergence";
  } catch (const DivergenceError &e) {
    EXPECT_EQ(e.epoch(), 3);
    EXPECT_EQ(e.block(), "wh_factor");
    EXPECT_EQ(e.max_magnitude(), 5e6);
  }
  FactorModel n(ModelShape::Free(2, 2, 2, 2));
  GradientSet bad(n.shape);
  bad.bias_x[0] = std::nan("");
  EXPECT_THROW(apply_update(&n, &st, bad, neg, 0.0, 1.0, 0.0),
               DivergenceError);
}

Spectrogram constant_spectrogram(Eigen::Index bins, Eigen::Index frames,
                                 double value) {
  Spectrogram s;
  s.values = Matrix::Constant(bins, frames, value);
  s.standardized = true;
  return s;
}

TEST(Train, ConstantZeroCorpusDrivesVisibleBiasToZero) {
  const ModelShape shape = ModelShape::ForFrames(4, 3, 2, 2);
  FactorModel m(shape);
  m.bias_y.setConstant(1.0);
  m.bias_h.setConstant(0.3);
  m.bias_x.setConstant(-0.2);
  const std::vector<Spectrogram> corpus(4, constant_spectrogram(4, 250, 0.0));
  TrainConfig cfg;
  cfg.epochs = 10;
  cfg.momentum_cutoff_epoch = 5;
  cfg.learning_rate = 0.01;
  const TrainState st = train(&m, corpus, cfg);

  EXPECT_EQ(m.wx_factor.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(m.wy_factor.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(m.wh_factor.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_LT(m.bias_y.cwiseAbs().maxCoeff(), 0.1);
  // Clamped inputs and uncoupled hidden units see identical statistics in
  // both phases.
  EXPECT_EQ(m.bias_x, Vector::Constant(shape.input, -0.2));
  EXPECT_EQ(m.bias_h, Vector::Constant(3, 0.3));
  ASSERT_EQ(st.trace.size(), 10u);
  for (std::size_t e = 1; e < st.trace.size(); ++e)
    EXPECT_LE(st.trace[e].mean_recon_err, st.trace[e - 1].mean_recon_err);
  EXPECT_LT(st.trace.back().mean_recon_err,
            0.01 * st.trace.front().mean_recon_err);
}

TEST(Train, RejectsBadCorpus) {
  const ModelShape shape = ModelShape::ForFrames(4, 3, 2, 2);
  FactorModel m(shape);
  TrainConfig cfg;
  EXPECT_THROW(train(&m, {}, cfg), ConfigError);
  const std::vector<Spectrogram> short_utt(1, constant_spectrogram(4, 1, 0.0));
  EXPECT_THROW(train(&m, short_utt, cfg), ConfigError);
  Spectrogram raw = constant_spectrogram(4, 10, 0.0);
  raw.standardized = false;
  EXPECT_THROW(train(&m, std::vector<Spectrogram>{raw}, cfg), ConfigError);
  const std::vector<Spectrogram> wrong(1, constant_spectrogram(5, 10, 0.0));
  EXPECT_THROW(train(&m, wrong, cfg), ShapeError);
}

std::vector<Spectrogram> random_corpus(Rng &rng, int utterances,
                                       Eigen::Index bins,
                                       Eigen::Index frames) {
  std::vector<Spectrogram> out;
  for (int u = 0; u < utterances; ++u) {
    Spectrogram s;
    s.values = Matrix(bins, frames);
    for (Eigen::Index t = 0; t < frames; ++t)
      s.values.col(t) = oracle::random_vector(bins, rng);
    s.standardized = true;
    out.push_back(s);
  }
  return out;
}

TEST(Train, BitReproducible) {
  Rng data_rng(12);
  const auto corpus = random_corpus(data_rng, 2, 6, 40);
  const ModelShape shape = ModelShape::ForFrames(6, 4, 5, 2);
  TrainConfig cfg;
  cfg.epochs = 3;
  cfg.momentum_cutoff_epoch = 2;
  cfg.minibatch_frames = 8;
  cfg.learning_rate = 0.01;
  for (ContextMode mode : {ContextMode::kEnhanced, ContextMode::kSliding}) {
    cfg.context_mode = mode;
    Rng a_init(1), b_init(1);
    FactorModel a = FactorModel::Random(shape, a_init, 0.1);
    FactorModel b = FactorModel::Random(shape, b_init, 0.1);
    const TrainState sa = train(&a, corpus, cfg);
    const TrainState sb = train(&b, corpus, cfg);
    EXPECT_EQ(a.wx_factor, b.wx_factor);
    EXPECT_EQ(a.wy_factor, b.wy_factor);
    EXPECT_EQ(a.wh_factor, b.wh_factor);
    EXPECT_EQ(a.bias_y, b.bias_y);
    EXPECT_EQ(sa.trace.back().mean_recon_err, sb.trace.back().mean_recon_err);
  }
}

TEST(Train, LogHasHeaderAndOneRowPerEpoch) {
  std::vector<EpochRecord> trace(3);
  for (int e = 0; e < 3; ++e) trace[e].epoch = e + 1;
  std::ostringstream os;
  write_training_log(os, trace);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "epoch,mean_recon_err,mean_energy,neg_weight_fraction,wall_ms");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, 3);
}

}  // namespace
}  // namespace eftw
