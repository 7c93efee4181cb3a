// src/training.cc

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

#include "eftw/training.h"

#include <chrono>
#include <limits>
#include <cmath>
#include <iomanip>

#include "eftw/errors.h"

namespace eftw {

void TrainConfig::Validate() const {
  if (epochs <= 0) throw ConfigError("epochs must be positive");
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
  if (cd_steps <= 0) throw ConfigError("cd_steps must be positive");
  if (!(barrier_beta >= 0.0)) throw ConfigError("barrier_beta must be >= 0");
  if (!(momentum >= 0.0 && momentum < 1.0))
    throw ConfigError("momentum must lie in [0, 1)");
  if (momentum_cutoff_epoch < 0 || momentum_cutoff_epoch > epochs)
    throw ConfigError("momentum_cutoff_epoch must lie in [0, epochs]");
  if (minibatch_frames <= 0) throw ConfigError("minibatch_frames must be positive");
}

double TrainConfig::momentum_at(int epoch) const {
  return epoch < momentum_cutoff_epoch ? momentum : 0.0;
}

GradientSet::GradientSet(const ModelShape &s)
    : wx_factor(Matrix::Zero(s.input, s.factors)),
      wy_factor(Matrix::Zero(s.visible, s.factors)),
      wh_factor(Matrix::Zero(s.hidden, s.factors)),
      bias_x(Vector::Zero(s.input)),
      bias_y(Vector::Zero(s.visible)),
      bias_h(Vector::Zero(s.hidden)) {}

void GradientSet::SetZero() {
  wx_factor.setZero();
  wy_factor.setZero();
  wh_factor.setZero();
  bias_x.setZero();
  bias_y.setZero();
  bias_h.setZero();
}

bool GradientSet::AllFinite() const {
  return wx_factor.allFinite() && wy_factor.allFinite() &&
         wh_factor.allFinite() && bias_x.allFinite() && bias_y.allFinite() &&
         bias_h.allFinite();
}

GradientSet &GradientSet::operator+=(const GradientSet &o) {
  wx_factor += o.wx_factor;
  wy_factor += o.wy_factor;
  wh_factor += o.wh_factor;
  bias_x += o.bias_x;
  bias_y += o.bias_y;
  bias_h += o.bias_h;
  return *this;
}

GradientSet &GradientSet::operator-=(const GradientSet &o) {
  wx_factor -= o.wx_factor;
  wy_factor -= o.wy_factor;
  wh_factor -= o.wh_factor;
  bias_x -= o.bias_x;
  bias_y -= o.bias_y;
  bias_h -= o.bias_h;
  return *this;
}

GradientSet &GradientSet::operator*=(double s) {
  wx_factor *= s;
  wy_factor *= s;
  wh_factor *= s;
  bias_x *= s;
  bias_y *= s;
  bias_h *= s;
  return *this;
}

namespace {

void check_gradient_shape(const FactorModel &model, const GradientSet &g) {
  check_dim(g.wx_factor.rows(), model.wx_factor.rows(), "gradient wx rows");
  check_dim(g.wx_factor.cols(), model.wx_factor.cols(), "gradient wx cols");
  check_dim(g.wy_factor.rows(), model.wy_factor.rows(), "gradient wy rows");
  check_dim(g.wh_factor.rows(), model.wh_factor.rows(), "gradient wh rows");
  check_dim(g.bias_x.size(), model.bias_x.size(), "gradient bias_x");
  check_dim(g.bias_y.size(), model.bias_y.size(), "gradient bias_y");
  check_dim(g.bias_h.size(), model.bias_h.size(), "gradient bias_h");
}

// Gradients from precomputed factor responses.
void accumulate_from_factors(const FactorModel &model, const Vector &x,
                             const Vector &y, const Vector &h,
                             const Vector &fx, const Vector &fy,
                             const Vector &fh, double weight,
                             GradientSet *out) {
  const Vector xs = x.cwiseQuotient(model.sigma_x);
  const Vector ys = y.cwiseQuotient(model.sigma_y);
  out->wh_factor.noalias() += (weight * h) * fx.cwiseProduct(fy).transpose();
  out->wy_factor.noalias() += (weight * ys) * fx.cwiseProduct(fh).transpose();
  out->wx_factor.noalias() += (weight * xs) * fy.cwiseProduct(fh).transpose();
  out->bias_h += weight * h;
  out->bias_y += weight * ((y - model.bias_y).array() /
                           model.sigma_y.array().square())
                              .matrix();
  out->bias_x += weight * ((x - model.bias_x).array() /
                           model.sigma_x.array().square())
                              .matrix();
}

}  // namespace

void accumulate_energy_gradients(const FactorModel &model, const Vector &x,
                                 const Vector &y, const Vector &h,
                                 double weight, GradientSet *out) {
  check_gradient_shape(model, *out);
  accumulate_from_factors(model, x, y, h, input_factors(model, x),
                          visible_factors(model, y), hidden_factors(model, h),
                          weight, out);
}

GradientSet energy_gradients(const FactorModel &model,
                             const LayerState &state) {
  GradientSet g(model.shape);
  accumulate_energy_gradients(model, state.x, state.y, state.h, 1.0, &g);
  return g;
}

namespace {

// Everything one CD-n pass produces, as factor responses rather than full
// outer products.
struct Chain {
  Vector fx;
  Vector fy_data, h_data, fh_data;
  Vector chain_y, fy_chain, h_chain, fh_chain;
  Vector reconstruction;
};

Chain run_chain(const FactorModel &model, const Vector &x, const Vector &y,
                int n_step, Rng &rng) {
  if (n_step < 1) throw ConfigError("cd steps must be >= 1");
  Chain c;
  c.fx = input_factors(model, x);
  c.fy_data = visible_factors(model, y);
  c.h_data =
      hidden_preactivation_from(model, c.fx, c.fy_data).unaryExpr(&sigmoid);
  c.fh_data = hidden_factors(model, c.h_data);

  Vector h_prob = c.h_data;
  c.chain_y = y;
  c.fy_chain = c.fy_data;
  for (int n = 0; n < n_step; ++n) {
    const Vector h_sample = sample_bernoulli(h_prob, rng);
    c.reconstruction =
        visible_mean_from(model, c.fx, hidden_factors(model, h_sample));
    c.chain_y = sample_gaussian(c.reconstruction, model.sigma_y, rng);
    c.fy_chain = visible_factors(model, c.chain_y);
    h_prob = hidden_preactivation_from(model, c.fx, c.fy_chain)
                 .unaryExpr(&sigmoid);
  }
  c.h_chain = std::move(h_prob);
  c.fh_chain = hidden_factors(model, c.h_chain);
  return c;
}

// Energy at (x, y, h_data) from the responses already computed.
double energy_from_chain(const FactorModel &model, const Vector &x,
                         const Vector &y, const Chain &c) {
  const double ex = ((x - model.bias_x).array() / model.sigma_x.array())
                        .square()
                        .sum();
  const double ey = ((y - model.bias_y).array() / model.sigma_y.array())
                        .square()
                        .sum();
  return 0.5 * (ex + ey) - model.bias_h.dot(c.h_data) -
         (c.fx.array() * c.fy_data.array() * c.fh_data.array()).sum();
}

// Per-frame factor responses of one mini-batch; the interaction sums are
// formed with one matrix product per block when the batch is flushed.
class BatchAccumulator {
 public:
  BatchAccumulator(const ModelShape &s, int capacity)
      : xs_(s.input, capacity), ys_data_(s.visible, capacity),
        ys_chain_(s.visible, capacity), h_data_(s.hidden, capacity),
        h_chain_(s.hidden, capacity), cx_data_(s.factors, capacity),
        cx_chain_(s.factors, capacity), cy_data_(s.factors, capacity),
        cy_chain_(s.factors, capacity), ch_data_(s.factors, capacity),
        ch_chain_(s.factors, capacity), bias_x_(Vector::Zero(s.input)),
        bias_y_data_(Vector::Zero(s.visible)),
        bias_y_chain_(Vector::Zero(s.visible)) {}

  int size() const { return n_; }

  void Add(const FactorModel &model, const Vector &x, const Vector &y,
           const Chain &c) {
    xs_.col(n_) = x.cwiseQuotient(model.sigma_x);
    ys_data_.col(n_) = y.cwiseQuotient(model.sigma_y);
    ys_chain_.col(n_) = c.chain_y.cwiseQuotient(model.sigma_y);
    h_data_.col(n_) = c.h_data;
    h_chain_.col(n_) = c.h_chain;
    cx_data_.col(n_) = c.fy_data.cwiseProduct(c.fh_data);
    cx_chain_.col(n_) = c.fy_chain.cwiseProduct(c.fh_chain);
    cy_data_.col(n_) = c.fx.cwiseProduct(c.fh_data);
    cy_chain_.col(n_) = c.fx.cwiseProduct(c.fh_chain);
    ch_data_.col(n_) = c.fx.cwiseProduct(c.fy_data);
    ch_chain_.col(n_) = c.fx.cwiseProduct(c.fy_chain);
    const Vector inv_vx = model.sigma_x.array().square().inverse();
    const Vector inv_vy = model.sigma_y.array().square().inverse();
    bias_x_ += (x - model.bias_x).cwiseProduct(inv_vx);
    bias_y_data_ += (y - model.bias_y).cwiseProduct(inv_vy);
    bias_y_chain_ += (c.chain_y - model.bias_y).cwiseProduct(inv_vy);
    ++n_;
  }

  // Batch means of both phases; resets the accumulator.
  void Flush(GradientSet *positive, GradientSet *negative) {
    const double w = 1.0 / n_;
    const auto cols = [this](const Matrix &m) { return m.leftCols(n_); };
    positive->wx_factor.noalias() =
        w * (cols(xs_) * cols(cx_data_).transpose());
    negative->wx_factor.noalias() =
        w * (cols(xs_) * cols(cx_chain_).transpose());
    positive->wy_factor.noalias() =
        w * (cols(ys_data_) * cols(cy_data_).transpose());
    negative->wy_factor.noalias() =
        w * (cols(ys_chain_) * cols(cy_chain_).transpose());
    positive->wh_factor.noalias() =
        w * (cols(h_data_) * cols(ch_data_).transpose());
    negative->wh_factor.noalias() =
        w * (cols(h_chain_) * cols(ch_chain_).transpose());
    positive->bias_x = w * bias_x_;
    negative->bias_x = positive->bias_x;
    positive->bias_y = w * bias_y_data_;
    negative->bias_y = w * bias_y_chain_;
    positive->bias_h = w * cols(h_data_).rowwise().sum();
    negative->bias_h = w * cols(h_chain_).rowwise().sum();
    bias_x_.setZero();
    bias_y_data_.setZero();
    bias_y_chain_.setZero();
    n_ = 0;
  }

 private:
  Matrix xs_, ys_data_, ys_chain_, h_data_, h_chain_;
  Matrix cx_data_, cx_chain_, cy_data_, cy_chain_, ch_data_, ch_chain_;
  Vector bias_x_, bias_y_data_, bias_y_chain_;
  int n_ = 0;
};

}  // namespace

CdStatistics cd_statistics(const FactorModel &model, const Vector &x,
                           const Vector &y, int n_step, Rng &rng) {
  Chain c = run_chain(model, x, y, n_step, rng);
  CdStatistics st;
  st.positive = GradientSet(model.shape);
  st.negative = GradientSet(model.shape);
  accumulate_from_factors(model, x, y, c.h_data, c.fx, c.fy_data, c.fh_data,
                          1.0, &st.positive);
  accumulate_from_factors(model, x, c.chain_y, c.h_chain, c.fx, c.fy_chain,
                          c.fh_chain, 1.0, &st.negative);
  st.reconstruction = std::move(c.reconstruction);
  st.hidden_data = std::move(c.h_data);
  st.chain_y = std::move(c.chain_y);
  st.chain_hidden = std::move(c.h_chain);
  return st;
}

GradientSet barrier_gradient(const FactorModel &model, double beta) {
  if (!(beta >= 0.0)) throw ConfigError("barrier beta must be >= 0");
  GradientSet g(model.shape);
  g.wx_factor = beta * model.wx_factor.cwiseMin(0.0);
  g.wy_factor = beta * model.wy_factor.cwiseMin(0.0);
  g.wh_factor = beta * model.wh_factor.cwiseMin(0.0);
  return g;
}

double negative_weight_fraction(const FactorModel &model) {
  const double negatives =
      static_cast<double>((model.wx_factor.array() < 0.0).count() +
                          (model.wy_factor.array() < 0.0).count() +
                          (model.wh_factor.array() < 0.0).count());
  const double total = static_cast<double>(
      model.wx_factor.size() + model.wy_factor.size() + model.wh_factor.size());
  return negatives / total;
}

namespace {

template <typename Derived>
void guard_block(const Eigen::DenseBase<Derived> &block, const char *name,
                 int epoch) {
  if (!block.allFinite())
    throw DivergenceError(epoch, name, std::numeric_limits<double>::infinity());
  const double max_abs = block.size() ? block.derived().cwiseAbs().maxCoeff() : 0.0;
  if (max_abs > kDivergenceLimit) throw DivergenceError(epoch, name, max_abs);
}

}  // namespace

void apply_update(FactorModel *model, TrainState *state,
                  const GradientSet &positive, const GradientSet &negative,
                  double beta, double learning_rate, double momentum) {
  check_gradient_shape(*model, positive);
  check_gradient_shape(*model, negative);
  if (!(momentum >= 0.0 && momentum < 1.0))
    throw ConfigError("momentum must lie in [0, 1)");
  if (state->velocity.wx_factor.size() == 0)
    state->velocity = GradientSet(model->shape);
  check_gradient_shape(*model, state->velocity);

  const GradientSet barrier = barrier_gradient(*model, beta);
  GradientSet &v = state->velocity;
  v.wx_factor = momentum * v.wx_factor +
                learning_rate * (positive.wx_factor - negative.wx_factor -
                                 barrier.wx_factor);
  v.wy_factor = momentum * v.wy_factor +
                learning_rate * (positive.wy_factor - negative.wy_factor -
                                 barrier.wy_factor);
  v.wh_factor = momentum * v.wh_factor +
                learning_rate * (positive.wh_factor - negative.wh_factor -
                                 barrier.wh_factor);
  v.bias_x = momentum * v.bias_x +
             learning_rate * (positive.bias_x - negative.bias_x);
  v.bias_y = momentum * v.bias_y +
             learning_rate * (positive.bias_y - negative.bias_y);
  v.bias_h = momentum * v.bias_h +
             learning_rate * (positive.bias_h - negative.bias_h);

  model->wx_factor += v.wx_factor;
  model->wy_factor += v.wy_factor;
  model->wh_factor += v.wh_factor;
  model->bias_x += v.bias_x;
  model->bias_y += v.bias_y;
  model->bias_h += v.bias_h;

  const int epoch = state->epoch;
  guard_block(model->wx_factor, "wx_factor", epoch);
  guard_block(model->wy_factor, "wy_factor", epoch);
  guard_block(model->wh_factor, "wh_factor", epoch);
  guard_block(model->bias_x, "bias_x", epoch);
  guard_block(model->bias_y, "bias_y", epoch);
  guard_block(model->bias_h, "bias_h", epoch);
}

TrainState train(FactorModel *model, std::span<const Spectrogram> corpus,
                 const TrainConfig &config, const EpochCallback &on_epoch) {
  config.Validate();
  model->Validate();
  if (corpus.empty()) throw ConfigError("training corpus is empty");
  const ModelShape &shape = model->shape;
  if (!shape.frame_consistent())
    throw ShapeError("model shape is not frame-consistent");
  for (const Spectrogram &s : corpus) {
    if (!s.standardized)
      throw ConfigError("training spectrograms must be standardized");
    check_dim(s.n_bins(), shape.n_bins, "spectrogram bins vs model");
    if (s.frames() < 2)
      throw ConfigError("every training utterance needs at least 2 frames");
  }

  TrainState state(shape);
  Rng rng(config.seed);
  GradientSet positive(shape), negative(shape);
  BatchAccumulator batch(shape, config.minibatch_frames);
  const auto n_t = static_cast<int>(shape.context);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    state.epoch = epoch;
    const auto started = std::chrono::steady_clock::now();
    const double momentum = config.momentum_at(epoch);
    double recon_err = 0.0, energy_sum = 0.0;
    long frames = 0;

    auto flush = [&]() {
      if (batch.size() == 0) return;
      batch.Flush(&positive, &negative);
      apply_update(model, &state, positive, negative, config.barrier_beta,
                   config.learning_rate, momentum);
    };

    for (const Spectrogram &utt : corpus) {
      EnhancedInputState context;
      context.Reset(utt.values.col(0), n_t);
      for (Eigen::Index t = 1; t < utt.frames(); ++t) {
        const Vector y = utt.values.col(t);
        const PreparedInput in =
            prepare_input(*model, context, y, config.context_mode);
        const Chain c = run_chain(*model, in.x, y, config.cd_steps, rng);
        batch.Add(*model, in.x, y, c);

        recon_err += (y - c.reconstruction).squaredNorm() /
                     static_cast<double>(y.size());
        energy_sum += energy_from_chain(*model, in.x, y, c);
        ++frames;

        update_context(*model, &context, in.pooled, y, c.h_data,
                       config.context_mode);
        if (batch.size() == config.minibatch_frames) flush();
      }
    }
    flush();

    EpochRecord rec;
    rec.epoch = epoch + 1;
    rec.mean_recon_err = recon_err / static_cast<double>(frames);
    rec.mean_energy = energy_sum / static_cast<double>(frames);
    rec.neg_weight_fraction = negative_weight_fraction(*model);
    rec.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - started)
                      .count();
    state.trace.push_back(rec);
    if (on_epoch) on_epoch(rec);
  }
  state.epoch = config.epochs;
  return state;
}

void write_training_log(std::ostream &os,
                        std::span<const EpochRecord> trace) {
  os << "epoch,mean_recon_err,mean_energy,neg_weight_fraction,wall_ms\n";
  os << std::setprecision(10);
  for (const EpochRecord &r : trace)
    os << r.epoch << ',' << r.mean_recon_err << ',' << r.mean_energy << ','
       << r.neg_weight_fraction << ',' << r.wall_ms << '\n';
}

}  // namespace eftw
