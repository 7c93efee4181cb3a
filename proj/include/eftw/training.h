// include/eftw/training.h

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

#ifndef EFTW_TRAINING_H_
#define EFTW_TRAINING_H_

#include <cstdint>
#include <functional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "eftw/core_model.h"
#include "eftw/enhanced_input.h"
#include "eftw/front_end.h"

namespace eftw {

struct TrainConfig {
  int epochs = 40;
  double learning_rate = 0.001;
  int cd_steps = 1;
  double barrier_beta = 0.5;
  double momentum = 0.1;
  int momentum_cutoff_epoch = 20;  // momentum is 0 from this epoch on
  int minibatch_frames = 32;
  std::uint64_t seed = 1;
  ContextMode context_mode = ContextMode::kEnhanced;

  /// Throws ConfigError when a field is out of range.
  void Validate() const;
  /// Momentum in effect during (0-based) `epoch`.
  double momentum_at(int epoch) const;
};

/// One accumulator per trainable block, in FactorModel field order. Holds
/// -dE/dtheta (or sums of it).
struct GradientSet {
  Matrix wx_factor;
  Matrix wy_factor;
  Matrix wh_factor;
  Vector bias_x;
  Vector bias_y;
  Vector bias_h;

  GradientSet() = default;
  explicit GradientSet(const ModelShape &shape);  // zeros

  void SetZero();
  bool AllFinite() const;
  GradientSet &operator+=(const GradientSet &other);
  GradientSet &operator-=(const GradientSet &other);
  GradientSet &operator*=(double s);
};

struct EpochRecord {
  int epoch = 0;
  double mean_recon_err = 0.0;
  double mean_energy = 0.0;
  double neg_weight_fraction = 0.0;
  double wall_ms = 0.0;
};

struct TrainState {
  GradientSet velocity;
  int epoch = 0;
  std::vector<EpochRecord> trace;

  TrainState() = default;
  explicit TrainState(const ModelShape &shape) : velocity(shape) {}
};

/// -dE/dtheta at `state` for every trainable block:
///   wh_kf: h_k fx_f fy_f,   wy_jf: (y_j / s_j) fx_f fh_f,
///   wx_if: (x_i / s_i) fy_f fh_f,
///   bias_h: h_k,  bias_y: (y_j - by_j) / s_j^2,  bias_x: (x_i - bx_i) / s_i^2.
GradientSet energy_gradients(const FactorModel &model, const LayerState &state);

/// Adds `weight` times energy_gradients(model, {x, y, h}) into `out`.
void accumulate_energy_gradients(const FactorModel &model, const Vector &x,
                                 const Vector &y, const Vector &h,
                                 double weight, GradientSet *out);

struct CdStatistics {
  GradientSet positive;
  GradientSet negative;
  Vector reconstruction;  // visible mean of the final chain state
  Vector hidden_data;     // p(h | x, y) at the data
  Vector chain_y;         // final visible sample
  Vector chain_hidden;    // p(h | x, chain_y)
};

/// CD-n statistics with x clamped. The chain alternates binary hidden
/// samples and Gaussian visible samples; the gradient statistics use hidden
/// probabilities.
CdStatistics cd_statistics(const FactorModel &model, const Vector &x,
                           const Vector &y, int n_step, Rng &rng);

/// Derivative of the one-sided quadratic barrier (beta / 2) sum min(w, 0)^2
/// on the three factor matrices: beta * min(w, 0). Biases are zero. The
/// update subtracts this term, which pushes negative weights up.
GradientSet barrier_gradient(const FactorModel &model, double beta);

/// Fraction of entries below zero over the three factor matrices.
double negative_weight_fraction(const FactorModel &model);

/// velocity <- momentum * velocity + lr * (positive - negative - barrier);
/// model += velocity. Throws DivergenceError (naming the block) when a
/// parameter becomes non-finite or exceeds kDivergenceLimit in magnitude.
void apply_update(FactorModel *model, TrainState *state,
                  const GradientSet &positive, const GradientSet &negative,
                  double beta, double learning_rate, double momentum);

inline constexpr double kDivergenceLimit = 1e6;

/// Called after every epoch; useful for logging.
using EpochCallback = std::function<void(const EpochRecord &)>;

/// Contrastive-divergence training over standardized spectrograms. Each
/// frame from the second one on is a training case: it is the visible
/// vector, and the input is the context built by the enhanced-input
/// recursion (reset at every utterance). Statistics are summed over
/// `minibatch_frames` consecutive frames before each update.
TrainState train(FactorModel *model, std::span<const Spectrogram> corpus,
                 const TrainConfig &config,
                 const EpochCallback &on_epoch = nullptr);

/// CSV log with columns epoch,mean_recon_err,mean_energy,
/// neg_weight_fraction,wall_ms.
void write_training_log(std::ostream &os, std::span<const EpochRecord> trace);

}  // namespace eftw

#endif  // EFTW_TRAINING_H_
