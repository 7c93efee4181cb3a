// include/eftw/core_model.h

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

#ifndef EFTW_CORE_MODEL_H_
#define EFTW_CORE_MODEL_H_

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace eftw {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Random-state handle. Every sampler takes one explicitly so that
/// concurrent callers never share generator state.
using Rng = std::mt19937_64;

/// Layer sizes of a factored three-way RBM.
///
/// The input layer holds the column-stacked conditioning context: `context`
/// retained frames plus the most recent frame, each `n_bins` long, so
/// input == n_bins * (context + 1) and visible == n_bins.
struct ModelShape {
  std::uint32_t input = 0;
  std::uint32_t visible = 0;
  std::uint32_t hidden = 0;
  std::uint32_t factors = 0;
  std::uint32_t context = 0;
  std::uint32_t n_bins = 0;

  /// Shape for spectrogram frames of `n_bins` bins with `context` retained
  /// frames.
  static ModelShape ForFrames(std::uint32_t n_bins, std::uint32_t hidden,
                              std::uint32_t factors, std::uint32_t context);

  /// Shape with free layer sizes (used for small test models); sets
  /// n_bins = visible and context so that input = n_bins * (context + 1)
  /// when that holds, otherwise context = 0 and the frame relation is not
  /// enforced.
  static ModelShape Free(std::uint32_t input, std::uint32_t visible,
                         std::uint32_t hidden, std::uint32_t factors);

  /// True when input == n_bins * (context + 1) and visible == n_bins.
  bool frame_consistent() const;

  /// Throws ShapeError on zero sizes.
  void Validate() const;

  bool operator==(const ModelShape &) const = default;
};

/// Learnable parameters of the factored model. Factor matrices store one
/// row per unit and one column per factor.
struct FactorModel {
  ModelShape shape;
  Matrix wx_factor;  // input x factors
  Matrix wy_factor;  // visible x factors
  Matrix wh_factor;  // hidden x factors
  Vector bias_x;
  Vector bias_y;
  Vector bias_h;
  Vector sigma_x;
  Vector sigma_y;

  FactorModel() = default;

  /// All weights and biases zero, unit deviations.
  explicit FactorModel(const ModelShape &shape);

  /// Factor matrices drawn i.i.d. from N(0, init_std^2); biases zero and
  /// deviations one.
  static FactorModel Random(const ModelShape &shape, Rng &rng,
                            double init_std = 0.01);

  /// Throws ShapeError if any block disagrees with `shape` or a deviation is
  /// not strictly positive.
  void Validate() const;

  /// True if every parameter is finite.
  bool AllFinite() const;
};

enum class HiddenMode { kSampled, kMeanField };

/// One joint configuration of the three layers. `h` holds binary samples in
/// kSampled mode and probabilities in kMeanField mode.
struct LayerState {
  Vector x;
  Vector y;
  Vector h;
  HiddenMode mode = HiddenMode::kMeanField;
};

// Factor responses: the three linear filters applied to each layer. The
// Gaussian layers are scaled by their deviations first.
Vector input_factors(const FactorModel &model, const Vector &x);
Vector visible_factors(const FactorModel &model, const Vector &y);
Vector hidden_factors(const FactorModel &model, const Vector &h);

/// E(y, h; x) of the factored model with a symmetric Gaussian input branch.
double energy(const FactorModel &model, const LayerState &state);

/// Overall input to each hidden unit:
///   dE_k = sum_f wh_kf * fx_f * fy_f + bias_h_k.
Vector hidden_preactivation(const FactorModel &model, const Vector &x,
                            const Vector &y);
/// dE_j = sum_f wy_jf * fx_f * fh_f + bias_y_j.
Vector visible_preactivation(const FactorModel &model, const Vector &x,
                             const Vector &h);
/// dE_i = sum_f wx_if * fy_f * fh_f + bias_x_i.
Vector input_preactivation(const FactorModel &model, const Vector &y,
                           const Vector &h);

// Same quantities from precomputed factor responses; these are the hot-path
// versions used by training and inference.
Vector hidden_preactivation_from(const FactorModel &model, const Vector &fx,
                                 const Vector &fy);
Vector visible_mean_from(const FactorModel &model, const Vector &fx,
                         const Vector &fh);
Vector input_mean_from(const FactorModel &model, const Vector &fy,
                       const Vector &fh);

double sigmoid(double a);

/// p(h_k = 1 | x, y) for every hidden unit.
Vector hidden_conditional(const FactorModel &model, const Vector &x,
                          const Vector &y);

/// Independent Bernoulli draws from `probabilities`.
Vector sample_bernoulli(const Vector &probabilities, Rng &rng);

Vector sample_hidden(const FactorModel &model, const Vector &x,
                     const Vector &y, Rng &rng);

/// Mean of p(y | x, h). Equals visible_preactivation when sigma_y == 1; for
/// other deviations the coupling term is scaled by sigma_j so that the mean
/// is the minimiser of the energy in y.
Vector visible_mean(const FactorModel &model, const Vector &x,
                    const Vector &h);
Vector sample_visible(const FactorModel &model, const Vector &x,
                      const Vector &h, Rng &rng);

/// Mean of p(x | y, h), the input-branch counterpart of visible_mean.
Vector input_mean(const FactorModel &model, const Vector &y, const Vector &h);
Vector sample_input(const FactorModel &model, const Vector &y,
                    const Vector &h, Rng &rng);

/// Adds N(0, sigma^2) noise to `mean`, elementwise.
Vector sample_gaussian(const Vector &mean, const Vector &sigma, Rng &rng);

}  // namespace eftw

#endif  // EFTW_CORE_MODEL_H_
