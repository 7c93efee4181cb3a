// src/core_model.cc

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

#include "eftw/core_model.h"

#include <cmath>

#include "eftw/errors.h"

namespace eftw {

ModelShape ModelShape::ForFrames(std::uint32_t n_bins, std::uint32_t hidden,
                                 std::uint32_t factors,
                                 std::uint32_t context) {
  ModelShape s;
  s.n_bins = n_bins;
  s.context = context;
  s.input = n_bins * (context + 1);
  s.visible = n_bins;
  s.hidden = hidden;
  s.factors = factors;
  return s;
}

ModelShape ModelShape::Free(std::uint32_t input, std::uint32_t visible,
                            std::uint32_t hidden, std::uint32_t factors) {
  ModelShape s;
  s.input = input;
  s.visible = visible;
  s.hidden = hidden;
  s.factors = factors;
  s.n_bins = visible;
  s.context = (visible > 0 && input % visible == 0 && input >= visible)
                  ? input / visible - 1
                  : 0;
  return s;
}

bool ModelShape::frame_consistent() const {
  return visible == n_bins && input == n_bins * (context + 1);
}

void ModelShape::Validate() const {
  if (input == 0 || visible == 0 || hidden == 0 || factors == 0 ||
      n_bins == 0)
    throw ShapeError("model shape has a zero-sized layer");
}

FactorModel::FactorModel(const ModelShape &s)
    : shape(s),
      wx_factor(Matrix::Zero(s.input, s.factors)),
      wy_factor(Matrix::Zero(s.visible, s.factors)),
      wh_factor(Matrix::Zero(s.hidden, s.factors)),
      bias_x(Vector::Zero(s.input)),
      bias_y(Vector::Zero(s.visible)),
      bias_h(Vector::Zero(s.hidden)),
      sigma_x(Vector::Ones(s.input)),
      sigma_y(Vector::Ones(s.visible)) {
  s.Validate();
}

FactorModel FactorModel::Random(const ModelShape &shape, Rng &rng,
                                double init_std) {
  FactorModel m(shape);
  std::normal_distribution<double> normal(0.0, init_std);
  // Fill in a fixed order so the stream consumption is reproducible.
  for (Matrix *w : {&m.wx_factor, &m.wy_factor, &m.wh_factor})
    for (Eigen::Index r = 0; r < w->rows(); ++r)
      for (Eigen::Index c = 0; c < w->cols(); ++c) (*w)(r, c) = normal(rng);
  return m;
}

void FactorModel::Validate() const {
  shape.Validate();
  const auto F = static_cast<Eigen::Index>(shape.factors);
  check_dim(wx_factor.rows(), shape.input, "wx_factor rows");
  check_dim(wx_factor.cols(), F, "wx_factor cols");
  check_dim(wy_factor.rows(), shape.visible, "wy_factor rows");
  check_dim(wy_factor.cols(), F, "wy_factor cols");
  check_dim(wh_factor.rows(), shape.hidden, "wh_factor rows");
  check_dim(wh_factor.cols(), F, "wh_factor cols");
  check_dim(bias_x.size(), shape.input, "bias_x");
  check_dim(bias_y.size(), shape.visible, "bias_y");
  check_dim(bias_h.size(), shape.hidden, "bias_h");
  check_dim(sigma_x.size(), shape.input, "sigma_x");
  check_dim(sigma_y.size(), shape.visible, "sigma_y");
  if (!((sigma_x.array() > 0.0).all() && (sigma_y.array() > 0.0).all()))
    throw ShapeError("deviations must be strictly positive");
}

bool FactorModel::AllFinite() const {
  return wx_factor.allFinite() && wy_factor.allFinite() &&
         wh_factor.allFinite() && bias_x.allFinite() && bias_y.allFinite() &&
         bias_h.allFinite() && sigma_x.allFinite() && sigma_y.allFinite();
}

Vector input_factors(const FactorModel &model, const Vector &x) {
  check_dim(x.size(), model.shape.input, "input units");
  return model.wx_factor.transpose() *
         (x.array() / model.sigma_x.array()).matrix();
}

Vector visible_factors(const FactorModel &model, const Vector &y) {
  check_dim(y.size(), model.shape.visible, "visible units");
  return model.wy_factor.transpose() *
         (y.array() / model.sigma_y.array()).matrix();
}

Vector hidden_factors(const FactorModel &model, const Vector &h) {
  check_dim(h.size(), model.shape.hidden, "hidden units");
  return model.wh_factor.transpose() * h;
}

double energy(const FactorModel &model, const LayerState &state) {
  const Vector fx = input_factors(model, state.x);
  const Vector fy = visible_factors(model, state.y);
  const Vector fh = hidden_factors(model, state.h);
  const double quad_x =
      ((state.x - model.bias_x).array() / model.sigma_x.array())
          .square()
          .sum() /
      2.0;
  const double quad_y =
      ((state.y - model.bias_y).array() / model.sigma_y.array())
          .square()
          .sum() /
      2.0;
  const double hidden_bias = model.bias_h.dot(state.h);
  const double interaction = (fx.array() * fy.array() * fh.array()).sum();
  return quad_x + quad_y - hidden_bias - interaction;
}

Vector hidden_preactivation_from(const FactorModel &model, const Vector &fx,
                                 const Vector &fy) {
  return model.wh_factor * fx.cwiseProduct(fy) + model.bias_h;
}

Vector visible_mean_from(const FactorModel &model, const Vector &fx,
                         const Vector &fh) {
  return model.bias_y +
         (model.sigma_y.array() *
          (model.wy_factor * fx.cwiseProduct(fh)).array())
             .matrix();
}

Vector input_mean_from(const FactorModel &model, const Vector &fy,
                       const Vector &fh) {
  return model.bias_x +
         (model.sigma_x.array() *
          (model.wx_factor * fy.cwiseProduct(fh)).array())
             .matrix();
}

Vector hidden_preactivation(const FactorModel &model, const Vector &x,
                            const Vector &y) {
  return hidden_preactivation_from(model, input_factors(model, x),
                                   visible_factors(model, y));
}

Vector visible_preactivation(const FactorModel &model, const Vector &x,
                             const Vector &h) {
  const Vector fx = input_factors(model, x);
  const Vector fh = hidden_factors(model, h);
  return model.wy_factor * fx.cwiseProduct(fh) + model.bias_y;
}

Vector input_preactivation(const FactorModel &model, const Vector &y,
                           const Vector &h) {
  const Vector fy = visible_factors(model, y);
  const Vector fh = hidden_factors(model, h);
  return model.wx_factor * fy.cwiseProduct(fh) + model.bias_x;
}

double sigmoid(double a) {
  if (a >= 0.0) return 1.0 / (1.0 + std::exp(-a));
  const double e = std::exp(a);
  return e / (1.0 + e);
}

Vector hidden_conditional(const FactorModel &model, const Vector &x,
                          const Vector &y) {
  return hidden_preactivation(model, x, y).unaryExpr(&sigmoid);
}

Vector sample_bernoulli(const Vector &probabilities, Rng &rng) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  Vector out(probabilities.size());
  for (Eigen::Index k = 0; k < probabilities.size(); ++k)
    out(k) = uniform(rng) < probabilities(k) ? 1.0 : 0.0;
  return out;
}

Vector sample_hidden(const FactorModel &model, const Vector &x,
                     const Vector &y, Rng &rng) {
  return sample_bernoulli(hidden_conditional(model, x, y), rng);
}

Vector sample_gaussian(const Vector &mean, const Vector &sigma, Rng &rng) {
  check_dim(sigma.size(), mean.size(), "gaussian deviations");
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector out(mean.size());
  for (Eigen::Index j = 0; j < mean.size(); ++j)
    out(j) = mean(j) + sigma(j) * normal(rng);
  return out;
}

Vector visible_mean(const FactorModel &model, const Vector &x,
                    const Vector &h) {
  return visible_mean_from(model, input_factors(model, x),
                           hidden_factors(model, h));
}

Vector sample_visible(const FactorModel &model, const Vector &x,
                      const Vector &h, Rng &rng) {
  return sample_gaussian(visible_mean(model, x, h), model.sigma_y, rng);
}

Vector input_mean(const FactorModel &model, const Vector &y, const Vector &h) {
  return input_mean_from(model, visible_factors(model, y),
                         hidden_factors(model, h));
}

Vector sample_input(const FactorModel &model, const Vector &y,
                    const Vector &h, Rng &rng) {
  return sample_gaussian(input_mean(model, y, h), model.sigma_x, rng);
}

}  // namespace eftw
