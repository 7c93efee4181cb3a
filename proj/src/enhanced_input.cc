// src/enhanced_input.cc

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

#include "eftw/enhanced_input.h"

#include <algorithm>
#include <numeric>

#include "eftw/errors.h"

namespace eftw {

void EnhancedInputState::Reset(const Vector &first_frame, int n_t) {
  if (n_t < 0) throw ConfigError("n_t must be non-negative");
  x_hat = first_frame.replicate(1, n_t);
  last_frame = first_frame;
  initialized = true;
}

Matrix build_pooled(const EnhancedInputState &state) {
  if (!state.initialized)
    throw ConfigError("enhanced input state used before Reset");
  Matrix pooled(state.n_bins(), state.n_t() + 1);
  pooled.leftCols(state.n_t()) = state.x_hat;
  pooled.col(state.n_t()) = state.last_frame;
  return pooled;
}

Vector flatten(const Matrix &pooled) {
  return Eigen::Map<const Vector>(pooled.data(), pooled.size());
}

Matrix unflatten(const Vector &x, Eigen::Index n_bins) {
  if (n_bins <= 0 || x.size() % n_bins != 0)
    throw ShapeError("input length is not a multiple of n_bins");
  return Eigen::Map<const Matrix>(x.data(), n_bins, x.size() / n_bins);
}

Matrix alpha_from_reconstruction(const Matrix &pooled,
                                 const Matrix &reconstruction,
                                 const Vector &sigma_x) {
  check_dim(reconstruction.rows(), pooled.rows(), "reconstruction rows");
  check_dim(reconstruction.cols(), pooled.cols(), "reconstruction cols");
  check_dim(sigma_x.size(), pooled.size(), "input deviations");
  const Matrix sigma = unflatten(sigma_x, pooled.rows());
  return (-(pooled - reconstruction).array().square() /
          (2.0 * sigma.array().square()))
      .exp()
      .matrix();
}

Matrix compute_alpha(const FactorModel &model, const Matrix &pooled,
                     const Vector &y, const Vector &h) {
  check_dim(pooled.size(), model.shape.input, "pooled input");
  const Vector recon = input_mean(model, y, h);
  return alpha_from_reconstruction(pooled, unflatten(recon, pooled.rows()),
                                   model.sigma_x);
}

Vector column_distances(const Matrix &reconstructed, const Vector &y) {
  check_dim(y.size(), reconstructed.rows(), "current frame");
  return (reconstructed.colwise() - y).colwise().norm().transpose();
}

std::vector<Eigen::Index> smallest_indices(const Vector &lambdas, int n_t) {
  if (n_t < 0 || n_t > lambdas.size())
    throw ShapeError("n_t = " + std::to_string(n_t) +
                     " exceeds the number of candidate columns (" +
                     std::to_string(lambdas.size()) + ")");
  std::vector<Eigen::Index> order(static_cast<std::size_t>(lambdas.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) {
                     return lambdas(a) < lambdas(b);
                   });
  order.resize(static_cast<std::size_t>(n_t));
  std::sort(order.begin(), order.end());
  return order;
}

Matrix shrink_select(const Matrix &pooled, const Vector &lambdas, int n_t) {
  check_dim(lambdas.size(), pooled.cols(), "column distances");
  const std::vector<Eigen::Index> keep = smallest_indices(lambdas, n_t);
  Matrix out(pooled.rows(), n_t);
  for (std::size_t c = 0; c < keep.size(); ++c)
    out.col(static_cast<Eigen::Index>(c)) = pooled.col(keep[c]);
  return out;
}

void advance(EnhancedInputState *state, const Matrix &selected,
             const Vector &current_frame) {
  if (!state->initialized)
    throw ConfigError("enhanced input state used before Reset");
  check_dim(selected.rows(), state->n_bins(), "selected frames");
  check_dim(selected.cols(), state->n_t(), "selected frame count");
  check_dim(current_frame.size(), state->n_bins(), "current frame");
  state->x_hat = selected;
  state->last_frame = current_frame;
}

PreparedInput prepare_input(const FactorModel &model,
                            const EnhancedInputState &state, const Vector &y,
                            ContextMode mode) {
  PreparedInput in;
  in.pooled = build_pooled(state);
  const Vector x = flatten(in.pooled);
  check_dim(x.size(), model.shape.input, "pooled input");
  if (mode == ContextMode::kSliding) {
    in.x = x;
    in.alpha = Matrix::Ones(in.pooled.rows(), in.pooled.cols());
    return in;
  }
  const Vector fx = input_factors(model, x);
  const Vector fy = visible_factors(model, y);
  const Vector h = hidden_preactivation_from(model, fx, fy).unaryExpr(&sigmoid);
  const Vector recon = input_mean_from(model, fy, hidden_factors(model, h));
  in.alpha = alpha_from_reconstruction(
      in.pooled, unflatten(recon, in.pooled.rows()), model.sigma_x);
  in.x = flatten(in.alpha.cwiseProduct(in.pooled));
  return in;
}

void update_context(const FactorModel &model, EnhancedInputState *state,
                    const Matrix &pooled, const Vector &y, const Vector &h,
                    ContextMode mode) {
  const auto n_t = static_cast<int>(state->n_t());
  if (mode == ContextMode::kSliding) {
    advance(state, pooled.rightCols(n_t), y);
    return;
  }
  const Vector recon = input_mean(model, y, h);
  const Vector lambdas = column_distances(unflatten(recon, pooled.rows()), y);
  advance(state, shrink_select(pooled, lambdas, n_t), y);
}

}  // namespace eftw
