// include/eftw/enhanced_input.h

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

// Enhanced input units: the conditioning context fed to the input layer.
//
// The pooled input for frame t is [X_hat | y_{t-1}], n_bins x (n_t + 1),
// flattened column by column into the model's input vector. After a frame is
// processed the pooled columns are reweighted by alpha (the Gaussian kernel
// of the input-branch reconstruction residual), reconstructed again, and the
// n_t columns whose reconstructions lie closest to the current frame survive
// as the next X_hat.

#ifndef EFTW_ENHANCED_INPUT_H_
#define EFTW_ENHANCED_INPUT_H_

#include <vector>

#include "eftw/core_model.h"

namespace eftw {

/// How the conditioning context evolves from frame to frame.
enum class ContextMode {
  kEnhanced,  // alpha weighting plus n_t-smallest-distance retention
  kSliding,   // plain window of the previous n_t + 1 frames, no weighting
};

struct EnhancedInputState {
  Matrix x_hat;       // n_bins x n_t retained frames
  Vector last_frame;  // most recent conditioning frame
  bool initialized = false;

  /// Seeds the state at an utterance start: n_t copies of `first_frame`
  /// and `first_frame` as the last frame.
  void Reset(const Vector &first_frame, int n_t);

  Eigen::Index n_bins() const { return last_frame.size(); }
  Eigen::Index n_t() const { return x_hat.cols(); }
};

/// [x_hat | last_frame], n_bins x (n_t + 1).
Matrix build_pooled(const EnhancedInputState &state);

/// Column-major flattening of a pooled matrix into an input vector.
Vector flatten(const Matrix &pooled);
/// Inverse of flatten.
Matrix unflatten(const Vector &x, Eigen::Index n_bins);

/// alpha = exp(-(x - dE_i)^2 / (2 sigma_i^2)) elementwise, where dE_i is the
/// input reconstruction for (y, h). Same shape as `pooled`; entries in
/// (0, 1], exactly 1 where the reconstruction is exact.
Matrix compute_alpha(const FactorModel &model, const Matrix &pooled,
                     const Vector &y, const Vector &h);
/// Same, from an already computed input reconstruction.
Matrix alpha_from_reconstruction(const Matrix &pooled,
                                 const Matrix &reconstruction,
                                 const Vector &sigma_x);

/// Euclidean distance of every column of `reconstructed` to `y`.
Vector column_distances(const Matrix &reconstructed, const Vector &y);

/// Indices of the n_t smallest distances, in ascending index order. Ties at
/// the cut are broken toward the lower index.
std::vector<Eigen::Index> smallest_indices(const Vector &lambdas, int n_t);

/// Columns of `pooled` at smallest_indices(lambdas, n_t), original order.
Matrix shrink_select(const Matrix &pooled, const Vector &lambdas, int n_t);

/// x_hat <- selected, last_frame <- current_frame.
void advance(EnhancedInputState *state, const Matrix &selected,
             const Vector &current_frame);

/// Input vector for one frame: the pooled context, alpha-weighted in
/// enhanced mode. `pooled` receives the unweighted pooled matrix.
struct PreparedInput {
  Matrix pooled;
  Vector x;       // what the model is conditioned on
  Matrix alpha;   // all ones in sliding mode
};
PreparedInput prepare_input(const FactorModel &model,
                            const EnhancedInputState &state, const Vector &y,
                            ContextMode mode);

/// Moves the recursion past the current frame. In enhanced mode the
/// distances are taken between the input reconstruction for (y, h) and y,
/// and the surviving columns are the original (unweighted) pooled columns.
/// In sliding mode the oldest column is dropped.
void update_context(const FactorModel &model, EnhancedInputState *state,
                    const Matrix &pooled, const Vector &y, const Vector &h,
                    ContextMode mode);

}  // namespace eftw

#endif  // EFTW_ENHANCED_INPUT_H_
