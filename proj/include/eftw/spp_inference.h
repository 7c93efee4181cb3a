// include/eftw/spp_inference.h

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

#ifndef EFTW_SPP_INFERENCE_H_
#define EFTW_SPP_INFERENCE_H_

#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "eftw/core_model.h"
#include "eftw/enhanced_input.h"
#include "eftw/front_end.h"

namespace eftw {

/// Speech presence probabilities, one column per frame.
struct SppMatrix {
  Matrix values;
  std::vector<double> frame_times;

  Eigen::Index n_bins() const { return values.rows(); }
  Eigen::Index frames() const { return values.cols(); }
};

struct DetectionCurve {
  std::vector<double> scores;
  double threshold = 0.5;
  std::vector<int> decisions;
};

struct InferenceOptions {
  ContextMode context_mode = ContextMode::kEnhanced;
  /// Draw hidden and visible states instead of using their means.
  bool sample = false;
  std::uint64_t seed = 1;
};

inline constexpr double kMagnitudeFloor = 1e-8;

/// Ratio mask clamp(reconstruction / max(noisy, floor), 0, 1), elementwise,
/// both in the linear magnitude domain.
Matrix ratio_mask(const Matrix &reconstruction, const Matrix &noisy);

/// Visible reconstructions (standardized domain) for every frame of a
/// standardized spectrogram, running the context recursion over the whole
/// utterance. Frame 0 is conditioned on a context made of itself.
Matrix reconstruct_frames(const FactorModel &model, const Spectrogram &noisy,
                          const InferenceOptions &options = {});

/// SPP for a standardized noisy spectrogram: reconstructions are mapped back
/// to linear magnitudes with the spectrogram's statistics and divided by the
/// noisy magnitudes.
SppMatrix estimate_spp(const FactorModel &model, const Spectrogram &noisy,
                       const InferenceOptions &options = {});

/// Sum over frequency, min-max normalised over the utterance. A constant
/// input maps to all zeros.
std::vector<double> integrate_1d(const SppMatrix &spp);

std::vector<int> decide(std::span<const double> scores, double threshold);

/// Threshold maximising hit rate minus false-alarm rate over the candidate
/// thresholds (every distinct score). Ties go to the smallest threshold.
double youden_threshold(std::span<const double> scores,
                        std::span<const int> labels);

DetectionCurve make_detection_curve(const SppMatrix &spp, double threshold);

/// Frames as columns; one row per frequency bin.
void write_spp_csv(std::ostream &os, const SppMatrix &spp);
/// Two columns: time_s,score.
void write_curve_csv(std::ostream &os, const SppMatrix &spp,
                     std::span<const double> scores);

}  // namespace eftw

#endif  // EFTW_SPP_INFERENCE_H_
