// src/spp_inference.cc

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

#include "eftw/spp_inference.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>

#include "eftw/errors.h"

namespace eftw {

Matrix ratio_mask(const Matrix &reconstruction, const Matrix &noisy) {
  check_dim(reconstruction.rows(), noisy.rows(), "mask rows");
  check_dim(reconstruction.cols(), noisy.cols(), "mask cols");
  return (reconstruction.array() / noisy.array().max(kMagnitudeFloor))
      .max(0.0)
      .min(1.0)
      .matrix();
}

Matrix reconstruct_frames(const FactorModel &model, const Spectrogram &noisy,
                          const InferenceOptions &options) {
  model.Validate();
  if (!model.AllFinite()) throw ConfigError("model has non-finite parameters");
  if (noisy.frames() == 0) throw ConfigError("empty spectrogram");
  if (!noisy.standardized)
    throw ConfigError("inference expects a standardized spectrogram");
  check_dim(noisy.n_bins(), model.shape.n_bins, "spectrogram bins vs model");

  Rng rng(options.seed);
  EnhancedInputState context;
  context.Reset(noisy.values.col(0), static_cast<int>(model.shape.context));
  Matrix out(noisy.n_bins(), noisy.frames());
  for (Eigen::Index t = 0; t < noisy.frames(); ++t) {
    const Vector y = noisy.values.col(t);
    const PreparedInput in = prepare_input(model, context, y,
                                           options.context_mode);
    const Vector fx = input_factors(model, in.x);
    Vector h = hidden_preactivation_from(model, fx, visible_factors(model, y))
                   .unaryExpr(&sigmoid);
    if (options.sample) h = sample_bernoulli(h, rng);
    Vector recon = visible_mean_from(model, fx, hidden_factors(model, h));
    if (options.sample) recon = sample_gaussian(recon, model.sigma_y, rng);
    out.col(t) = recon;
    update_context(model, &context, in.pooled, y, h, options.context_mode);
  }
  return out;
}

SppMatrix estimate_spp(const FactorModel &model, const Spectrogram &noisy,
                       const InferenceOptions &options) {
  if (!noisy.stats) throw ConfigError("spectrogram has no statistics");
  const Matrix recon = reconstruct_frames(model, noisy, options);
  const Matrix recon_mag = destandardize_values(recon, *noisy.stats);
  const Matrix noisy_mag = destandardize_values(noisy.values, *noisy.stats);
  SppMatrix spp;
  spp.values = ratio_mask(recon_mag, noisy_mag);
  // Non-finite reconstructions (overflowing exp) saturate rather than leak.
  spp.values = spp.values.unaryExpr(
      [](double v) { return std::isnan(v) ? 0.0 : v; });
  spp.frame_times.resize(static_cast<std::size_t>(noisy.frames()));
  for (Eigen::Index t = 0; t < noisy.frames(); ++t)
    spp.frame_times[t] = noisy.frame_time(t);
  return spp;
}

std::vector<double> integrate_1d(const SppMatrix &spp) {
  std::vector<double> s(static_cast<std::size_t>(spp.frames()));
  for (Eigen::Index t = 0; t < spp.frames(); ++t) s[t] = spp.values.col(t).sum();
  if (s.empty()) return s;
  const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
  const double min = *lo, range = *hi - *lo;
  for (double &v : s) v = range > 0.0 ? (v - min) / range : 0.0;
  return s;
}

std::vector<int> decide(std::span<const double> scores, double threshold) {
  if (scores.empty()) throw ConfigError("no scores to decide on");
  std::vector<int> d(scores.size());
  for (std::size_t t = 0; t < scores.size(); ++t)
    d[t] = scores[t] >= threshold ? 1 : 0;
  return d;
}

double youden_threshold(std::span<const double> scores,
                        std::span<const int> labels) {
  if (scores.empty()) throw ConfigError("no scores to decide on");
  check_dim(static_cast<std::ptrdiff_t>(labels.size()),
            static_cast<std::ptrdiff_t>(scores.size()), "labels");
  double positives = 0.0, negatives = 0.0;
  for (int l : labels) (l ? positives : negatives) += 1.0;
  if (positives == 0.0 || negatives == 0.0)
    throw ConfigError("threshold selection needs both classes");
  const std::set<double> candidates(scores.begin(), scores.end());
  double best = *candidates.begin(), best_j = -2.0;
  for (double thr : candidates) {
    double hits = 0.0, false_alarms = 0.0;
    for (std::size_t t = 0; t < scores.size(); ++t)
      if (scores[t] >= thr) (labels[t] ? hits : false_alarms) += 1.0;
    const double j = hits / positives - false_alarms / negatives;
    if (j > best_j) {
      best_j = j;
      best = thr;
    }
  }
  return best;
}

DetectionCurve make_detection_curve(const SppMatrix &spp, double threshold) {
  DetectionCurve c;
  c.scores = integrate_1d(spp);
  c.threshold = threshold;
  c.decisions = decide(c.scores, threshold);
  return c;
}

void write_spp_csv(std::ostream &os, const SppMatrix &spp) {
  os << std::setprecision(17);
  for (Eigen::Index n = 0; n < spp.n_bins(); ++n) {
    for (Eigen::Index t = 0; t < spp.frames(); ++t) {
      if (t) os << ',';
      os << spp.values(n, t);
    }
    os << '\n';
  }
}

void write_curve_csv(std::ostream &os, const SppMatrix &spp,
                     std::span<const double> scores) {
  check_dim(static_cast<std::ptrdiff_t>(scores.size()), spp.frames(),
            "curve length");
  os << "time_s,score\n" << std::setprecision(17);
  for (std::size_t t = 0; t < scores.size(); ++t)
    os << spp.frame_times[t] << ',' << scores[t] << '\n';
}

}  // namespace eftw
