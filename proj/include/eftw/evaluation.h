// include/eftw/evaluation.h

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

// Detection metrics and the synthetic benchmark runner.

#ifndef EFTW_EVALUATION_H_
#define EFTW_EVALUATION_H_

#include <functional>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "eftw/core_model.h"
#include "eftw/front_end.h"
#include "eftw/spp_inference.h"
#include "eftw/training.h"

namespace eftw {

/// ROC sweep over the distinct scores (descending); the first point is the
/// empty decision set at (0, 0).
struct RocResult {
  std::vector<double> thresholds;
  std::vector<double> hit_rates;
  std::vector<double> false_alarm_rates;
  double auc = 0.0;
};

/// Trapezoidal AUC over the full sweep. The area is accumulated in integer
/// pair counts, so it equals the Mann-Whitney statistic (ties count one
/// half) exactly. Throws ConfigError when only one class is present.
RocResult roc_auc(std::span<const double> scores, std::span<const int> labels);

/// sum((Y * P - S)^2) / sum(S^2) over the time-frequency plane, linear
/// magnitudes.
double sdr(const Matrix &noisy, const Matrix &spp, const Matrix &clean);

struct SdrResult {
  double sdr = 0.0;  // mean over utterances
  std::vector<double> per_utterance;
};

SdrResult sdr_over(std::span<const Matrix> noisy, std::span<const Matrix> spp,
                   std::span<const Matrix> clean);

/// Which spectrogram the model is trained on.
enum class TrainingTarget { kClean, kNoisy };

std::string to_string(TrainingTarget target);
TrainingTarget parse_training_target(const std::string &name);

struct PreparedUtterance {
  Spectrogram clean;       // linear magnitudes
  Spectrogram noisy;       // linear magnitudes
  Spectrogram noisy_std;   // standardized with the training statistics
  Spectrogram target_std;  // training view (clean or noisy), standardized
  std::vector<int> labels;
};

struct PreparedCorpus {
  StandardizationStats stats;
  std::vector<PreparedUtterance> train;
  std::vector<PreparedUtterance> test;
};

/// Synthesises train and test utterances from one seed (disjoint index
/// ranges), mixes at `spec.snr_db`, and standardizes everything with
/// statistics of the training view.
PreparedCorpus prepare_corpus(const SyntheticCorpusSpec &spec, int n_train,
                              int n_test, TrainingTarget target);

/// Linear-magnitude spectrograms and labels for one utterance; the
/// standardized views are filled in by standardize_corpus.
PreparedUtterance prepare_utterance(const Waveform &clean,
                                    const Waveform &noisy,
                                    std::vector<int> labels);

/// Computes statistics on the training view of the training half and
/// standardizes every utterance with them.
void standardize_corpus(PreparedCorpus *corpus, TrainingTarget target);

enum class VariantKind {
  kTrained,     // CD training, then SPP inference
  kUntrained,   // random initialisation only
  kOracleMask,  // clamp(S / Y), needs the clean reference
  kZeroMask,    // P = 0 everywhere
};

struct ModelVariant {
  std::string name;
  VariantKind kind = VariantKind::kTrained;
  ContextMode context_mode = ContextMode::kEnhanced;
  int hidden = 30;
  int factors = 60;
  int context = 6;
  double init_std = 0.01;
  TrainConfig train;
};

struct UtteranceScore {
  double auc = 0.0;
  double sdr = 0.0;
};

struct CellResult {
  std::string variant;
  NoiseKind noise = NoiseKind::kWhite;
  double snr_db = 0.0;
  double mean_auc = 0.0;
  double mean_sdr = 0.0;
  std::vector<UtteranceScore> utterances;
};

struct BenchmarkSpec {
  SyntheticCorpusSpec corpus;  // noise_kind and snr_db set per cell
  int n_train = 20;
  int n_test = 5;
  std::vector<NoiseKind> noises = {NoiseKind::kBabble, NoiseKind::kWhite,
                                   NoiseKind::kPink};
  std::vector<double> snrs = {-5.0, 0.0, 5.0};
  TrainingTarget target = TrainingTarget::kClean;
  std::vector<ModelVariant> variants;
};

struct BenchmarkReport {
  std::vector<CellResult> cells;

  const CellResult *find(const std::string &variant, NoiseKind noise,
                         double snr_db) const;

  /// variant,noise,snr_db,mean_auc,mean_sdr
  void WriteCsv(std::ostream &os) const;
  static BenchmarkReport ReadCsv(std::istream &is);
  /// Two aligned tables (AUC, SDR): rows are variants, columns are
  /// noise x SNR.
  void WriteTable(std::ostream &os) const;
  /// One JSON object per utterance.
  void WriteJsonl(std::ostream &os) const;
};

/// Trains (if needed) and scores one variant on a prepared corpus.
CellResult evaluate_variant(const ModelVariant &variant,
                            const PreparedCorpus &corpus,
                            FactorModel *trained_model = nullptr);

/// Scores an existing model on the test half of a prepared corpus.
CellResult score_model(const std::string &name, const FactorModel &model,
                       const PreparedCorpus &corpus, ContextMode mode);

/// Trains a model for a variant on the training half of `corpus`.
FactorModel train_variant(const ModelVariant &variant,
                          const PreparedCorpus &corpus,
                          TrainState *state = nullptr);

using CellCallback = std::function<void(const CellResult &)>;

BenchmarkReport run_benchmark(const BenchmarkSpec &spec,
                              const CellCallback &on_cell = nullptr);

}  // namespace eftw

#endif  // EFTW_EVALUATION_H_
