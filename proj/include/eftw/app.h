// include/eftw/app.h

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

// Subcommands of the eftw-rbm tool. Each one takes a fully resolved
// RunConfig, writes its artifacts below `out`, echoes the configuration
// there as config.txt, and returns a process exit code.

#ifndef EFTW_APP_H_
#define EFTW_APP_H_

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "eftw/core_model.h"
#include "eftw/evaluation.h"
#include "eftw/front_end.h"
#include "eftw/training.h"

namespace eftw::app {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitDivergence = 3,
  kExitVerification = 4,
};

struct RunConfig {
  std::uint64_t seed = 1;

  // Corpus.
  int n_train = 20;
  int n_test = 5;
  double utterance_seconds = 3.0;
  int harmonics = 80;
  std::vector<NoiseKind> noises = {NoiseKind::kWhite};
  std::vector<double> snrs = {5.0};

  // Model.
  int hidden = 30;
  int factors = 60;
  int context = 6;
  double init_std = 0.01;
  ContextMode context_mode = ContextMode::kEnhanced;
  TrainingTarget target = TrainingTarget::kClean;

  // Training; `train.seed` follows `seed`.
  TrainConfig train;

  // Paths.
  std::string corpus_dir;
  std::string model_path;
  std::string out_dir = "out";

  // detect
  double threshold = 0.5;
  // eval: any of eftw, ftw, untrained, oracle, zero
  std::vector<std::string> variants = {"eftw", "ftw", "untrained", "oracle",
                                       "zero"};
  // gradcheck
  int gradcheck_trials = 200;
  double tolerance = 1e-6;
  /// Parameter block whose analytic gradient is negated before comparison
  /// (fault-injection fixture); empty for a normal run.
  std::string inject_fault;
};

/// Sets one key. Throws ConfigError for unknown keys or malformed values.
void set_key(RunConfig *config, const std::string &key,
             const std::string &value);

/// key=value lines; '#' starts a comment, blank lines are skipped.
void read_config(std::istream &is, RunConfig *config);
void load_config(const std::string &path, RunConfig *config);

/// Every key, one per line, in a form read_config accepts.
void write_config(std::ostream &os, const RunConfig &config);

/// Range checks on every field; throws ConfigError.
void validate(const RunConfig &config);

int cmd_synth(const RunConfig &config, std::ostream &log);
int cmd_train(const RunConfig &config, std::ostream &log);
int cmd_detect(const RunConfig &config, std::ostream &log);
int cmd_eval(const RunConfig &config, std::ostream &log);
int cmd_gradcheck(const RunConfig &config, std::ostream &log);

/// One row of a split's manifest.csv. Paths are relative to the manifest.
struct ManifestEntry {
  std::string utterance_id;
  std::string clean_path;
  NoiseKind noise_kind = NoiseKind::kWhite;
  double snr_db = 0.0;
  std::string label_path;
  std::string noisy_path;
};

void write_manifest(std::ostream &os, const std::vector<ManifestEntry> &rows);
std::vector<ManifestEntry> read_manifest(std::istream &is);

/// Frame labels as frame,time_s,label.
void write_labels(std::ostream &os, const std::vector<int> &labels);
std::vector<int> read_labels(std::istream &is);

struct GradcheckReport {
  long checks = 0;
  long failures = 0;
  double worst_error = 0.0;
  std::string worst_block;
  bool passed() const { return failures == 0; }
};

/// Central differences (step 1e-5) of an extended-precision energy against
/// energy_gradients on `trials` random models with I, J <= 20 and K, F <= 8.
GradcheckReport run_gradcheck(int trials, double tolerance, std::uint64_t seed,
                              const std::string &inject_fault = "");

/// Standardization statistics stored next to a model file.
std::string stats_path_for(const std::string &model_path);

}  // namespace eftw::app

#endif  // EFTW_APP_H_
