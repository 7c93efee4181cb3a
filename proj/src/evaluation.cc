// src/evaluation.cc

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

#include "eftw/evaluation.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "json.hpp"

#include "eftw/errors.h"

namespace eftw {

RocResult roc_auc(std::span<const double> scores, std::span<const int> labels) {
  check_dim(static_cast<std::ptrdiff_t>(labels.size()),
            static_cast<std::ptrdiff_t>(scores.size()), "labels");
  std::int64_t positives = 0, negatives = 0;
  for (int l : labels) (l ? positives : negatives) += 1;
  if (positives == 0 || negatives == 0)
    throw ConfigError("AUC needs at least one positive and one negative label");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocResult roc;
  roc.thresholds.push_back(std::numeric_limits<double>::infinity());
  roc.hit_rates.push_back(0.0);
  roc.false_alarm_rates.push_back(0.0);

  // Twice the trapezoid area in units of 1 / (P * N).
  std::int64_t area2 = 0, tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double thr = scores[order[i]];
    const std::int64_t tp_prev = tp, fp_prev = fp;
    while (i < order.size() && scores[order[i]] == thr) {
      (labels[order[i]] ? tp : fp) += 1;
      ++i;
    }
    area2 += (fp - fp_prev) * (tp + tp_prev);
    roc.thresholds.push_back(thr);
    roc.hit_rates.push_back(static_cast<double>(tp) / positives);
    roc.false_alarm_rates.push_back(static_cast<double>(fp) / negatives);
  }
  roc.auc = static_cast<double>(area2) /
            (2.0 * static_cast<double>(positives) * static_cast<double>(negatives));
  return roc;
}

double sdr(const Matrix &noisy, const Matrix &spp, const Matrix &clean) {
  check_dim(spp.rows(), noisy.rows(), "spp rows");
  check_dim(spp.cols(), noisy.cols(), "spp cols");
  check_dim(clean.rows(), noisy.rows(), "clean rows");
  check_dim(clean.cols(), noisy.cols(), "clean cols");
  const double denom = clean.squaredNorm();
  if (denom == 0.0) throw ConfigError("SDR undefined for an all-zero clean reference");
  return (noisy.cwiseProduct(spp) - clean).squaredNorm() / denom;
}

SdrResult sdr_over(std::span<const Matrix> noisy, std::span<const Matrix> spp,
                   std::span<const Matrix> clean) {
  if (noisy.size() != spp.size() || noisy.size() != clean.size())
    throw ShapeError("sdr_over: mismatched utterance counts");
  SdrResult r;
  for (std::size_t u = 0; u < noisy.size(); ++u)
    r.per_utterance.push_back(sdr(noisy[u], spp[u], clean[u]));
  if (!r.per_utterance.empty())
    r.sdr = std::accumulate(r.per_utterance.begin(), r.per_utterance.end(), 0.0) /
            static_cast<double>(r.per_utterance.size());
  return r;
}

std::string to_string(TrainingTarget target) {
  return target == TrainingTarget::kClean ? "clean" : "noisy";
}

TrainingTarget parse_training_target(const std::string &name) {
  if (name == "clean") return TrainingTarget::kClean;
  if (name == "noisy") return TrainingTarget::kNoisy;
  throw ConfigError("unknown training target '" + name + "'");
}

PreparedUtterance prepare_utterance(const Waveform &clean,
                                    const Waveform &noisy,
                                    std::vector<int> labels) {
  PreparedUtterance u;
  u.clean = stft_magnitude(clean);
  u.noisy = stft_magnitude(noisy);
  check_dim(static_cast<std::ptrdiff_t>(labels.size()), u.noisy.frames(),
            "frame labels");
  u.labels = std::move(labels);
  return u;
}

void standardize_corpus(PreparedCorpus *corpus, TrainingTarget target) {
  std::vector<Spectrogram> views;
  views.reserve(corpus->train.size());
  for (const PreparedUtterance &u : corpus->train)
    views.push_back(target == TrainingTarget::kClean ? u.clean : u.noisy);
  corpus->stats = compute_stats(views);
  for (auto *set : {&corpus->train, &corpus->test}) {
    for (PreparedUtterance &u : *set) {
      u.noisy_std = standardize(u.noisy, corpus->stats);
      u.target_std = standardize(
          target == TrainingTarget::kClean ? u.clean : u.noisy, corpus->stats);
    }
  }
}

PreparedCorpus prepare_corpus(const SyntheticCorpusSpec &spec, int n_train,
                              int n_test, TrainingTarget target) {
  if (n_train <= 0) throw ConfigError("need at least one training utterance");
  if (n_test < 0) throw ConfigError("n_test must be >= 0");
  PreparedCorpus corpus;
  for (int i = 0; i < n_train + n_test; ++i) {
    const SyntheticUtterance utt = generate_utterance(spec, i);
    Waveform noise;
    noise.samples = utt.noise.samples;
    const Waveform noisy = mix_at_snr(utt.clean, noise, spec.snr_db);
    (i < n_train ? corpus.train : corpus.test)
        .push_back(prepare_utterance(utt.clean, noisy, utt.frame_labels));
  }
  standardize_corpus(&corpus, target);
  return corpus;
}

FactorModel train_variant(const ModelVariant &variant,
                          const PreparedCorpus &corpus, TrainState *state) {
  const ModelShape shape = ModelShape::ForFrames(
      kNumBins, static_cast<std::uint32_t>(variant.hidden),
      static_cast<std::uint32_t>(variant.factors),
      static_cast<std::uint32_t>(variant.context));
  Rng init_rng(variant.train.seed);
  FactorModel model = FactorModel::Random(shape, init_rng, variant.init_std);
  if (variant.kind != VariantKind::kTrained) return model;
  std::vector<Spectrogram> views;
  views.reserve(corpus.train.size());
  for (const PreparedUtterance &u : corpus.train) views.push_back(u.target_std);
  TrainConfig cfg = variant.train;
  cfg.context_mode = variant.context_mode;
  TrainState st = train(&model, views, cfg);
  if (state) *state = std::move(st);
  return model;
}

namespace {

void finish_cell(CellResult *cell) {
  double auc = 0.0, s = 0.0;
  for (const UtteranceScore &u : cell->utterances) {
    auc += u.auc;
    s += u.sdr;
  }
  const double n = static_cast<double>(cell->utterances.size());
  cell->mean_auc = n > 0 ? auc / n : 0.0;
  cell->mean_sdr = n > 0 ? s / n : 0.0;
}

}  // namespace

CellResult score_model(const std::string &name, const FactorModel &model,
                       const PreparedCorpus &corpus, ContextMode mode) {
  CellResult cell;
  cell.variant = name;
  InferenceOptions opts;
  opts.context_mode = mode;
  for (const PreparedUtterance &u : corpus.test) {
    const SppMatrix spp = estimate_spp(model, u.noisy_std, opts);
    UtteranceScore s;
    s.auc = roc_auc(integrate_1d(spp), u.labels).auc;
    s.sdr = sdr(u.noisy.values, spp.values, u.clean.values);
    cell.utterances.push_back(s);
  }
  finish_cell(&cell);
  return cell;
}

namespace {

CellResult score_mask(const std::string &name, const PreparedCorpus &corpus,
                      bool oracle) {
  CellResult cell;
  cell.variant = name;
  for (const PreparedUtterance &u : corpus.test) {
    SppMatrix spp;
    spp.values = oracle ? ratio_mask(u.clean.values, u.noisy.values)
                        : Matrix::Zero(u.noisy.n_bins(), u.noisy.frames());
    UtteranceScore s;
    const std::vector<double> scores = integrate_1d(spp);
    s.auc = roc_auc(scores, u.labels).auc;
    s.sdr = sdr(u.noisy.values, spp.values, u.clean.values);
    cell.utterances.push_back(s);
  }
  finish_cell(&cell);
  return cell;
}

}  // namespace

CellResult evaluate_variant(const ModelVariant &variant,
                            const PreparedCorpus &corpus,
                            FactorModel *trained_model) {
  CellResult cell;
  switch (variant.kind) {
    case VariantKind::kOracleMask:
      cell = score_mask(variant.name, corpus, true);
      break;
    case VariantKind::kZeroMask:
      cell = score_mask(variant.name, corpus, false);
      break;
    case VariantKind::kTrained:
    case VariantKind::kUntrained: {
      FactorModel model = train_variant(variant, corpus);
      cell = score_model(variant.name, model, corpus, variant.context_mode);
      if (trained_model) *trained_model = std::move(model);
      break;
    }
  }
  return cell;
}

BenchmarkReport run_benchmark(const BenchmarkSpec &spec,
                              const CellCallback &on_cell) {
  if (spec.variants.empty()) throw ConfigError("benchmark has no variants");
  BenchmarkReport report;
  for (NoiseKind noise : spec.noises) {
    for (double snr : spec.snrs) {
      SyntheticCorpusSpec cs = spec.corpus;
      cs.noise_kind = noise;
      cs.snr_db = snr;
      const PreparedCorpus corpus =
          prepare_corpus(cs, spec.n_train, spec.n_test, spec.target);
      for (const ModelVariant &v : spec.variants) {
        CellResult cell = evaluate_variant(v, corpus);
        cell.noise = noise;
        cell.snr_db = snr;
        if (on_cell) on_cell(cell);
        report.cells.push_back(std::move(cell));
      }
    }
  }
  return report;
}

const CellResult *BenchmarkReport::find(const std::string &variant,
                                        NoiseKind noise, double snr_db) const {
  for (const CellResult &c : cells)
    if (c.variant == variant && c.noise == noise && c.snr_db == snr_db)
      return &c;
  return nullptr;
}

void BenchmarkReport::WriteCsv(std::ostream &os) const {
  os << "variant,noise,snr_db,mean_auc,mean_sdr\n" << std::setprecision(17);
  for (const CellResult &c : cells)
    os << c.variant << ',' << to_string(c.noise) << ',' << c.snr_db << ','
       << c.mean_auc << ',' << c.mean_sdr << '\n';
}

BenchmarkReport BenchmarkReport::ReadCsv(std::istream &is) {
  BenchmarkReport r;
  std::string line;
  if (!std::getline(is, line) ||
      line != "variant,noise,snr_db,mean_auc,mean_sdr")
    throw FormatError("benchmark CSV has an unexpected header");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string variant, noise, snr, auc, s;
    if (!std::getline(ss, variant, ',') || !std::getline(ss, noise, ',') ||
        !std::getline(ss, snr, ',') || !std::getline(ss, auc, ',') ||
        !std::getline(ss, s))
      throw FormatError("malformed benchmark CSV row: " + line);
    CellResult c;
    c.variant = variant;
    c.noise = parse_noise_kind(noise);
    c.snr_db = std::stod(snr);
    c.mean_auc = std::stod(auc);
    c.mean_sdr = std::stod(s);
    r.cells.push_back(std::move(c));
  }
  return r;
}

namespace {

std::string snr_label(double snr) {
  std::ostringstream ss;
  ss << snr << "dB";
  return ss.str();
}

}  // namespace

void BenchmarkReport::WriteTable(std::ostream &os) const {
  std::vector<std::string> variants;
  std::vector<std::pair<NoiseKind, double>> columns;
  for (const CellResult &c : cells) {
    if (std::find(variants.begin(), variants.end(), c.variant) == variants.end())
      variants.push_back(c.variant);
    const std::pair<NoiseKind, double> col{c.noise, c.snr_db};
    if (std::find(columns.begin(), columns.end(), col) == columns.end())
      columns.push_back(col);
  }
  std::size_t name_width = 8;
  for (const std::string &v : variants) name_width = std::max(name_width, v.size());

  for (const char *metric : {"AUC", "SDR"}) {
    os << metric << '\n' << std::setw(static_cast<int>(name_width)) << "";
    for (const auto &[noise, snr] : columns)
      os << std::setw(16) << (to_string(noise) + " " + snr_label(snr));
    os << '\n';
    for (const std::string &v : variants) {
      os << std::left << std::setw(static_cast<int>(name_width)) << v
         << std::right;
      for (const auto &[noise, snr] : columns) {
        const CellResult *c = find(v, noise, snr);
        os << std::setw(16);
        if (c)
          os << std::fixed << std::setprecision(2)
             << (metric[0] == 'A' ? c->mean_auc : c->mean_sdr)
             << std::defaultfloat;
        else
          os << "-";
      }
      os << '\n';
    }
    os << '\n';
  }
}

void BenchmarkReport::WriteJsonl(std::ostream &os) const {
  for (const CellResult &c : cells) {
    for (std::size_t u = 0; u < c.utterances.size(); ++u) {
      nlohmann::json j;
      j["variant"] = c.variant;
      j["noise"] = to_string(c.noise);
      j["snr_db"] = c.snr_db;
      j["utterance"] = u;
      j["auc"] = c.utterances[u].auc;
      j["sdr"] = c.utterances[u].sdr;
      os << j.dump() << '\n';
    }
  }
}

}  // namespace eftw
