// src/app.cc

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

#include "eftw/app.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>
#include <utility>

#include "eftw/errors.h"
#include "eftw/model_io.h"
#include "eftw/spp_inference.h"

namespace eftw::app {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string &s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

template <typename T>
T parse_number(const std::string &key, const std::string &value) {
  std::istringstream is(value);
  T v{};
  is >> v;
  if (!is || !(is >> std::ws).eof())
    throw ConfigError("bad value '" + value + "' for " + key);
  return v;
}

ContextMode parse_context_mode(const std::string &v) {
  if (v == "enhanced") return ContextMode::kEnhanced;
  if (v == "sliding") return ContextMode::kSliding;
  throw ConfigError("context_mode must be enhanced or sliding, got '" + v + "'");
}

std::string to_string(ContextMode m) {
  return m == ContextMode::kEnhanced ? "enhanced" : "sliding";
}

template <typename T, typename Fn>
std::string join(const std::vector<T> &items, Fn fn) {
  std::ostringstream os;
  for (std::size_t i = 0; i < items.size(); ++i) os << (i ? "," : "") << fn(items[i]);
  return os.str();
}

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

void ensure_dir(const fs::path &dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw ConfigError("cannot create output directory " + dir.string());
}

std::ofstream open_out(const fs::path &path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot write " + path.string());
  return os;
}

std::ifstream open_in(const fs::path &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot read " + path.string());
  return is;
}

void echo_config(const RunConfig &config) {
  ensure_dir(config.out_dir);
  std::ofstream os = open_out(fs::path(config.out_dir) / "config.txt");
  write_config(os, config);
}

TrainConfig resolved_train(const RunConfig &config) {
  TrainConfig t = config.train;
  t.seed = config.seed;
  t.context_mode = config.context_mode;
  return t;
}

SyntheticCorpusSpec corpus_spec(const RunConfig &config) {
  SyntheticCorpusSpec spec;
  spec.seed = config.seed;
  spec.utterance_seconds = config.utterance_seconds;
  spec.harmonics = config.harmonics;
  spec.noise_kind = config.noises.front();
  spec.snr_db = config.snrs.front();
  return spec;
}

// Runs `body`, mapping library exceptions onto exit codes.
template <typename Fn>
int guarded(std::ostream &log, Fn body) {
  try {
    return body();
  } catch (const DivergenceError &e) {
    log << "error: " << e.what() << '\n';
    return kExitDivergence;
  } catch (const std::exception &e) {
    log << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}

std::string utterance_id(const std::string &split, int index) {
  std::ostringstream os;
  os << split << '_' << std::setw(3) << std::setfill('0') << index;
  return os.str();
}

std::string condition_tag(NoiseKind noise, double snr) {
  std::ostringstream os;
  os << to_string(noise) << '_' << snr << "dB";
  return os.str();
}

}  // namespace

void set_key(RunConfig *c, const std::string &key, const std::string &value) {
  if (key == "seed") {
    c->seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "n_train") {
    c->n_train = parse_number<int>(key, value);
  } else if (key == "n_test") {
    c->n_test = parse_number<int>(key, value);
  } else if (key == "utterance_seconds") {
    c->utterance_seconds = parse_number<double>(key, value);
  } else if (key == "harmonics") {
    c->harmonics = parse_number<int>(key, value);
  } else if (key == "noise") {
    c->noises.clear();
    for (const std::string &n : split(value, ','))
      c->noises.push_back(parse_noise_kind(n));
  } else if (key == "snr") {
    c->snrs.clear();
    for (const std::string &s : split(value, ','))
      c->snrs.push_back(parse_number<double>(key, s));
  } else if (key == "hidden") {
    c->hidden = parse_number<int>(key, value);
  } else if (key == "factors") {
    c->factors = parse_number<int>(key, value);
  } else if (key == "context") {
    c->context = parse_number<int>(key, value);
  } else if (key == "init_std") {
    c->init_std = parse_number<double>(key, value);
  } else if (key == "context_mode") {
    c->context_mode = parse_context_mode(value);
  } else if (key == "target") {
    c->target = parse_training_target(value);
  } else if (key == "epochs") {
    c->train.epochs = parse_number<int>(key, value);
  } else if (key == "learning_rate") {
    c->train.learning_rate = parse_number<double>(key, value);
  } else if (key == "cd_steps") {
    c->train.cd_steps = parse_number<int>(key, value);
  } else if (key == "beta") {
    c->train.barrier_beta = parse_number<double>(key, value);
  } else if (key == "momentum") {
    c->train.momentum = parse_number<double>(key, value);
  } else if (key == "momentum_cutoff_epoch") {
    c->train.momentum_cutoff_epoch = parse_number<int>(key, value);
  } else if (key == "minibatch_frames") {
    c->train.minibatch_frames = parse_number<int>(key, value);
  } else if (key == "corpus") {
    c->corpus_dir = value;
  } else if (key == "model") {
    c->model_path = value;
  } else if (key == "out") {
    c->out_dir = value;
  } else if (key == "threshold") {
    c->threshold = parse_number<double>(key, value);
  } else if (key == "variants") {
    c->variants = split(value, ',');
  } else if (key == "gradcheck_trials") {
    c->gradcheck_trials = parse_number<int>(key, value);
  } else if (key == "tolerance") {
    c->tolerance = parse_number<double>(key, value);
  } else if (key == "inject_fault") {
    c->inject_fault = value;
  } else {
    throw ConfigError("unknown configuration key '" + key + "'");
  }
}

void read_config(std::istream &is, RunConfig *config) {
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected key=value");
    set_key(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

void load_config(const std::string &path, RunConfig *config) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read config file " + path);
  read_config(is, config);
}

void write_config(std::ostream &os, const RunConfig &c) {
  const auto noise = [](NoiseKind n) { return to_string(n); };
  os << "seed=" << c.seed << '\n'
     << "n_train=" << c.n_train << '\n'
     << "n_test=" << c.n_test << '\n'
     << "utterance_seconds=" << format_double(c.utterance_seconds) << '\n'
     << "harmonics=" << c.harmonics << '\n'
     << "noise=" << join(c.noises, noise) << '\n'
     << "snr=" << join(c.snrs, format_double) << '\n'
     << "hidden=" << c.hidden << '\n'
     << "factors=" << c.factors << '\n'
     << "context=" << c.context << '\n'
     << "init_std=" << format_double(c.init_std) << '\n'
     << "context_mode=" << to_string(c.context_mode) << '\n'
     << "target=" << to_string(c.target) << '\n'
     << "epochs=" << c.train.epochs << '\n'
     << "learning_rate=" << format_double(c.train.learning_rate) << '\n'
     << "cd_steps=" << c.train.cd_steps << '\n'
     << "beta=" << format_double(c.train.barrier_beta) << '\n'
     << "momentum=" << format_double(c.train.momentum) << '\n'
     << "momentum_cutoff_epoch=" << c.train.momentum_cutoff_epoch << '\n'
     << "minibatch_frames=" << c.train.minibatch_frames << '\n'
     << "corpus=" << c.corpus_dir << '\n'
     << "model=" << c.model_path << '\n'
     << "out=" << c.out_dir << '\n'
     << "threshold=" << format_double(c.threshold) << '\n'
     << "variants=" << join(c.variants, [](const std::string &s) { return s; })
     << '\n'
     << "gradcheck_trials=" << c.gradcheck_trials << '\n'
     << "tolerance=" << format_double(c.tolerance) << '\n'
     << "inject_fault=" << c.inject_fault << '\n';
}

namespace {

void check_fault_block(const std::string &name) {
  static const std::array<const char *, 7> kBlocks = {
      "", "wx_factor", "wy_factor", "wh_factor", "bias_x", "bias_y", "bias_h"};
  if (std::find(kBlocks.begin(), kBlocks.end(), name) == kBlocks.end())
    throw ConfigError("inject_fault must name a parameter block");
}

}  // namespace

void validate(const RunConfig &c) {
  if (c.n_train < 0 || c.n_test < 0)
    throw ConfigError("n_train and n_test must be >= 0");
  if (!(c.utterance_seconds > 0.05))
    throw ConfigError("utterance_seconds must exceed one window");
  if (c.harmonics <= 0) throw ConfigError("harmonics must be positive");
  if (c.noises.empty()) throw ConfigError("noise list is empty");
  if (c.snrs.empty()) throw ConfigError("snr list is empty");
  for (double s : c.snrs)
    if (!std::isfinite(s)) throw ConfigError("snr values must be finite");
  if (c.hidden <= 0 || c.factors <= 0)
    throw ConfigError("hidden and factors must be positive");
  if (c.context < 1) throw ConfigError("context must be >= 1");
  if (!(c.init_std >= 0.0)) throw ConfigError("init_std must be >= 0");
  c.train.Validate();
  if (c.out_dir.empty()) throw ConfigError("out must not be empty");
  if (!(c.threshold >= 0.0)) throw ConfigError("threshold must be >= 0");
  for (const std::string &v : c.variants)
    if (v != "eftw" && v != "ftw" && v != "untrained" && v != "oracle" &&
        v != "zero")
      throw ConfigError("unknown variant '" + v + "'");
  if (c.gradcheck_trials <= 0)
    throw ConfigError("gradcheck_trials must be positive");
  if (!(c.tolerance > 0.0)) throw ConfigError("tolerance must be positive");
  check_fault_block(c.inject_fault);
}

// ---------------------------------------------------------------------------
// Manifest and label files.

void write_manifest(std::ostream &os, const std::vector<ManifestEntry> &rows) {
  os << "utterance_id,clean_path,noise_kind,snr_db,label_path,noisy_path\n";
  for (const ManifestEntry &r : rows)
    os << r.utterance_id << ',' << r.clean_path << ','
       << to_string(r.noise_kind) << ',' << format_double(r.snr_db) << ','
       << r.label_path << ',' << r.noisy_path << '\n';
}

std::vector<ManifestEntry> read_manifest(std::istream &is) {
  std::string line;
  if (!std::getline(is, line) ||
      trim(line) !=
          "utterance_id,clean_path,noise_kind,snr_db,label_path,noisy_path")
    throw FormatError("manifest has an unexpected header");
  std::vector<ManifestEntry> rows;
  while (std::getline(is, line)) {
    if (trim(line).empty()) continue;
    const std::vector<std::string> f = split(line, ',');
    if (f.size() != 6) throw FormatError("malformed manifest row: " + line);
    ManifestEntry r;
    r.utterance_id = f[0];
    r.clean_path = f[1];
    r.noise_kind = parse_noise_kind(f[2]);
    r.snr_db = std::stod(f[3]);
    r.label_path = f[4];
    r.noisy_path = f[5];
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_labels(std::ostream &os, const std::vector<int> &labels) {
  os << "frame,time_s,label\n" << std::setprecision(17);
  Spectrogram frame_clock;
  for (std::size_t t = 0; t < labels.size(); ++t)
    os << t << ',' << frame_clock.frame_time(static_cast<Eigen::Index>(t))
       << ',' << labels[t] << '\n';
}

std::vector<int> read_labels(std::istream &is) {
  std::string line;
  if (!std::getline(is, line) || trim(line) != "frame,time_s,label")
    throw FormatError("label file has an unexpected header");
  std::vector<int> labels;
  while (std::getline(is, line)) {
    if (trim(line).empty()) continue;
    const std::vector<std::string> f = split(line, ',');
    if (f.size() != 3 || (f[2] != "0" && f[2] != "1"))
      throw FormatError("malformed label row: " + line);
    labels.push_back(f[2] == "1" ? 1 : 0);
  }
  return labels;
}

std::string stats_path_for(const std::string &model_path) {
  return model_path + ".stats";
}

// ---------------------------------------------------------------------------
// synth

int cmd_synth(const RunConfig &config, std::ostream &log) {
  return guarded(log, [&] {
    validate(config);
    echo_config(config);
    const fs::path root(config.out_dir);
    std::ofstream report = open_out(root / "mix_report.csv");
    report << "split,utterance_id,noise_kind,requested_snr_db,"
              "measured_snr_db,wav_scale\n"
           << std::setprecision(17);

    for (const auto &[split_name, count, offset] :
         {std::tuple<std::string, int, int>{"train", config.n_train, 0},
          std::tuple<std::string, int, int>{"test", config.n_test,
                                            config.n_train}}) {
      const fs::path dir = root / split_name;
      ensure_dir(dir);
      std::vector<ManifestEntry> rows;
      for (int i = 0; i < count; ++i) {
        const std::string id = utterance_id(split_name, i);
        for (NoiseKind noise : config.noises) {
          SyntheticCorpusSpec spec = corpus_spec(config);
          spec.noise_kind = noise;
          const SyntheticUtterance utt = generate_utterance(spec, offset + i);
          const std::string clean_name = id + "_clean.wav";
          const std::string label_name = id + "_labels.csv";
          if (noise == config.noises.front()) {
            std::ofstream labels = open_out(dir / label_name);
            write_labels(labels, utt.frame_labels);
          }
          Waveform noise_track;
          noise_track.samples = utt.noise.samples;
          for (double snr : config.snrs) {
            Waveform noisy = mix_at_snr(utt.clean, noise_track, snr);
            std::vector<double> added(noisy.samples.size());
            for (std::size_t n = 0; n < added.size(); ++n)
              added[n] = noisy.samples[n] - utt.clean.samples[n];
            const double measured = snr_db(utt.clean.samples, added);
            // One common gain keeps both files inside the PCM range without
            // changing the SNR or the clean/noisy ratio.
            double peak = 0.0;
            for (double v : noisy.samples) peak = std::max(peak, std::abs(v));
            const double scale = peak > 0.99 ? 0.99 / peak : 1.0;
            for (double &v : noisy.samples) v *= scale;
            Waveform clean = utt.clean;
            for (double &v : clean.samples) v *= scale;
            const std::string tag = condition_tag(noise, snr);
            const std::string noisy_name = id + "_" + tag + "_noisy.wav";
            const std::string clean_file =
                scale == 1.0 ? clean_name : id + "_" + tag + "_clean.wav";
            save_wav((dir / clean_file).string(), clean);
            save_wav((dir / noisy_name).string(), noisy);
            rows.push_back(
                {id, clean_file, noise, snr, label_name, noisy_name});
            report << split_name << ',' << id << ',' << to_string(noise)
                   << ',' << snr << ',' << measured << ',' << scale << '\n';
          }
        }
      }
      std::ofstream manifest = open_out(dir / "manifest.csv");
      write_manifest(manifest, rows);
      log << split_name << ": " << rows.size() << " entries\n";
    }
    return kExitOk;
  });
}

// ---------------------------------------------------------------------------
// train

namespace {

struct LoadedEntry {
  ManifestEntry entry;
  PreparedUtterance utterance;
};

std::vector<LoadedEntry> load_split(const fs::path &dir,
                                    const RunConfig &config,
                                    bool filter_conditions) {
  std::ifstream is = open_in(dir / "manifest.csv");
  std::vector<LoadedEntry> out;
  for (const ManifestEntry &e : read_manifest(is)) {
    if (filter_conditions &&
        (std::find(config.noises.begin(), config.noises.end(), e.noise_kind) ==
             config.noises.end() ||
         std::find(config.snrs.begin(), config.snrs.end(), e.snr_db) ==
             config.snrs.end()))
      continue;
    std::ifstream labels_in = open_in(dir / e.label_path);
    const Waveform clean = resample(load_wav((dir / e.clean_path).string()),
                                    kSampleRate);
    const Waveform noisy = resample(load_wav((dir / e.noisy_path).string()),
                                    kSampleRate);
    out.push_back({e, prepare_utterance(clean, noisy, read_labels(labels_in))});
  }
  return out;
}

}  // namespace

int cmd_train(const RunConfig &config, std::ostream &log) {
  return guarded(log, [&] {
    validate(config);
    if (config.corpus_dir.empty())
      throw ConfigError("train needs corpus=<dir> (see synth)");
    echo_config(config);
    const std::vector<LoadedEntry> loaded =
        load_split(fs::path(config.corpus_dir) / "train", config, true);
    if (loaded.empty())
      throw ConfigError("no training entries match the noise/snr selection");
    PreparedCorpus corpus;
    for (const LoadedEntry &l : loaded) corpus.train.push_back(l.utterance);
    standardize_corpus(&corpus, config.target);

    const ModelShape shape = ModelShape::ForFrames(
        kNumBins, static_cast<std::uint32_t>(config.hidden),
        static_cast<std::uint32_t>(config.factors),
        static_cast<std::uint32_t>(config.context));
    Rng init_rng(config.seed);
    FactorModel model = FactorModel::Random(shape, init_rng, config.init_std);
    std::vector<Spectrogram> views;
    for (const PreparedUtterance &u : corpus.train) views.push_back(u.target_std);

    const fs::path out(config.out_dir);
    const TrainState state =
        train(&model, views, resolved_train(config), [&](const EpochRecord &r) {
          log << "epoch " << r.epoch << " recon_err " << r.mean_recon_err
              << " neg_frac " << r.neg_weight_fraction << '\n';
        });
    std::ofstream train_log = open_out(out / "train_log.csv");
    write_training_log(train_log, state.trace);
    const std::string model_path = config.model_path.empty()
                                       ? (out / "model.bin").string()
                                       : config.model_path;
    save_model(model_path, model);
    Spectrogram stats;
    stats.values.resize(kNumBins, 0);
    stats.stats = corpus.stats;
    save_spectrogram(stats_path_for(model_path), stats);
    log << "model written to " << model_path << '\n';
    return kExitOk;
  });
}

// ---------------------------------------------------------------------------
// detect

int cmd_detect(const RunConfig &config, std::ostream &log) {
  return guarded(log, [&] {
    validate(config);
    if (config.model_path.empty()) throw ConfigError("detect needs model=<file>");
    if (config.corpus_dir.empty())
      throw ConfigError("detect needs corpus=<dir> (see synth)");
    echo_config(config);
    const FactorModel model = load_model(config.model_path);
    const Spectrogram stats_file =
        load_spectrogram(stats_path_for(config.model_path));
    if (!stats_file.stats)
      throw FormatError("statistics file carries no statistics");
    const StandardizationStats &stats = *stats_file.stats;

    const fs::path out(config.out_dir);
    std::ofstream summary = open_out(out / "detect_summary.csv");
    summary << "utterance_id,noise_kind,snr_db,threshold,auc,sdr,"
               "speech_frames,detected_frames\n"
            << std::setprecision(17);
    InferenceOptions opts;
    opts.context_mode = config.context_mode;
    opts.seed = config.seed;
    for (const LoadedEntry &l :
         load_split(fs::path(config.corpus_dir) / "test", config, false)) {
      const PreparedUtterance &u = l.utterance;
      const Spectrogram noisy_std = standardize(u.noisy, stats);
      const SppMatrix spp = estimate_spp(model, noisy_std, opts);
      const DetectionCurve curve = make_detection_curve(spp, config.threshold);
      const std::string stem = l.entry.utterance_id + "_" +
                               condition_tag(l.entry.noise_kind, l.entry.snr_db);
      {
        std::ofstream os = open_out(out / (stem + "_spp.csv"));
        write_spp_csv(os, spp);
      }
      {
        Spectrogram as_file;
        as_file.values = spp.values;
        save_spectrogram((out / (stem + ".spp")).string(), as_file, kSppTag);
      }
      {
        std::ofstream os = open_out(out / (stem + "_curve.csv"));
        write_curve_csv(os, spp, curve.scores);
      }
      const long speech =
          std::count(u.labels.begin(), u.labels.end(), 1);
      const long detected =
          std::count(curve.decisions.begin(), curve.decisions.end(), 1);
      const bool both_classes = speech > 0 && speech < static_cast<long>(u.labels.size());
      const bool has_clean = u.clean.values.squaredNorm() > 0.0;
      summary << l.entry.utterance_id << ',' << to_string(l.entry.noise_kind)
              << ',' << l.entry.snr_db << ',' << config.threshold << ',';
      if (both_classes) summary << roc_auc(curve.scores, u.labels).auc;
      summary << ',';
      if (has_clean) summary << sdr(u.noisy.values, spp.values, u.clean.values);
      summary << ',' << speech << ',' << detected << '\n';
      log << stem << ": " << detected << " of " << curve.decisions.size()
          << " frames above threshold\n";
    }
    return kExitOk;
  });
}

// ---------------------------------------------------------------------------
// eval

int cmd_eval(const RunConfig &config, std::ostream &log) {
  return guarded(log, [&] {
    validate(config);
    echo_config(config);
    BenchmarkSpec spec;
    spec.corpus = corpus_spec(config);
    spec.n_train = config.n_train;
    spec.n_test = config.n_test;
    spec.noises = config.noises;
    spec.snrs = config.snrs;
    spec.target = config.target;
    for (const std::string &name : config.variants) {
      ModelVariant v;
      v.name = name;
      v.hidden = config.hidden;
      v.factors = config.factors;
      v.context = config.context;
      v.init_std = config.init_std;
      v.train = resolved_train(config);
      if (name == "eftw") {
        v.context_mode = ContextMode::kEnhanced;
      } else if (name == "ftw") {
        v.context_mode = ContextMode::kSliding;
      } else if (name == "untrained") {
        v.kind = VariantKind::kUntrained;
        v.context_mode = config.context_mode;
      } else if (name == "oracle") {
        v.kind = VariantKind::kOracleMask;
      } else {
        v.kind = VariantKind::kZeroMask;
      }
      spec.variants.push_back(v);
    }
    const BenchmarkReport report = run_benchmark(spec, [&](const CellResult &c) {
      log << c.variant << ' ' << to_string(c.noise) << ' ' << c.snr_db
          << "dB auc " << c.mean_auc << " sdr " << c.mean_sdr << '\n';
    });
    const fs::path out(config.out_dir);
    {
      std::ofstream os = open_out(out / "report.csv");
      report.WriteCsv(os);
    }
    {
      std::ofstream os = open_out(out / "report.txt");
      report.WriteTable(os);
    }
    {
      std::ofstream os = open_out(out / "report.jsonl");
      report.WriteJsonl(os);
    }
    report.WriteTable(log);
    return kExitOk;
  });
}

// ---------------------------------------------------------------------------
// gradcheck

namespace {

// Energy with long double accumulation, written out term by term.
long double reference_energy(const FactorModel &m, const Vector &x,
                             const Vector &y, const Vector &h) {
  using Real = long double;
  Real e = 0.0L;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const Real d = Real(x[i]) - m.bias_x[i];
    e += d * d / (2.0L * m.sigma_x[i] * m.sigma_x[i]);
  }
  for (Eigen::Index j = 0; j < y.size(); ++j) {
    const Real d = Real(y[j]) - m.bias_y[j];
    e += d * d / (2.0L * m.sigma_y[j] * m.sigma_y[j]);
  }
  for (Eigen::Index k = 0; k < h.size(); ++k) e -= Real(m.bias_h[k]) * h[k];
  for (Eigen::Index f = 0; f < m.wx_factor.cols(); ++f) {
    Real sx = 0.0L, sy = 0.0L, sh = 0.0L;
    for (Eigen::Index i = 0; i < x.size(); ++i)
      sx += Real(m.wx_factor(i, f)) * x[i] / m.sigma_x[i];
    for (Eigen::Index j = 0; j < y.size(); ++j)
      sy += Real(m.wy_factor(j, f)) * y[j] / m.sigma_y[j];
    for (Eigen::Index k = 0; k < h.size(); ++k)
      sh += Real(m.wh_factor(k, f)) * h[k];
    e -= sx * sy * sh;
  }
  return e;
}

}  // namespace

GradcheckReport run_gradcheck(int trials, double tolerance, std::uint64_t seed,
                              const std::string &inject_fault) {
  check_fault_block(inject_fault);
  Rng rng(seed);
  std::uniform_int_distribution<int> big(1, 20), small(1, 8);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> deviation(0.5, 2.0);
  std::bernoulli_distribution coin(0.5);
  constexpr double kStep = 1e-5;
  GradcheckReport report;

  for (int trial = 0; trial < trials; ++trial) {
    const ModelShape shape =
        ModelShape::Free(big(rng), big(rng), small(rng), small(rng));
    FactorModel m(shape);
    for (Matrix *w : {&m.wx_factor, &m.wy_factor, &m.wh_factor})
      for (Eigen::Index i = 0; i < w->size(); ++i)
        w->data()[i] = 0.3 * normal(rng);
    for (Vector *b : {&m.bias_x, &m.bias_y, &m.bias_h})
      for (Eigen::Index i = 0; i < b->size(); ++i)
        (*b)[i] = 0.5 * normal(rng);
    for (Vector *s : {&m.sigma_x, &m.sigma_y})
      for (Eigen::Index i = 0; i < s->size(); ++i) (*s)[i] = deviation(rng);
    Vector x(shape.input), y(shape.visible), h(shape.hidden);
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = normal(rng);
    for (Eigen::Index j = 0; j < y.size(); ++j) y[j] = normal(rng);
    for (Eigen::Index k = 0; k < h.size(); ++k) h[k] = coin(rng) ? 1.0 : 0.0;

    GradientSet g = energy_gradients(m, {x, y, h, HiddenMode::kSampled});
    const std::array<std::tuple<const char *, double *, double *, Eigen::Index>,
                     6>
        blocks = {{
            {"wx_factor", m.wx_factor.data(), g.wx_factor.data(),
             m.wx_factor.size()},
            {"wy_factor", m.wy_factor.data(), g.wy_factor.data(),
             m.wy_factor.size()},
            {"wh_factor", m.wh_factor.data(), g.wh_factor.data(),
             m.wh_factor.size()},
            {"bias_x", m.bias_x.data(), g.bias_x.data(), m.bias_x.size()},
            {"bias_y", m.bias_y.data(), g.bias_y.data(), m.bias_y.size()},
            {"bias_h", m.bias_h.data(), g.bias_h.data(), m.bias_h.size()},
        }};
    for (const auto &[name, param, grad, size] : blocks) {
      const double sign = inject_fault == name ? -1.0 : 1.0;
      for (Eigen::Index i = 0; i < size; ++i) {
        const double keep = param[i];
        param[i] = keep + kStep;
        const double hi = param[i];
        const long double up = reference_energy(m, x, y, h);
        param[i] = keep - kStep;
        const double lo = param[i];
        const long double down = reference_energy(m, x, y, h);
        param[i] = keep;
        const auto numeric = static_cast<double>(-(up - down) / (hi - lo));
        const double analytic = sign * grad[i];
        const double scale =
            std::max({std::abs(analytic), std::abs(numeric), 1e-4});
        const double err = std::abs(analytic - numeric) / scale;
        ++report.checks;
        if (!(err < tolerance)) ++report.failures;
        if (err > report.worst_error || std::isnan(err)) {
          report.worst_error = err;
          report.worst_block = name;
        }
      }
    }
  }
  return report;
}

int cmd_gradcheck(const RunConfig &config, std::ostream &log) {
  try {
    validate(config);
    echo_config(config);
    const GradcheckReport r = run_gradcheck(
        config.gradcheck_trials, config.tolerance, config.seed,
        config.inject_fault);
    std::ofstream os =
        open_out(fs::path(config.out_dir) / "gradcheck_report.txt");
    for (std::ostream *s : {static_cast<std::ostream *>(&os), &log}) {
      *s << "checks " << r.checks << " failures " << r.failures
         << " worst_relative_error " << r.worst_error << " worst_block "
         << (r.worst_block.empty() ? "-" : r.worst_block) << " tolerance "
         << config.tolerance << '\n'
         << (r.passed() ? "PASS" : "FAIL") << '\n';
    }
    return r.passed() ? kExitOk : kExitVerification;
  } catch (const std::exception &e) {
    log << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace eftw::app
