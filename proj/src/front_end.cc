// src/front_end.cc

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

#include "eftw/front_end.h"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>

#include "eftw/errors.h"
#include "eftw/model_io.h"

namespace eftw {

namespace {

constexpr double kPi = std::numbers::pi;

std::uint16_t read_u16(std::istream &is) {
  unsigned char b[2];
  if (!is.read(reinterpret_cast<char *>(b), 2))
    throw FormatError("truncated WAV header");
  return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
}

void write_u16(std::ostream &os, std::uint16_t v) {
  const char b[2] = {static_cast<char>(v & 0xff), static_cast<char>(v >> 8)};
  os.write(b, 2);
}

std::string read_tag(std::istream &is, std::size_t n) {
  std::string s(n, '\0');
  if (!is.read(s.data(), static_cast<std::streamsize>(n)))
    throw FormatError("truncated header");
  return s;
}

}  // namespace

Waveform read_wav(std::istream &is) {
  if (read_tag(is, 4) != "RIFF") throw FormatError("not a RIFF file");
  binary::read_u32(is);  // riff size, not trusted
  if (read_tag(is, 4) != "WAVE") throw FormatError("not a WAVE file");

  bool have_fmt = false;
  Waveform w;
  while (true) {
    std::string id;
    try {
      id = read_tag(is, 4);
    } catch (const FormatError &) {
      throw FormatError("WAV file has no data chunk");
    }
    const std::uint32_t size = binary::read_u32(is);
    if (id == "fmt ") {
      if (size < 16) throw FormatError("short fmt chunk");
      const std::uint16_t format = read_u16(is);
      const std::uint16_t channels = read_u16(is);
      const std::uint32_t rate = binary::read_u32(is);
      binary::read_u32(is);  // byte rate
      read_u16(is);          // block align
      const std::uint16_t bits = read_u16(is);
      is.ignore(size - 16 + (size & 1));
      if (format != 1) throw FormatError("unsupported WAV format (need PCM)");
      if (channels != 1)
        throw FormatError("unsupported WAV: " + std::to_string(channels) +
                          " channels (need mono)");
      if (bits != 16)
        throw FormatError("unsupported WAV: " + std::to_string(bits) +
                          "-bit samples (need 16-bit)");
      if (rate == 0) throw FormatError("WAV sample rate is zero");
      w.sample_rate = static_cast<int>(rate);
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) throw FormatError("WAV data chunk before fmt chunk");
      const std::size_t n = size / 2;
      if (n == 0) throw FormatError("WAV file contains no samples");
      std::vector<char> raw(n * 2);
      if (!is.read(raw.data(), static_cast<std::streamsize>(raw.size())))
        throw FormatError("truncated WAV data chunk");
      w.samples.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        const auto lo = static_cast<unsigned char>(raw[2 * i]);
        const auto hi = static_cast<unsigned char>(raw[2 * i + 1]);
        const auto v = static_cast<std::int16_t>(lo | (hi << 8));
        w.samples[i] = v / 32768.0;
      }
      return w;
    } else {
      is.ignore(size + (size & 1));
    }
  }
}

Waveform load_wav(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("cannot open " + path);
  return read_wav(is);
}

void write_wav(std::ostream &os, const Waveform &w) {
  const auto n = static_cast<std::uint32_t>(w.samples.size());
  os.write("RIFF", 4);
  binary::write_u32(os, 36 + 2 * n);
  os.write("WAVE", 4);
  os.write("fmt ", 4);
  binary::write_u32(os, 16);
  write_u16(os, 1);
  write_u16(os, 1);
  binary::write_u32(os, static_cast<std::uint32_t>(w.sample_rate));
  binary::write_u32(os, static_cast<std::uint32_t>(w.sample_rate) * 2);
  write_u16(os, 2);
  write_u16(os, 16);
  os.write("data", 4);
  binary::write_u32(os, 2 * n);
  for (double s : w.samples) {
    const double c = std::clamp(s, -1.0, 1.0);
    const auto v = static_cast<std::int16_t>(
        std::clamp(std::lround(c * 32768.0), -32768L, 32767L));
    write_u16(os, static_cast<std::uint16_t>(v));
  }
}

void save_wav(const std::string &path, const Waveform &w) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw FormatError("cannot open " + path + " for writing");
  write_wav(os, w);
  if (!os) throw FormatError("failed writing " + path);
}

Waveform resample(const Waveform &w, int target_rate) {
  if (target_rate <= 0) throw ConfigError("target sample rate must be > 0");
  if (w.sample_rate == target_rate) return w;
  const double ratio = static_cast<double>(w.sample_rate) / target_rate;
  // Cut-off in cycles per input sample.
  const double cutoff = 0.5 * std::min(1.0, 1.0 / ratio);
  const double half_width = 16.0 / (2.0 * cutoff);
  const auto n_in = static_cast<std::ptrdiff_t>(w.samples.size());
  const auto n_out = static_cast<std::size_t>(
      std::floor(static_cast<double>(n_in) / ratio));

  Waveform out;
  out.sample_rate = target_rate;
  out.samples.resize(n_out);
  for (std::size_t n = 0; n < n_out; ++n) {
    const double pos = static_cast<double>(n) * w.sample_rate / target_rate;
    const auto first = std::max<std::ptrdiff_t>(
        0, static_cast<std::ptrdiff_t>(std::ceil(pos - half_width)));
    const auto last = std::min<std::ptrdiff_t>(
        n_in - 1, static_cast<std::ptrdiff_t>(std::floor(pos + half_width)));
    double acc = 0.0;
    for (std::ptrdiff_t k = first; k <= last; ++k) {
      const double d = pos - static_cast<double>(k);
      const double arg = 2.0 * cutoff * d;
      const double sinc =
          std::abs(arg) < 1e-12 ? 1.0 : std::sin(kPi * arg) / (kPi * arg);
      // Blackman window over [-half_width, half_width].
      const double u = (d + half_width) / (2.0 * half_width);
      const double win = 0.42 - 0.5 * std::cos(2.0 * kPi * u) +
                         0.08 * std::cos(4.0 * kPi * u);
      acc += w.samples[static_cast<std::size_t>(k)] * 2.0 * cutoff * sinc * win;
    }
    out.samples[n] = acc;
  }
  return out;
}

Eigen::Index frame_count(std::size_t n_samples, int window_length,
                         int hop_length) {
  if (n_samples < static_cast<std::size_t>(window_length)) return 0;
  return static_cast<Eigen::Index>((n_samples - window_length) / hop_length) +
         1;
}

std::vector<double> hann_window(int n) {
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = 0.5 - 0.5 * std::cos(2.0 * kPi * i / n);
  return w;
}

namespace {

// FFTW planning is not thread-safe; executing a plan is.
std::mutex fftw_planner_mutex;

struct PlanDeleter {
  void operator()(fftw_plan_s *p) const {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex);
    fftw_destroy_plan(p);
  }
};

}  // namespace

Spectrogram stft_magnitude(const Waveform &w) {
  if (w.sample_rate != kSampleRate)
    throw ConfigError("stft_magnitude expects 16 kHz input, got " +
                      std::to_string(w.sample_rate) + " Hz");
  const Eigen::Index T = frame_count(w.samples.size());
  if (T == 0)
    throw ConfigError("waveform shorter than one analysis window (" +
                      std::to_string(kWindowLength) + " samples)");

  std::vector<double> frame(kWindowLength);
  std::vector<fftw_complex> spectrum(kNumBins);
  std::unique_ptr<fftw_plan_s, PlanDeleter> plan;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex);
    plan.reset(fftw_plan_dft_r2c_1d(kWindowLength, frame.data(),
                                    spectrum.data(), FFTW_ESTIMATE));
  }
  const std::vector<double> window = hann_window(kWindowLength);

  Spectrogram spec;
  spec.values.resize(kNumBins, T);
  for (Eigen::Index t = 0; t < T; ++t) {
    const std::size_t offset = static_cast<std::size_t>(t) * kHopLength;
    for (int i = 0; i < kWindowLength; ++i)
      frame[i] = w.samples[offset + i] * window[i];
    fftw_execute(plan.get());
    for (int k = 0; k < kNumBins; ++k)
      spec.values(k, t) = std::hypot(spectrum[k][0], spectrum[k][1]);
  }
  if (spec.n_bins() != kNumBins)
    throw ShapeError("spectrogram must have 257 bins");
  return spec;
}

StandardizationStats compute_stats(std::span<const Spectrogram> training) {
  if (training.empty()) throw ConfigError("no spectrograms for statistics");
  const Eigen::Index bins = training.front().n_bins();
  Vector sum = Vector::Zero(bins);
  double count = 0.0;
  for (const Spectrogram &s : training) {
    if (s.standardized)
      throw ConfigError("statistics need linear-magnitude spectrograms");
    check_dim(s.n_bins(), bins, "spectrogram bins");
    sum += s.values.array().log1p().matrix().rowwise().sum();
    count += static_cast<double>(s.frames());
  }
  if (count == 0.0) throw ConfigError("no frames for statistics");
  StandardizationStats stats;
  stats.mean = sum / count;
  Vector sq = Vector::Zero(bins);
  for (const Spectrogram &s : training) {
    const Matrix centred =
        s.values.array().log1p().matrix().colwise() - stats.mean;
    sq += centred.array().square().matrix().rowwise().sum();
  }
  stats.deviation = (sq / count).cwiseSqrt().cwiseMax(kDeviationFloor);
  return stats;
}

Spectrogram standardize(const Spectrogram &linear,
                        const StandardizationStats &stats) {
  if (linear.standardized) throw ConfigError("spectrogram already standardized");
  check_dim(stats.mean.size(), linear.n_bins(), "standardization mean");
  check_dim(stats.deviation.size(), linear.n_bins(), "standardization deviation");
  Spectrogram out = linear;
  out.values = (linear.values.array().log1p().colwise() - stats.mean.array())
                   .colwise() /
               stats.deviation.array();
  out.stats = stats;
  out.standardized = true;
  return out;
}

Matrix destandardize_values(const Matrix &z,
                            const StandardizationStats &stats) {
  check_dim(stats.mean.size(), z.rows(), "standardization mean");
  return ((z.array().colwise() * stats.deviation.array()).colwise() +
          stats.mean.array())
      .expm1()
      .matrix();
}

Spectrogram destandardize(const Spectrogram &standardized) {
  if (!standardized.standardized || !standardized.stats)
    throw ConfigError("spectrogram is not standardized");
  Spectrogram out = standardized;
  out.values = destandardize_values(standardized.values, *standardized.stats);
  out.standardized = false;
  return out;
}

void write_spectrogram(std::ostream &os, const Spectrogram &spec,
                       const std::string &tag) {
  os.write(tag.data(), static_cast<std::streamsize>(tag.size()));
  binary::write_u32(os, static_cast<std::uint32_t>(spec.n_bins()));
  binary::write_u32(os, static_cast<std::uint32_t>(spec.frames()));
  binary::write_matrix(os, spec.values);
  std::uint32_t flags = 0;
  if (spec.stats) flags |= 1u;
  if (spec.standardized) flags |= 2u;
  binary::write_u32(os, flags);
  if (spec.stats) {
    binary::write_vector(os, spec.stats->mean);
    binary::write_vector(os, spec.stats->deviation);
  }
  if (!os) throw FormatError("failed writing spectrogram");
}

Spectrogram read_spectrogram(std::istream &is, const std::string &tag) {
  std::string got(tag.size(), '\0');
  if (!is.read(got.data(), static_cast<std::streamsize>(got.size())) ||
      got != tag)
    throw FormatError("bad time-frequency file tag (expected " + tag + ")");
  const std::uint32_t bins = binary::read_u32(is);
  const std::uint32_t frames = binary::read_u32(is);
  if (std::uint64_t{bins} * frames > (std::uint64_t{1} << 31))
    throw FormatError("time-frequency header too large");
  Spectrogram spec;
  spec.values.resize(bins, frames);
  binary::read_matrix(is, &spec.values);
  const std::uint32_t flags = binary::read_u32(is);
  if (flags & 1u) {
    StandardizationStats st;
    st.mean.resize(bins);
    st.deviation.resize(bins);
    binary::read_vector(is, &st.mean);
    binary::read_vector(is, &st.deviation);
    spec.stats = std::move(st);
  }
  spec.standardized = (flags & 2u) != 0;
  if (spec.standardized && !spec.stats)
    throw FormatError("standardized spectrogram without statistics");
  return spec;
}

void save_spectrogram(const std::string &path, const Spectrogram &spec,
                      const std::string &tag) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw FormatError("cannot open " + path + " for writing");
  write_spectrogram(os, spec, tag);
}

Spectrogram load_spectrogram(const std::string &path, const std::string &tag) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("cannot open " + path);
  return read_spectrogram(is, tag);
}

double snr_db(std::span<const double> signal, std::span<const double> noise) {
  double es = 0.0, en = 0.0;
  for (double s : signal) es += s * s;
  for (double n : noise) en += n * n;
  return 10.0 * std::log10(es / en);
}

std::vector<double> fit_noise(std::span<const double> noise,
                              std::size_t length) {
  if (noise.empty()) throw ConfigError("empty noise track");
  std::vector<double> out(length);
  for (std::size_t i = 0; i < length; ++i) out[i] = noise[i % noise.size()];
  return out;
}

double noise_gain_for_snr(std::span<const double> clean,
                          std::span<const double> noise, double snr_db) {
  if (std::isinf(snr_db) && snr_db > 0) return 0.0;
  if (std::isnan(snr_db) || std::isinf(snr_db))
    throw ConfigError("SNR must be finite or +inf");
  double es = 0.0, en = 0.0;
  for (double s : clean) es += s * s;
  for (double n : noise) en += n * n;
  if (en == 0.0) throw ConfigError("noise track has zero energy");
  return std::sqrt(es / (en * std::pow(10.0, snr_db / 10.0)));
}

Waveform mix_at_snr(const Waveform &clean, const Waveform &noise,
                    double snr_db) {
  if (clean.sample_rate != noise.sample_rate)
    throw ConfigError("clean and noise sample rates differ");
  const std::vector<double> fitted = fit_noise(noise.samples, clean.samples.size());
  const double g = noise_gain_for_snr(clean.samples, fitted, snr_db);
  Waveform out = clean;
  for (std::size_t i = 0; i < out.samples.size(); ++i)
    out.samples[i] += g * fitted[i];
  return out;
}

std::string to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::kWhite:
      return "white";
    case NoiseKind::kPink:
      return "pink";
    case NoiseKind::kBabble:
      return "babble";
  }
  return "unknown";
}

NoiseKind parse_noise_kind(const std::string &name) {
  if (name == "white" || name == "gaussian") return NoiseKind::kWhite;
  if (name == "pink") return NoiseKind::kPink;
  if (name == "babble") return NoiseKind::kBabble;
  throw ConfigError("unknown noise kind '" + name + "'");
}

std::vector<int> frame_labels_from_activity(
    std::span<const std::uint8_t> active, int window_length, int hop_length) {
  const Eigen::Index T =
      frame_count(active.size(), window_length, hop_length);
  // Prefix sums make every frame O(1).
  std::vector<std::size_t> prefix(active.size() + 1, 0);
  for (std::size_t i = 0; i < active.size(); ++i)
    prefix[i + 1] = prefix[i] + (active[i] ? 1 : 0);
  std::vector<int> labels(static_cast<std::size_t>(T));
  for (Eigen::Index t = 0; t < T; ++t) {
    const std::size_t a = static_cast<std::size_t>(t) * hop_length;
    const std::size_t n = prefix[a + window_length] - prefix[a];
    labels[t] = 2 * n >= static_cast<std::size_t>(window_length) ? 1 : 0;
  }
  return labels;
}

namespace {

Rng utterance_rng(std::uint64_t seed, std::uint64_t index, std::uint32_t tag) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32), tag};
  return Rng(seq);
}

double uniform(Rng &rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// One voiced burst with a gliding fundamental, added into `out`.
void add_harmonic_burst(std::vector<double> *out, std::size_t start,
                        std::size_t length, double f0_begin, double f0_end,
                        std::span<const double> amplitudes, double gain,
                        std::size_t ramp, int sample_rate) {
  double phase = 0.0;
  const double nyquist = 0.5 * sample_rate;
  for (std::size_t n = 0; n < length && start + n < out->size(); ++n) {
    const double frac = length > 1 ? static_cast<double>(n) / (length - 1) : 0.0;
    const double f0 = f0_begin + (f0_end - f0_begin) * frac;
    phase += 2.0 * kPi * f0 / sample_rate;
    double env = 1.0;
    if (ramp > 0) {
      if (n < ramp)
        env = 0.5 - 0.5 * std::cos(kPi * (n + 0.5) / ramp);
      else if (length - 1 - n < ramp)
        env = 0.5 - 0.5 * std::cos(kPi * (length - n - 0.5) / ramp);
    }
    double v = 0.0;
    for (std::size_t h = 0; h < amplitudes.size(); ++h) {
      const double order = static_cast<double>(h + 1);
      if (order * f0 >= nyquist) break;
      v += amplitudes[h] * std::sin(order * phase);
    }
    (*out)[start + n] += gain * env * v;
  }
}

}  // namespace

std::vector<double> generate_noise(NoiseKind kind, std::size_t n_samples,
                                   Rng &rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> out(n_samples, 0.0);
  switch (kind) {
    case NoiseKind::kWhite:
      for (double &v : out) v = normal(rng);
      break;
    case NoiseKind::kPink: {
      // Paul Kellet's refined pink filter.
      double b0 = 0, b1 = 0, b2 = 0, b3 = 0, b4 = 0, b5 = 0, b6 = 0;
      for (double &v : out) {
        const double white = normal(rng);
        b0 = 0.99886 * b0 + white * 0.0555179;
        b1 = 0.99332 * b1 + white * 0.0750759;
        b2 = 0.96900 * b2 + white * 0.1538520;
        b3 = 0.86650 * b3 + white * 0.3104856;
        b4 = 0.55000 * b4 + white * 0.5329522;
        b5 = -0.7616 * b5 - white * 0.0168980;
        v = b0 + b1 + b2 + b3 + b4 + b5 + b6 + white * 0.5362;
        b6 = white * 0.115926;
      }
      break;
    }
    case NoiseKind::kBabble: {
      // Surrogate babble: six independent harmonic talkers with syllabic
      // amplitude modulation.
      constexpr int kTalkers = 6;
      constexpr int kHarmonics = 12;
      for (int talker = 0; talker < kTalkers; ++talker) {
        const double f0 = uniform(rng, 90.0, 260.0);
        const double vibrato_rate = uniform(rng, 2.0, 5.0);
        const double syllable_rate = uniform(rng, 3.0, 6.0);
        const double phase0 = uniform(rng, 0.0, 2.0 * kPi);
        std::vector<double> amps(kHarmonics);
        for (int h = 0; h < kHarmonics; ++h)
          amps[h] = uniform(rng, 0.3, 1.0) / (h + 1);
        double phase = 0.0;
        for (std::size_t n = 0; n < n_samples; ++n) {
          const double t = static_cast<double>(n) / kSampleRate;
          const double f =
              f0 * (1.0 + 0.05 * std::sin(2.0 * kPi * vibrato_rate * t));
          phase += 2.0 * kPi * f / kSampleRate;
          const double s = std::sin(2.0 * kPi * syllable_rate * t + phase0);
          const double env = s * s;
          double v = 0.0;
          for (int h = 0; h < kHarmonics; ++h) {
            if ((h + 1) * f >= 0.5 * kSampleRate) break;
            v += amps[h] * std::sin((h + 1) * phase);
          }
          out[n] += env * v;
        }
      }
      break;
    }
  }
  double energy = 0.0;
  for (double v : out) energy += v * v;
  if (energy > 0.0) {
    const double scale = 1.0 / std::sqrt(energy / static_cast<double>(n_samples));
    for (double &v : out) v *= scale;
  }
  return out;
}

SyntheticUtterance generate_utterance(const SyntheticCorpusSpec &spec,
                                      int index) {
  if (spec.utterance_seconds <= 0.0)
    throw ConfigError("utterance_seconds must be positive");
  if (spec.f0_min <= 0.0 || spec.f0_max < spec.f0_min)
    throw ConfigError("invalid f0 range");
  const std::uint64_t key = spec.index_offset + static_cast<std::uint64_t>(index);
  Rng speech_rng = utterance_rng(spec.seed, key, 0x5eec4u);
  Rng noise_rng = utterance_rng(spec.seed, key, 0x401cu);

  const auto n = static_cast<std::size_t>(
      std::llround(spec.utterance_seconds * kSampleRate));
  SyntheticUtterance utt;
  utt.clean.samples.assign(n, 0.0);
  utt.active.assign(n, 0);

  if (!spec.silent) {
    const auto ramp =
        static_cast<std::size_t>(std::llround(spec.ramp_seconds * kSampleRate));
    std::size_t cursor = static_cast<std::size_t>(std::llround(
        uniform(speech_rng, spec.min_off_seconds, spec.max_off_seconds) *
        kSampleRate));
    std::vector<double> amps(static_cast<std::size_t>(spec.harmonics));
    while (cursor < n) {
      const auto on = static_cast<std::size_t>(std::llround(
          uniform(speech_rng, spec.min_on_seconds, spec.max_on_seconds) *
          kSampleRate));
      const std::size_t length = std::min(on, n - cursor);
      const double f0 = uniform(speech_rng, spec.f0_min, spec.f0_max);
      const double f0_end = f0 * uniform(speech_rng, 0.8, 1.2);
      const double gain = uniform(speech_rng, 0.5, 1.0);
      for (std::size_t h = 0; h < amps.size(); ++h)
        amps[h] = uniform(speech_rng, 0.3, 1.0) / std::pow(h + 1.0, 0.8);
      add_harmonic_burst(&utt.clean.samples, cursor, length, f0, f0_end, amps,
                         gain, std::min(ramp, length / 2), kSampleRate);
      std::fill(utt.active.begin() + static_cast<std::ptrdiff_t>(cursor),
                utt.active.begin() + static_cast<std::ptrdiff_t>(cursor + length),
                1);
      cursor += length;
      cursor += static_cast<std::size_t>(std::llround(
          uniform(speech_rng, spec.min_off_seconds, spec.max_off_seconds) *
          kSampleRate));
    }
    double peak = 0.0;
    for (double v : utt.clean.samples) peak = std::max(peak, std::abs(v));
    if (peak > 0.0)
      for (double &v : utt.clean.samples) v *= spec.peak_amplitude / peak;
  }

  utt.noise.samples = generate_noise(spec.noise_kind, n, noise_rng);
  utt.frame_labels = frame_labels_from_activity(utt.active);
  return utt;
}

std::vector<SyntheticUtterance> generate_corpus(
    const SyntheticCorpusSpec &spec) {
  if (spec.n_utterances < 0) throw ConfigError("n_utterances must be >= 0");
  std::vector<SyntheticUtterance> out;
  out.reserve(static_cast<std::size_t>(spec.n_utterances));
  for (int i = 0; i < spec.n_utterances; ++i)
    out.push_back(generate_utterance(spec, i));
  return out;
}

}  // namespace eftw
