// include/eftw/front_end.h

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

// Audio ingestion and the spectrogram front end: WAV I/O, resampling,
// STFT magnitudes, log-domain standardization, SNR-controlled mixing, and a
// synthetic corpus generator with frame-level ground truth.

#ifndef EFTW_FRONT_END_H_
#define EFTW_FRONT_END_H_

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "eftw/core_model.h"

namespace eftw {

inline constexpr int kSampleRate = 16000;
inline constexpr int kWindowLength = 512;  // 32 ms
inline constexpr int kHopLength = 256;     // 16 ms
inline constexpr int kNumBins = kWindowLength / 2 + 1;

struct Waveform {
  std::vector<double> samples;
  int sample_rate = kSampleRate;

  double duration() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

/// Reads 16-bit PCM mono little-endian WAV; samples scaled to [-1, 1).
Waveform load_wav(const std::string &path);
Waveform read_wav(std::istream &is);
/// Writes 16-bit PCM mono; samples are clipped to [-1, 1] and rounded.
void save_wav(const std::string &path, const Waveform &w);
void write_wav(std::ostream &os, const Waveform &w);

/// Windowed-sinc (Blackman) resampler. Identity when the rates match.
Waveform resample(const Waveform &w, int target_rate);

/// Per-bin statistics of log(1 + magnitude).
struct StandardizationStats {
  Vector mean;
  Vector deviation;
};

inline constexpr double kDeviationFloor = 1e-6;

/// Magnitude spectrogram, one column per frame. When `standardized` is set,
/// `values` holds (log(1 + |X|) - mean) / deviation using `stats`.
struct Spectrogram {
  Matrix values;
  int sample_rate = kSampleRate;
  int window_length = kWindowLength;
  int hop_length = kHopLength;
  std::optional<StandardizationStats> stats;
  bool standardized = false;

  Eigen::Index n_bins() const { return values.rows(); }
  Eigen::Index frames() const { return values.cols(); }
  /// Centre time of frame t in seconds.
  double frame_time(Eigen::Index t) const {
    return (static_cast<double>(t) * hop_length + window_length / 2.0) /
           sample_rate;
  }
};

/// Number of full frames in `n_samples`; 0 if shorter than one window.
Eigen::Index frame_count(std::size_t n_samples,
                         int window_length = kWindowLength,
                         int hop_length = kHopLength);

/// Periodic Hann window of length n.
std::vector<double> hann_window(int n);

/// 512-point Hann STFT magnitudes with hop 256 at 16 kHz (257 bins).
Spectrogram stft_magnitude(const Waveform &w);

/// Two-pass per-bin statistics of log(1 + |X|) over every frame of a set of
/// linear-magnitude spectrograms.
StandardizationStats compute_stats(std::span<const Spectrogram> training);

Spectrogram standardize(const Spectrogram &linear,
                        const StandardizationStats &stats);
/// Inverse of standardize: back to linear magnitudes.
Spectrogram destandardize(const Spectrogram &standardized);
Matrix destandardize_values(const Matrix &z, const StandardizationStats &stats);

// Binary time-frequency matrices: tag ("SPEC1" or "SPP1"), u32 n_bins, u32 T,
// f64 row-major data, u32 flags (bit 0: stats present, bit 1: standardized),
// then mean and deviation vectors when stats are present.
inline constexpr char kSpectrogramTag[] = "SPEC1";
inline constexpr char kSppTag[] = "SPP1";

void write_spectrogram(std::ostream &os, const Spectrogram &spec,
                       const std::string &tag = kSpectrogramTag);
Spectrogram read_spectrogram(std::istream &is,
                             const std::string &tag = kSpectrogramTag);
void save_spectrogram(const std::string &path, const Spectrogram &spec,
                      const std::string &tag = kSpectrogramTag);
Spectrogram load_spectrogram(const std::string &path,
                             const std::string &tag = kSpectrogramTag);

/// Gain g such that 10 log10(sum s^2 / sum (g n)^2) == snr_db. Returns 0 for
/// snr_db = +inf.
double noise_gain_for_snr(std::span<const double> clean,
                          std::span<const double> noise, double snr_db);
/// Noise looped or truncated to `length` samples.
std::vector<double> fit_noise(std::span<const double> noise,
                              std::size_t length);
/// clean + g * noise at the requested SNR.
Waveform mix_at_snr(const Waveform &clean, const Waveform &noise,
                    double snr_db);
/// 10 log10(sum s^2 / sum n^2).
double snr_db(std::span<const double> signal, std::span<const double> noise);

enum class NoiseKind { kWhite, kPink, kBabble };

std::string to_string(NoiseKind kind);
NoiseKind parse_noise_kind(const std::string &name);

/// Harmonic-burst speech surrogate plus a matched noise track.
struct SyntheticCorpusSpec {
  int n_utterances = 1;
  double utterance_seconds = 3.0;
  double f0_min = 100.0;
  double f0_max = 250.0;
  int harmonics = 80;  // capped at Nyquist per burst
  double min_on_seconds = 0.25;
  double max_on_seconds = 0.7;
  double min_off_seconds = 0.2;
  double max_off_seconds = 0.6;
  double ramp_seconds = 0.02;
  double peak_amplitude = 0.5;
  bool silent = false;  // no speech at all
  NoiseKind noise_kind = NoiseKind::kWhite;
  double snr_db = 5.0;
  std::uint64_t seed = 1;
  /// Offset added to the utterance index when deriving per-utterance seeds,
  /// so train and test sets drawn from one seed do not overlap.
  std::uint64_t index_offset = 0;
};

struct SyntheticUtterance {
  Waveform clean;
  Waveform noise;  // unscaled; mix_at_snr applies the gain
  std::vector<std::uint8_t> active;  // per-sample envelope activity
  std::vector<int> frame_labels;
};

/// A frame is speech when at least half of its samples are active.
std::vector<int> frame_labels_from_activity(
    std::span<const std::uint8_t> active, int window_length = kWindowLength,
    int hop_length = kHopLength);

/// Deterministic per utterance: utterance i depends only on (seed,
/// index_offset + i), never on the other utterances.
SyntheticUtterance generate_utterance(const SyntheticCorpusSpec &spec,
                                      int index);
std::vector<SyntheticUtterance> generate_corpus(
    const SyntheticCorpusSpec &spec);

/// Noise track of `n_samples` samples for `kind`.
std::vector<double> generate_noise(NoiseKind kind, std::size_t n_samples,
                                   Rng &rng);

}  // namespace eftw

#endif  // EFTW_FRONT_END_H_
