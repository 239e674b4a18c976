// include/phonelearn/mfcc.hpp

// Copyright 2026  phonelearn authors

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

// MFCC front-end: framing, pre-emphasis, Hamming window, power spectrum,
// triangular mel filterbank, log, orthonormal DCT-II, regression deltas.

#ifndef PHONELEARN_MFCC_HPP_
#define PHONELEARN_MFCC_HPP_

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "phonelearn/corpus.hpp"
#include "phonelearn/error.hpp"

namespace phonelearn {

enum class FramingMode {
  kPerSegment,  // window each phone segment on its own, pad its last window
  kPerWord,     // window the whole word, label frames by their centre time
};

struct MfccConfig {
  double sample_rate = 16000.0;
  double window_len = 0.025;  // seconds
  double hop = 0.010;         // seconds
  std::size_t n_mel_filters = 26;
  std::size_t n_cepstra = kCepstra;
  double pre_emphasis = 0.97;
  std::size_t delta_window = 2;
  double log_floor = 1e-10;
  FramingMode framing = FramingMode::kPerSegment;

  void validate() const {
    if (!(sample_rate > 0.0)) throw ArgumentError("sample_rate must be positive");
    if (!(hop > 0.0)) throw ArgumentError("hop must be positive");
    if (!(window_len > hop)) throw ArgumentError("window_len must exceed hop");
    if (n_cepstra == 0 || n_cepstra > n_mel_filters)
      throw ArgumentError("n_cepstra must be in [1, n_mel_filters]");
    if (delta_window == 0) throw ArgumentError("delta_window must be positive");
  }
  std::size_t window_samples() const {
    return static_cast<std::size_t>(std::lround(window_len * sample_rate));
  }
  std::size_t hop_samples() const {
    return static_cast<std::size_t>(std::lround(hop * sample_rate));
  }
};

struct AudioSegment {
  std::vector<double> samples;
  double sample_rate = 16000.0;

  double duration() const { return static_cast<double>(samples.size()) / sample_rate; }
};

namespace detail {

inline std::size_t frames_for_samples(std::size_t n, std::size_t win, std::size_t hop) {
  if (n <= win) return 1;
  return (n - win + hop - 1) / hop + 1;
}

inline double hz_to_mel(double f) { return 2595.0 * std::log10(1.0 + f / 700.0); }
inline double mel_to_hz(double m) { return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0); }

inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace detail

/// Windows needed to cover `duration` seconds; the last one is zero-padded.
inline std::size_t frame_count(double duration, const MfccConfig &config = {}) {
  if (!(duration > 0.0)) throw ArgumentError("duration must be positive");
  config.validate();
  const auto n = static_cast<std::size_t>(std::lround(duration * config.sample_rate));
  return detail::frames_for_samples(std::max<std::size_t>(n, 1), config.window_samples(),
                                    config.hop_samples());
}

/// Precomputed per-config state: window, filterbank, DCT basis, FFT plan.
class MfccExtractor {
 public:
  explicit MfccExtractor(const MfccConfig &config = {}) : config_(config) {
    config_.validate();
    win_ = config_.window_samples();
    hop_ = config_.hop_samples();
    nfft_ = detail::next_pow2(win_);
    const std::size_t nbins = nfft_ / 2 + 1;

    window_.resize(win_);
    for (std::size_t n = 0; n < win_; ++n)
      window_[n] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) /
                                          static_cast<double>(win_ - 1));

    const std::size_t m = config_.n_mel_filters;
    const double mel_hi = detail::hz_to_mel(config_.sample_rate / 2.0);
    std::vector<double> edges(m + 2);
    for (std::size_t i = 0; i < m + 2; ++i)
      edges[i] = detail::mel_to_hz(mel_hi * static_cast<double>(i) / static_cast<double>(m + 1));
    filters_.assign(m, std::vector<double>(nbins, 0.0));
    for (std::size_t k = 0; k < m; ++k) {
      const double lo = edges[k], mid = edges[k + 1], hi = edges[k + 2];
      for (std::size_t b = 0; b < nbins; ++b) {
        const double f = static_cast<double>(b) * config_.sample_rate / static_cast<double>(nfft_);
        if (f > lo && f < mid)
          filters_[k][b] = (f - lo) / (mid - lo);
        else if (f >= mid && f < hi)
          filters_[k][b] = (hi - f) / (hi - mid);
      }
    }

    dct_.assign(config_.n_cepstra, std::vector<double>(m));
    for (std::size_t q = 0; q < config_.n_cepstra; ++q) {
      const double scale = std::sqrt((q == 0 ? 1.0 : 2.0) / static_cast<double>(m));
      for (std::size_t i = 0; i < m; ++i)
        dct_[q][i] = scale * std::cos(std::numbers::pi * static_cast<double>(q) *
                                      (static_cast<double>(i) + 0.5) / static_cast<double>(m));
    }
  }

  const MfccConfig &config() const noexcept { return config_; }

  /// One cepstral vector (length n_cepstra) per window.
  std::vector<std::vector<double>> extract(const AudioSegment &segment) const {
    if (segment.samples.empty()) throw ArgumentError("empty audio segment");
    if (segment.sample_rate != config_.sample_rate)
      throw ArgumentError("sample rate " + std::to_string(segment.sample_rate) +
                          " does not match config " + std::to_string(config_.sample_rate));
    const auto &x = segment.samples;
    const std::size_t n = x.size();
    std::vector<double> emph(n);
    emph[0] = x[0];
    for (std::size_t i = 1; i < n; ++i) emph[i] = x[i] - config_.pre_emphasis * x[i - 1];

    const std::size_t frames = detail::frames_for_samples(n, win_, hop_);
    std::vector<std::vector<double>> out;
    out.reserve(frames);
    std::vector<double> buf(nfft_);
    std::vector<std::complex<double>> spec;
    std::vector<double> logmel(config_.n_mel_filters);
    Eigen::FFT<double> fft;
    for (std::size_t t = 0; t < frames; ++t) {
      std::fill(buf.begin(), buf.end(), 0.0);
      const std::size_t off = t * hop_;
      for (std::size_t i = 0; i < win_ && off + i < n; ++i) buf[i] = emph[off + i] * window_[i];
      fft.fwd(spec, buf);
      for (std::size_t k = 0; k < filters_.size(); ++k) {
        double e = 0.0;
        const auto &fk = filters_[k];
        for (std::size_t b = 0; b < fk.size(); ++b)
          if (fk[b] != 0.0) e += fk[b] * std::norm(spec[b]);
        logmel[k] = std::log(std::max(e, config_.log_floor));
      }
      std::vector<double> c(config_.n_cepstra, 0.0);
      for (std::size_t q = 0; q < c.size(); ++q)
        for (std::size_t i = 0; i < logmel.size(); ++i) c[q] += dct_[q][i] * logmel[i];
      out.push_back(std::move(c));
    }
    return out;
  }

 private:
  MfccConfig config_;
  std::size_t win_ = 0, hop_ = 0, nfft_ = 0;
  std::vector<double> window_;
  std::vector<std::vector<double>> filters_;
  std::vector<std::vector<double>> dct_;
};

inline std::vector<std::vector<double>> extract_mfcc(const AudioSegment &segment,
                                                     const MfccConfig &config = {}) {
  return MfccExtractor(config).extract(segment);
}

/// Appends regression deltas and delta-deltas:
///   d_t = sum_{n=1..W} n (c_{t+n} - c_{t-n}) / (2 sum n^2),
/// replicating the first/last frame past the edges.
inline std::vector<std::vector<double>> add_deltas(const std::vector<std::vector<double>> &cepstra,
                                                   std::size_t delta_window = 2) {
  if (cepstra.empty()) throw ArgumentError("add_deltas needs at least one frame");
  if (delta_window == 0) throw ArgumentError("delta_window must be positive");
  const std::size_t dim = cepstra.front().size();
  for (const auto &c : cepstra)
    if (c.size() != dim) throw ArgumentError("ragged cepstral sequence");

  const auto regress = [delta_window](const std::vector<std::vector<double>> &in) {
    const auto last = static_cast<std::ptrdiff_t>(in.size()) - 1;
    const std::size_t d = in.front().size();
    double denom = 0.0;
    for (std::size_t k = 1; k <= delta_window; ++k) denom += static_cast<double>(k * k);
    denom *= 2.0;
    std::vector<std::vector<double>> out(in.size(), std::vector<double>(d, 0.0));
    for (std::ptrdiff_t t = 0; t <= last; ++t) {
      for (std::size_t k = 1; k <= delta_window; ++k) {
        const auto kk = static_cast<std::ptrdiff_t>(k);
        const auto &fwd = in[static_cast<std::size_t>(std::min(t + kk, last))];
        const auto &bwd = in[static_cast<std::size_t>(std::max<std::ptrdiff_t>(t - kk, 0))];
        for (std::size_t i = 0; i < d; ++i)
          out[static_cast<std::size_t>(t)][i] += static_cast<double>(k) * (fwd[i] - bwd[i]);
      }
      for (auto &v : out[static_cast<std::size_t>(t)]) v /= denom;
    }
    return out;
  };

  const auto delta = regress(cepstra);
  const auto delta2 = regress(delta);
  std::vector<std::vector<double>> out(cepstra.size());
  for (std::size_t t = 0; t < cepstra.size(); ++t) {
    out[t].reserve(3 * dim);
    out[t].insert(out[t].end(), cepstra[t].begin(), cepstra[t].end());
    out[t].insert(out[t].end(), delta[t].begin(), delta[t].end());
    out[t].insert(out[t].end(), delta2[t].begin(), delta2[t].end());
  }
  return out;
}

/// Turns one audio file's phone segments into labeled 39-dim frames.
/// Trial indices start at `first_trial_index` and increase by one per frame.
inline std::vector<LabeledFrame> extract_labeled_frames(const AudioSegment &audio,
                                                        const std::vector<PhoneSegment> &segments,
                                                        const MfccConfig &config = {},
                                                        std::uint64_t first_trial_index = 0) {
  if (config.n_cepstra != kCepstra)
    throw ArgumentError("labeled frames need exactly " + std::to_string(kCepstra) + " cepstra");
  MfccExtractor extractor(config);
  const auto total = static_cast<std::ptrdiff_t>(audio.samples.size());
  const auto to_sample = [&](double t) {
    return static_cast<std::ptrdiff_t>(std::llround(t * config.sample_rate));
  };

  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto &s = segments[i];
    if (to_sample(s.start) < 0 || to_sample(s.end) > total || to_sample(s.end) <= to_sample(s.start))
      throw RangeError("segment " + std::to_string(i) + " of word '" + s.word_id + "' [" +
                       format_shortest(s.start) + ", " + format_shortest(s.end) +
                       ") lies outside the audio (" + format_shortest(audio.duration()) + " s)");
    if (i > 0 && segments[i - 1].word_id == s.word_id && s.start + 1e-9 < segments[i - 1].end)
      throw OrderingError("segments of word '" + s.word_id + "' overlap or are out of order");
  }

  std::vector<LabeledFrame> out;
  std::uint64_t trial = first_trial_index;
  const auto emit = [&](const std::string &word, PhoneIndex phone,
                        const std::vector<double> &v) {
    LabeledFrame f;
    f.word_id = word;
    f.trial_index = trial++;
    f.phone = phone;
    std::copy(v.begin(), v.end(), f.cues.begin());
    out.push_back(std::move(f));
  };
  const auto slice = [&](double start, double end) {
    AudioSegment a;
    a.sample_rate = audio.sample_rate;
    a.samples.assign(audio.samples.begin() + to_sample(start), audio.samples.begin() + to_sample(end));
    return a;
  };

  if (config.framing == FramingMode::kPerSegment) {
    for (const auto &s : segments) {
      const auto feats = add_deltas(extractor.extract(slice(s.start, s.end)), config.delta_window);
      for (const auto &v : feats) emit(s.word_id, s.phone, v);
    }
    return out;
  }

  // Per-word framing: consecutive segments sharing a word_id form one span.
  const double win = static_cast<double>(config.window_samples()) / config.sample_rate;
  const double hop = static_cast<double>(config.hop_samples()) / config.sample_rate;
  for (std::size_t b = 0; b < segments.size();) {
    std::size_t e = b;
    while (e < segments.size() && segments[e].word_id == segments[b].word_id) ++e;
    const double t0 = segments[b].start, t1 = segments[e - 1].end;
    const auto feats = add_deltas(extractor.extract(slice(t0, t1)), config.delta_window);
    std::size_t seg = b;
    for (std::size_t t = 0; t < feats.size(); ++t) {
      const double centre = t0 + static_cast<double>(t) * hop + win / 2.0;
      while (seg + 1 < e && centre >= segments[seg].end) ++seg;
      emit(segments[b].word_id, segments[seg].phone, feats[t]);
    }
    b = e;
  }
  return out;
}

// ---------------------------------------------------------------------------
// 16-bit PCM mono WAV.

inline AudioSegment read_wav(std::istream &in) {
  const auto read_u32 = [&in]() {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char *>(b), 4)) throw ParseError("truncated WAV");
    return static_cast<std::uint32_t>(b[0] | (b[1] << 8) | (b[2] << 16)) |
           (static_cast<std::uint32_t>(b[3]) << 24);
  };
  const auto read_tag = [&in]() {
    char t[4];
    if (!in.read(t, 4)) throw ParseError("truncated WAV");
    return std::string(t, 4);
  };
  if (read_tag() != "RIFF") throw ParseError("not a RIFF file");
  read_u32();
  if (read_tag() != "WAVE") throw ParseError("not a WAVE file");

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  bool have_fmt = false;
  while (true) {
    const std::string tag = read_tag();
    const std::uint32_t size = read_u32();
    if (tag == "fmt ") {
      std::vector<unsigned char> b(size);
      if (size < 16 || !in.read(reinterpret_cast<char *>(b.data()), size))
        throw ParseError("bad fmt chunk");
      format = static_cast<std::uint16_t>(b[0] | (b[1] << 8));
      channels = static_cast<std::uint16_t>(b[2] | (b[3] << 8));
      rate = static_cast<std::uint32_t>(b[4] | (b[5] << 8) | (b[6] << 16)) |
             (static_cast<std::uint32_t>(b[7]) << 24);
      bits = static_cast<std::uint16_t>(b[14] | (b[15] << 8));
      if (format == 0xFFFE && size >= 26) format = static_cast<std::uint16_t>(b[24] | (b[25] << 8));
      have_fmt = true;
      if (size % 2) in.ignore(1);
    } else if (tag == "data") {
      if (!have_fmt) throw ParseError("data chunk before fmt chunk");
      if (format != 1 || channels != 1 || bits != 16)
        throw ParseError("only 16-bit PCM mono WAV is supported");
      AudioSegment a;
      a.sample_rate = static_cast<double>(rate);
      a.samples.resize(size / 2);
      std::vector<unsigned char> raw(size);
      if (!in.read(reinterpret_cast<char *>(raw.data()), size)) throw ParseError("truncated data chunk");
      for (std::size_t i = 0; i < a.samples.size(); ++i) {
        const auto v = static_cast<std::int16_t>(raw[2 * i] | (raw[2 * i + 1] << 8));
        a.samples[i] = static_cast<double>(v) / 32768.0;
      }
      return a;
    } else {
      in.ignore(size + (size % 2));
      if (!in) throw ParseError("truncated WAV chunk '" + tag + "'");
    }
  }
}

inline AudioSegment read_wav(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open WAV file '" + path + "'");
  try {
    return read_wav(in);
  } catch (const ParseError &e) {
    throw ParseError(path + ": " + e.what());
  }
}

/// Writes samples clipped to [-1, 1) as 16-bit PCM mono.
inline void write_wav(const std::string &path, const AudioSegment &audio) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write WAV file '" + path + "'");
  const auto u32 = [&out](std::uint32_t v) {
    const char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                       static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
    out.write(b, 4);
  };
  const auto u16 = [&out](std::uint16_t v) {
    const char b[2] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff)};
    out.write(b, 2);
  };
  const auto rate = static_cast<std::uint32_t>(audio.sample_rate);
  const auto data_bytes = static_cast<std::uint32_t>(audio.samples.size() * 2);
  out.write("RIFF", 4);
  u32(36 + data_bytes);
  out.write("WAVEfmt ", 8);
  u32(16);
  u16(1);
  u16(1);
  u32(rate);
  u32(rate * 2);
  u16(2);
  u16(16);
  out.write("data", 4);
  u32(data_bytes);
  for (double s : audio.samples) {
    const double clipped = std::clamp(std::round(s * 32768.0), -32768.0, 32767.0);
    u16(static_cast<std::uint16_t>(static_cast<std::int16_t>(clipped)));
  }
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace phonelearn

#endif  // PHONELEARN_MFCC_HPP_
