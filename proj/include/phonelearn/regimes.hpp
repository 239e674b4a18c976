// include/phonelearn/regimes.hpp

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

// Training-set generators: per-phone Gaussian resampling and the
// multi-session consistency simulation (replication plus noise injection).

#ifndef PHONELEARN_REGIMES_HPP_
#define PHONELEARN_REGIMES_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "phonelearn/corpus.hpp"
#include "phonelearn/error.hpp"
#include "phonelearn/util.hpp"

namespace phonelearn {

struct GaussianConfig {
  std::size_t n_per_phone = 100;
  std::uint64_t seed = 0;
};

/// Per-phone, per-feature sample mean and standard error of the mean.
struct PhoneMoments {
  std::array<std::size_t, kPhoneCount> count{};
  std::array<Cues, kPhoneCount> mean{};
  std::array<Cues, kPhoneCount> standard_error{};
};

inline PhoneMoments phone_moments(const FrameDataset &train) {
  PhoneMoments m;
  std::array<Cues, kPhoneCount> m2{};
  // Welford
  for (const auto &f : train.frames) {
    const auto j = f.phone;
    const double n = static_cast<double>(++m.count.at(j));
    for (std::size_t i = 0; i < kCueDim; ++i) {
      const double delta = f.cues[i] - m.mean[j][i];
      m.mean[j][i] += delta / n;
      m2[j][i] += delta * (f.cues[i] - m.mean[j][i]);
    }
  }
  for (std::size_t j = 0; j < kPhoneCount; ++j) {
    const double n = static_cast<double>(m.count[j]);
    if (m.count[j] < 2) continue;
    for (std::size_t i = 0; i < kCueDim; ++i)
      m.standard_error[j][i] = std::sqrt(m2[j][i] / (n - 1.0)) / std::sqrt(n);
  }
  return m;
}

/// n_per_phone frames per phone with feature f ~ Normal(mean_f, SE_f),
/// independently per feature, then shuffled. All frames share one word id so
/// a TD learner chains across the whole (uninformative) sequence.
inline FrameDataset gaussian_generate(const FrameDataset &train, const GaussianConfig &config) {
  if (config.n_per_phone == 0) throw ArgumentError("n_per_phone must be at least 1");
  const auto m = phone_moments(train);
  for (std::size_t j = 0; j < kPhoneCount; ++j)
    if (m.count[j] < 2)
      throw DataError("phone '" + train.inventory.label(j) + "' has " + std::to_string(m.count[j]) +
                      " training frames; at least 2 are needed for a standard error");

  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  FrameDataset out{train.inventory, {}};
  out.frames.reserve(kPhoneCount * config.n_per_phone);
  for (std::size_t j = 0; j < kPhoneCount; ++j) {
    for (std::size_t r = 0; r < config.n_per_phone; ++r) {
      LabeledFrame f;
      f.word_id = "gaussian";
      f.phone = j;
      for (std::size_t i = 0; i < kCueDim; ++i)
        f.cues[i] = m.mean[j][i] + m.standard_error[j][i] * unit(rng);
      out.frames.push_back(std::move(f));
    }
  }
  for (std::size_t i = out.frames.size(); i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(out.frames[i - 1], out.frames[pick(rng)]);
  }
  for (std::size_t t = 0; t < out.frames.size(); ++t) out.frames[t].trial_index = t;
  return out;
}

inline std::vector<FrameDataset> gaussian_scaling_series(const FrameDataset &train,
                                                         const std::vector<std::size_t> &sizes,
                                                         std::uint64_t seed) {
  std::vector<FrameDataset> out;
  out.reserve(sizes.size());
  for (std::size_t i = 0; i < sizes.size(); ++i)
    out.push_back(gaussian_generate(train, {sizes[i], derive_seed(seed, "gaussian-scaling", i)}));
  return out;
}

// ---------------------------------------------------------------------------

enum class ReplicationOrder {
  kTiled,        // the whole sample repeated in its original order
  kInterleaved,  // word order reshuffled in every replicate
};

struct SessionConfig {
  std::size_t n_sessions = 5;
  std::size_t vocab_size = 300;
  std::size_t replications = 1000;
  double noise_fraction = 0.5;
  double noise_sd_scale = 0.05;  // multiple of the per-feature SD
  std::size_t test_words = 200;
  std::uint64_t seed = 0;
  ReplicationOrder order = ReplicationOrder::kTiled;

  void validate() const {
    if (!(noise_fraction >= 0.0 && noise_fraction <= 1.0))
      throw ArgumentError("noise_fraction must lie in [0, 1]");
    if (!(noise_sd_scale >= 0.0)) throw ArgumentError("noise_sd_scale must be non-negative");
    if (test_words % 2 != 0) throw ArgumentError("test_words must be even (half known, half new)");
    if (vocab_size == 0 || replications == 0) throw ArgumentError("vocab_size and replications must be positive");
    if (test_words / 2 > vocab_size) throw ArgumentError("more known test words than vocabulary words");
  }
};

struct Session {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::set<std::string> vocabulary;
  std::set<std::string> known_words;
  std::set<std::string> new_words;
  std::size_t noised_frames = 0;
  FrameDataset train;
  FrameDataset test;
};

/// Per-feature sample standard deviation over the whole dataset.
inline Cues feature_sd(const FrameDataset &ds) {
  Cues mean{}, m2{};
  double n = 0.0;
  for (const auto &f : ds.frames) {
    n += 1.0;
    for (std::size_t i = 0; i < kCueDim; ++i) {
      const double d = f.cues[i] - mean[i];
      mean[i] += d / n;
      m2[i] += d * (f.cues[i] - mean[i]);
    }
  }
  Cues sd{};
  if (n > 1.0)
    for (std::size_t i = 0; i < kCueDim; ++i) sd[i] = std::sqrt(m2[i] / (n - 1.0));
  return sd;
}

namespace detail {

inline std::vector<std::string> draw(std::vector<std::string> pool, std::size_t n, std::mt19937_64 &rng) {
  for (std::size_t i = 0; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(n);
  return pool;
}

}  // namespace detail

inline Session build_session(const FrameDataset &corpus, const SessionConfig &config,
                             std::size_t session_index) {
  config.validate();
  const auto words = distinct_words(corpus);
  const std::size_t half = config.test_words / 2;
  if (words.size() < config.vocab_size + half)
    throw ArgumentError("corpus has " + std::to_string(words.size()) + " words; session needs " +
                        std::to_string(config.vocab_size + half));

  Session s;
  s.index = session_index;
  s.seed = derive_seed(config.seed, "session", session_index);
  s.vocabulary = sample_vocabulary(corpus, config.vocab_size, derive_seed(s.seed, "vocabulary"));

  // Contiguous runs of the sampled words, in corpus order.
  std::vector<std::vector<const LabeledFrame *>> runs;
  for (const auto &f : corpus.frames) {
    if (!s.vocabulary.count(f.word_id)) continue;
    if (runs.empty() || runs.back().back()->word_id != f.word_id) runs.emplace_back();
    runs.back().push_back(&f);
  }
  std::size_t base = 0;
  for (const auto &r : runs) base += r.size();

  std::mt19937_64 order_rng(derive_seed(s.seed, "order"));
  s.train.inventory = corpus.inventory;
  s.train.frames.reserve(base * config.replications);
  std::vector<std::size_t> perm(runs.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  for (std::size_t rep = 0; rep < config.replications; ++rep) {
    if (config.order == ReplicationOrder::kInterleaved) std::shuffle(perm.begin(), perm.end(), order_rng);
    for (auto r : perm)
      for (const auto *f : runs[r]) s.train.frames.push_back(*f);
  }
  for (std::size_t t = 0; t < s.train.frames.size(); ++t) s.train.frames[t].trial_index = t;

  // Selection sampling: exactly round(fraction * N) frames, uniformly.
  const std::size_t total = s.train.frames.size();
  const auto target = static_cast<std::size_t>(
      std::floor(config.noise_fraction * static_cast<double>(total) + 0.5));
  const Cues sd = feature_sd(corpus);
  std::mt19937_64 noise_rng(derive_seed(s.seed, "noise"));
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::normal_distribution<double> unit(0.0, 1.0);
  std::size_t chosen = 0;
  for (std::size_t t = 0; t < total && chosen < target; ++t) {
    const double p = static_cast<double>(target - chosen) / static_cast<double>(total - t);
    if (coin(noise_rng) >= p) continue;
    ++chosen;
    for (std::size_t i = 0; i < kCueDim; ++i)
      s.train.frames[t].cues[i] += config.noise_sd_scale * sd[i] * unit(noise_rng);
  }
  s.noised_frames = chosen;

  std::mt19937_64 test_rng(derive_seed(s.seed, "test"));
  std::vector<std::string> vocab(s.vocabulary.begin(), s.vocabulary.end());
  std::vector<std::string> outside;
  for (const auto &w : words)
    if (!s.vocabulary.count(w)) outside.push_back(w);
  const auto known = detail::draw(std::move(vocab), half, test_rng);
  const auto fresh = detail::draw(std::move(outside), half, test_rng);
  s.known_words = {known.begin(), known.end()};
  s.new_words = {fresh.begin(), fresh.end()};
  std::set<std::string> test_set = s.known_words;
  test_set.insert(s.new_words.begin(), s.new_words.end());
  s.test = select_words(corpus, test_set);
  return s;
}

/// Audit record of a session: seeds, word lists, sizes.
inline nlohmann::json session_manifest(const Session &s, const SessionConfig &config) {
  return {
      {"session_index", s.index},
      {"session_seed", s.seed},
      {"master_seed", config.seed},
      {"vocab_size", config.vocab_size},
      {"replications", config.replications},
      {"noise_fraction", config.noise_fraction},
      {"noise_sd_scale", config.noise_sd_scale},
      {"order", config.order == ReplicationOrder::kTiled ? "tiled" : "interleaved"},
      {"vocabulary", s.vocabulary},
      {"known_test_words", s.known_words},
      {"new_test_words", s.new_words},
      {"train_frames", s.train.size()},
      {"noised_frames", s.noised_frames},
      {"test_frames", s.test.size()},
  };
}

}  // namespace phonelearn

#endif  // PHONELEARN_REGIMES_HPP_
