// include/phonelearn/corpus.hpp

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

// Data model for learning trials: the phone inventory, forced-alignment
// segments, labeled MFCC frames, and the TSV/CSV formats they live in.

#ifndef PHONELEARN_CORPUS_HPP_
#define PHONELEARN_CORPUS_HPP_

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "phonelearn/error.hpp"
#include "phonelearn/util.hpp"

namespace phonelearn {

inline constexpr std::size_t kCepstra = 13;
inline constexpr std::size_t kCueDim = 3 * kCepstra;  // c, delta, delta-delta
inline constexpr std::size_t kPhoneCount = 40;

using Cues = std::array<double, kCueDim>;
using PhoneIndex = std::size_t;

/// The ordered outcome classes. Column j of a weight matrix and entry j of a
/// one-hot outcome both refer to `label(j)`.
class PhoneInventory {
 public:
  static constexpr std::string_view kSilence = "sil";

  /// 39 ARPAbet phones plus silence, alphabetical with silence last.
  static PhoneInventory standard() {
    return PhoneInventory({"aa", "ae", "ah", "ao", "aw", "ay", "b",  "ch", "d",  "dh",
                           "eh", "er", "ey", "f",  "g",  "hh", "ih", "iy", "jh", "k",
                           "l",  "m",  "n",  "ng", "ow", "oy", "p",  "r",  "s",  "sh",
                           "t",  "th", "uh", "uw", "v",  "w",  "y",  "z",  "zh", "sil"});
  }

  explicit PhoneInventory(std::vector<std::string> labels) {
    if (labels.size() != kPhoneCount)
      throw InventoryError("inventory needs exactly " + std::to_string(kPhoneCount) +
                           " labels, got " + std::to_string(labels.size()));
    for (std::size_t i = 0; i < labels.size(); ++i) {
      labels[i] = to_lower(trim(labels[i]));
      if (labels[i].empty()) throw InventoryError("empty phone label");
      if (!index_.emplace(labels[i], i).second)
        throw InventoryError("duplicate phone label '" + labels[i] + "'");
    }
    labels_ = std::move(labels);
  }

  std::size_t size() const noexcept { return labels_.size(); }
  const std::string &label(PhoneIndex i) const { return labels_.at(i); }
  const std::vector<std::string> &labels() const noexcept { return labels_; }

  /// Case-insensitive lookup. ARPAbet stress digits ("AH0") are dropped and
  /// the aligner's silence spellings ("sp", "sil", "silence", "pau") map to
  /// the silence label when the inventory has one.
  std::optional<PhoneIndex> find(std::string_view raw) const {
    std::string key = to_lower(trim(raw));
    if (auto it = index_.find(key); it != index_.end()) return it->second;
    while (key.size() > 1 && std::isdigit(static_cast<unsigned char>(key.back()))) key.pop_back();
    if (auto it = index_.find(key); it != index_.end()) return it->second;
    if (key == "sp" || key == "sil" || key == "silence" || key == "pau" || key == "<sil>") {
      if (auto it = index_.find(std::string(kSilence)); it != index_.end()) return it->second;
    }
    return std::nullopt;
  }

  PhoneIndex index_of(std::string_view raw) const {
    if (auto i = find(raw)) return *i;
    throw InventoryError("unknown phone label '" + std::string(raw) + "'");
  }

  friend bool operator==(const PhoneInventory &a, const PhoneInventory &b) {
    return a.labels_ == b.labels_;
  }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, PhoneIndex> index_;
};

struct PhoneSegment {
  std::string word_id;
  PhoneIndex phone = 0;
  double start = 0.0;  // seconds
  double end = 0.0;

  friend bool operator==(const PhoneSegment &, const PhoneSegment &) = default;
};

/// One learning trial.
struct LabeledFrame {
  std::string word_id;
  std::uint64_t trial_index = 0;
  PhoneIndex phone = 0;
  Cues cues{};

  friend bool operator==(const LabeledFrame &, const LabeledFrame &) = default;
};

struct FrameDataset {
  PhoneInventory inventory = PhoneInventory::standard();
  std::vector<LabeledFrame> frames;

  std::size_t size() const noexcept { return frames.size(); }
  bool empty() const noexcept { return frames.empty(); }

  /// Throws if a phone is out of range or trial indices are not strictly increasing.
  void validate() const {
    for (std::size_t i = 0; i < frames.size(); ++i) {
      if (frames[i].phone >= inventory.size())
        throw InventoryError("frame " + std::to_string(i) + " has phone index " +
                             std::to_string(frames[i].phone) + " outside the inventory");
      if (i > 0 && frames[i].trial_index <= frames[i - 1].trial_index)
        throw OrderingError("trial_index not strictly increasing at frame " + std::to_string(i) +
                            " (" + std::to_string(frames[i - 1].trial_index) + " then " +
                            std::to_string(frames[i].trial_index) + ")");
    }
  }

  friend bool operator==(const FrameDataset &, const FrameDataset &) = default;
};

// ---------------------------------------------------------------------------
// Alignment TSV: word_id <tab> phone <tab> start <tab> end. '#' lines are comments.

inline std::vector<PhoneSegment> read_alignments(
    std::istream &in, const PhoneInventory &inventory = PhoneInventory::standard()) {
  std::vector<PhoneSegment> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (trim(line).empty() || line.front() == '#') continue;
    auto cols = split(line, '\t');
    if (cols.size() != 4)
      throw ParseError("expected 4 tab-separated columns, got " + std::to_string(cols.size()),
                       lineno);
    auto start = parse_double(cols[2]);
    auto end = parse_double(cols[3]);
    if (!start || !end) throw ParseError("non-numeric time", lineno);
    if (!(*start >= 0.0)) throw ParseError("negative start time", lineno);
    if (!(*end > *start)) throw ParseError("end time must exceed start time", lineno);
    std::string word = trim(cols[0]);
    if (word.empty()) throw ParseError("empty word_id", lineno);
    auto phone = inventory.find(cols[1]);
    if (!phone)
      throw InventoryError("line " + std::to_string(lineno) + ": unknown phone label '" +
                           trim(cols[1]) + "'");
    out.push_back({std::move(word), *phone, *start, *end});
  }
  return out;
}

inline std::vector<PhoneSegment> load_alignments(
    const std::string &path, const PhoneInventory &inventory = PhoneInventory::standard()) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open alignment file '" + path + "'");
  return read_alignments(in, inventory);
}

// ---------------------------------------------------------------------------
// Feature table CSV: word_id,trial_index,phone,mfcc_00..mfcc_38

inline std::string feature_table_header() {
  std::string h = "word_id,trial_index,phone";
  char buf[16];
  for (std::size_t i = 0; i < kCueDim; ++i) {
    std::snprintf(buf, sizeof buf, ",mfcc_%02zu", i);
    h += buf;
  }
  return h;
}

inline void write_feature_table(std::ostream &out, const FrameDataset &dataset) {
  out << feature_table_header() << '\n';
  for (const auto &f : dataset.frames) {
    out << f.word_id << ',' << f.trial_index << ',' << dataset.inventory.label(f.phone);
    for (double v : f.cues) out << ',' << format_double(v);
    out << '\n';
  }
}

inline void write_feature_table(const std::string &path, const FrameDataset &dataset) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write feature table '" + path + "'");
  write_feature_table(out, dataset);
  if (!out) throw IoError("write failed for '" + path + "'");
}

inline FrameDataset read_feature_table(std::istream &in, const PhoneInventory &inventory) {
  FrameDataset ds{inventory, {}};
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError("missing header", 1);
  ++lineno;
  strip_cr(line);
  const auto header = split(line, ',');
  if (header.size() != 3 + kCueDim)
    throw ParseError("header has " + std::to_string(header.size()) + " columns, expected " +
                         std::to_string(3 + kCueDim),
                     lineno);
  if (line != feature_table_header()) throw ParseError("unexpected header column names", lineno);

  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty()) continue;
    auto cols = split(line, ',');
    if (cols.size() != 3 + kCueDim)
      throw ParseError("expected " + std::to_string(3 + kCueDim) + " columns, got " +
                           std::to_string(cols.size()),
                       lineno);
    LabeledFrame f;
    f.word_id = cols[0];
    auto ti = parse_uint(cols[1]);
    if (!ti) throw ParseError("bad trial_index '" + cols[1] + "'", lineno);
    f.trial_index = *ti;
    auto phone = inventory.find(cols[2]);
    if (!phone)
      throw InventoryError("line " + std::to_string(lineno) + ": phone '" + cols[2] +
                           "' not in inventory");
    f.phone = *phone;
    for (std::size_t i = 0; i < kCueDim; ++i) {
      auto v = parse_double(cols[3 + i]);
      if (!v) throw ParseError("non-numeric value in column " + header[3 + i], lineno);
      f.cues[i] = *v;
    }
    if (!ds.frames.empty() && f.trial_index <= ds.frames.back().trial_index)
      throw OrderingError("line " + std::to_string(lineno) +
                          ": trial_index not strictly increasing");
    ds.frames.push_back(std::move(f));
  }
  return ds;
}

inline FrameDataset load_feature_table(const std::string &path,
                                       const PhoneInventory &inventory = PhoneInventory::standard()) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open feature table '" + path + "'");
  return read_feature_table(in, inventory);
}

// ---------------------------------------------------------------------------

/// Uniform random subset of round-half-up(test_fraction * N) frames goes to
/// test; both parts keep the original temporal order.
inline std::pair<FrameDataset, FrameDataset> split_train_test(const FrameDataset &dataset,
                                                              double test_fraction,
                                                              std::uint64_t seed) {
  if (dataset.empty()) throw ArgumentError("cannot split an empty dataset");
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw ArgumentError("test_fraction must lie in (0, 1)");
  const std::size_t n = dataset.size();
  const auto n_test =
      static_cast<std::size_t>(std::floor(test_fraction * static_cast<double>(n) + 0.5));

  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < n_test; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  std::vector<char> is_test(n, 0);
  for (std::size_t i = 0; i < n_test; ++i) is_test[idx[i]] = 1;

  FrameDataset train{dataset.inventory, {}}, test{dataset.inventory, {}};
  train.frames.reserve(n - n_test);
  test.frames.reserve(n_test);
  for (std::size_t i = 0; i < n; ++i)
    (is_test[i] ? test : train).frames.push_back(dataset.frames[i]);
  return {std::move(train), std::move(test)};
}

/// Distinct word ids in order of first appearance.
inline std::vector<std::string> distinct_words(const FrameDataset &dataset) {
  std::vector<std::string> words;
  std::unordered_set<std::string> seen;
  for (const auto &f : dataset.frames)
    if (seen.insert(f.word_id).second) words.push_back(f.word_id);
  return words;
}

/// n_words distinct ids drawn uniformly without replacement.
inline std::set<std::string> sample_vocabulary(const FrameDataset &dataset, std::size_t n_words,
                                               std::uint64_t seed) {
  auto words = distinct_words(dataset);
  if (words.size() < n_words)
    throw ArgumentError("requested " + std::to_string(n_words) + " words but dataset has only " +
                        std::to_string(words.size()));
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < n_words; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, words.size() - 1);
    std::swap(words[i], words[pick(rng)]);
  }
  return {words.begin(), words.begin() + static_cast<std::ptrdiff_t>(n_words)};
}

/// Frames whose word_id is in `words`, original order kept.
inline FrameDataset select_words(const FrameDataset &dataset, const std::set<std::string> &words) {
  FrameDataset out{dataset.inventory, {}};
  for (const auto &f : dataset.frames)
    if (words.count(f.word_id)) out.frames.push_back(f);
  return out;
}

inline std::array<double, kPhoneCount> label_distribution(const FrameDataset &dataset) {
  if (dataset.empty()) throw ArgumentError("label distribution of an empty dataset");
  std::array<std::size_t, kPhoneCount> counts{};
  for (const auto &f : dataset.frames) ++counts.at(f.phone);
  std::array<double, kPhoneCount> p{};
  const auto n = static_cast<double>(dataset.size());
  for (std::size_t j = 0; j < kPhoneCount; ++j) p[j] = static_cast<double>(counts[j]) / n;
  return p;
}

}  // namespace phonelearn

#endif  // PHONELEARN_CORPUS_HPP_
