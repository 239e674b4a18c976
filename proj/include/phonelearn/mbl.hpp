// include/phonelearn/mbl.hpp

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

// Exemplar memory with exact Euclidean k-nearest-neighbour majority vote.

#ifndef PHONELEARN_MBL_HPP_
#define PHONELEARN_MBL_HPP_

#include <algorithm>
#include <array>
#include <cstddef>
#include <limits>
#include <span>
#include <thread>
#include <utility>
#include <vector>

#include "phonelearn/corpus.hpp"
#include "phonelearn/error.hpp"

namespace phonelearn {

struct MblConfig {
  std::size_t k = 7;
};

/// Stored (cue vector, phone) pairs in insertion order, kept verbatim.
class ExemplarStore {
 public:
  explicit ExemplarStore(PhoneInventory inventory = PhoneInventory::standard())
      : inventory_(std::move(inventory)) {}

  void add(const Cues &cues, PhoneIndex phone) {
    if (phone >= inventory_.size()) throw InventoryError("exemplar phone outside the inventory");
    cues_.insert(cues_.end(), cues.begin(), cues.end());
    phones_.push_back(phone);
  }

  std::size_t size() const noexcept { return phones_.size(); }
  bool empty() const noexcept { return phones_.empty(); }
  const PhoneInventory &inventory() const noexcept { return inventory_; }
  PhoneIndex phone(std::size_t i) const { return phones_.at(i); }
  std::span<const double, kCueDim> cues(std::size_t i) const {
    return std::span<const double, kCueDim>(cues_.data() + i * kCueDim, kCueDim);
  }

 private:
  PhoneInventory inventory_;
  std::vector<double> cues_;  // row-major, size() x kCueDim
  std::vector<PhoneIndex> phones_;
};

inline ExemplarStore store(std::span<const LabeledFrame> pairs,
                           PhoneInventory inventory = PhoneInventory::standard()) {
  ExemplarStore s(std::move(inventory));
  for (const auto &f : pairs) s.add(f.cues, f.phone);
  return s;
}

inline ExemplarStore store(const FrameDataset &dataset) {
  return store(dataset.frames, dataset.inventory);
}

struct Neighbor {
  std::size_t index = 0;
  double squared_distance = 0.0;
};

/// The k nearest exemplars ordered by (distance, insertion index).
inline std::vector<Neighbor> knn(const ExemplarStore &s, const Cues &query, std::size_t k) {
  if (k == 0) throw ArgumentError("k must be at least 1");
  if (k > s.size())
    throw ArgumentError("k = " + std::to_string(k) + " exceeds store size " + std::to_string(s.size()));

  // Sorted ascending by (distance, index); `best.back()` is the current k-th.
  std::vector<Neighbor> best;
  best.reserve(k + 1);
  const auto before = [](const Neighbor &a, const Neighbor &b) {
    return a.squared_distance < b.squared_distance ||
           (a.squared_distance == b.squared_distance && a.index < b.index);
  };
  double bound = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto row = s.cues(i);
    double d = 0.0;
    std::size_t f = 0;
    for (; f < kCueDim; ++f) {
      const double diff = row[f] - query[f];
      d += diff * diff;
      // Partial sums only grow; an exemplar already farther than the k-th
      // cannot enter (later indices lose exact ties).
      if (d > bound) break;
    }
    if (f < kCueDim) continue;
    if (best.size() == k && !(d < bound)) continue;
    Neighbor n{i, d};
    best.insert(std::upper_bound(best.begin(), best.end(), n, before), n);
    if (best.size() > k) best.pop_back();
    if (best.size() == k) bound = best.back().squared_distance;
  }
  return best;
}

struct VoteResult {
  PhoneIndex phone = 0;
  double confidence = 0.0;  // winning votes / k
  std::vector<std::size_t> neighbor_ids;
  std::array<std::size_t, kPhoneCount> votes{};
};

/// Majority label among the k neighbours. A tied vote goes to the tied label
/// whose nearest member ranks first in the neighbour order.
inline VoteResult predict(const ExemplarStore &s, const Cues &query, const MblConfig &config = {}) {
  const auto neighbors = knn(s, query, config.k);
  VoteResult r;
  r.neighbor_ids.reserve(neighbors.size());
  for (const auto &n : neighbors) {
    r.neighbor_ids.push_back(n.index);
    ++r.votes[s.phone(n.index)];
  }
  std::size_t top = 0;
  for (auto v : r.votes) top = std::max(top, v);
  for (const auto &n : neighbors) {
    if (r.votes[s.phone(n.index)] == top) {
      r.phone = s.phone(n.index);
      break;
    }
  }
  r.confidence = static_cast<double>(top) / static_cast<double>(config.k);
  return r;
}

/// Predicts every query, splitting the work over `threads` workers.
inline std::vector<VoteResult> predict_all(const ExemplarStore &s, std::span<const LabeledFrame> queries,
                                           const MblConfig &config = {}, std::size_t threads = 1) {
  if (config.k > s.size())
    throw ArgumentError("k = " + std::to_string(config.k) + " exceeds store size " +
                        std::to_string(s.size()));
  std::vector<VoteResult> out(queries.size());
  threads = std::max<std::size_t>(1, std::min(threads, queries.size()));
  const auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) out[i] = predict(s, queries[i].cues, config);
  };
  if (threads == 1) {
    work(0, queries.size());
    return out;
  }
  {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (queries.size() + threads - 1) / threads;
    for (std::size_t b = 0; b < queries.size(); b += chunk)
      pool.emplace_back(work, b, std::min(queries.size(), b + chunk));
  }
  return out;
}

}  // namespace phonelearn

#endif  // PHONELEARN_MBL_HPP_
