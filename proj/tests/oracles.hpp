// tests/oracles.hpp

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

// Slow, obviously-correct reference implementations shared by the unit tests
// and the acceptance driver.

#ifndef PHONELEARN_TESTS_ORACLES_HPP_
#define PHONELEARN_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "phonelearn/corpus.hpp"

namespace phonelearn::testing {

// Exhaustive scan: sort every exemplar by (distance, index), count the first k.
struct OracleResult {
  std::vector<std::size_t> ids;
  PhoneIndex phone = 0;
  std::size_t top = 0;
};

inline OracleResult oracle(const std::vector<LabeledFrame> &train, const Cues &q, std::size_t k) {
  std::vector<std::pair<double, std::size_t>> d;
  for (std::size_t i = 0; i < train.size(); ++i) {
    double s = 0.0;
    for (std::size_t f = 0; f < kCueDim; ++f) s += (train[i].cues[f] - q[f]) * (train[i].cues[f] - q[f]);
    d.emplace_back(s, i);
  }
  std::sort(d.begin(), d.end());
  OracleResult r{};
  std::map<PhoneIndex, std::size_t> count;
  for (std::size_t n = 0; n < k; ++n) {
    r.ids.push_back(d[n].second);
    r.top = std::max(r.top, ++count[train[d[n].second].phone]);
  }
  for (std::size_t n = 0; n < k; ++n)
    if (count[train[d[n].second].phone] == r.top) {
      r.phone = train[d[n].second].phone;
      break;
    }
  return r;
}

// O(n^2) pair counting with tie corrections.
inline double tau_b_oracle(const std::vector<double> &x, const std::vector<double> &y) {
  const std::size_t n = x.size();
  double c = 0, d = 0, tx = 0, ty = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double a = x[i] - x[j], b = y[i] - y[j];
      if (a == 0) ++tx;
      if (b == 0) ++ty;
      if (a != 0 && b != 0) (a * b > 0 ? c : d) += 1;
    }
  const double n0 = n * (n - 1) / 2.0;
  return (c - d) / std::sqrt((n0 - tx) * (n0 - ty));
}

// Recomputes the Ward criterion 2 na nb / (na + nb) |ca - cb|^2 from cluster
// centroids at every step; no recurrence.
inline std::vector<std::pair<std::vector<std::size_t>, double>> ward_oracle(const Eigen::MatrixXd &x) {
  std::vector<std::vector<std::size_t>> clusters;
  for (Eigen::Index i = 0; i < x.rows(); ++i) clusters.push_back({static_cast<std::size_t>(i)});
  const auto centroid = [&](const std::vector<std::size_t> &c) {
    Eigen::RowVectorXd s = Eigen::RowVectorXd::Zero(x.cols());
    for (auto i : c) s += x.row(static_cast<Eigen::Index>(i));
    return Eigen::RowVectorXd(s / static_cast<double>(c.size()));
  };
  std::vector<std::pair<std::vector<std::size_t>, double>> merges;
  while (clusters.size() > 1) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < clusters.size(); ++i)
      for (std::size_t j = i + 1; j < clusters.size(); ++j) {
        const double na = clusters[i].size(), nb = clusters[j].size();
        const double v = 2.0 * na * nb / (na + nb) * (centroid(clusters[i]) - centroid(clusters[j])).squaredNorm();
        if (v < best) {
          best = v;
          bi = i;
          bj = j;
        }
      }
    std::vector<std::size_t> merged = clusters[bi];
    merged.insert(merged.end(), clusters[bj].begin(), clusters[bj].end());
    std::sort(merged.begin(), merged.end());
    merges.emplace_back(merged, best);
    clusters[bi] = merged;
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bj));
  }
  return merges;
}

}  // namespace phonelearn::testing

#endif  // PHONELEARN_TESTS_ORACLES_HPP_
