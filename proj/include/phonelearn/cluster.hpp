// include/phonelearn/cluster.hpp

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

// Ward hierarchical clustering of per-phone profiles, multiscale bootstrap
// support (AU / BP p-values) and dendrogram export (Newick, DOT, JSON).

#ifndef PHONELEARN_CLUSTER_HPP_
#define PHONELEARN_CLUSTER_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/distributions/normal.hpp>
#include <nlohmann/json.hpp>

#include "phonelearn/corpus.hpp"
#include "phonelearn/ecl.hpp"
#include "phonelearn/error.hpp"
#include "phonelearn/mbl.hpp"
#include "phonelearn/util.hpp"

namespace phonelearn {

/// One row per item (phone); columns are the item's features.
struct PhoneProfileMatrix {
  std::vector<std::string> labels;
  Eigen::MatrixXd values;
  std::string source;  // WH | TD | MBL

  std::size_t items() const { return static_cast<std::size_t>(values.rows()); }
  std::size_t features() const { return static_cast<std::size_t>(values.cols()); }
};

/// Phone j's profile is column j of W, its 39 cue weights.
inline PhoneProfileMatrix ecl_profiles(const WeightMatrix &w, std::string source = "WH") {
  if (!w.all_finite()) throw DataError("weight matrix has non-finite entries");
  return {w.inventory.labels(), w.values.transpose(), std::move(source)};
}

/// A test frame's true phone with the vote counts its k neighbours cast.
struct VoteRecord {
  PhoneIndex true_phone = 0;
  std::array<std::size_t, kPhoneCount> votes{};
};

/// Phone i's profile is its mean vote-share vector over test frames of phone i.
inline PhoneProfileMatrix mbl_profiles(std::span<const VoteRecord> records, const PhoneInventory &inv) {
  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(kPhoneCount, kPhoneCount);
  std::array<std::size_t, kPhoneCount> n{};
  for (const auto &r : records) {
    std::size_t k = 0;
    for (auto v : r.votes) k += v;
    if (k == 0) throw DataError("vote record without votes");
    ++n.at(r.true_phone);
    for (std::size_t j = 0; j < kPhoneCount; ++j)
      sums(static_cast<Eigen::Index>(r.true_phone), static_cast<Eigen::Index>(j)) +=
          static_cast<double>(r.votes[j]) / static_cast<double>(k);
  }
  for (std::size_t i = 0; i < kPhoneCount; ++i) {
    if (n[i] == 0) throw DataError("phone '" + inv.label(i) + "' has no test records");
    sums.row(static_cast<Eigen::Index>(i)) /= static_cast<double>(n[i]);
  }
  return {inv.labels(), std::move(sums), "MBL"};
}

/// Keeps only the listed items, in the given order.
inline PhoneProfileMatrix select_items(const PhoneProfileMatrix &p, std::span<const std::size_t> items) {
  PhoneProfileMatrix out{{}, Eigen::MatrixXd(static_cast<Eigen::Index>(items.size()), p.values.cols()), p.source};
  for (std::size_t r = 0; r < items.size(); ++r) {
    out.labels.push_back(p.labels.at(items[r]));
    out.values.row(static_cast<Eigen::Index>(r)) = p.values.row(static_cast<Eigen::Index>(items[r]));
  }
  return out;
}

// ---------------------------------------------------------------------------

/// Child ids follow the usual convention: 0..n-1 are leaves, n+k is node k.
struct DendrogramNode {
  std::size_t left = 0;
  std::size_t right = 0;
  double height = 0.0;
  std::vector<std::size_t> leaves;  // sorted leaf indices
  std::optional<double> au;
  std::optional<double> bp;
  std::vector<double> bp_by_scale;  // raw replicate fractions, one per scale
};

struct Dendrogram {
  std::vector<std::string> labels;
  std::vector<DendrogramNode> nodes;  // in merge order
  std::vector<double> scales;         // sample-size ratios actually used
  std::size_t n_boot = 0;

  std::size_t leaf_count() const { return labels.size(); }
};

/// Agglomerative Ward clustering via the Lance-Williams recurrence on squared
/// Euclidean distances. The merge height is the recurrence value, so two
/// singletons merge at their squared distance. Ties go to the lowest slot pair.
inline Dendrogram ward_cluster(const Eigen::MatrixXd &x, std::vector<std::string> labels = {}) {
  const auto n = static_cast<std::size_t>(x.rows());
  if (n < 2) throw ArgumentError("ward clustering needs at least 2 items");
  if (labels.empty())
    for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  if (labels.size() != n) throw ArgumentError("label count does not match item count");

  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      d[i * n + j] = d[j * n + i] =
          (x.row(static_cast<Eigen::Index>(i)) - x.row(static_cast<Eigen::Index>(j))).squaredNorm();

  std::vector<std::size_t> id(n), size(n, 1);
  std::vector<std::vector<std::size_t>> members(n);
  std::vector<char> active(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    id[i] = i;
    members[i] = {i};
  }

  Dendrogram out;
  out.labels = std::move(labels);
  out.nodes.reserve(n - 1);
  for (std::size_t step = 0; step + 1 < n; ++step) {
    std::size_t bi = 0, bj = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      for (std::size_t j = i + 1; j < n; ++j)
        if (active[j] && d[i * n + j] < best) {
          best = d[i * n + j];
          bi = i;
          bj = j;
        }
    }
    const double ni = static_cast<double>(size[bi]), nj = static_cast<double>(size[bj]);
    for (std::size_t k = 0; k < n; ++k) {
      if (!active[k] || k == bi || k == bj) continue;
      const double nk = static_cast<double>(size[k]);
      const double v = ((ni + nk) * d[bi * n + k] + (nj + nk) * d[bj * n + k] - nk * best) / (ni + nj + nk);
      d[bi * n + k] = d[k * n + bi] = v;
    }
    DendrogramNode node;
    node.left = id[bi];
    node.right = id[bj];
    node.height = best;
    std::merge(members[bi].begin(), members[bi].end(), members[bj].begin(), members[bj].end(),
               std::back_inserter(node.leaves));
    members[bi] = node.leaves;
    members[bj].clear();
    size[bi] += size[bj];
    active[bj] = 0;
    id[bi] = n + step;
    out.nodes.push_back(std::move(node));
  }
  return out;
}

inline Dendrogram ward_cluster(const PhoneProfileMatrix &profiles) {
  if (!profiles.values.allFinite()) throw DataError("profile matrix has non-finite entries");
  return ward_cluster(profiles.values, profiles.labels);
}

// ---------------------------------------------------------------------------

struct MultiscaleFit {
  std::optional<double> au;
  double v = 0.0;  // signed distance
  double c = 0.0;  // curvature
  bool fitted = false;
};

/// Fits z_r = v sqrt(r) + c / sqrt(r), z_r = Phi^-1(1 - BP_r), by weighted
/// least squares over scales with 0 < BP_r < 1 (r = bootstrap sample size /
/// original size). AU = 1 - Phi(v - c). With fewer than two such scales the
/// node is certain (all BP = 1 gives AU = 1, all BP = 0 gives AU = 0) or AU is
/// unavailable.
inline MultiscaleFit fit_multiscale(std::span<const double> bp, std::span<const double> scales,
                                    std::size_t n_boot) {
  if (bp.size() != scales.size()) throw ArgumentError("bp and scale counts differ");
  const boost::math::normal_distribution<double> unit;
  MultiscaleFit fit;
  if (n_boot == 0 || bp.empty()) return fit;
  const double lo = 1.0 / (2.0 * static_cast<double>(n_boot)), hi = 1.0 - lo;

  double s11 = 0, s12 = 0, s22 = 0, t1 = 0, t2 = 0;
  std::size_t usable = 0;
  bool all_one = true, all_zero = true;
  for (std::size_t i = 0; i < bp.size(); ++i) {
    all_one = all_one && bp[i] >= 1.0;
    all_zero = all_zero && bp[i] <= 0.0;
    if (!(bp[i] > 0.0 && bp[i] < 1.0)) continue;
    ++usable;
    const double p = std::clamp(bp[i], lo, hi);
    const double z = boost::math::quantile(boost::math::complement(unit, p));
    const double dens = boost::math::pdf(unit, z);
    const double w = static_cast<double>(n_boot) * dens * dens / (p * (1.0 - p));
    const double a = std::sqrt(scales[i]), b = 1.0 / std::sqrt(scales[i]);
    s11 += w * a * a;
    s12 += w * a * b;
    s22 += w * b * b;
    t1 += w * a * z;
    t2 += w * b * z;
  }
  if (usable < 2) {
    if (all_one) fit.au = 1.0;
    if (all_zero) fit.au = 0.0;
    return fit;
  }
  const double det = s11 * s22 - s12 * s12;
  if (!(std::abs(det) > 1e-12 * (s11 * s22))) return fit;
  fit.v = (t1 * s22 - t2 * s12) / det;
  fit.c = (s11 * t2 - s12 * t1) / det;
  fit.fitted = true;
  fit.au = boost::math::cdf(boost::math::complement(unit, fit.v - fit.c));
  return fit;
}

struct BootstrapConfig {
  std::size_t n_boot = 1000;
  std::vector<double> scales = {0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.1, 1.2, 1.3, 1.4};
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

namespace detail {

using LeafMask = std::vector<std::uint64_t>;

inline LeafMask to_mask(const std::vector<std::size_t> &leaves, std::size_t n) {
  LeafMask m((n + 63) / 64, 0);
  for (auto l : leaves) m[l / 64] |= std::uint64_t{1} << (l % 64);
  return m;
}

}  // namespace detail

/// Resamples feature columns with replacement at each scale, reclusters, and
/// records how often each node's exact leaf set reappears. BP is the raw
/// fraction at scale 1; AU comes from fit_multiscale. n_boot = 0 leaves both
/// unavailable.
inline Dendrogram bootstrap_pvalues(const PhoneProfileMatrix &profiles, Dendrogram tree,
                                    const BootstrapConfig &config = {}) {
  const std::size_t n = profiles.items(), p = profiles.features();
  if (tree.leaf_count() != n || tree.nodes.size() + 1 != n)
    throw ArgumentError("dendrogram was not built from these profiles");
  if (p == 0) throw ArgumentError("profiles have no features to resample");
  for (auto &node : tree.nodes) {
    node.au.reset();
    node.bp.reset();
    node.bp_by_scale.clear();
  }
  tree.n_boot = config.n_boot;
  tree.scales.clear();
  if (config.n_boot == 0) return tree;

  std::vector<double> requested = config.scales;
  if (std::none_of(requested.begin(), requested.end(), [](double r) { return std::abs(r - 1.0) < 1e-12; }))
    requested.push_back(1.0);
  std::sort(requested.begin(), requested.end());

  std::vector<detail::LeafMask> targets;
  for (const auto &node : tree.nodes) targets.push_back(detail::to_mask(node.leaves, n));

  const std::size_t n_scales = requested.size();
  std::vector<std::size_t> sample_size(n_scales);
  std::size_t unit_scale = 0;
  for (std::size_t s = 0; s < n_scales; ++s) {
    if (!(requested[s] > 0.0)) throw ArgumentError("bootstrap scales must be positive");
    sample_size[s] = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(requested[s] * static_cast<double>(p))));
    tree.scales.push_back(static_cast<double>(sample_size[s]) / static_cast<double>(p));
    if (std::abs(requested[s] - 1.0) < 1e-12) unit_scale = s;
  }

  // hits[s * nodes + k]
  const std::size_t n_nodes = tree.nodes.size();
  const std::size_t jobs = n_scales * config.n_boot;
  const auto run = [&](std::size_t begin, std::size_t end, std::vector<std::size_t> &hits) {
    Eigen::MatrixXd x;
    for (std::size_t job = begin; job < end; ++job) {
      const std::size_t s = job / config.n_boot;
      std::mt19937_64 rng(derive_seed(config.seed, "bootstrap", job));
      std::uniform_int_distribution<std::size_t> pick(0, p - 1);
      x.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(sample_size[s]));
      for (std::size_t c = 0; c < sample_size[s]; ++c)
        x.col(static_cast<Eigen::Index>(c)) = profiles.values.col(static_cast<Eigen::Index>(pick(rng)));
      const auto rep = ward_cluster(x, tree.labels);
      std::vector<detail::LeafMask> found;
      found.reserve(rep.nodes.size());
      for (const auto &node : rep.nodes) found.push_back(detail::to_mask(node.leaves, n));
      std::sort(found.begin(), found.end());
      for (std::size_t k = 0; k < n_nodes; ++k)
        if (std::binary_search(found.begin(), found.end(), targets[k])) ++hits[s * n_nodes + k];
    }
  };

  const std::size_t threads = std::max<std::size_t>(1, std::min(config.threads, jobs));
  std::vector<std::vector<std::size_t>> partial(threads, std::vector<std::size_t>(n_scales * n_nodes, 0));
  if (threads == 1) {
    run(0, jobs, partial[0]);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (jobs + threads - 1) / threads;
    for (std::size_t t = 0; t < threads; ++t)
      pool.emplace_back(run, t * chunk, std::min(jobs, (t + 1) * chunk), std::ref(partial[t]));
  }

  for (std::size_t k = 0; k < n_nodes; ++k) {
    auto &node = tree.nodes[k];
    for (std::size_t s = 0; s < n_scales; ++s) {
      std::size_t h = 0;
      for (const auto &part : partial) h += part[s * n_nodes + k];
      node.bp_by_scale.push_back(static_cast<double>(h) / static_cast<double>(config.n_boot));
    }
    node.bp = node.bp_by_scale[unit_scale];
    node.au = fit_multiscale(node.bp_by_scale, tree.scales, config.n_boot).au;
  }
  return tree;
}

// ---------------------------------------------------------------------------
// Exports

namespace detail {

inline std::string newick_label(const std::string &s) {
  if (s.find_first_of(" ():;,[]'") == std::string::npos) return s;
  std::string q = "'";
  for (char c : s) q += (c == '\'') ? std::string("''") : std::string(1, c);
  return q + "'";
}

inline void newick(std::ostream &out, const Dendrogram &d, std::size_t id, double parent_height) {
  const std::size_t n = d.leaf_count();
  if (id < n) {
    out << newick_label(d.labels[id]) << ':' << format_shortest(parent_height);
    return;
  }
  const auto &node = d.nodes[id - n];
  out << '(';
  newick(out, d, node.left, node.height);
  out << ',';
  newick(out, d, node.right, node.height);
  out << ')';
  if (parent_height >= 0.0) out << ':' << format_shortest(parent_height - node.height);
}

inline std::string opt_str(const std::optional<double> &v) {
  return v ? format_shortest(*v) : std::string("NA");
}

}  // namespace detail

/// Branch lengths are height differences; leaves sit at height 0.
inline std::string to_newick(const Dendrogram &d) {
  std::ostringstream out;
  if (d.nodes.empty()) throw ArgumentError("empty dendrogram");
  detail::newick(out, d, d.leaf_count() + d.nodes.size() - 1, -1.0);
  out << ';';
  return out.str();
}

/// Merge nodes carry AU (red) and BP (green) plus the merge order, mirroring
/// the usual pvclust plot annotation.
inline std::string to_dot(const Dendrogram &d) {
  std::ostringstream out;
  const std::size_t n = d.leaf_count();
  out << "digraph dendrogram {\n  rankdir=TB;\n  node [shape=plaintext];\n";
  for (std::size_t i = 0; i < n; ++i) out << "  leaf" << i << " [label=\"" << d.labels[i] << "\"];\n";
  const auto name = [n](std::size_t id) {
    return id < n ? "leaf" + std::to_string(id) : "node" + std::to_string(id - n);
  };
  for (std::size_t k = 0; k < d.nodes.size(); ++k) {
    const auto &node = d.nodes[k];
    out << "  node" << k << " [au=\"" << detail::opt_str(node.au) << "\", bp=\""
        << detail::opt_str(node.bp) << "\", height=\"" << format_shortest(node.height)
        << "\", label=<<font color=\"red\">au=" << detail::opt_str(node.au)
        << "</font> <font color=\"green\">bp=" << detail::opt_str(node.bp)
        << "</font> <font color=\"grey\">" << k + 1 << "</font>>];\n";
    out << "  node" << k << " -> " << name(node.left) << ";\n";
    out << "  node" << k << " -> " << name(node.right) << ";\n";
  }
  out << "}\n";
  return out.str();
}

inline nlohmann::json to_json(const Dendrogram &d) {
  nlohmann::json nodes = nlohmann::json::array();
  const std::size_t n = d.leaf_count();
  for (std::size_t k = 0; k < d.nodes.size(); ++k) {
    const auto &node = d.nodes[k];
    nodes.push_back({{"id", n + k},
                     {"left", node.left},
                     {"right", node.right},
                     {"height", node.height},
                     {"leaves", node.leaves},
                     {"au", node.au ? nlohmann::json(*node.au) : nlohmann::json(nullptr)},
                     {"bp", node.bp ? nlohmann::json(*node.bp) : nlohmann::json(nullptr)},
                     {"bp_by_scale", node.bp_by_scale}});
  }
  return {{"labels", d.labels}, {"n_boot", d.n_boot}, {"scales", d.scales}, {"nodes", nodes}};
}

inline Dendrogram from_json(const nlohmann::json &j) {
  try {
    Dendrogram d;
    d.labels = j.at("labels").get<std::vector<std::string>>();
    d.n_boot = j.at("n_boot").get<std::size_t>();
    d.scales = j.at("scales").get<std::vector<double>>();
    for (const auto &jn : j.at("nodes")) {
      DendrogramNode node;
      node.left = jn.at("left").get<std::size_t>();
      node.right = jn.at("right").get<std::size_t>();
      node.height = jn.at("height").get<double>();
      node.leaves = jn.at("leaves").get<std::vector<std::size_t>>();
      if (!jn.at("au").is_null()) node.au = jn.at("au").get<double>();
      if (!jn.at("bp").is_null()) node.bp = jn.at("bp").get<double>();
      node.bp_by_scale = jn.at("bp_by_scale").get<std::vector<double>>();
      d.nodes.push_back(std::move(node));
    }
    if (!d.labels.empty() && d.nodes.size() + 1 != d.labels.size())
      throw ParseError("dendrogram node count does not match leaf count");
    return d;
  } catch (const nlohmann::json::exception &e) {
    throw ParseError(std::string("malformed dendrogram JSON: ") + e.what());
  }
}

enum class DendrogramFormat { kNewick, kDot, kJson };

inline void export_dendrogram(const Dendrogram &d, DendrogramFormat format, const std::string &path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  switch (format) {
    case DendrogramFormat::kNewick: out << to_newick(d) << '\n'; break;
    case DendrogramFormat::kDot: out << to_dot(d); break;
    case DendrogramFormat::kJson: out << to_json(d).dump(2) << '\n'; break;
  }
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace phonelearn

#endif  // PHONELEARN_CLUSTER_HPP_
