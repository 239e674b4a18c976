// include/phonelearn/eval.hpp

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

// Scoring: success rates, confusion matrices, Kendall tau-b, MAD, per-session
// summaries and long-format ("tidy") CSV export.

#ifndef PHONELEARN_EVAL_HPP_
#define PHONELEARN_EVAL_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "phonelearn/corpus.hpp"
#include "phonelearn/error.hpp"
#include "phonelearn/util.hpp"

namespace phonelearn {

enum class Learner { kMBL, kWH, kTD };

inline std::string learner_name(Learner l) {
  switch (l) {
    case Learner::kMBL: return "MBL";
    case Learner::kWH: return "WH";
    case Learner::kTD: return "TD";
  }
  return "?";
}

inline Learner parse_learner(std::string_view s) {
  const auto k = to_lower(s);
  if (k == "mbl") return Learner::kMBL;
  if (k == "wh") return Learner::kWH;
  if (k == "td") return Learner::kTD;
  throw ArgumentError("unknown learner '" + std::string(s) + "' (expected MBL, WH or TD)");
}

struct PredictionRecord {
  std::uint64_t trial_index = 0;
  PhoneIndex true_phone = 0;
  PhoneIndex predicted_phone = 0;
  double score = 0.0;  // ECL ratio score of the winner, or MBL vote confidence
  Learner learner = Learner::kWH;
  std::string regime = "raw";  // raw | gaussian | session-k | cross-speaker | ...
  int session = -1;            // -1 outside the consistency simulation
};

struct SuccessTable {
  std::array<std::optional<double>, kPhoneCount> success{};  // %, absent without records
  std::array<std::size_t, kPhoneCount> n{};
  std::array<std::size_t, kPhoneCount> correct{};
  std::array<double, kPhoneCount> sample_probability{};  // share of records per true phone
  double overall = 0.0;                                  // %
};

inline SuccessTable success_rates(std::span<const PredictionRecord> records) {
  if (records.empty()) throw ArgumentError("no prediction records");
  SuccessTable t;
  std::size_t hits = 0;
  for (const auto &r : records) {
    ++t.n.at(r.true_phone);
    if (r.true_phone == r.predicted_phone) {
      ++t.correct[r.true_phone];
      ++hits;
    }
  }
  const auto total = static_cast<double>(records.size());
  for (std::size_t j = 0; j < kPhoneCount; ++j) {
    t.sample_probability[j] = static_cast<double>(t.n[j]) / total;
    if (t.n[j] > 0)
      t.success[j] = 100.0 * static_cast<double>(t.correct[j]) / static_cast<double>(t.n[j]);
  }
  t.overall = 100.0 * static_cast<double>(hits) / total;
  return t;
}

struct ConfusionMatrix {
  std::array<std::array<std::size_t, kPhoneCount>, kPhoneCount> counts{};  // [true][predicted]

  std::size_t row_total(PhoneIndex i) const {
    std::size_t s = 0;
    for (auto c : counts.at(i)) s += c;
    return s;
  }
  /// Rows divided by their totals; all-zero rows stay zero.
  std::array<std::array<double, kPhoneCount>, kPhoneCount> normalized() const {
    std::array<std::array<double, kPhoneCount>, kPhoneCount> out{};
    for (std::size_t i = 0; i < kPhoneCount; ++i) {
      const auto total = row_total(i);
      if (total == 0) continue;
      for (std::size_t j = 0; j < kPhoneCount; ++j)
        out[i][j] = static_cast<double>(counts[i][j]) / static_cast<double>(total);
    }
    return out;
  }
  std::size_t diagonal() const {
    std::size_t s = 0;
    for (std::size_t i = 0; i < kPhoneCount; ++i) s += counts[i][i];
    return s;
  }
};

inline ConfusionMatrix confusion_matrix(std::span<const PredictionRecord> records) {
  if (records.empty()) throw ArgumentError("no prediction records");
  ConfusionMatrix m;
  for (const auto &r : records) ++m.counts.at(r.true_phone).at(r.predicted_phone);
  return m;
}

inline void write_confusion(std::ostream &out, const ConfusionMatrix &m, const PhoneInventory &inv) {
  out << "true\\predicted";
  for (const auto &l : inv.labels()) out << ',' << l;
  out << '\n';
  for (std::size_t i = 0; i < kPhoneCount; ++i) {
    out << inv.label(i);
    for (auto c : m.counts[i]) out << ',' << c;
    out << '\n';
  }
}

// ---------------------------------------------------------------------------

namespace detail {

// Counts pairs (i<j) with equal keys in a sorted run structure.
template <typename It, typename Eq>
std::uint64_t tied_pairs(It begin, It end, Eq eq) {
  std::uint64_t ties = 0, run = 1;
  for (It it = begin; it != end; ++it) {
    if (it != begin && eq(*(it - 1), *it)) {
      ++run;
    } else {
      ties += run * (run - 1) / 2;
      run = 1;
    }
  }
  return ties + run * (run - 1) / 2;
}

}  // namespace detail

/// Classical tau-b, O(n log n) (Knight's merge-sort algorithm):
///   (C - D) / sqrt((n0 - n1)(n0 - n2)).
inline double kendall_tau_b(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ArgumentError("kendall_tau_b: vectors differ in length");
  if (x.size() < 2) throw ArgumentError("kendall_tau_b needs at least 2 observations");
  const std::size_t n = x.size();
  std::vector<std::pair<double, double>> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = {x[i], y[i]};
  std::sort(p.begin(), p.end());

  const std::uint64_t n0 = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  const std::uint64_t tx = detail::tied_pairs(p.begin(), p.end(),
                                              [](const auto &a, const auto &b) { return a.first == b.first; });
  const std::uint64_t txy = detail::tied_pairs(p.begin(), p.end(),
                                               [](const auto &a, const auto &b) { return a == b; });

  // Sort by y with a merge sort that counts swaps (discordant-like inversions).
  std::vector<double> ys(n), buf(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = p[i].second;
  std::uint64_t swaps = 0;
  for (std::size_t width = 1; width < n; width *= 2) {
    for (std::size_t lo = 0; lo < n; lo += 2 * width) {
      const std::size_t mid = std::min(lo + width, n), hi = std::min(lo + 2 * width, n);
      std::size_t i = lo, j = mid, k = lo;
      while (i < mid && j < hi) {
        if (ys[j] < ys[i]) {
          swaps += mid - i;
          buf[k++] = ys[j++];
        } else {
          buf[k++] = ys[i++];
        }
      }
      while (i < mid) buf[k++] = ys[i++];
      while (j < hi) buf[k++] = ys[j++];
    }
    std::swap(ys, buf);
  }
  const std::uint64_t ty = detail::tied_pairs(ys.begin(), ys.end(), std::equal_to<>());

  const double denom = std::sqrt(static_cast<double>(n0 - tx)) * std::sqrt(static_cast<double>(n0 - ty));
  if (denom == 0.0) throw UndefinedResultError("kendall_tau_b undefined: a vector is constant");
  // concordant - discordant = n0 - tx - ty + txy - 2 * swaps
  const double num = static_cast<double>(n0) - static_cast<double>(tx) - static_cast<double>(ty) +
                     static_cast<double>(txy) - 2.0 * static_cast<double>(swaps);
  return num / denom;
}

inline double median(std::vector<double> v) {
  if (v.empty()) throw ArgumentError("median of an empty vector");
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double hi = v[mid];
  if (v.size() % 2) return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return (lo + hi) / 2.0;
}

inline constexpr double kMadNormalConstant = 1.4826;

/// median(|v - median(v)|); scaled by 1.4826 only when `normal_consistent`.
inline double mad(std::span<const double> values, bool normal_consistent = false) {
  if (values.empty()) throw ArgumentError("mad of an empty vector");
  const double m = median({values.begin(), values.end()});
  std::vector<double> dev(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) dev[i] = std::abs(values[i] - m);
  const double r = median(std::move(dev));
  return normal_consistent ? kMadNormalConstant * r : r;
}

inline constexpr double kZeroSessionThreshold = 1.0;  // median success %, "learned nothing"

struct SessionSummary {
  std::vector<double> session_median;                    // median per-phone success, per session
  std::vector<bool> zero_session;                        // median < kZeroSessionThreshold
  std::array<std::optional<double>, kPhoneCount> phone_mad{};  // across sessions
};

inline SessionSummary session_summary(std::span<const SuccessTable> sessions,
                                      bool normal_consistent = false) {
  if (sessions.size() < 2) throw ArgumentError("session summary needs at least 2 sessions");
  SessionSummary s;
  for (const auto &t : sessions) {
    std::vector<double> rates;
    for (const auto &r : t.success)
      if (r) rates.push_back(*r);
    if (rates.empty()) throw DataError("session without any per-phone success rate");
    s.session_median.push_back(median(std::move(rates)));
    s.zero_session.push_back(s.session_median.back() < kZeroSessionThreshold);
  }
  for (std::size_t j = 0; j < kPhoneCount; ++j) {
    std::vector<double> v;
    for (const auto &t : sessions)
      if (t.success[j]) v.push_back(*t.success[j]);
    if (!v.empty()) s.phone_mad[j] = mad(v, normal_consistent);
  }
  return s;
}

inline SessionSummary session_summary(const std::vector<std::vector<PredictionRecord>> &sessions,
                                      bool normal_consistent = false) {
  std::vector<SuccessTable> tables;
  for (const auto &recs : sessions) tables.push_back(success_rates(recs));
  return session_summary(tables, normal_consistent);
}

// ---------------------------------------------------------------------------
// Tidy CSV: one row per phone x learner x regime x session.

struct TidyRow {
  std::string phone;
  std::string learner;
  std::string regime;
  int session = -1;
  std::size_t n = 0;
  std::optional<double> success_pct;
  std::optional<double> confidence_mean;

  friend bool operator==(const TidyRow &, const TidyRow &) = default;
};

inline constexpr std::string_view kTidyHeader = "phone,learner,regime,session,n,success_pct,confidence_mean";

/// Groups records by (learner, regime, session) and emits 40 rows per group,
/// in inventory order. Empty phones get NA rates.
inline std::vector<TidyRow> tidy_rows(std::span<const PredictionRecord> records, const PhoneInventory &inv) {
  struct Acc {
    std::array<std::size_t, kPhoneCount> n{}, correct{};
    std::array<double, kPhoneCount> score{};
  };
  std::map<std::tuple<std::string, std::string, int>, Acc> groups;
  for (const auto &r : records) {
    auto &a = groups[{learner_name(r.learner), r.regime, r.session}];
    ++a.n.at(r.true_phone);
    a.score[r.true_phone] += r.score;
    if (r.true_phone == r.predicted_phone) ++a.correct[r.true_phone];
  }
  std::vector<TidyRow> rows;
  for (const auto &[key, a] : groups) {
    for (std::size_t j = 0; j < kPhoneCount; ++j) {
      TidyRow row{inv.label(j), std::get<0>(key), std::get<1>(key), std::get<2>(key), a.n[j], {}, {}};
      if (a.n[j] > 0) {
        row.success_pct = 100.0 * static_cast<double>(a.correct[j]) / static_cast<double>(a.n[j]);
        row.confidence_mean = a.score[j] / static_cast<double>(a.n[j]);
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

inline void write_tidy(std::ostream &out, std::span<const TidyRow> rows) {
  out << "# phone: inventory label; learner: MBL|WH|TD; regime: training regime tag;"
         " session: consistency session (-1 if none); n: test frames with this true phone;"
         " success_pct: 100*correct/n (NA if n=0); confidence_mean: mean winner score"
         " (ECL ratio or MBL vote share, NA if n=0)\n";
  out << kTidyHeader << '\n';
  const auto opt = [](const std::optional<double> &v) { return v ? format_double(*v) : std::string("NA"); };
  for (const auto &r : rows)
    out << r.phone << ',' << r.learner << ',' << r.regime << ',' << r.session << ',' << r.n << ','
        << opt(r.success_pct) << ',' << opt(r.confidence_mean) << '\n';
}

inline std::vector<TidyRow> read_tidy(std::istream &in) {
  std::vector<TidyRow> rows;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty() || line.front() == '#') continue;
    if (!header) {
      if (line != kTidyHeader) throw ParseError("unexpected tidy header", lineno);
      header = true;
      continue;
    }
    auto c = split(line, ',');
    if (c.size() != 7) throw ParseError("expected 7 columns", lineno);
    TidyRow r;
    r.phone = c[0];
    r.learner = c[1];
    r.regime = c[2];
    try {
      r.session = std::stoi(c[3]);
    } catch (const std::exception &) {
      throw ParseError("bad session", lineno);
    }
    auto n = parse_uint(c[4]);
    if (!n) throw ParseError("bad n", lineno);
    r.n = *n;
    const auto opt = [&](const std::string &s) -> std::optional<double> {
      if (s == "NA") return std::nullopt;
      auto v = parse_double(s);
      if (!v) throw ParseError("bad numeric value '" + s + "'", lineno);
      return v;
    };
    r.success_pct = opt(c[5]);
    r.confidence_mean = opt(c[6]);
    rows.push_back(std::move(r));
  }
  if (!header) throw ParseError("missing tidy header");
  return rows;
}

/// Writes `<stem>.tidy.csv` and `<stem>.confusion.csv` (the latter over all records).
inline void export_tidy(std::span<const PredictionRecord> records, const PhoneInventory &inv,
                        const std::string &stem) {
  const auto rows = tidy_rows(records, inv);
  {
    std::ofstream out(stem + ".tidy.csv");
    if (!out) throw IoError("cannot write '" + stem + ".tidy.csv'");
    write_tidy(out, rows);
  }
  std::ofstream out(stem + ".confusion.csv");
  if (!out) throw IoError("cannot write '" + stem + ".confusion.csv'");
  write_confusion(out, confusion_matrix(records), inv);
  if (!out) throw IoError("write failed for '" + stem + ".confusion.csv'");
}

}  // namespace phonelearn

#endif  // PHONELEARN_EVAL_HPP_
