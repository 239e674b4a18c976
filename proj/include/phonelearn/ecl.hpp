// include/phonelearn/ecl.hpp

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

// Error-correction learners over a cue x outcome weight matrix.
//
//   Widrow-Hoff:          W += lambda * c (o - c'W)
//   Temporal difference:  W += lambda * c (o - [c'W - gamma * c_next'W])
//
// Prediction picks the outcome with the largest activation / diversity ratio.

#ifndef PHONELEARN_ECL_HPP_
#define PHONELEARN_ECL_HPP_

#include <array>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "phonelearn/corpus.hpp"
#include "phonelearn/error.hpp"
#include "phonelearn/util.hpp"

namespace phonelearn {

using CueVector = Eigen::Matrix<double, kCueDim, 1>;
using OutcomeVector = Eigen::Matrix<double, kPhoneCount, 1>;
using WeightValues = Eigen::Matrix<double, kCueDim, kPhoneCount>;

enum class EclRule { kWidrowHoff, kTemporalDifference };

enum class DiversityMode {
  kPerOutcome,    // d_j = sum_i |c_i W_ij|
  kSharedScalar,  // d_j = sum_k |a_k| for every j
};

/// Where the TD look-ahead term stops.
enum class TdBoundary {
  kWord,    // no look-ahead across a word_id change
  kStream,  // chain across words; only the final trial has no successor
};

struct EclConfig {
  double learning_rate = 1e-4;
  double discount = 0.5;
  DiversityMode diversity = DiversityMode::kPerOutcome;
  TdBoundary td_boundary = TdBoundary::kWord;

  void validate() const {
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate))
      throw ArgumentError("learning rate must be positive and finite");
    if (!(discount >= 0.0 && discount <= 1.0)) throw ArgumentError("discount must lie in [0, 1]");
  }
};

struct WeightMatrix {
  PhoneInventory inventory = PhoneInventory::standard();
  WeightValues values = WeightValues::Zero();

  static WeightMatrix zeros(PhoneInventory inventory = PhoneInventory::standard()) {
    return {std::move(inventory), WeightValues::Zero()};
  }
  bool all_finite() const { return values.allFinite(); }

  friend bool operator==(const WeightMatrix &a, const WeightMatrix &b) {
    return a.inventory == b.inventory && a.values == b.values;
  }
};

/// A trial's cue vector and its present outcome (the single 1 of o).
struct TrialEvent {
  Cues cues{};
  PhoneIndex outcome = 0;

  static TrialEvent from_frame(const LabeledFrame &f) { return {f.cues, f.phone}; }
  OutcomeVector one_hot() const {
    OutcomeVector o = OutcomeVector::Zero();
    o(static_cast<Eigen::Index>(outcome)) = 1.0;
    return o;
  }
};

inline Eigen::Map<const CueVector> as_vector(const Cues &c) { return Eigen::Map<const CueVector>(c.data()); }

/// a_j = sum_i c_i W_ij
inline OutcomeVector activations(const WeightMatrix &w, const Cues &cues) {
  OutcomeVector a;
  a.noalias() = w.values.transpose() * as_vector(cues);
  return a;
}

inline OutcomeVector diversity(const WeightMatrix &w, const Cues &cues, DiversityMode mode) {
  if (mode == DiversityMode::kPerOutcome)
    return w.values.cwiseAbs().transpose() * as_vector(cues).cwiseAbs();
  return OutcomeVector::Constant(activations(w, cues).cwiseAbs().sum());
}

namespace detail {

// Shared by both rules so that TD with gamma = 0 follows WH's arithmetic exactly.
inline void apply_error(WeightValues &w, const Cues &cues, const OutcomeVector &error, double rate) {
  w.noalias() += (rate * as_vector(cues)) * error.transpose();
}

inline OutcomeVector net_input(const WeightValues &w, const Cues &cues) {
  OutcomeVector a;
  a.noalias() = w.transpose() * as_vector(cues);
  return a;
}

inline OutcomeVector wh_error(const WeightValues &w, const TrialEvent &ev) {
  const OutcomeVector a = net_input(w, ev.cues);
  OutcomeVector e = ev.one_hot() - a;
  return e;
}

inline OutcomeVector td_error(const WeightValues &w, const TrialEvent &ev, const Cues *next,
                              double gamma) {
  const OutcomeVector a = net_input(w, ev.cues);
  const OutcomeVector ahead = next ? net_input(w, *next) : OutcomeVector::Zero();
  OutcomeVector e = ev.one_hot() - (a - gamma * ahead);
  return e;
}

inline void check_event(const TrialEvent &ev, const PhoneInventory &inv) {
  if (ev.outcome >= inv.size()) throw InventoryError("outcome index outside the inventory");
}

}  // namespace detail

inline WeightMatrix wh_update(WeightMatrix w, const TrialEvent &event, double rate,
                              std::size_t trial_index = 0) {
  detail::check_event(event, w.inventory);
  const OutcomeVector e = detail::wh_error(w.values, event);
  detail::apply_error(w.values, event.cues, e, rate);
  if (!w.all_finite()) throw NumericError("Widrow-Hoff update overflowed", trial_index);
  return w;
}

/// `next_cues` absent means no look-ahead (a+ = 0).
inline WeightMatrix td_update(WeightMatrix w, const TrialEvent &event,
                              const std::optional<Cues> &next_cues, double rate, double gamma,
                              std::size_t trial_index = 0) {
  detail::check_event(event, w.inventory);
  const OutcomeVector e =
      detail::td_error(w.values, event, next_cues ? &*next_cues : nullptr, gamma);
  detail::apply_error(w.values, event.cues, e, rate);
  if (!w.all_finite()) throw NumericError("temporal-difference update overflowed", trial_index);
  return w;
}

/// Strictly sequential pass over `frames`. For TD the look-ahead cue vector is
/// the next frame's, unless a word boundary intervenes (see TdBoundary).
inline WeightMatrix train_stream(EclRule rule, std::span<const LabeledFrame> frames,
                                 const EclConfig &config, WeightMatrix initial) {
  config.validate();
  if (frames.empty()) throw ArgumentError("training stream is empty");
  WeightValues &w = initial.values;
  const double rate = config.learning_rate;
  for (std::size_t t = 0; t < frames.size(); ++t) {
    const TrialEvent ev = TrialEvent::from_frame(frames[t]);
    detail::check_event(ev, initial.inventory);
    OutcomeVector e;
    if (rule == EclRule::kWidrowHoff) {
      e = detail::wh_error(w, ev);
    } else {
      const Cues *next = nullptr;
      if (t + 1 < frames.size() && (config.td_boundary == TdBoundary::kStream ||
                                    frames[t + 1].word_id == frames[t].word_id))
        next = &frames[t + 1].cues;
      e = detail::td_error(w, ev, next, config.discount);
    }
    // A non-finite weight shows up in the next trial's error; the final check
    // catches an overflow on the last trial.
    if (!e.allFinite()) throw NumericError("prediction error is not finite", frames[t].trial_index);
    detail::apply_error(w, ev.cues, e, rate);
  }
  if (!initial.all_finite())
    throw NumericError("weights overflowed", frames.back().trial_index);
  return initial;
}

inline WeightMatrix train_stream(EclRule rule, const FrameDataset &dataset, const EclConfig &config) {
  return train_stream(rule, dataset.frames, config, WeightMatrix::zeros(dataset.inventory));
}

struct EclPrediction {
  PhoneIndex phone = 0;
  OutcomeVector scores = OutcomeVector::Zero();
};

/// score_j = a_j / d_j (0 where d_j = 0); argmax with ties to the lowest index.
inline EclPrediction predict(const WeightMatrix &w, const Cues &cues, const EclConfig &config = {}) {
  const OutcomeVector a = activations(w, cues);
  const OutcomeVector d = diversity(w, cues, config.diversity);
  EclPrediction p;
  for (Eigen::Index j = 0; j < a.size(); ++j) p.scores(j) = d(j) > 0.0 ? a(j) / d(j) : 0.0;
  Eigen::Index best = 0;
  for (Eigen::Index j = 1; j < a.size(); ++j)
    if (p.scores(j) > p.scores(best)) best = j;
  p.phone = static_cast<PhoneIndex>(best);
  return p;
}

// ---------------------------------------------------------------------------
// Weight CSV: header of phone labels, then one row per cue dimension.

inline void write_weights(std::ostream &out, const WeightMatrix &w) {
  for (std::size_t j = 0; j < kPhoneCount; ++j) out << (j ? "," : "") << w.inventory.label(j);
  out << '\n';
  for (Eigen::Index i = 0; i < w.values.rows(); ++i) {
    for (Eigen::Index j = 0; j < w.values.cols(); ++j)
      out << (j ? "," : "") << format_double(w.values(i, j));
    out << '\n';
  }
}

inline void write_weights(const std::string &path, const WeightMatrix &w) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write weight file '" + path + "'");
  write_weights(out, w);
  if (!out) throw IoError("write failed for '" + path + "'");
}

inline WeightMatrix read_weights(std::istream &in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("missing header", 1);
  strip_cr(line);
  WeightMatrix w{PhoneInventory(split(line, ',')), WeightValues::Zero()};
  for (Eigen::Index i = 0; i < w.values.rows(); ++i) {
    const auto lineno = static_cast<std::size_t>(i) + 2;
    if (!std::getline(in, line)) throw ParseError("expected " + std::to_string(kCueDim) + " weight rows", lineno);
    strip_cr(line);
    auto cols = split(line, ',');
    if (cols.size() != kPhoneCount)
      throw ParseError("expected " + std::to_string(kPhoneCount) + " values", lineno);
    for (Eigen::Index j = 0; j < w.values.cols(); ++j) {
      auto v = parse_double(cols[static_cast<std::size_t>(j)]);
      if (!v) throw ParseError("non-numeric weight", lineno);
      w.values(i, j) = *v;
    }
  }
  while (std::getline(in, line))
    if (!trim(line).empty()) throw ParseError("trailing rows after weight matrix");
  if (!w.all_finite()) throw DataError("weight file contains non-finite values");
  return w;
}

inline WeightMatrix read_weights(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open weight file '" + path + "'");
  return read_weights(in);
}

}  // namespace phonelearn

#endif  // PHONELEARN_ECL_HPP_
