// include/phonelearn/pipeline.hpp

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

// Experiment drivers behind the `phonelearn` subcommands. Each writes plain
// CSV / Newick / DOT / JSON files into an output directory together with a
// JSON manifest that records every hyperparameter, seed and input digest.

#ifndef PHONELEARN_PIPELINE_HPP_
#define PHONELEARN_PIPELINE_HPP_

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "phonelearn/cluster.hpp"
#include "phonelearn/corpus.hpp"
#include "phonelearn/ecl.hpp"
#include "phonelearn/error.hpp"
#include "phonelearn/eval.hpp"
#include "phonelearn/mbl.hpp"
#include "phonelearn/mfcc.hpp"
#include "phonelearn/regimes.hpp"
#include "phonelearn/util.hpp"

namespace phonelearn {

namespace fs = std::filesystem;

inline std::string sha256_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for hashing");
  EVP_MD_CTX *ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (in.gcount() > 0) EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return hex.str();
}

inline nlohmann::json input_record(const std::string &path) {
  return {{"path", path}, {"sha256", sha256_file(path)}};
}

inline void write_json(const std::string &path, const nlohmann::json &j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

inline nlohmann::json read_json(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception &e) {
    throw ParseError(path + ": " + e.what());
  }
}

inline std::string diversity_name(DiversityMode m) {
  return m == DiversityMode::kPerOutcome ? "per_outcome" : "shared_scalar";
}

inline DiversityMode parse_diversity(std::string_view s) {
  if (s == "per_outcome") return DiversityMode::kPerOutcome;
  if (s == "shared_scalar") return DiversityMode::kSharedScalar;
  throw ArgumentError("unknown diversity mode '" + std::string(s) + "'");
}

inline nlohmann::json ecl_json(const EclConfig &c) {
  return {{"learning_rate", c.learning_rate},
          {"discount", c.discount},
          {"diversity", diversity_name(c.diversity)},
          {"td_boundary", c.td_boundary == TdBoundary::kWord ? "word" : "stream"}};
}

inline EclConfig ecl_from_json(const nlohmann::json &j) {
  EclConfig c;
  c.learning_rate = j.at("learning_rate").get<double>();
  c.discount = j.at("discount").get<double>();
  c.diversity = parse_diversity(j.at("diversity").get<std::string>());
  c.td_boundary = j.at("td_boundary").get<std::string>() == "stream" ? TdBoundary::kStream : TdBoundary::kWord;
  return c;
}

inline void ensure_dir(const std::string &dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
}

// ---------------------------------------------------------------------------
// extract

struct ExtractResult {
  FrameDataset dataset;
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
};

/// Every `<word_id>.wav` in `audio_dir` (sorted by name) is cut into labeled
/// frames using its segments from `alignments`. Per-file failures are
/// collected; the table holds every word that succeeded.
inline ExtractResult cmd_extract(const std::string &audio_dir, const std::string &alignments,
                                 const MfccConfig &config, const std::string &out_path) {
  ExtractResult r;
  const auto segments = load_alignments(alignments);
  std::map<std::string, std::vector<PhoneSegment>> by_word;
  for (const auto &s : segments) by_word[s.word_id].push_back(s);

  std::vector<fs::path> wavs;
  if (!fs::is_directory(audio_dir)) throw IoError("audio directory '" + audio_dir + "' does not exist");
  for (const auto &e : fs::directory_iterator(audio_dir))
    if (e.is_regular_file() && to_lower(e.path().extension().string()) == ".wav") wavs.push_back(e.path());
  std::sort(wavs.begin(), wavs.end());
  if (wavs.empty()) r.warnings.push_back("no .wav files in '" + audio_dir + "'");

  std::uint64_t next_trial = 0;
  for (const auto &wav : wavs) {
    const std::string word = wav.stem().string();
    auto it = by_word.find(word);
    if (it == by_word.end()) {
      r.warnings.push_back("no alignment for '" + word + "'");
      continue;
    }
    try {
      const auto audio = read_wav(wav.string());
      auto frames = extract_labeled_frames(audio, it->second, config, next_trial);
      next_trial += frames.size();
      for (auto &f : frames) r.dataset.frames.push_back(std::move(f));
    } catch (const Error &e) {
      r.errors.push_back(wav.string() + ": " + e.kind() + ": " + e.what());
    }
    by_word.erase(it);
  }
  for (const auto &[word, segs] : by_word) r.warnings.push_back("no audio for aligned word '" + word + "'");
  write_feature_table(out_path, r.dataset);
  return r;
}

// ---------------------------------------------------------------------------
// train

enum class Regime { kRaw, kGaussian };

inline std::string regime_name(Regime r) { return r == Regime::kRaw ? "raw" : "gaussian"; }
inline Regime parse_regime(std::string_view s) {
  if (s == "raw") return Regime::kRaw;
  if (s == "gaussian") return Regime::kGaussian;
  throw ArgumentError("unknown regime '" + std::string(s) + "' (expected raw or gaussian)");
}

struct TrainOptions {
  std::string features;
  Learner learner = Learner::kWH;
  Regime regime = Regime::kRaw;
  double test_fraction = 0.0;  // > 0 splits first and writes train.csv / test.csv
  EclConfig ecl;
  MblConfig mbl;
  std::size_t n_per_phone = 100;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
};

struct TrainResult {
  std::string manifest_path;
  std::string state_path;  // weights CSV or exemplar feature table
};

inline TrainResult cmd_train(const TrainOptions &opt) {
  ensure_dir(opt.out_dir);
  auto data = load_feature_table(opt.features);
  nlohmann::json manifest = {{"command", "train"},
                             {"learner", learner_name(opt.learner)},
                             {"regime", regime_name(opt.regime)},
                             {"master_seed", opt.seed},
                             {"inventory", data.inventory.labels()},
                             {"inputs", {input_record(opt.features)}}};
  std::string train_path = opt.features;
  if (opt.test_fraction > 0.0) {
    const auto split_seed = derive_seed(opt.seed, "split");
    auto [train, test] = split_train_test(data, opt.test_fraction, split_seed);
    train_path = (fs::path(opt.out_dir) / "train.csv").string();
    const auto test_path = (fs::path(opt.out_dir) / "test.csv").string();
    write_feature_table(train_path, train);
    write_feature_table(test_path, test);
    manifest["split"] = {{"test_fraction", opt.test_fraction}, {"seed", split_seed},
                         {"train", train_path}, {"test", test_path},
                         {"n_train", train.size()}, {"n_test", test.size()}};
    data = std::move(train);
  }
  if (opt.regime == Regime::kGaussian) {
    const GaussianConfig g{opt.n_per_phone, derive_seed(opt.seed, "gaussian")};
    data = gaussian_generate(data, g);
    train_path = (fs::path(opt.out_dir) / ("gaussian_" + std::to_string(g.n_per_phone) + ".csv")).string();
    write_feature_table(train_path, data);
    manifest["gaussian"] = {{"n_per_phone", g.n_per_phone}, {"seed", g.seed}, {"table", train_path}};
  }

  TrainResult r;
  const std::string stem = to_lower(learner_name(opt.learner)) + "_" + regime_name(opt.regime);
  if (opt.learner == Learner::kMBL) {
    if (opt.mbl.k == 0) throw ArgumentError("k must be at least 1");
    r.state_path = train_path;
    manifest["mbl"] = {{"k", opt.mbl.k}};
    manifest["exemplars"] = train_path;
    manifest["exemplar_count"] = data.size();
  } else {
    const auto rule = opt.learner == Learner::kWH ? EclRule::kWidrowHoff : EclRule::kTemporalDifference;
    const auto w = train_stream(rule, data, opt.ecl);
    r.state_path = (fs::path(opt.out_dir) / (stem + ".weights.csv")).string();
    write_weights(r.state_path, w);
    manifest["ecl"] = ecl_json(opt.ecl);
    manifest["weights"] = r.state_path;
    manifest["trials"] = data.size();
  }
  r.manifest_path = (fs::path(opt.out_dir) / (stem + ".manifest.json")).string();
  write_json(r.manifest_path, manifest);
  return r;
}

// ---------------------------------------------------------------------------
// eval

/// Per-record MBL vote counts ride along in the predictions CSV.
struct Predictions {
  std::vector<PredictionRecord> records;
  std::vector<VoteRecord> votes;  // MBL only, parallel to records
};

inline void write_predictions(const std::string &path, const Predictions &p, const PhoneInventory &inv) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << "trial_index,true_phone,predicted_phone,score,learner,regime,session,votes\n";
  for (std::size_t i = 0; i < p.records.size(); ++i) {
    const auto &r = p.records[i];
    out << r.trial_index << ',' << inv.label(r.true_phone) << ',' << inv.label(r.predicted_phone) << ','
        << format_double(r.score) << ',' << learner_name(r.learner) << ',' << r.regime << ',' << r.session << ',';
    if (i < p.votes.size())
      for (std::size_t j = 0; j < kPhoneCount; ++j) out << (j ? ";" : "") << p.votes[i].votes[j];
    out << '\n';
  }
}

inline Predictions read_predictions(const std::string &path, const PhoneInventory &inv) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string line;
  std::getline(in, line);
  Predictions p;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty()) continue;
    auto c = split(line, ',');
    if (c.size() != 8) throw ParseError("expected 8 columns", lineno);
    PredictionRecord r;
    auto ti = parse_uint(c[0]);
    auto score = parse_double(c[3]);
    if (!ti || !score) throw ParseError("bad numeric field", lineno);
    r.trial_index = *ti;
    r.true_phone = inv.index_of(c[1]);
    r.predicted_phone = inv.index_of(c[2]);
    r.score = *score;
    r.learner = parse_learner(c[4]);
    r.regime = c[5];
    r.session = std::stoi(c[6]);
    if (!c[7].empty()) {
      auto v = split(c[7], ';');
      if (v.size() != kPhoneCount) throw ParseError("votes need " + std::to_string(kPhoneCount) + " counts", lineno);
      VoteRecord vr{r.true_phone, {}};
      for (std::size_t j = 0; j < kPhoneCount; ++j) {
        auto x = parse_uint(v[j]);
        if (!x) throw ParseError("bad vote count", lineno);
        vr.votes[j] = *x;
      }
      p.votes.push_back(vr);
    }
    p.records.push_back(std::move(r));
  }
  return p;
}

inline Predictions predict_ecl(const WeightMatrix &w, const FrameDataset &test, const EclConfig &config,
                               Learner learner, const std::string &regime, int session = -1) {
  if (!(w.inventory == test.inventory)) throw InventoryError("inventory mismatch between weights and test set");
  Predictions p;
  p.records.reserve(test.size());
  for (const auto &f : test.frames) {
    const auto pr = predict(w, f.cues, config);
    p.records.push_back({f.trial_index, f.phone, pr.phone,
                         pr.scores(static_cast<Eigen::Index>(pr.phone)), learner, regime, session});
  }
  return p;
}

inline Predictions predict_mbl(const ExemplarStore &s, const FrameDataset &test, const MblConfig &config,
                               const std::string &regime, int session = -1, std::size_t threads = 1) {
  if (!(s.inventory() == test.inventory)) throw InventoryError("inventory mismatch between exemplars and test set");
  const auto votes = predict_all(s, test.frames, config, threads);
  Predictions p;
  p.records.reserve(test.size());
  for (std::size_t i = 0; i < votes.size(); ++i) {
    const auto &f = test.frames[i];
    p.records.push_back({f.trial_index, f.phone, votes[i].phone, votes[i].confidence, Learner::kMBL, regime, session});
    p.votes.push_back({f.phone, votes[i].votes});
  }
  return p;
}

struct EvalOptions {
  std::string manifest;
  std::string test_features;
  std::string regime;  // empty: take it from the manifest
  std::optional<DiversityMode> diversity;
  std::size_t threads = 1;
  std::string out_dir = ".";
};

struct EvalResult {
  Predictions predictions;
  SuccessTable table;
  std::string stem;
};

inline EvalResult cmd_eval(const EvalOptions &opt) {
  ensure_dir(opt.out_dir);
  const auto m = read_json(opt.manifest);
  const auto learner = parse_learner(m.at("learner").get<std::string>());
  const std::string regime = opt.regime.empty() ? m.at("regime").get<std::string>() : opt.regime;
  const PhoneInventory inv(m.at("inventory").get<std::vector<std::string>>());
  const auto test = load_feature_table(opt.test_features, inv);
  if (test.empty()) throw DataError("test feature table is empty");

  EvalResult r;
  if (learner == Learner::kMBL) {
    const auto exemplars = load_feature_table(m.at("exemplars").get<std::string>(), inv);
    const MblConfig cfg{m.at("mbl").at("k").get<std::size_t>()};
    r.predictions = predict_mbl(store(exemplars), test, cfg, regime, -1, opt.threads);
  } else {
    const auto w = read_weights(m.at("weights").get<std::string>());
    if (!(w.inventory == inv)) throw InventoryError("weight file inventory differs from the manifest");
    auto cfg = ecl_from_json(m.at("ecl"));
    if (opt.diversity) cfg.diversity = *opt.diversity;
    r.predictions = predict_ecl(w, test, cfg, learner, regime);
  }
  r.table = success_rates(r.predictions.records);
  r.stem = (fs::path(opt.out_dir) / (to_lower(learner_name(learner)) + "_" + regime)).string();
  write_predictions(r.stem + ".predictions.csv", r.predictions, inv);
  export_tidy(r.predictions.records, inv, r.stem);
  write_json(r.stem + ".eval.json", {{"command", "eval"},
                                     {"learner", learner_name(learner)},
                                     {"regime", regime},
                                     {"overall_pct", r.table.overall},
                                     {"n", r.predictions.records.size()},
                                     {"inputs", {input_record(opt.manifest), input_record(opt.test_features)}}});
  return r;
}

// ---------------------------------------------------------------------------
// gaussian

inline std::vector<std::string> cmd_gaussian(const std::string &features, const std::vector<std::size_t> &sizes,
                                             std::uint64_t seed, const std::string &out_dir) {
  ensure_dir(out_dir);
  const auto train = load_feature_table(features);
  const auto sets = gaussian_scaling_series(train, sizes, derive_seed(seed, "gaussian"));
  std::vector<std::string> paths;
  nlohmann::json outputs = nlohmann::json::array();
  for (std::size_t i = 0; i < sets.size(); ++i) {
    paths.push_back((fs::path(out_dir) / ("gaussian_" + std::to_string(sizes[i]) + ".csv")).string());
    write_feature_table(paths.back(), sets[i]);
    outputs.push_back({{"n_per_phone", sizes[i]}, {"path", paths.back()}, {"frames", sets[i].size()}});
  }
  write_json((fs::path(out_dir) / "gaussian.manifest.json").string(),
             {{"command", "gaussian"}, {"master_seed", seed}, {"inputs", {input_record(features)}}, {"outputs", outputs}});
  return paths;
}

// ---------------------------------------------------------------------------
// consistency

struct ConsistencyOptions {
  std::string features;
  SessionConfig sessions;
  EclConfig ecl;
  MblConfig mbl;
  std::size_t threads = 1;
  std::string out_dir = ".";
};

struct ConsistencyResult {
  // [learner][session] success over all test words of the session
  std::map<Learner, std::vector<SuccessTable>> tables;
  std::map<Learner, SessionSummary> summaries;
  std::vector<Predictions> session_predictions;  // all learners of a session, known + new
};

inline ConsistencyResult run_consistency(const FrameDataset &corpus, const ConsistencyOptions &opt) {
  ConsistencyResult r;
  if (opt.sessions.n_sessions < 2) throw ArgumentError("consistency simulation needs at least 2 sessions");
  for (std::size_t s = 0; s < opt.sessions.n_sessions; ++s) {
    const auto session = build_session(corpus, opt.sessions, s);
    const int sid = static_cast<int>(s);

    // Known and new words are scored under separate regime tags.
    FrameDataset known{corpus.inventory, {}}, fresh{corpus.inventory, {}};
    for (const auto &f : session.test.frames) (session.known_words.count(f.word_id) ? known : fresh).frames.push_back(f);

    Predictions all;
    const auto add = [&all](Predictions p) {
      all.records.insert(all.records.end(), p.records.begin(), p.records.end());
      all.votes.insert(all.votes.end(), p.votes.begin(), p.votes.end());
    };
    for (auto rule : {EclRule::kWidrowHoff, EclRule::kTemporalDifference}) {
      const auto learner = rule == EclRule::kWidrowHoff ? Learner::kWH : Learner::kTD;
      const auto w = train_stream(rule, session.train, opt.ecl);
      std::vector<PredictionRecord> both;
      for (const auto *part : {&known, &fresh}) {
        if (part->empty()) continue;
        auto p = predict_ecl(w, *part, opt.ecl, learner, part == &known ? "known" : "new", sid);
        both.insert(both.end(), p.records.begin(), p.records.end());
        add(std::move(p));
      }
      r.tables[learner].push_back(success_rates(both));
    }
    const auto mem = store(session.train);
    std::vector<PredictionRecord> both;
    for (const auto *part : {&known, &fresh}) {
      if (part->empty()) continue;
      auto p = predict_mbl(mem, *part, opt.mbl, part == &known ? "known" : "new", sid, opt.threads);
      both.insert(both.end(), p.records.begin(), p.records.end());
      add(std::move(p));
    }
    r.tables[Learner::kMBL].push_back(success_rates(both));
    r.session_predictions.push_back(std::move(all));

    if (!opt.out_dir.empty())
      write_json((fs::path(opt.out_dir) / ("session_" + std::to_string(s) + ".manifest.json")).string(),
                 session_manifest(session, opt.sessions));
  }
  for (const auto &[learner, tables] : r.tables) r.summaries[learner] = session_summary(tables);
  return r;
}

inline void write_consistency_tables(const ConsistencyResult &r, const PhoneInventory &inv, const std::string &out_dir) {
  std::vector<PredictionRecord> records;
  for (const auto &p : r.session_predictions) records.insert(records.end(), p.records.begin(), p.records.end());
  export_tidy(records, inv, (fs::path(out_dir) / "consistency").string());

  std::ofstream mad_out((fs::path(out_dir) / "consistency.mad.csv").string());
  if (!mad_out) throw IoError("cannot write MAD table");
  mad_out << "phone,learner,mad\n";
  for (const auto &[learner, s] : r.summaries)
    for (std::size_t j = 0; j < kPhoneCount; ++j)
      mad_out << inv.label(j) << ',' << learner_name(learner) << ','
              << (s.phone_mad[j] ? format_double(*s.phone_mad[j]) : "NA") << '\n';

  std::ofstream med_out((fs::path(out_dir) / "consistency.sessions.csv").string());
  if (!med_out) throw IoError("cannot write session table");
  med_out << "learner,session,median_success_pct,zero_session\n";
  for (const auto &[learner, s] : r.summaries)
    for (std::size_t k = 0; k < s.session_median.size(); ++k)
      med_out << learner_name(learner) << ',' << k << ',' << format_double(s.session_median[k]) << ','
              << (s.zero_session[k] ? 1 : 0) << '\n';
}

inline ConsistencyResult cmd_consistency(const ConsistencyOptions &opt) {
  ensure_dir(opt.out_dir);
  const auto corpus = load_feature_table(opt.features);
  auto r = run_consistency(corpus, opt);
  write_consistency_tables(r, corpus.inventory, opt.out_dir);
  write_json((fs::path(opt.out_dir) / "consistency.manifest.json").string(),
             {{"command", "consistency"},
              {"master_seed", opt.sessions.seed},
              {"n_sessions", opt.sessions.n_sessions},
              {"vocab_size", opt.sessions.vocab_size},
              {"replications", opt.sessions.replications},
              {"noise_fraction", opt.sessions.noise_fraction},
              {"noise_sd_scale", opt.sessions.noise_sd_scale},
              {"test_words", opt.sessions.test_words},
              {"order", opt.sessions.order == ReplicationOrder::kTiled ? "tiled" : "interleaved"},
              {"ecl", ecl_json(opt.ecl)},
              {"mbl", {{"k", opt.mbl.k}}},
              {"inputs", {input_record(opt.features)}}});
  return r;
}

// ---------------------------------------------------------------------------
// cluster

struct ClusterOptions {
  std::string weights;      // ECL weight CSV (or a train manifest)
  std::string predictions;  // MBL predictions CSV with votes
  std::string source;       // label used in file names; defaults from the input
  BootstrapConfig bootstrap;
  std::string out_dir = ".";
};

inline Dendrogram cmd_cluster(const ClusterOptions &opt) {
  ensure_dir(opt.out_dir);
  if (opt.weights.empty() == opt.predictions.empty())
    throw ArgumentError("cluster needs exactly one of --weights or --predictions");
  PhoneProfileMatrix profiles;
  nlohmann::json inputs = nlohmann::json::array();
  if (!opt.weights.empty()) {
    std::string path = opt.weights;
    std::string source = opt.source.empty() ? "WH" : opt.source;
    if (fs::path(path).extension() == ".json") {
      const auto m = read_json(path);
      if (!m.contains("weights")) throw ArgumentError("manifest '" + path + "' has no weight matrix");
      if (opt.source.empty()) source = m.at("learner").get<std::string>();
      inputs.push_back(input_record(path));
      path = m.at("weights").get<std::string>();
    }
    if (!fs::exists(path)) throw IoError("missing learner state '" + path + "'");
    inputs.push_back(input_record(path));
    profiles = ecl_profiles(read_weights(path), source);
  } else {
    if (!fs::exists(opt.predictions)) throw IoError("missing predictions '" + opt.predictions + "'");
    inputs.push_back(input_record(opt.predictions));
    const auto p = read_predictions(opt.predictions, PhoneInventory::standard());
    if (p.votes.empty()) throw DataError("predictions carry no MBL vote counts");
    profiles = mbl_profiles(p.votes, PhoneInventory::standard());
    if (!opt.source.empty()) profiles.source = opt.source;
  }
  auto tree = bootstrap_pvalues(profiles, ward_cluster(profiles), opt.bootstrap);
  const auto stem = (fs::path(opt.out_dir) / ("dendrogram_" + to_lower(profiles.source))).string();
  export_dendrogram(tree, DendrogramFormat::kNewick, stem + ".nwk");
  export_dendrogram(tree, DendrogramFormat::kDot, stem + ".dot");
  export_dendrogram(tree, DendrogramFormat::kJson, stem + ".json");
  write_json(stem + ".manifest.json", {{"command", "cluster"},
                                       {"source", profiles.source},
                                       {"n_boot", opt.bootstrap.n_boot},
                                       {"scales", opt.bootstrap.scales},
                                       {"seed", opt.bootstrap.seed},
                                       {"inputs", inputs}});
  return tree;
}

}  // namespace phonelearn

#endif  // PHONELEARN_PIPELINE_HPP_
