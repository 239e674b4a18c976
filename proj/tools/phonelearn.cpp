// tools/phonelearn.cpp

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

// phonelearn: command-line driver for feature extraction, training,
// evaluation and the consistency / clustering experiments.
//
// Failures print one JSON line on stderr, {"error": <kind>, "message": ...},
// and exit nonzero.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "phonelearn/pipeline.hpp"

namespace {

int fail(const std::string &kind, const std::string &message) {
  std::cerr << nlohmann::json{{"error", kind}, {"message", message}}.dump() << std::endl;
  return 1;
}

}  // namespace

int main(int argc, char **argv) {
  using namespace phonelearn;

  CLI::App app{"Phone learning simulations: error-correction vs memory-based learners on MFCC frames"};
  app.set_config("--config", "", "Key-value config file; command-line flags override it");
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 1;
  std::string out_dir = ".";
  std::size_t threads = 1;
  app.add_option("--seed", seed, "Master seed; every stage seed derives from it")->capture_default_str();
  app.add_option("--out-dir", out_dir, "Output directory")->capture_default_str();
  app.add_option("--threads", threads, "Worker threads for kNN queries and bootstrap")->capture_default_str();

  // extract
  auto *extract = app.add_subcommand("extract", "WAV + alignment TSV -> feature table CSV");
  std::string audio_dir, alignments, features_out = "features.csv";
  MfccConfig mfcc;
  bool per_word = false;
  extract->add_option("--audio-dir", audio_dir, "Directory of <word_id>.wav files")->required();
  extract->add_option("--alignments", alignments, "Alignment TSV (word_id, phone, start, end)")->required();
  extract->add_option("--output", features_out, "Feature table file name inside --out-dir")->capture_default_str();
  extract->add_option("--mel-filters", mfcc.n_mel_filters)->capture_default_str();
  extract->add_option("--pre-emphasis", mfcc.pre_emphasis)->capture_default_str();
  extract->add_option("--delta-window", mfcc.delta_window)->capture_default_str();
  extract->add_flag("--per-word", per_word, "Window whole words and label frames by centre time");

  // train
  auto *train = app.add_subcommand("train", "Train WH / TD weights or build an MBL exemplar store");
  TrainOptions topt;
  std::string learner = "wh", regime = "raw", diversity = "per_outcome", td_boundary = "word";
  train->add_option("--features", topt.features, "Feature table CSV")->required();
  train->add_option("--learner", learner, "wh | td | mbl")->capture_default_str();
  train->add_option("--regime", regime, "raw | gaussian")->capture_default_str();
  train->add_option("--test-fraction", topt.test_fraction, "Split off this test fraction first (0 = no split)")
      ->capture_default_str();
  train->add_option("--lambda", topt.ecl.learning_rate, "ECL learning rate")->capture_default_str();
  train->add_option("--gamma", topt.ecl.discount, "TD discount")->capture_default_str();
  train->add_option("--diversity", diversity, "per_outcome | shared_scalar")->capture_default_str();
  train->add_option("--td-boundary", td_boundary, "word | stream")->capture_default_str();
  train->add_option("--k", topt.mbl.k, "MBL neighbourhood size")->capture_default_str();
  train->add_option("--n-per-phone", topt.n_per_phone, "Gaussian frames per phone")->capture_default_str();

  // eval
  auto *eval = app.add_subcommand("eval", "Predict a test feature table with a trained learner");
  EvalOptions eopt;
  std::string eval_diversity;
  eval->add_option("--state", eopt.manifest, "Manifest written by `train`")->required();
  eval->add_option("--test", eopt.test_features, "Test feature table CSV")->required();
  eval->add_option("--regime", eopt.regime, "Regime tag for the records (e.g. cross-speaker)");
  eval->add_option("--diversity", eval_diversity, "Override the ECL diversity mode");

  // gaussian
  auto *gaussian = app.add_subcommand("gaussian", "Generate Gaussian training sets of several sizes");
  std::string gaussian_features;
  std::vector<std::size_t> sizes{100};
  gaussian->add_option("--features", gaussian_features, "Training feature table CSV")->required();
  gaussian->add_option("--sizes", sizes, "Frames per phone, one dataset each")->delimiter(',')->capture_default_str();

  // consistency
  auto *consistency = app.add_subcommand("consistency", "Multi-session consistency simulation");
  ConsistencyOptions copt;
  std::string order = "tiled";
  consistency->add_option("--features", copt.features, "Corpus feature table CSV")->required();
  consistency->add_option("--sessions", copt.sessions.n_sessions)->capture_default_str();
  consistency->add_option("--vocab-size", copt.sessions.vocab_size)->capture_default_str();
  consistency->add_option("--replications", copt.sessions.replications)->capture_default_str();
  consistency->add_option("--noise-fraction", copt.sessions.noise_fraction)->capture_default_str();
  consistency->add_option("--noise-sd", copt.sessions.noise_sd_scale, "Noise SD as a multiple of feature SD")
      ->capture_default_str();
  consistency->add_option("--test-words", copt.sessions.test_words)->capture_default_str();
  consistency->add_option("--order", order, "tiled | interleaved")->capture_default_str();
  consistency->add_option("--lambda", copt.ecl.learning_rate)->capture_default_str();
  consistency->add_option("--gamma", copt.ecl.discount)->capture_default_str();
  consistency->add_option("--k", copt.mbl.k)->capture_default_str();

  // cluster
  auto *cluster = app.add_subcommand("cluster", "Ward clustering with multiscale bootstrap p-values");
  ClusterOptions kopt;
  cluster->add_option("--weights", kopt.weights, "ECL weight CSV or train manifest");
  cluster->add_option("--predictions", kopt.predictions, "MBL predictions CSV (from `eval`)");
  cluster->add_option("--source", kopt.source, "Label for output file names");
  cluster->add_option("--n-boot", kopt.bootstrap.n_boot, "Bootstrap replicates per scale")->capture_default_str();
  cluster->add_option("--scales", kopt.bootstrap.scales, "Sample-size ratios")->delimiter(',')->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return fail("usage", e.what());
  }

  try {
    if (*extract) {
      mfcc.framing = per_word ? FramingMode::kPerWord : FramingMode::kPerSegment;
      ensure_dir(out_dir);
      const auto path = (fs::path(out_dir) / features_out).string();
      const auto r = cmd_extract(audio_dir, alignments, mfcc, path);
      for (const auto &w : r.warnings) std::cerr << "warning: " << w << '\n';
      std::cout << path << ": " << r.dataset.size() << " frames\n";
      if (!r.errors.empty()) {
        for (std::size_t i = 0; i + 1 < r.errors.size(); ++i) std::cerr << r.errors[i] << '\n';
        return fail("extract", std::to_string(r.errors.size()) + " file(s) failed; last: " + r.errors.back());
      }
    } else if (*train) {
      topt.learner = parse_learner(learner);
      topt.regime = parse_regime(regime);
      topt.ecl.diversity = parse_diversity(diversity);
      topt.ecl.td_boundary = td_boundary == "stream" ? TdBoundary::kStream : TdBoundary::kWord;
      topt.seed = seed;
      topt.out_dir = out_dir;
      const auto r = cmd_train(topt);
      std::cout << r.manifest_path << '\n';
    } else if (*eval) {
      if (!eval_diversity.empty()) eopt.diversity = parse_diversity(eval_diversity);
      eopt.threads = threads;
      eopt.out_dir = out_dir;
      const auto r = cmd_eval(eopt);
      std::cout << r.stem << ": overall " << format_shortest(r.table.overall) << "% on "
                << r.predictions.records.size() << " frames\n";
    } else if (*gaussian) {
      for (const auto &p : cmd_gaussian(gaussian_features, sizes, seed, out_dir)) std::cout << p << '\n';
    } else if (*consistency) {
      copt.sessions.seed = seed;
      copt.sessions.order = order == "interleaved" ? ReplicationOrder::kInterleaved : ReplicationOrder::kTiled;
      copt.threads = threads;
      copt.out_dir = out_dir;
      const auto r = cmd_consistency(copt);
      for (const auto &[l, s] : r.summaries) {
        std::cout << learner_name(l) << " session medians:";
        for (double m : s.session_median) std::cout << ' ' << format_shortest(m);
        std::cout << '\n';
      }
    } else if (*cluster) {
      kopt.bootstrap.seed = derive_seed(seed, "cluster");
      kopt.bootstrap.threads = threads;
      kopt.out_dir = out_dir;
      const auto tree = cmd_cluster(kopt);
      std::cout << tree.nodes.size() << " merges\n";
    }
  } catch (const Error &e) {
    return fail(e.kind(), e.what());
  } catch (const std::exception &e) {
    return fail("internal", e.what());
  }
  return 0;
}
