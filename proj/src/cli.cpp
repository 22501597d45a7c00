#include "lomatch/cli.hpp"

#include "lomatch/bayes.hpp"
#include "lomatch/fuzzy.hpp"
#include "lomatch/matcher.hpp"
#include "lomatch/metrics.hpp"
#include "lomatch/record.hpp"
#include "lomatch/recommend.hpp"
#include "lomatch/similarity.hpp"
#include "lomatch/synth.hpp"
#include "lomatch/types.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

namespace lomatch::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Defaults, overridable by --config <json>, overridable by flags.
struct PipelineConfig {
  std::string decision_rule = "max_score";
  std::string stage2_coefficient = "literal";
  double stage8_threshold = 0.05;
  double std_floor = 0.05;
  long long stage7_batch_size = 0;
  double min_winner_membership = 0.0;
  bool collective_enabled = false;
  int collective_k = 5;
  int collective_max_rounds = 10;
  // recommender
  int k_neighbors = 10;
  double alpha = 0.5;
  int top_k = 5;
  double scale_min = 1.0;
  double scale_max = 5.0;
  // eval
  int folds = 10;
  std::optional<std::uint64_t> seed;
  std::string out;
};

void apply_config_file(PipelineConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  json doc = json::parse(in);
  cfg.decision_rule = doc.value("decision_rule", cfg.decision_rule);
  cfg.stage2_coefficient =
      doc.value("stage2_coefficient", cfg.stage2_coefficient);
  cfg.stage8_threshold = doc.value("stage8_threshold", cfg.stage8_threshold);
  cfg.std_floor = doc.value("std_floor", cfg.std_floor);
  cfg.stage7_batch_size = doc.value("stage7_batch_size", cfg.stage7_batch_size);
  cfg.min_winner_membership =
      doc.value("min_winner_membership", cfg.min_winner_membership);
  if (doc.contains("collective")) {
    const auto& c = doc.at("collective");
    cfg.collective_enabled = c.value("enabled", cfg.collective_enabled);
    cfg.collective_k = c.value("k", cfg.collective_k);
    cfg.collective_max_rounds = c.value("max_rounds", cfg.collective_max_rounds);
  }
  if (doc.contains("recommender")) {
    const auto& r = doc.at("recommender");
    cfg.k_neighbors = r.value("k_neighbors", cfg.k_neighbors);
    cfg.alpha = r.value("alpha", cfg.alpha);
    cfg.top_k = r.value("top_k", cfg.top_k);
    if (r.contains("scale")) {
      const auto scale = r.at("scale").get<std::vector<double>>();
      if (scale.size() != 2) {
        throw std::invalid_argument("config: recommender.scale needs 2 values");
      }
      cfg.scale_min = scale[0];
      cfg.scale_max = scale[1];
    }
  }
  if (doc.contains("eval")) {
    cfg.folds = doc.at("eval").value("folds", cfg.folds);
  }
  if (doc.contains("seed")) cfg.seed = doc.at("seed").get<std::uint64_t>();
  cfg.out = doc.value("out", cfg.out);
}

MatchConfig to_match_config(const PipelineConfig& cfg) {
  MatchConfig mc;
  if (cfg.decision_rule == "max_score") {
    mc.decision_rule = DecisionRule::kMaxScore;
  } else if (cfg.decision_rule == "literal_min") {
    mc.decision_rule = DecisionRule::kLiteralMin;
  } else {
    throw std::invalid_argument("decision_rule must be max_score|literal_min");
  }
  if (cfg.stage2_coefficient == "literal") {
    mc.stage2_coefficient = Stage2Coefficient::kLiteral;
  } else if (cfg.stage2_coefficient == "standard_pdf") {
    mc.stage2_coefficient = Stage2Coefficient::kStandardPdf;
  } else {
    throw std::invalid_argument(
        "stage2_coefficient must be literal|standard_pdf");
  }
  mc.stage8_threshold = cfg.stage8_threshold;
  mc.std_floor = cfg.std_floor;
  mc.stage7_batch_size = static_cast<Index>(cfg.stage7_batch_size);
  mc.min_winner_membership = cfg.min_winner_membership;
  mc.collective.enabled = cfg.collective_enabled;
  mc.collective.k_neighbors = cfg.collective_k;
  mc.collective.max_rounds = cfg.collective_max_rounds;
  if (cfg.seed) mc.seed = *cfg.seed;
  return mc;
}

json config_echo(const PipelineConfig& cfg) {
  json doc;
  doc["decision_rule"] = cfg.decision_rule;
  doc["stage2_coefficient"] = cfg.stage2_coefficient;
  doc["stage8_threshold"] = cfg.stage8_threshold;
  doc["std_floor"] = cfg.std_floor;
  doc["stage7_batch_size"] = cfg.stage7_batch_size;
  doc["min_winner_membership"] = cfg.min_winner_membership;
  doc["collective"] = {{"enabled", cfg.collective_enabled},
                       {"k", cfg.collective_k},
                       {"max_rounds", cfg.collective_max_rounds}};
  if (cfg.seed) doc["seed"] = *cfg.seed;
  return doc;
}

std::vector<LearningObjectRecord> load_records(const std::string& path,
                                               std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open records file: " + path);
  return parse_repository(in, RecordFormat::kRecordsJsonl, warnings);
}

Ontology load_ontology(const std::string& records_path,
                       const std::string& hierarchy_path,
                       std::vector<std::string>* warnings) {
  auto records = load_records(records_path, warnings);
  std::map<std::string, std::string> hierarchy;
  if (!hierarchy_path.empty()) {
    std::ifstream in(hierarchy_path);
    if (!in) {
      throw std::invalid_argument("cannot open hierarchy file: " +
                                  hierarchy_path);
    }
    hierarchy = read_hierarchy_file(in);
  }
  return make_ontology(std::move(records), std::move(hierarchy));
}

FeatureDataset load_features(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open features file: " + path);
  return read_feature_file(in);
}

void ensure_parent_dir(const fs::path& file) {
  const auto parent = file.parent_path();
  if (!parent.empty()) fs::create_directories(parent);
}

std::ofstream open_out(const fs::path& file) {
  ensure_parent_dir(file);
  std::ofstream out(file);
  if (!out) {
    throw std::invalid_argument("cannot open output file: " + file.string());
  }
  return out;
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

std::uint64_t require_seed(const PipelineConfig& cfg, const char* why) {
  if (!cfg.seed) {
    throw std::invalid_argument(std::string("--seed is required for ") + why);
  }
  return *cfg.seed;
}

// ---------------------------------------------------------------------------
// subcommand bodies

int cmd_ingest(const std::string& records_path, const std::string& out_path) {
  std::vector<std::string> warnings;
  const auto records = load_records(records_path, &warnings);
  print_warnings(warnings);
  auto out = open_out(out_path);
  write_repository(out, records);
  std::cout << "ingested " << records.size() << " records -> " << out_path
            << "\n";
  return 0;
}

int cmd_pairs(const std::string& source_path, const std::string& target_path,
              const std::string& out_path) {
  std::vector<std::string> warnings;
  const auto source = load_ontology(source_path, "", &warnings);
  const auto target = load_ontology(target_path, "", &warnings);
  print_warnings(warnings);
  const auto pairs =
      generate_candidate_pairs(source, target, PairStrategy::kFullCross);
  auto out = open_out(out_path);
  write_pair_file(out, pairs);
  std::cout << "generated " << pairs.size() << " candidate pairs -> "
            << out_path << "\n";
  return 0;
}

int cmd_features(const std::string& source_path, const std::string& target_path,
                 const std::string& pairs_path, const std::string& labels_path,
                 const std::string& hierarchy_path,
                 const std::string& out_path) {
  std::vector<std::string> warnings;
  const auto source = load_ontology(source_path, hierarchy_path, &warnings);
  const auto target = load_ontology(target_path, hierarchy_path, &warnings);
  print_warnings(warnings);

  std::vector<InstancePair> pairs;
  if (pairs_path.empty()) {
    pairs = generate_candidate_pairs(source, target, PairStrategy::kFullCross);
  } else {
    std::ifstream in(pairs_path);
    if (!in) throw std::invalid_argument("cannot open pairs file: " + pairs_path);
    pairs = read_pair_file(in);
  }

  if (!labels_path.empty()) {
    std::ifstream in(labels_path);
    if (!in) {
      throw std::invalid_argument("cannot open labels file: " + labels_path);
    }
    const auto gold = read_pair_file(in);
    std::map<std::pair<std::string, std::string>, PairLabel> by_pair;
    for (const auto& g : gold) {
      if (g.label) by_pair[{g.source_id, g.target_id}] = *g.label;
    }
    std::size_t attached = 0;
    for (auto& p : pairs) {
      auto it = by_pair.find({p.source_id, p.target_id});
      if (it != by_pair.end()) {
        p.label = it->second;
        ++attached;
      }
    }
    std::cout << "attached " << attached << " labels\n";
  }

  const auto data = extract_feature_matrix(pairs, source, target);
  auto out = open_out(out_path);
  write_feature_file(out, data);
  std::cout << "extracted " << data.size() << " feature rows -> " << out_path
            << "\n";
  return 0;
}

int cmd_match(const PipelineConfig& cfg, const std::string& features_path,
              double label_fraction) {
  if (cfg.out.empty()) throw std::invalid_argument("--out directory required");
  const auto config = to_match_config(cfg);
  const auto full = load_features(features_path);

  FeatureDataset labeled, unlabeled;
  std::vector<PairLabel> heldout;
  bool has_holdout = false;
  if (label_fraction > 0.0) {
    const auto seed = require_seed(cfg, "--label-fraction splits");
    auto split = split_label_fraction(full, label_fraction, seed);
    labeled = std::move(split.labeled);
    unlabeled = std::move(split.unlabeled);
    heldout = std::move(split.heldout_gold);
    has_holdout = true;
  } else {
    labeled.schema_id = unlabeled.schema_id = full.schema_id;
    std::vector<Index> li, ui;
    for (Index i = 0; i < full.size(); ++i) {
      (full.pairs[static_cast<std::size_t>(i)].label ? li : ui).push_back(i);
    }
    labeled.X.resize(static_cast<Index>(li.size()), full.X.cols());
    unlabeled.X.resize(static_cast<Index>(ui.size()), full.X.cols());
    for (std::size_t i = 0; i < li.size(); ++i) {
      labeled.X.row(static_cast<Index>(i)) = full.X.row(li[i]);
      labeled.pairs.push_back(full.pairs[static_cast<std::size_t>(li[i])]);
    }
    for (std::size_t i = 0; i < ui.size(); ++i) {
      unlabeled.X.row(static_cast<Index>(i)) = full.X.row(ui[i]);
      unlabeled.pairs.push_back(full.pairs[static_cast<std::size_t>(ui[i])]);
    }
  }

  const auto result = match_pipeline(labeled, unlabeled, config);
  const fs::path out_dir(cfg.out);
  fs::create_directories(out_dir);

  {
    auto out = open_out(out_dir / "decisions.csv");
    write_decisions(out, result.decisions, result.model.labels);
  }
  if (config.min_winner_membership > 0.0) {
    const auto kept = filter_decisions(
        result.decisions, config.min_winner_membership, result.model.labels);
    auto out = open_out(out_dir / "decisions.filtered.csv");
    write_decisions(out, kept, result.model.labels);
    std::cout << "kept " << kept.size() << "/" << result.decisions.size()
              << " decisions above membership "
              << format_value(config.min_winner_membership) << "\n";
  }
  {
    json doc;
    doc["format"] = "lom.validation.v1";
    doc["validation"] = to_json(result.validation);
    json mapping;
    for (const auto& [cluster, cls] : result.mapping.cluster_to_class) {
      mapping[cluster] = cls;
    }
    doc["classes_to_clusters"] = {{"mapping", std::move(mapping)},
                                  {"error_count", result.mapping.error_count}};
    doc["config"] = config_echo(cfg);
    auto out = open_out(out_dir / "validation.json");
    out << doc.dump(2) << "\n";
  }
  if (has_holdout) {
    std::vector<InstancePair> gold;
    std::vector<std::string> gold_labels, predicted;
    for (std::size_t i = 0; i < heldout.size(); ++i) {
      const auto& p = unlabeled.pairs[i];
      gold.push_back({p.source_id, p.target_id, heldout[i]});
      gold_labels.push_back(to_string(heldout[i]));
      predicted.push_back(result.decisions[i].match_label);
    }
    {
      auto out = open_out(out_dir / "holdout_gold.csv");
      write_pair_file(out, gold);
    }
    const auto report = prf_metrics(confusion_matrix(gold_labels, predicted));
    json doc;
    doc["format"] = "lom.metrics.v1";
    doc["metrics"] = to_json(report);
    doc["config"] = config_echo(cfg);
    auto out = open_out(out_dir / "holdout_metrics.json");
    out << doc.dump(2) << "\n";
    std::cout << "holdout macro F " << format_value(report.macro_f) << "\n";
  }
  std::cout << "matched " << result.decisions.size() << " pairs ("
            << result.validation.stage8_reassignments
            << " stage-8 reassignments) -> " << (out_dir / "decisions.csv").string()
            << "\n";
  return 0;
}

int cmd_recommend(const PipelineConfig& cfg, const std::string& ratings_path,
                  const std::string& items_path, const std::string& anchors_path,
                  const std::string& hierarchy_path,
                  const std::vector<std::string>& users,
                  const std::string& out_path) {
  RatingScale scale{cfg.scale_min, cfg.scale_max};
  std::ifstream rin(ratings_path);
  if (!rin) {
    throw std::invalid_argument("cannot open ratings file: " + ratings_path);
  }
  const auto ratings = read_rating_file(rin, scale);

  std::vector<std::string> warnings;
  const auto items = load_ontology(items_path, hierarchy_path, &warnings);
  const auto anchors = load_ontology(anchors_path, hierarchy_path, &warnings);
  print_warnings(warnings);
  const auto item_features = build_item_features(items, anchors);

  std::vector<std::string> selected = users;
  if (selected.empty()) selected = ratings.users();

  std::vector<UserRecommendations> all;
  for (const auto& user : selected) {
    if (!ratings.has_user(user)) {
      throw std::invalid_argument("unknown user id: " + user);
    }
    all.push_back({user, recommend_hybrid(ratings, item_features, user,
                                          cfg.top_k, cfg.alpha,
                                          cfg.k_neighbors)});
  }
  auto out = open_out(out_path);
  write_recommendations(out, all);
  std::cout << "recommended for " << all.size() << " users -> " << out_path
            << "\n";
  return 0;
}

int cmd_evaluate(const PipelineConfig& cfg, const std::string& decisions_path,
                 const std::string& gold_path, const std::string& features_path,
                 int cv_folds, const std::string& out_path) {
  json doc;
  doc["format"] = "lom.metrics.v1";
  doc["config"] = config_echo(cfg);

  if (!decisions_path.empty()) {
    if (gold_path.empty()) {
      throw std::invalid_argument("--gold is required with --decisions");
    }
    std::ifstream din(decisions_path);
    if (!din) {
      throw std::invalid_argument("cannot open decisions file: " +
                                  decisions_path);
    }
    const auto decisions = read_decisions(din);
    std::ifstream gin(gold_path);
    if (!gin) throw std::invalid_argument("cannot open gold file: " + gold_path);
    const auto gold = read_pair_file(gin);
    std::map<std::pair<std::string, std::string>, PairLabel> by_pair;
    for (const auto& g : gold) {
      if (g.label) by_pair[{g.source_id, g.target_id}] = *g.label;
    }
    std::vector<std::string> gold_labels, predicted;
    for (const auto& d : decisions) {
      auto it = by_pair.find({d.pair.source_id, d.pair.target_id});
      if (it == by_pair.end()) {
        throw std::invalid_argument("no gold label for pair (" +
                                    d.pair.source_id + "," +
                                    d.pair.target_id + ")");
      }
      gold_labels.push_back(to_string(it->second));
      predicted.push_back(d.match_label);
    }
    const auto report = prf_metrics(confusion_matrix(gold_labels, predicted));
    doc["metrics"] = to_json(report);
    std::cout << "evaluated " << decisions.size() << " decisions, macro F "
              << format_value(report.macro_f) << "\n";
  } else if (!features_path.empty()) {
    const auto seed = require_seed(cfg, "cross-validation fold assignment");
    const auto full = load_features(features_path);
    std::vector<std::string> labels;
    for (const auto& p : full.pairs) {
      if (!p.label) {
        throw std::invalid_argument(
            "cross-validation needs a fully labeled feature file");
      }
      labels.push_back(to_string(*p.label));
    }
    const auto match_config = to_match_config(cfg);
    const Classifier classifier = [&match_config](
                                      const Matrix& train_X,
                                      const std::vector<std::string>& train_y,
                                      const Matrix& test_X) {
      FeatureDataset train, test;
      train.X = train_X;
      for (std::size_t i = 0; i < train_y.size(); ++i) {
        train.pairs.push_back({"s" + std::to_string(i), "t" + std::to_string(i),
                               parse_pair_label(train_y[i])});
      }
      test.X = test_X;
      for (Index i = 0; i < test_X.rows(); ++i) {
        test.pairs.push_back({"q" + std::to_string(i), "r" + std::to_string(i),
                              std::nullopt});
      }
      const auto result = match_pipeline(train, test, match_config);
      std::vector<std::string> out;
      out.reserve(result.decisions.size());
      for (const auto& d : result.decisions) out.push_back(d.match_label);
      return out;
    };
    const auto report = kfold_cv(full.X, labels, cv_folds, seed, classifier);
    doc["metrics"] = to_json(report);
    std::cout << "cross-validated " << full.size() << " rows over " << cv_folds
              << " folds, pooled macro F "
              << format_value(report.pooled.macro_f) << "\n";
  } else {
    throw std::invalid_argument(
        "evaluate needs --decisions/--gold or --features/--cv");
  }

  auto out = open_out(out_path);
  out << doc.dump(2) << "\n";
  return 0;
}

int cmd_synth(const PipelineConfig& cfg, const std::string& kind,
              long long pair_count, double match_fraction, double sigma,
              long long repo_size, long long matched, double neg_ratio,
              const std::string& out_path) {
  const auto seed = require_seed(cfg, "synthetic corpus generation");
  if (kind == "features") {
    FeatureCorpusParams params;
    params.pair_count = static_cast<Index>(pair_count);
    params.match_fraction = match_fraction;
    params.noise_sigma = sigma;
    params.seed = seed;
    const auto data = synth_feature_corpus(params);
    auto out = open_out(out_path);
    write_feature_file(out, data);
    std::cout << "wrote " << data.size() << " synthetic feature rows -> "
              << out_path << "\n";
    return 0;
  }
  if (kind == "records") {
    RecordCorpusParams params;
    params.repository_size = static_cast<Index>(repo_size);
    params.matched_count = static_cast<Index>(matched);
    params.seed = seed;
    const auto corpus = synth_record_corpus(params);
    const fs::path dir(out_path);
    fs::create_directories(dir);
    {
      auto out = open_out(dir / "source.jsonl");
      write_repository(out, corpus.source);
    }
    {
      auto out = open_out(dir / "target.jsonl");
      write_repository(out, corpus.target);
    }
    {
      const auto gold = synth_gold_pairs(corpus, neg_ratio, seed);
      auto out = open_out(dir / "gold.csv");
      write_pair_file(out, gold);
    }
    std::cout << "wrote record corpus (" << corpus.source.size() << "x"
              << corpus.target.size() << ", " << corpus.gold_matches.size()
              << " planted matches) -> " << out_path << "\n";
    return 0;
  }
  throw std::invalid_argument("--kind must be features|records");
}

}  // namespace

int run_command(const std::vector<std::string>& args) {
  PipelineConfig cfg;
  // Config file values load first so flags can override them.
  for (std::size_t i = 0; i + 1 < args.size(); ++i) {
    if (args[i] == "--config") {
      try {
        apply_config_file(cfg, args[i + 1]);
      } catch (const std::exception& e) {
        std::cerr << "error: [config] " << e.what() << "\n";
        return 1;
      }
    }
  }

  CLI::App app{"learning-object matching and recommendation pipeline"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file (defaults layer)");
  std::uint64_t seed_flag = 0;
  auto* seed_opt =
      app.add_option("--seed", seed_flag, "seed for stochastic steps");
  std::string out_flag;
  auto* out_opt = app.add_option("--out", out_flag, "output file or directory");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "validate and normalize records");
  std::string in_records;
  ingest->add_option("--records", in_records, "record file (jsonl)")
      ->required()
      ->check(CLI::ExistingFile);

  // pairs
  auto* pairs = app.add_subcommand("pairs", "generate candidate pairs");
  std::string src_path, tgt_path, strategy = "full-cross";
  pairs->add_option("--source", src_path, "source records")
      ->required()
      ->check(CLI::ExistingFile);
  pairs->add_option("--target", tgt_path, "target records")
      ->required()
      ->check(CLI::ExistingFile);
  pairs->add_option("--strategy", strategy, "pair strategy")
      ->check(CLI::IsMember({"full-cross"}));

  // features
  auto* features = app.add_subcommand("features", "extract similarity features");
  std::string f_pairs, f_labels, f_hierarchy;
  features->add_option("--source", src_path, "source records")
      ->required()
      ->check(CLI::ExistingFile);
  features->add_option("--target", tgt_path, "target records")
      ->required()
      ->check(CLI::ExistingFile);
  features->add_option("--pairs", f_pairs, "candidate pair file (default: full cross)")
      ->check(CLI::ExistingFile);
  features->add_option("--labels", f_labels, "gold pair-label file")
      ->check(CLI::ExistingFile);
  features->add_option("--type-hierarchy", f_hierarchy,
                       "resource-type hierarchy (child,parent csv)")
      ->check(CLI::ExistingFile);

  // match
  auto* match = app.add_subcommand("match", "run the matching pipeline");
  std::string m_features;
  double label_fraction = 0.0;
  match->add_option("--features", m_features, "feature matrix file")
      ->required()
      ->check(CLI::ExistingFile);
  match->add_option("--label-fraction", label_fraction,
                    "treat only this seeded fraction of labels as known");
  match->add_option("--rule", cfg.decision_rule, "max_score|literal_min");
  match->add_option("--coef", cfg.stage2_coefficient, "literal|standard_pdf");
  match->add_option("--stage8-threshold", cfg.stage8_threshold,
                    "ambiguity reassignment threshold");
  match->add_option("--std-floor", cfg.std_floor, "cluster std floor");
  match->add_option("--batch-size", cfg.stage7_batch_size,
                    "stage-7 batch size (0 = all)");
  match->add_option("--min-membership", cfg.min_winner_membership,
                    "filter seam for downstream consumers");
  match->add_flag("--collective", cfg.collective_enabled,
                  "enable collective refinement");
  match->add_option("--collective-k", cfg.collective_k, "k-NN graph degree");
  match->add_option("--collective-rounds", cfg.collective_max_rounds,
                    "max refinement rounds");

  // recommend
  auto* recommend = app.add_subcommand("recommend", "hybrid recommendations");
  std::string r_ratings, r_items, r_anchors, r_hierarchy;
  std::vector<std::string> r_users;
  recommend->add_option("--ratings", r_ratings, "ratings csv")
      ->required()
      ->check(CLI::ExistingFile);
  recommend->add_option("--items", r_items, "item records (jsonl)")
      ->required()
      ->check(CLI::ExistingFile);
  recommend->add_option("--anchors", r_anchors, "topic anchor records (jsonl)")
      ->required()
      ->check(CLI::ExistingFile);
  recommend->add_option("--type-hierarchy", r_hierarchy,
                        "resource-type hierarchy (child,parent csv)")
      ->check(CLI::ExistingFile);
  recommend->add_option("--user", r_users, "user id (repeatable; default all)");
  recommend->add_option("--top-k", cfg.top_k, "recommendations per user");
  recommend->add_option("--alpha", cfg.alpha, "CF weight in the blend");
  recommend->add_option("--k-neighbors", cfg.k_neighbors, "CF neighborhood");
  recommend->add_option("--scale-min", cfg.scale_min, "rating scale minimum");
  recommend->add_option("--scale-max", cfg.scale_max, "rating scale maximum");

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "metrics and cross-validation");
  std::string e_decisions, e_gold, e_features;
  evaluate->add_option("--decisions", e_decisions, "decisions csv")
      ->check(CLI::ExistingFile);
  evaluate->add_option("--gold", e_gold, "gold pair-label file")
      ->check(CLI::ExistingFile);
  evaluate->add_option("--features", e_features, "labeled feature file for CV")
      ->check(CLI::ExistingFile);
  evaluate->add_option("--cv", cfg.folds, "fold count");
  evaluate->add_option("--rule", cfg.decision_rule, "max_score|literal_min");
  evaluate->add_option("--coef", cfg.stage2_coefficient, "literal|standard_pdf");
  evaluate->add_option("--stage8-threshold", cfg.stage8_threshold,
                       "ambiguity reassignment threshold");

  // synth
  auto* synth = app.add_subcommand("synth", "generate synthetic corpora");
  std::string s_kind = "features";
  long long s_pairs = 200, s_size = 100, s_matched = 100;
  double s_match_fraction = 0.5, s_sigma = 0.08, s_neg_ratio = -1.0;
  synth->add_option("--kind", s_kind, "features|records")
      ->check(CLI::IsMember({"features", "records"}));
  synth->add_option("--pairs", s_pairs, "feature corpus size");
  synth->add_option("--match-fraction", s_match_fraction, "MATCH share");
  synth->add_option("--sigma", s_sigma, "feature noise sigma");
  synth->add_option("--size", s_size, "records per repository");
  synth->add_option("--matches", s_matched, "planted 1:1 matches");
  synth->add_option("--neg-ratio", s_neg_ratio,
                    "gold negatives per match (<0 keeps all)");

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("lomatch");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (seed_opt->count() > 0) cfg.seed = seed_flag;
  if (out_opt->count() > 0) cfg.out = out_flag;

  const std::string sub = app.get_subcommands().front()->get_name();
  try {
    if (ingest->parsed()) {
      if (cfg.out.empty()) throw std::invalid_argument("--out file required");
      return cmd_ingest(in_records, cfg.out);
    }
    if (pairs->parsed()) {
      if (cfg.out.empty()) throw std::invalid_argument("--out file required");
      return cmd_pairs(src_path, tgt_path, cfg.out);
    }
    if (features->parsed()) {
      if (cfg.out.empty()) throw std::invalid_argument("--out file required");
      return cmd_features(src_path, tgt_path, f_pairs, f_labels, f_hierarchy,
                          cfg.out);
    }
    if (match->parsed()) {
      return cmd_match(cfg, m_features, label_fraction);
    }
    if (recommend->parsed()) {
      if (cfg.out.empty()) throw std::invalid_argument("--out file required");
      return cmd_recommend(cfg, r_ratings, r_items, r_anchors, r_hierarchy,
                           r_users, cfg.out);
    }
    if (evaluate->parsed()) {
      if (cfg.out.empty()) throw std::invalid_argument("--out file required");
      return cmd_evaluate(cfg, e_decisions, e_gold, e_features, cfg.folds,
                          cfg.out);
    }
    if (synth->parsed()) {
      if (cfg.out.empty()) throw std::invalid_argument("--out path required");
      return cmd_synth(cfg, s_kind, s_pairs, s_match_fraction, s_sigma, s_size,
                       s_matched, s_neg_ratio, cfg.out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: [" << sub << "] " << e.what() << "\n";
    return 1;
  }
  std::cerr << "error: no subcommand\n";
  return 1;
}

}  // namespace lomatch::cli
