#include "lomatch/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <set>
#include <tuple>

namespace lomatch {

namespace {

std::string padded_id(char prefix, Index i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%c%04lld", prefix,
                static_cast<long long>(i));
  return buf;
}

const std::vector<std::string>& vocabulary() {
  static const std::vector<std::string> words = {
      "algebra",    "analysis",   "automata",   "bayesian",  "calculus",
      "circuits",   "compilers",  "computing",  "databases", "derivatives",
      "dynamics",   "encryption", "entropy",    "geometry",  "graphs",
      "heuristics", "induction",  "kernels",    "lattices",  "logic",
      "matrices",   "networks",   "optimization", "parsing", "probability",
      "protocols",  "recursion",  "regression", "robotics",  "sampling",
      "scheduling", "semantics",  "signals",    "sorting",   "statistics",
      "syntax",     "tensors",    "topology",   "vectors",   "verification"};
  return words;
}

const std::vector<std::string>& resource_types() {
  static const std::vector<std::string> types = {
      "animation", "case_study", "exercise", "lecture", "questionnaire",
      "simulation"};
  return types;
}

std::string random_sentence(std::mt19937_64& rng, int min_words,
                            int max_words) {
  std::uniform_int_distribution<int> count(min_words, max_words);
  std::uniform_int_distribution<std::size_t> pick(0, vocabulary().size() - 1);
  const int n = count(rng);
  std::string text;
  for (int i = 0; i < n; ++i) {
    if (i > 0) text += ' ';
    text += vocabulary()[pick(rng)];
  }
  return text;
}

// One or two character-level edits, keeping the string non-empty.
std::string perturb_text(std::mt19937_64& rng, std::string text) {
  if (text.size() < 2) return text;
  std::uniform_int_distribution<int> edits(1, 2);
  std::uniform_int_distribution<std::size_t> pos(0, text.size() - 2);
  std::uniform_int_distribution<int> letter(0, 25);
  const int n = edits(rng);
  for (int e = 0; e < n; ++e) {
    const std::size_t i = pos(rng);
    if (e % 2 == 0) {
      std::swap(text[i], text[i + 1]);
    } else {
      text[i] = static_cast<char>('a' + letter(rng));
    }
  }
  return text;
}

LearningObjectRecord random_record(std::mt19937_64& rng, std::string id,
                                   std::string repository) {
  std::uniform_int_distribution<std::size_t> pick(0, vocabulary().size() - 1);
  std::uniform_int_distribution<std::size_t> type_pick(
      0, resource_types().size() - 1);
  std::uniform_int_distribution<int> kw_count(2, 5);

  LearningObjectRecord rec;
  rec.id = std::move(id);
  rec.repository = std::move(repository);
  rec.title = random_sentence(rng, 3, 6);
  rec.description = random_sentence(rng, 8, 20);
  const int kws = kw_count(rng);
  for (int k = 0; k < kws; ++k) rec.keywords.insert(vocabulary()[pick(rng)]);
  rec.resource_type = resource_types()[type_pick(rng)];
  return rec;
}

LearningObjectRecord noisy_copy(std::mt19937_64& rng,
                                const LearningObjectRecord& src,
                                std::string id, std::string repository) {
  LearningObjectRecord rec = src;
  rec.id = std::move(id);
  rec.repository = std::move(repository);
  rec.title = perturb_text(rng, rec.title);
  rec.description = perturb_text(rng, rec.description);
  if (rec.keywords.size() > 2) {
    rec.keywords.erase(rec.keywords.begin());  // drop one keyword
  }
  // Repositories occasionally disagree on the resource type.
  std::uniform_int_distribution<int> relabel(0, 9);
  if (relabel(rng) == 0) {
    std::uniform_int_distribution<std::size_t> type_pick(
        0, resource_types().size() - 1);
    rec.resource_type = resource_types()[type_pick(rng)];
  }
  return rec;
}

}  // namespace

FeatureDataset synth_feature_corpus(const FeatureCorpusParams& params) {
  if (params.pair_count < 1) {
    throw std::invalid_argument("synth_feature_corpus: pair_count must be >= 1");
  }
  if (params.match_fraction < 0.0 || params.match_fraction > 1.0) {
    throw std::invalid_argument(
        "synth_feature_corpus: match_fraction must be in [0,1]");
  }
  if (params.match_prototype.size() != params.nonmatch_prototype.size()) {
    throw std::invalid_argument("synth_feature_corpus: prototype dimensions");
  }
  const Index d = params.match_prototype.size();
  const Index n = params.pair_count;
  const auto matches = static_cast<Index>(
      std::llround(params.match_fraction * static_cast<double>(n)));

  std::mt19937_64 rng(params.seed);
  std::normal_distribution<double> noise(0.0, 1.0);

  FeatureDataset data;
  data.X.resize(n, d);
  data.pairs.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    const bool is_match = i < matches;
    const Vector& proto =
        is_match ? params.match_prototype : params.nonmatch_prototype;
    for (Index j = 0; j < d; ++j) {
      const double value = proto[j] + params.noise_sigma * noise(rng);
      data.X(i, j) = std::clamp(value, 0.0, 1.0);
    }
    data.pairs.push_back({padded_id('S', i), padded_id('T', i),
                          is_match ? PairLabel::kMatch : PairLabel::kNonMatch});
  }
  return data;
}

RecordCorpus synth_record_corpus(const RecordCorpusParams& params) {
  if (params.repository_size < 1) {
    throw std::invalid_argument("synth_record_corpus: repository_size >= 1");
  }
  if (params.matched_count < 0 ||
      params.matched_count > params.repository_size) {
    throw std::invalid_argument(
        "synth_record_corpus: matched_count must be within repository size");
  }
  std::mt19937_64 rng(params.seed);
  RecordCorpus corpus;
  for (Index i = 0; i < params.repository_size; ++i) {
    corpus.source.push_back(
        normalize_record(random_record(rng, padded_id('S', i), "source-repo")));
  }
  for (Index i = 0; i < params.repository_size; ++i) {
    if (i < params.matched_count) {
      corpus.target.push_back(normalize_record(
          noisy_copy(rng, corpus.source[static_cast<std::size_t>(i)],
                     padded_id('T', i), "target-repo")));
      corpus.gold_matches.push_back(
          {padded_id('S', i), padded_id('T', i), PairLabel::kMatch});
    } else {
      corpus.target.push_back(normalize_record(
          random_record(rng, padded_id('T', i), "target-repo")));
    }
  }
  return corpus;
}

std::vector<InstancePair> synth_gold_pairs(const RecordCorpus& corpus,
                                           double neg_ratio,
                                           std::uint64_t seed) {
  std::vector<InstancePair> gold = corpus.gold_matches;
  std::set<std::pair<std::string, std::string>> matched;
  for (const auto& p : corpus.gold_matches) {
    matched.emplace(p.source_id, p.target_id);
  }
  std::vector<InstancePair> negatives;
  for (const auto& s : corpus.source) {
    for (const auto& t : corpus.target) {
      if (!matched.count({s.id, t.id})) {
        negatives.push_back({s.id, t.id, PairLabel::kNonMatch});
      }
    }
  }
  if (neg_ratio >= 0.0) {
    const auto want = static_cast<std::size_t>(
        std::floor(neg_ratio * static_cast<double>(corpus.gold_matches.size())));
    std::mt19937_64 rng(seed);
    std::shuffle(negatives.begin(), negatives.end(), rng);
    if (negatives.size() > want) negatives.resize(want);
    std::sort(negatives.begin(), negatives.end(),
              [](const InstancePair& a, const InstancePair& b) {
                return std::tie(a.source_id, a.target_id) <
                       std::tie(b.source_id, b.target_id);
              });
  }
  gold.insert(gold.end(), negatives.begin(), negatives.end());
  return gold;
}

LabelSplit split_label_fraction(const FeatureDataset& full, double fraction,
                                std::uint64_t seed) {
  if (fraction <= 0.0 || fraction >= 1.0) {
    throw std::invalid_argument(
        "split_label_fraction: fraction must be in (0,1)");
  }
  std::map<std::string, std::vector<Index>> by_class;
  for (Index i = 0; i < full.size(); ++i) {
    const auto& p = full.pairs[static_cast<std::size_t>(i)];
    if (!p.label) {
      throw std::invalid_argument(
          "split_label_fraction: dataset has unlabeled rows");
    }
    by_class[to_string(*p.label)].push_back(i);
  }

  std::mt19937_64 rng(seed);
  std::set<Index> keep_labeled;
  for (auto& [label, members] : by_class) {
    std::shuffle(members.begin(), members.end(), rng);
    auto take = static_cast<std::size_t>(
        std::llround(fraction * static_cast<double>(members.size())));
    take = std::max<std::size_t>(take, 1);
    take = std::min(take, members.size());
    for (std::size_t j = 0; j < take; ++j) keep_labeled.insert(members[j]);
  }

  LabelSplit split;
  split.labeled.schema_id = full.schema_id;
  split.unlabeled.schema_id = full.schema_id;
  const auto labeled_n = static_cast<Index>(keep_labeled.size());
  split.labeled.X.resize(labeled_n, full.X.cols());
  split.unlabeled.X.resize(full.size() - labeled_n, full.X.cols());
  Index li = 0, ui = 0;
  for (Index i = 0; i < full.size(); ++i) {
    const auto& p = full.pairs[static_cast<std::size_t>(i)];
    if (keep_labeled.count(i)) {
      split.labeled.X.row(li++) = full.X.row(i);
      split.labeled.pairs.push_back(p);
    } else {
      split.unlabeled.X.row(ui++) = full.X.row(i);
      split.unlabeled.pairs.push_back({p.source_id, p.target_id, std::nullopt});
      split.heldout_gold.push_back(*p.label);
    }
  }
  return split;
}

}  // namespace lomatch
