#pragma once

#include "lomatch/record.hpp"
#include "lomatch/similarity.hpp"
#include "lomatch/types.hpp"

#include <cstdint>
#include <vector>

namespace lomatch {

/// Seeded desk-scale pair corpus: feature rows drawn around one prototype
/// per class with Gaussian noise, clipped to [0,1].
struct FeatureCorpusParams {
  Index pair_count = 200;
  double match_fraction = 0.5;
  Vector match_prototype = (Vector(4) << 0.9, 0.9, 0.9, 1.0).finished();
  Vector nonmatch_prototype = (Vector(4) << 0.2, 0.2, 0.1, 0.0).finished();
  double noise_sigma = 0.08;
  std::uint64_t seed = 0;
};

FeatureDataset synth_feature_corpus(const FeatureCorpusParams& params);

/// Seeded pair of record repositories with a planted 1:1 match set. The
/// first `matched_count` target records are noisy copies of their source
/// counterparts.
struct RecordCorpusParams {
  Index repository_size = 100;
  Index matched_count = 100;
  std::uint64_t seed = 0;
};

struct RecordCorpus {
  std::vector<LearningObjectRecord> source;
  std::vector<LearningObjectRecord> target;
  std::vector<InstancePair> gold_matches;
};

RecordCorpus synth_record_corpus(const RecordCorpusParams& params);

/// Gold pair file content: all planted matches plus sampled non-matches.
/// neg_ratio < 0 keeps every cross-product negative; otherwise
/// floor(neg_ratio * matches) negatives are sampled without replacement.
std::vector<InstancePair> synth_gold_pairs(const RecordCorpus& corpus,
                                           double neg_ratio,
                                           std::uint64_t seed);

/// Stratified split of a fully labeled dataset into a labeled fraction
/// and an unlabeled remainder (labels stripped; gold kept aside).
struct LabelSplit {
  FeatureDataset labeled;
  FeatureDataset unlabeled;
  std::vector<PairLabel> heldout_gold;  // aligned with unlabeled rows
};

LabelSplit split_label_fraction(const FeatureDataset& full, double fraction,
                                std::uint64_t seed);

}  // namespace lomatch
