#pragma once

#include "lomatch/record.hpp"
#include "lomatch/types.hpp"

#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace lomatch {

/// 1 - editDistance(a,b) / max(|a|,|b|), over UTF-8 code points.
/// Both empty -> 1.
double edit_similarity(std::string_view a, std::string_view b);

/// Jaccard similarity |a∩b| / |a∪b|. Both empty -> 1.
double token_set_similarity(const std::set<std::string>& a,
                            const std::set<std::string>& b);

/// Cosine of term-frequency vectors over normalized tokens. Either text
/// empty (no tokens) -> 0.
double tf_cosine_similarity(std::string_view a, std::string_view b);

/// True when the two resource types are equal or one is an ancestor of
/// the other in either ontology's class hierarchy.
bool types_related(const std::string& a, const std::string& b,
                   const Ontology& source, const Ontology& target);

/// Scores used when a field pair carries no signal: two absent values are
/// no evidence against a match (title, keywords), while an absent
/// description simply contributes nothing.
struct FeatureConventions {
  double both_empty_title = 1.0;
  double both_empty_keywords = 1.0;
  double empty_description = 0.0;  // either side empty
};

/// lom4 schema: (title edit similarity, description tf-cosine, keyword
/// Jaccard, type indicator). Throws std::invalid_argument when a pair id
/// does not resolve.
FeatureVector extract_features(const InstancePair& pair,
                               const Ontology& source, const Ontology& target,
                               const FeatureConventions& conventions = {});

/// A feature matrix with the pairs it was extracted from; labels live on
/// the pairs. Rows of X align with `pairs`.
struct FeatureDataset {
  std::vector<InstancePair> pairs;
  Matrix X;
  std::string schema_id = kLom4Schema;

  Index size() const { return X.rows(); }
};

FeatureDataset extract_feature_matrix(const std::vector<InstancePair>& pairs,
                                      const Ontology& source,
                                      const Ontology& target,
                                      const FeatureConventions& conventions = {});

/// Feature matrix file: `source_id,target_id,f1,..,fd[,label]` lines with
/// a `#format:` header carrying the schema id.
void write_feature_file(std::ostream& out, const FeatureDataset& data);
FeatureDataset read_feature_file(std::istream& in);

}  // namespace lomatch
