#pragma once

#include "lomatch/metrics.hpp"
#include "lomatch/record.hpp"
#include "lomatch/similarity.hpp"
#include "lomatch/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace lomatch {

/// Per-cluster Gaussian statistics estimated from labeled pairs:
/// feature-wise mean and population standard deviation (floored).
struct GaussianClusterModel {
  std::vector<std::string> labels;  // sorted, distinct
  Matrix means;                     // clusters x features
  Matrix stds;                      // clusters x features
  std::vector<Index> counts;
  std::string schema_id;

  Index cluster_count() const { return means.rows(); }
  Index feature_count() const { return means.cols(); }
};

enum class DecisionRule {
  kMaxScore,   // argmax of the summed density scores (default)
  kLiteralMin  // argmin, the rule as literally written
};

enum class Stage2Coefficient {
  kLiteral,     // 1 / (2*pi*sigma^2)
  kStandardPdf  // 1 / (sqrt(2*pi)*sigma)
};

struct CollectiveConfig {
  bool enabled = false;
  int k_neighbors = 5;
  int max_rounds = 10;
};

struct MatchConfig {
  DecisionRule decision_rule = DecisionRule::kMaxScore;
  Stage2Coefficient stage2_coefficient = Stage2Coefficient::kLiteral;
  double stage8_threshold = 0.05;
  // Features live in [0,1]; a tighter floor lets a within-cluster-constant
  // feature dominate every score through its density coefficient.
  double std_floor = 0.05;
  Index stage7_batch_size = 0;  // <= 0: all of D_u in one batch
  CollectiveConfig collective;
  // Downstream consumers may drop low-confidence decisions before
  // recommendation; 0 keeps everything.
  double min_winner_membership = 0.0;
  std::uint64_t seed = 0;
};

/// One decision per unlabeled pair: winning cluster, normalized
/// memberships (aligned with the model's sorted cluster labels), whether
/// the ambiguity pass flipped it, and the class the cluster maps to.
struct MatchDecision {
  InstancePair pair;
  std::string winner;
  Vector memberships;
  bool reassigned = false;
  std::string match_label;
};

struct ValidationReport {
  ConfusionMatrix confusion;  // pooled over batches
  std::map<std::string, double> per_class_agreement;
  std::size_t stage8_reassignments = 0;
  std::size_t batches = 0;  // 0: no unlabeled data, model validated on D_l
};

struct ClusterClassMapping {
  std::map<std::string, std::string> cluster_to_class;
  Index error_count = 0;
};

struct MatchResult {
  std::vector<MatchDecision> decisions;
  ValidationReport validation;
  ClusterClassMapping mapping;
  GaussianClusterModel model;
};

/// Stage 1: one cluster per distinct label, feature-wise mean and
/// population std floored at std_floor. When expected_labels is given,
/// every listed label must occur (otherwise: empty label group).
GaussianClusterModel init_cluster_stats(
    const Matrix& X, const std::vector<std::string>& labels,
    double std_floor = 0.05, const std::vector<std::string>& expected_labels = {},
    const std::string& schema_id = kLom4Schema);

/// Stage 2: per cluster, sum over features of
///   coef(sigma) * exp(-(x-mu)^2 / (2*sigma^2)).
/// Returned vector aligns with model.labels.
Vector cluster_scores(const GaussianClusterModel& model, const Vector& x,
                      Stage2Coefficient coef = Stage2Coefficient::kLiteral);

struct ClusterAssignment {
  std::string winner;
  Vector memberships;  // normalized scores, sum to 1
};

/// Stage 3: memberships are the scores normalized to sum 1 (uniform when
/// all scores are zero); winner per the decision rule, ties to the
/// lexicographically smallest label.
ClusterAssignment assign_and_membership(const Vector& scores,
                                        const std::vector<std::string>& labels,
                                        DecisionRule rule);

/// One-to-one cluster-to-class assignment minimizing the misassigned
/// count. Ties resolve to the lexicographically smallest mapping (read in
/// cluster-label order).
ClusterClassMapping classes_to_clusters(
    const Eigen::MatrixXi& count_matrix,
    const std::vector<std::string>& cluster_labels,
    const std::vector<std::string>& class_labels);

/// Stages 5-7: retrain Stage 1-3 on (D_u, C_u) per batch, relabel D_l and
/// confuse against L_l. Throws when D_u is smaller than the cluster count
/// or a batch misses a cluster entirely.
ValidationReport swap_validate(const Matrix& labeled_X,
                               const std::vector<std::string>& labeled_y,
                               const Matrix& unlabeled_X,
                               const std::vector<std::string>& winners,
                               const MatchConfig& config);

/// Stage 8, applied once: when the top-two membership gap is at most
/// threshold, the winner moves to the runner-up cluster. Returns the
/// number of reassignments.
std::size_t ambiguity_reassign(std::vector<MatchDecision>& decisions,
                               double threshold,
                               const std::vector<std::string>& cluster_labels);

/// k-NN (cosine) neighborhoods over feature rows; symmetric, no
/// self-neighbors.
struct NeighborhoodGraph {
  std::vector<std::vector<Index>> neighbors;
  std::vector<bool> observed;
  std::vector<std::string> label_alphabet;
};

NeighborhoodGraph build_knn_graph(const Matrix& X, int k_neighbors,
                                  const std::vector<bool>& observed,
                                  const std::vector<std::string>& alphabet);

/// Iterative collective classification: a naive Bayes learner on features
/// augmented with the neighbor-label histogram relabels the unobserved
/// nodes (ascending index) until a fixed point or max_rounds. k=0
/// disables the graph and returns the labels unchanged.
std::vector<std::string> collective_refine(const Matrix& X,
                                           std::vector<std::string> labels,
                                           const std::vector<bool>& observed,
                                           int k_neighbors, int max_rounds);

/// The full pipeline over labeled and unlabeled pair datasets. Labeled
/// rows must all carry labels and cover both classes.
MatchResult match_pipeline(const FeatureDataset& labeled,
                           const FeatureDataset& unlabeled,
                           const MatchConfig& config);

/// Keeps decisions whose winning membership is at least min_membership.
std::vector<MatchDecision> filter_decisions(
    const std::vector<MatchDecision>& decisions, double min_membership,
    const std::vector<std::string>& cluster_labels);

/// Decisions artifact:
/// source_id,target_id,winner,match_label,membership_match,
/// membership_nonmatch,reassigned — requires the binary MATCH/NON_MATCH
/// cluster alphabet.
void write_decisions(std::ostream& out,
                     const std::vector<MatchDecision>& decisions,
                     const std::vector<std::string>& cluster_labels);
std::vector<MatchDecision> read_decisions(std::istream& in);

nlohmann::json to_json(const ValidationReport& report);

}  // namespace lomatch
