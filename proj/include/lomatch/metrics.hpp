#pragma once

#include "lomatch/types.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace lomatch {

/// Gold-by-predicted counts over a sorted label alphabet.
struct ConfusionMatrix {
  std::vector<std::string> labels;
  Eigen::MatrixXi counts;  // rows: gold, cols: predicted

  Index total() const { return counts.sum(); }
  Index label_index(const std::string& label) const;
  Index tp(const std::string& positive) const;
  Index fp(const std::string& positive) const;
  Index fn(const std::string& positive) const;
  Index tn(const std::string& positive) const;

  /// Adds counts from a matrix over the same alphabet.
  ConfusionMatrix& operator+=(const ConfusionMatrix& other);
};

/// Throws std::invalid_argument on length mismatch. The alphabet is the
/// sorted union of labels seen in either list.
ConfusionMatrix confusion_matrix(const std::vector<std::string>& gold,
                                 const std::vector<std::string>& predicted);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f_score = 0.0;
  // Set when the corresponding denominator was zero and the metric was
  // reported as 0.
  bool precision_flagged = false;
  bool recall_flagged = false;
  bool f_flagged = false;
};

struct MetricsReport {
  std::map<std::string, ClassMetrics> per_class;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f = 0.0;
  ConfusionMatrix confusion;
};

/// One-vs-rest precision/recall/F per class plus macro averages.
MetricsReport prf_metrics(const ConfusionMatrix& cm);

/// Harmonic mean 2*p*r/(p+r); 0 when p + r == 0.
double f_score(double precision, double recall);

/// Whether a reported F-Score agrees with the harmonic mean of the
/// reported precision/recall. Default tolerance matches 3-decimal
/// rounding of published tables.
bool f_score_consistent(double precision, double recall, double reported_f,
                        double tol = 5e-4);

/// Trains on the k-1 remaining folds and labels the test fold.
using Classifier = std::function<std::vector<std::string>(
    const Matrix& train_X, const std::vector<std::string>& train_y,
    const Matrix& test_X)>;

struct CvReport {
  MetricsReport pooled;               // micro aggregation (primary)
  std::vector<MetricsReport> folds;   // per-fold breakdown
  std::vector<int> fold_of;           // test-fold index per record
  double mean_macro_precision = 0.0;  // per-fold means, reported alongside
  double mean_macro_recall = 0.0;
  double mean_macro_f = 0.0;
  int k = 0;
  std::uint64_t seed = 0;
};

/// Stratified k-fold cross-validation, deterministic per seed. Throws
/// when a class has fewer examples than k (a test fold would miss it).
CvReport kfold_cv(const Matrix& X, const std::vector<std::string>& y, int k,
                  std::uint64_t seed, const Classifier& classify);

nlohmann::json to_json(const ConfusionMatrix& cm);
nlohmann::json to_json(const MetricsReport& report);
nlohmann::json to_json(const CvReport& report);

}  // namespace lomatch
