#pragma once

#include "lomatch/types.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace lomatch {

/// Gaussian naive Bayes. Continuous features use per-class univariate
/// Gaussians (standard pdf); a schema may declare individual features
/// categorical, in which case their likelihood is the per-class relative
/// frequency of the exact value.
struct NaiveBayesModel {
  std::vector<std::string> classes;  // sorted
  Vector priors;                     // one per class, sums to 1
  Matrix means;                      // classes x features
  Matrix variances;                  // classes x features, floored
  std::vector<Index> class_counts;
  Index training_count = 0;
  std::vector<bool> categorical;  // per feature; empty = all continuous
  // per feature: value -> per-class occurrence count (categorical only)
  std::vector<std::map<double, std::vector<Index>>> categorical_counts;
  std::string schema_id;
  double variance_floor = 1e-6;

  Index feature_count() const { return means.cols(); }
  Index class_index(const std::string& label) const;
};

struct NaiveBayesOptions {
  double variance_floor = 1e-6;
  std::vector<bool> categorical = {};  // empty = all continuous
  std::string schema_id = kLom4Schema;
  // When non-empty, fixes the class alphabet; a listed class with no
  // training example is an error.
  std::vector<std::string> expected_classes = {};
};

/// Fits priors and per-class feature statistics. Throws
/// std::invalid_argument on an empty dataset, fewer than two classes, or
/// an expected class with zero examples.
NaiveBayesModel fit_naive_bayes(const Matrix& X,
                                const std::vector<std::string>& labels,
                                const NaiveBayesOptions& options = {});

/// Class posteriors normalized to sum to 1; computed in log space.
std::map<std::string, double> posterior(const NaiveBayesModel& model,
                                        const Vector& x);

/// Posteriors aligned with model.classes (same values as `posterior`).
Vector posterior_vector(const NaiveBayesModel& model, const Vector& x);

/// Argmax posterior; ties break to the lexicographically smallest label.
std::string classify_nb(const NaiveBayesModel& model, const Vector& x);

void save_naive_bayes(std::ostream& out, const NaiveBayesModel& model);
NaiveBayesModel load_naive_bayes(std::istream& in);

}  // namespace lomatch
