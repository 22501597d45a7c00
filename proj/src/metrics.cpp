#include "lomatch/metrics.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

namespace lomatch {

using nlohmann::json;

Index ConfusionMatrix::label_index(const std::string& label) const {
  auto it = std::lower_bound(labels.begin(), labels.end(), label);
  if (it == labels.end() || *it != label) {
    throw std::invalid_argument("label not in confusion matrix: " + label);
  }
  return static_cast<Index>(it - labels.begin());
}

Index ConfusionMatrix::tp(const std::string& positive) const {
  const Index p = label_index(positive);
  return counts(p, p);
}

Index ConfusionMatrix::fp(const std::string& positive) const {
  const Index p = label_index(positive);
  return counts.col(p).sum() - counts(p, p);
}

Index ConfusionMatrix::fn(const std::string& positive) const {
  const Index p = label_index(positive);
  return counts.row(p).sum() - counts(p, p);
}

Index ConfusionMatrix::tn(const std::string& positive) const {
  const Index p = label_index(positive);
  return counts.sum() - counts.row(p).sum() - counts.col(p).sum() +
         counts(p, p);
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
  if (labels != other.labels) {
    throw std::invalid_argument("confusion matrices over different alphabets");
  }
  counts += other.counts;
  return *this;
}

ConfusionMatrix confusion_matrix(const std::vector<std::string>& gold,
                                 const std::vector<std::string>& predicted) {
  if (gold.size() != predicted.size()) {
    throw std::invalid_argument("confusion_matrix: length mismatch");
  }
  ConfusionMatrix cm;
  std::set<std::string> alphabet(gold.begin(), gold.end());
  alphabet.insert(predicted.begin(), predicted.end());
  cm.labels.assign(alphabet.begin(), alphabet.end());
  const Index q = static_cast<Index>(cm.labels.size());
  cm.counts = Eigen::MatrixXi::Zero(q, q);
  for (std::size_t i = 0; i < gold.size(); ++i) {
    cm.counts(cm.label_index(gold[i]), cm.label_index(predicted[i])) += 1;
  }
  return cm;
}

double f_score(double precision, double recall) {
  const double denom = precision + recall;
  if (denom == 0.0) return 0.0;
  return 2.0 * precision * recall / denom;
}

bool f_score_consistent(double precision, double recall, double reported_f,
                        double tol) {
  return std::abs(f_score(precision, recall) - reported_f) < tol;
}

MetricsReport prf_metrics(const ConfusionMatrix& cm) {
  MetricsReport report;
  report.confusion = cm;
  double sum_p = 0.0, sum_r = 0.0, sum_f = 0.0;
  for (const auto& label : cm.labels) {
    ClassMetrics m;
    const auto tp = static_cast<double>(cm.tp(label));
    const auto fp = static_cast<double>(cm.fp(label));
    const auto fn = static_cast<double>(cm.fn(label));
    if (tp + fp == 0.0) {
      m.precision_flagged = true;
    } else {
      m.precision = tp / (tp + fp);
    }
    if (tp + fn == 0.0) {
      m.recall_flagged = true;
    } else {
      m.recall = tp / (tp + fn);
    }
    if (m.precision + m.recall == 0.0) {
      m.f_flagged = true;
    } else {
      m.f_score = f_score(m.precision, m.recall);
    }
    sum_p += m.precision;
    sum_r += m.recall;
    sum_f += m.f_score;
    report.per_class[label] = m;
  }
  const auto q = static_cast<double>(cm.labels.size());
  if (q > 0) {
    report.macro_precision = sum_p / q;
    report.macro_recall = sum_r / q;
    report.macro_f = sum_f / q;
  }
  return report;
}

CvReport kfold_cv(const Matrix& X, const std::vector<std::string>& y, int k,
                  std::uint64_t seed, const Classifier& classify) {
  const Index n = X.rows();
  if (static_cast<std::size_t>(n) != y.size()) {
    throw std::invalid_argument("kfold_cv: label count mismatch");
  }
  if (k < 2 || n < k) {
    throw std::invalid_argument("kfold_cv: need 2 <= k <= dataset size");
  }
  std::map<std::string, std::vector<Index>> by_class;
  for (Index i = 0; i < n; ++i) by_class[y[static_cast<std::size_t>(i)]].push_back(i);
  if (by_class.size() < 2) {
    throw std::invalid_argument("kfold_cv: need at least two classes");
  }
  for (const auto& [label, members] : by_class) {
    if (static_cast<int>(members.size()) < k) {
      throw std::invalid_argument(
          "kfold_cv: class \"" + label +
          "\" has fewer examples than folds (dataset too small)");
    }
  }

  CvReport report;
  report.k = k;
  report.seed = seed;
  report.fold_of.assign(static_cast<std::size_t>(n), -1);
  std::mt19937_64 rng(seed);
  for (auto& [label, members] : by_class) {
    std::shuffle(members.begin(), members.end(), rng);
    for (std::size_t j = 0; j < members.size(); ++j) {
      report.fold_of[static_cast<std::size_t>(members[j])] =
          static_cast<int>(j % static_cast<std::size_t>(k));
    }
  }

  for (int f = 0; f < k; ++f) {
    std::vector<Index> train_idx, test_idx;
    for (Index i = 0; i < n; ++i) {
      (report.fold_of[static_cast<std::size_t>(i)] == f ? test_idx : train_idx)
          .push_back(i);
    }
    Matrix train_X(static_cast<Index>(train_idx.size()), X.cols());
    Matrix test_X(static_cast<Index>(test_idx.size()), X.cols());
    std::vector<std::string> train_y, test_y;
    train_y.reserve(train_idx.size());
    test_y.reserve(test_idx.size());
    for (std::size_t i = 0; i < train_idx.size(); ++i) {
      train_X.row(static_cast<Index>(i)) = X.row(train_idx[i]);
      train_y.push_back(y[static_cast<std::size_t>(train_idx[i])]);
    }
    for (std::size_t i = 0; i < test_idx.size(); ++i) {
      test_X.row(static_cast<Index>(i)) = X.row(test_idx[i]);
      test_y.push_back(y[static_cast<std::size_t>(test_idx[i])]);
    }
    const auto predicted = classify(train_X, train_y, test_X);
    if (predicted.size() != test_y.size()) {
      throw std::runtime_error("kfold_cv: classifier returned wrong count");
    }
    report.folds.push_back(prf_metrics(confusion_matrix(test_y, predicted)));
  }

  // Pool fold confusions; alphabets may differ per fold, so rebuild over
  // the full alphabet.
  std::vector<std::string> alphabet;
  for (const auto& [label, _] : by_class) alphabet.push_back(label);
  ConfusionMatrix pooled;
  pooled.labels = alphabet;
  const Index q = static_cast<Index>(alphabet.size());
  pooled.counts = Eigen::MatrixXi::Zero(q, q);
  for (const auto& fold : report.folds) {
    const auto& cm = fold.confusion;
    for (Index g = 0; g < cm.counts.rows(); ++g) {
      for (Index p = 0; p < cm.counts.cols(); ++p) {
        if (cm.counts(g, p) == 0) continue;
        pooled.counts(pooled.label_index(cm.labels[static_cast<std::size_t>(g)]),
                      pooled.label_index(
                          cm.labels[static_cast<std::size_t>(p)])) +=
            cm.counts(g, p);
      }
    }
  }
  report.pooled = prf_metrics(pooled);

  const auto kf = static_cast<double>(report.folds.size());
  for (const auto& fold : report.folds) {
    report.mean_macro_precision += fold.macro_precision / kf;
    report.mean_macro_recall += fold.macro_recall / kf;
    report.mean_macro_f += fold.macro_f / kf;
  }
  return report;
}

json to_json(const ConfusionMatrix& cm) {
  json counts = json::array();
  for (Index g = 0; g < cm.counts.rows(); ++g) {
    json row = json::array();
    for (Index p = 0; p < cm.counts.cols(); ++p) row.push_back(cm.counts(g, p));
    counts.push_back(std::move(row));
  }
  return json{{"labels", cm.labels}, {"counts", std::move(counts)}};
}

json to_json(const MetricsReport& report) {
  json per_class;
  for (const auto& [label, m] : report.per_class) {
    per_class[label] = {{"precision", m.precision},
                        {"recall", m.recall},
                        {"f_score", m.f_score},
                        {"precision_flagged", m.precision_flagged},
                        {"recall_flagged", m.recall_flagged},
                        {"f_flagged", m.f_flagged}};
  }
  return json{{"per_class", std::move(per_class)},
              {"macro_precision", report.macro_precision},
              {"macro_recall", report.macro_recall},
              {"macro_f", report.macro_f},
              {"confusion", to_json(report.confusion)}};
}

json to_json(const CvReport& report) {
  json folds = json::array();
  for (std::size_t f = 0; f < report.folds.size(); ++f) {
    json entry = to_json(report.folds[f]);
    entry["fold"] = f;
    folds.push_back(std::move(entry));
  }
  return json{{"pooled", to_json(report.pooled)},
              {"folds", std::move(folds)},
              {"mean_macro_precision", report.mean_macro_precision},
              {"mean_macro_recall", report.mean_macro_recall},
              {"mean_macro_f", report.mean_macro_f},
              {"k", report.k},
              {"seed", report.seed}};
}

}  // namespace lomatch
