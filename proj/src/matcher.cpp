#include "lomatch/matcher.hpp"

#include "lomatch/assignment.hpp"
#include "lomatch/bayes.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

namespace lomatch {

using nlohmann::json;

GaussianClusterModel init_cluster_stats(
    const Matrix& X, const std::vector<std::string>& labels, double std_floor,
    const std::vector<std::string>& expected_labels,
    const std::string& schema_id) {
  if (X.rows() == 0) {
    throw std::invalid_argument("init_cluster_stats: empty dataset");
  }
  if (static_cast<std::size_t>(X.rows()) != labels.size()) {
    throw std::invalid_argument("init_cluster_stats: label count mismatch");
  }
  if (!(std_floor > 0.0)) {
    throw std::invalid_argument("init_cluster_stats: std floor must be > 0");
  }

  GaussianClusterModel model;
  if (expected_labels.empty()) {
    std::set<std::string> distinct(labels.begin(), labels.end());
    model.labels.assign(distinct.begin(), distinct.end());
  } else {
    model.labels = expected_labels;
    std::sort(model.labels.begin(), model.labels.end());
    model.labels.erase(std::unique(model.labels.begin(), model.labels.end()),
                       model.labels.end());
  }
  const Index p = static_cast<Index>(model.labels.size());
  if (p < 2) {
    throw std::invalid_argument(
        "init_cluster_stats: need at least two distinct labels");
  }
  const Index d = X.cols();
  model.schema_id = schema_id;
  model.means = Matrix::Zero(p, d);
  model.stds = Matrix::Zero(p, d);
  model.counts.assign(static_cast<std::size_t>(p), 0);

  auto cluster_of = [&](const std::string& label) {
    auto it =
        std::lower_bound(model.labels.begin(), model.labels.end(), label);
    if (it == model.labels.end() || *it != label) {
      throw std::invalid_argument("init_cluster_stats: label \"" + label +
                                  "\" not in the expected cluster set");
    }
    return static_cast<Index>(it - model.labels.begin());
  };

  std::vector<Index> row_cluster(static_cast<std::size_t>(X.rows()));
  for (Index i = 0; i < X.rows(); ++i) {
    const Index j = cluster_of(labels[static_cast<std::size_t>(i)]);
    row_cluster[static_cast<std::size_t>(i)] = j;
    ++model.counts[static_cast<std::size_t>(j)];
    model.means.row(j) += X.row(i);
  }
  for (Index j = 0; j < p; ++j) {
    if (model.counts[static_cast<std::size_t>(j)] == 0) {
      throw std::invalid_argument(
          "init_cluster_stats: empty label group \"" +
          model.labels[static_cast<std::size_t>(j)] + "\"");
    }
    model.means.row(j) /=
        static_cast<double>(model.counts[static_cast<std::size_t>(j)]);
  }
  for (Index i = 0; i < X.rows(); ++i) {
    const Index j = row_cluster[static_cast<std::size_t>(i)];
    model.stds.row(j) +=
        (X.row(i) - model.means.row(j)).array().square().matrix();
  }
  for (Index j = 0; j < p; ++j) {
    model.stds.row(j) =
        (model.stds.row(j).array() /
         static_cast<double>(model.counts[static_cast<std::size_t>(j)]))
            .sqrt();
  }
  model.stds = model.stds.cwiseMax(std_floor);
  return model;
}

Vector cluster_scores(const GaussianClusterModel& model, const Vector& x,
                      Stage2Coefficient coef) {
  if (x.size() != model.feature_count()) {
    throw std::invalid_argument("cluster_scores: feature dimension mismatch");
  }
  const Index p = model.cluster_count();
  Vector scores(p);
  for (Index j = 0; j < p; ++j) {
    double sum = 0.0;
    for (Index f = 0; f < x.size(); ++f) {
      const double sigma = model.stds(j, f);
      const double diff = x[f] - model.means(j, f);
      const double weight =
          coef == Stage2Coefficient::kLiteral
              ? 1.0 / (2.0 * std::numbers::pi * sigma * sigma)
              : 1.0 / (std::sqrt(2.0 * std::numbers::pi) * sigma);
      sum += weight * std::exp(-diff * diff / (2.0 * sigma * sigma));
    }
    scores[j] = sum;
  }
  return scores;
}

ClusterAssignment assign_and_membership(const Vector& scores,
                                        const std::vector<std::string>& labels,
                                        DecisionRule rule) {
  const Index p = scores.size();
  if (p < 2 || static_cast<std::size_t>(p) != labels.size()) {
    throw std::invalid_argument(
        "assign_and_membership: need scores for at least two clusters");
  }
  ClusterAssignment out;
  const double total = scores.sum();
  if (total == 0.0) {
    out.memberships = Vector::Constant(p, 1.0 / static_cast<double>(p));
    out.winner = labels[0];
    return out;
  }
  out.memberships = scores / total;
  Index best = 0;
  for (Index j = 1; j < p; ++j) {
    const bool better = rule == DecisionRule::kMaxScore
                            ? scores[j] > scores[best]
                            : scores[j] < scores[best];
    if (better) best = j;  // ties keep the smaller (sorted) label
  }
  out.winner = labels[static_cast<std::size_t>(best)];
  return out;
}

namespace {

// Agreement value of the best one-to-one assignment on the given
// cluster-row / class-column subsets.
Index max_agreement(const Eigen::MatrixXi& counts,
                    const std::vector<Index>& rows,
                    const std::vector<Index>& cols) {
  const Index n = static_cast<Index>(std::max(rows.size(), cols.size()));
  if (n == 0) return 0;
  Index hi = 0;
  for (Index r : rows) {
    for (Index c : cols) hi = std::max(hi, static_cast<Index>(counts(r, c)));
  }
  // Minimize (hi - count) over a zero-padded square matrix == maximize
  // total agreement.
  Matrix cost = Matrix::Constant(n, n, static_cast<double>(hi));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      cost(static_cast<Index>(i), static_cast<Index>(j)) =
          static_cast<double>(hi - counts(rows[i], cols[j]));
    }
  }
  const auto sol = min_cost_assignment(cost);
  Index agreement = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const int j = sol[i];
    if (j >= 0 && static_cast<std::size_t>(j) < cols.size()) {
      agreement += counts(rows[i], cols[static_cast<std::size_t>(j)]);
    }
  }
  return agreement;
}

}  // namespace

ClusterClassMapping classes_to_clusters(
    const Eigen::MatrixXi& count_matrix,
    const std::vector<std::string>& cluster_labels,
    const std::vector<std::string>& class_labels) {
  if (count_matrix.rows() != static_cast<Index>(cluster_labels.size()) ||
      count_matrix.cols() != static_cast<Index>(class_labels.size())) {
    throw std::invalid_argument("classes_to_clusters: label/shape mismatch");
  }
  if ((count_matrix.array() < 0).any()) {
    throw std::invalid_argument("classes_to_clusters: negative count");
  }

  // Process clusters and candidate classes in sorted-label order so ties
  // resolve to the lexicographically smallest mapping.
  std::vector<Index> row_order(static_cast<std::size_t>(count_matrix.rows()));
  std::vector<Index> col_order(static_cast<std::size_t>(count_matrix.cols()));
  for (std::size_t i = 0; i < row_order.size(); ++i) row_order[i] = static_cast<Index>(i);
  for (std::size_t j = 0; j < col_order.size(); ++j) col_order[j] = static_cast<Index>(j);
  std::sort(row_order.begin(), row_order.end(), [&](Index a, Index b) {
    return cluster_labels[static_cast<std::size_t>(a)] <
           cluster_labels[static_cast<std::size_t>(b)];
  });
  std::sort(col_order.begin(), col_order.end(), [&](Index a, Index b) {
    return class_labels[static_cast<std::size_t>(a)] <
           class_labels[static_cast<std::size_t>(b)];
  });

  ClusterClassMapping mapping;
  Index optimum = max_agreement(count_matrix, row_order, col_order);
  std::vector<Index> rows = row_order;
  std::vector<Index> cols = col_order;
  Index achieved = 0;
  while (!rows.empty() && !cols.empty()) {
    const Index r = rows.front();
    rows.erase(rows.begin());
    bool assigned = false;
    for (std::size_t cj = 0; cj < cols.size(); ++cj) {
      const Index c = cols[cj];
      std::vector<Index> rest_cols = cols;
      rest_cols.erase(rest_cols.begin() + static_cast<std::ptrdiff_t>(cj));
      const Index with_fix =
          count_matrix(r, c) + max_agreement(count_matrix, rows, rest_cols);
      if (with_fix == optimum) {
        mapping.cluster_to_class[cluster_labels[static_cast<std::size_t>(r)]] =
            class_labels[static_cast<std::size_t>(c)];
        achieved += count_matrix(r, c);
        optimum -= count_matrix(r, c);
        cols = std::move(rest_cols);
        assigned = true;
        break;
      }
    }
    if (!assigned) {
      // More clusters than classes: this cluster stays unmapped only when
      // leaving it out preserves the optimum.
      const Index without = max_agreement(count_matrix, rows, cols);
      if (without != optimum) {
        throw std::logic_error("classes_to_clusters: assignment search failed");
      }
    }
  }
  mapping.error_count = count_matrix.sum() - achieved;
  return mapping;
}

namespace {

std::vector<std::string> predict_labels(const GaussianClusterModel& model,
                                        const Matrix& X,
                                        const MatchConfig& config) {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(X.rows()));
  for (Index i = 0; i < X.rows(); ++i) {
    const Vector s =
        cluster_scores(model, X.row(i).transpose(), config.stage2_coefficient);
    out.push_back(
        assign_and_membership(s, model.labels, config.decision_rule).winner);
  }
  return out;
}

}  // namespace

ValidationReport swap_validate(const Matrix& labeled_X,
                               const std::vector<std::string>& labeled_y,
                               const Matrix& unlabeled_X,
                               const std::vector<std::string>& winners,
                               const MatchConfig& config) {
  if (static_cast<std::size_t>(unlabeled_X.rows()) != winners.size()) {
    throw std::invalid_argument("swap_validate: winner count mismatch");
  }
  std::set<std::string> clusters(labeled_y.begin(), labeled_y.end());
  const std::vector<std::string> alphabet(clusters.begin(), clusters.end());
  if (unlabeled_X.rows() < static_cast<Index>(alphabet.size())) {
    throw std::invalid_argument(
        "swap_validate: unlabeled set smaller than the cluster count");
  }

  const Index n_u = unlabeled_X.rows();
  const Index batch_size =
      config.stage7_batch_size > 0 ? config.stage7_batch_size : n_u;

  ValidationReport report;
  ConfusionMatrix pooled;
  pooled.labels = alphabet;
  const Index q = static_cast<Index>(alphabet.size());
  pooled.counts = Eigen::MatrixXi::Zero(q, q);

  for (Index start = 0; start < n_u; start += batch_size) {
    const Index len = std::min(batch_size, n_u - start);
    const Matrix batch_X = unlabeled_X.middleRows(start, len);
    const std::vector<std::string> batch_y(
        winners.begin() + start, winners.begin() + start + len);
    const auto retrained = init_cluster_stats(batch_X, batch_y,
                                              config.std_floor, alphabet);
    const auto relabeled = predict_labels(retrained, labeled_X, config);
    ConfusionMatrix cm = confusion_matrix(labeled_y, relabeled);
    for (Index g = 0; g < cm.counts.rows(); ++g) {
      for (Index p = 0; p < cm.counts.cols(); ++p) {
        if (cm.counts(g, p) == 0) continue;
        pooled.counts(
            pooled.label_index(cm.labels[static_cast<std::size_t>(g)]),
            pooled.label_index(cm.labels[static_cast<std::size_t>(p)])) +=
            cm.counts(g, p);
      }
    }
    ++report.batches;
  }

  report.confusion = pooled;
  for (const auto& label : alphabet) {
    const auto row_total = static_cast<double>(
        pooled.counts.row(pooled.label_index(label)).sum());
    report.per_class_agreement[label] =
        row_total == 0.0
            ? 0.0
            : static_cast<double>(pooled.tp(label)) / row_total;
  }
  return report;
}

std::size_t ambiguity_reassign(std::vector<MatchDecision>& decisions,
                               double threshold,
                               const std::vector<std::string>& cluster_labels) {
  if (cluster_labels.size() < 2) {
    throw std::invalid_argument("ambiguity_reassign: need at least 2 clusters");
  }
  std::size_t reassigned = 0;
  for (auto& d : decisions) {
    if (d.memberships.size() != static_cast<Index>(cluster_labels.size())) {
      throw std::invalid_argument("ambiguity_reassign: membership size");
    }
    Index top = 0;
    for (Index j = 1; j < d.memberships.size(); ++j) {
      if (d.memberships[j] > d.memberships[top]) top = j;
    }
    Index second = top == 0 ? 1 : 0;
    for (Index j = 0; j < d.memberships.size(); ++j) {
      if (j == top || j == second) continue;
      if (d.memberships[j] > d.memberships[second]) second = j;
    }
    const double gap = d.memberships[top] - d.memberships[second];
    if (gap <= threshold) {
      d.winner = cluster_labels[static_cast<std::size_t>(second)];
      d.reassigned = true;
      ++reassigned;
    }
  }
  return reassigned;
}

NeighborhoodGraph build_knn_graph(const Matrix& X, int k_neighbors,
                                  const std::vector<bool>& observed,
                                  const std::vector<std::string>& alphabet) {
  const Index n = X.rows();
  if (k_neighbors >= n) {
    throw std::invalid_argument("build_knn_graph: k must be below node count");
  }
  NeighborhoodGraph graph;
  graph.observed = observed;
  graph.label_alphabet = alphabet;
  graph.neighbors.assign(static_cast<std::size_t>(n), {});
  if (k_neighbors <= 0) return graph;

  Vector norms(n);
  for (Index i = 0; i < n; ++i) norms[i] = X.row(i).norm();
  std::vector<std::set<Index>> adjacency(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    std::vector<std::pair<double, Index>> sims;
    sims.reserve(static_cast<std::size_t>(n) - 1);
    for (Index j = 0; j < n; ++j) {
      if (j == i) continue;
      const double denom = norms[i] * norms[j];
      const double sim = denom == 0.0 ? 0.0 : X.row(i).dot(X.row(j)) / denom;
      sims.emplace_back(sim, j);
    }
    std::partial_sort(sims.begin(), sims.begin() + k_neighbors, sims.end(),
                      [](const auto& a, const auto& b) {
                        if (a.first != b.first) return a.first > b.first;
                        return a.second < b.second;
                      });
    for (int t = 0; t < k_neighbors; ++t) {
      const Index j = sims[static_cast<std::size_t>(t)].second;
      adjacency[static_cast<std::size_t>(i)].insert(j);
      adjacency[static_cast<std::size_t>(j)].insert(i);  // symmetric closure
    }
  }
  for (Index i = 0; i < n; ++i) {
    graph.neighbors[static_cast<std::size_t>(i)].assign(
        adjacency[static_cast<std::size_t>(i)].begin(),
        adjacency[static_cast<std::size_t>(i)].end());
  }
  return graph;
}

namespace {

Vector label_histogram(const NeighborhoodGraph& graph,
                       const std::vector<std::string>& labels, Index node) {
  const auto& alphabet = graph.label_alphabet;
  Vector hist = Vector::Zero(static_cast<Index>(alphabet.size()));
  const auto& nbrs = graph.neighbors[static_cast<std::size_t>(node)];
  for (Index j : nbrs) {
    const auto it = std::lower_bound(alphabet.begin(), alphabet.end(),
                                     labels[static_cast<std::size_t>(j)]);
    if (it != alphabet.end() && *it == labels[static_cast<std::size_t>(j)]) {
      hist[static_cast<Index>(it - alphabet.begin())] += 1.0;
    }
  }
  if (!nbrs.empty()) hist /= static_cast<double>(nbrs.size());
  return hist;
}

}  // namespace

std::vector<std::string> collective_refine(const Matrix& X,
                                           std::vector<std::string> labels,
                                           const std::vector<bool>& observed,
                                           int k_neighbors, int max_rounds) {
  const Index n = X.rows();
  if (static_cast<std::size_t>(n) != labels.size() ||
      labels.size() != observed.size()) {
    throw std::invalid_argument("collective_refine: size mismatch");
  }
  const auto observed_count =
      std::count(observed.begin(), observed.end(), true);
  if (observed_count == 0) {
    throw std::invalid_argument("collective_refine: no labeled node");
  }
  if (k_neighbors == 0) return labels;  // graph disabled
  if (k_neighbors < 0 || k_neighbors >= n) {
    throw std::invalid_argument(
        "collective_refine: k must be in [0, node count)");
  }

  std::set<std::string> distinct(labels.begin(), labels.end());
  const std::vector<std::string> alphabet(distinct.begin(), distinct.end());
  const auto graph = build_knn_graph(X, k_neighbors, observed, alphabet);
  const Index q = static_cast<Index>(alphabet.size());

  for (int round = 0; round < max_rounds; ++round) {
    Matrix train_X(observed_count, X.cols() + q);
    std::vector<std::string> train_y;
    train_y.reserve(static_cast<std::size_t>(observed_count));
    Index row = 0;
    for (Index i = 0; i < n; ++i) {
      if (!observed[static_cast<std::size_t>(i)]) continue;
      train_X.row(row) << X.row(i), label_histogram(graph, labels, i).transpose();
      train_y.push_back(labels[static_cast<std::size_t>(i)]);
      ++row;
    }
    NaiveBayesOptions options;
    options.schema_id = "collective";
    const auto model = fit_naive_bayes(train_X, train_y, options);

    bool changed = false;
    for (Index i = 0; i < n; ++i) {
      if (observed[static_cast<std::size_t>(i)]) continue;
      Vector augmented(X.cols() + q);
      augmented << X.row(i).transpose(), label_histogram(graph, labels, i);
      auto refined = classify_nb(model, augmented);
      if (refined != labels[static_cast<std::size_t>(i)]) {
        labels[static_cast<std::size_t>(i)] = std::move(refined);
        changed = true;
      }
    }
    if (!changed) break;
  }
  return labels;
}

MatchResult match_pipeline(const FeatureDataset& labeled,
                           const FeatureDataset& unlabeled,
                           const MatchConfig& config) {
  if (labeled.size() == 0) {
    throw std::invalid_argument("match_pipeline: empty labeled set");
  }
  std::vector<std::string> labels_l;
  labels_l.reserve(labeled.pairs.size());
  for (const auto& p : labeled.pairs) {
    if (!p.label) {
      throw std::invalid_argument(
          "match_pipeline: unlabeled row in the labeled set (" + p.source_id +
          "," + p.target_id + ")");
    }
    labels_l.push_back(to_string(*p.label));
  }

  if (unlabeled.size() > 0 && unlabeled.X.cols() != labeled.X.cols()) {
    throw std::invalid_argument(
        "match_pipeline: labeled and unlabeled feature dimensions differ");
  }

  MatchResult result;
  result.model = init_cluster_stats(labeled.X, labels_l, config.std_floor, {},
                                    labeled.schema_id);
  const auto& cluster_labels = result.model.labels;

  result.decisions.reserve(unlabeled.pairs.size());
  std::vector<std::string> winners;
  winners.reserve(unlabeled.pairs.size());
  for (Index i = 0; i < unlabeled.size(); ++i) {
    const Vector s = cluster_scores(result.model, unlabeled.X.row(i).transpose(),
                                    config.stage2_coefficient);
    auto assignment =
        assign_and_membership(s, cluster_labels, config.decision_rule);
    winners.push_back(assignment.winner);
    MatchDecision d;
    d.pair = unlabeled.pairs[static_cast<std::size_t>(i)];
    d.winner = std::move(assignment.winner);
    d.memberships = std::move(assignment.memberships);
    result.decisions.push_back(std::move(d));
  }

  if (unlabeled.size() > 0) {
    result.validation =
        swap_validate(labeled.X, labels_l, unlabeled.X, winners, config);
  } else {
    // No unlabeled data: validate the Stage-1 model against D_l itself.
    const auto relabeled = predict_labels(result.model, labeled.X, config);
    result.validation.confusion = confusion_matrix(labels_l, relabeled);
    for (const auto& label : cluster_labels) {
      const auto row_total = static_cast<double>(
          result.validation.confusion.counts
              .row(result.validation.confusion.label_index(label))
              .sum());
      result.validation.per_class_agreement[label] =
          row_total == 0.0 ? 0.0
                           : static_cast<double>(
                                 result.validation.confusion.tp(label)) /
                                 row_total;
    }
    result.validation.batches = 0;
  }

  result.validation.stage8_reassignments = ambiguity_reassign(
      result.decisions, config.stage8_threshold, cluster_labels);

  // Classes-to-clusters over D_l agreement counts.
  const auto predicted_l = predict_labels(result.model, labeled.X, config);
  std::set<std::string> class_set(labels_l.begin(), labels_l.end());
  const std::vector<std::string> class_labels(class_set.begin(),
                                              class_set.end());
  Eigen::MatrixXi counts = Eigen::MatrixXi::Zero(
      static_cast<Index>(cluster_labels.size()),
      static_cast<Index>(class_labels.size()));
  auto index_in = [](const std::vector<std::string>& v, const std::string& s) {
    return static_cast<Index>(
        std::lower_bound(v.begin(), v.end(), s) - v.begin());
  };
  for (std::size_t i = 0; i < predicted_l.size(); ++i) {
    counts(index_in(cluster_labels, predicted_l[i]),
           index_in(class_labels, labels_l[i])) += 1;
  }
  result.mapping = classes_to_clusters(counts, cluster_labels, class_labels);

  for (auto& d : result.decisions) {
    const auto it = result.mapping.cluster_to_class.find(d.winner);
    d.match_label = it == result.mapping.cluster_to_class.end()
                        ? d.winner
                        : it->second;
  }

  if (config.collective.enabled && !result.decisions.empty()) {
    const Index n = labeled.size() + unlabeled.size();
    Matrix all_X(n, labeled.X.cols());
    all_X.topRows(labeled.size()) = labeled.X;
    all_X.bottomRows(unlabeled.size()) = unlabeled.X;
    std::vector<std::string> all_labels = labels_l;
    std::vector<bool> observed(static_cast<std::size_t>(n), false);
    std::fill(observed.begin(),
              observed.begin() + static_cast<std::ptrdiff_t>(labels_l.size()),
              true);
    for (const auto& d : result.decisions) all_labels.push_back(d.match_label);

    const auto refined =
        collective_refine(all_X, all_labels, observed,
                          config.collective.k_neighbors,
                          config.collective.max_rounds);
    std::map<std::string, std::string> class_to_cluster;
    for (const auto& [cl, cls] : result.mapping.cluster_to_class) {
      class_to_cluster[cls] = cl;
    }
    for (std::size_t i = 0; i < result.decisions.size(); ++i) {
      const auto& new_label = refined[labels_l.size() + i];
      auto& d = result.decisions[i];
      if (new_label != d.match_label) {
        d.match_label = new_label;
        const auto it = class_to_cluster.find(new_label);
        if (it != class_to_cluster.end()) d.winner = it->second;
      }
    }
  }

  return result;
}

std::vector<MatchDecision> filter_decisions(
    const std::vector<MatchDecision>& decisions, double min_membership,
    const std::vector<std::string>& cluster_labels) {
  std::vector<MatchDecision> kept;
  for (const auto& d : decisions) {
    const auto it = std::lower_bound(cluster_labels.begin(),
                                     cluster_labels.end(), d.winner);
    if (it == cluster_labels.end() || *it != d.winner) {
      throw std::invalid_argument("filter_decisions: unknown winner label");
    }
    const Index j = static_cast<Index>(it - cluster_labels.begin());
    if (d.memberships[j] >= min_membership) kept.push_back(d);
  }
  return kept;
}

void write_decisions(std::ostream& out,
                     const std::vector<MatchDecision>& decisions,
                     const std::vector<std::string>& cluster_labels) {
  const std::vector<std::string> expected = {"MATCH", "NON_MATCH"};
  if (cluster_labels != expected) {
    throw std::invalid_argument(
        "write_decisions: requires the MATCH/NON_MATCH cluster alphabet");
  }
  out << "#format: lom.decisions.v1\n";
  out << "source_id,target_id,winner,match_label,membership_match,"
         "membership_nonmatch,reassigned\n";
  for (const auto& d : decisions) {
    require_csv_safe(d.pair.source_id);
    require_csv_safe(d.pair.target_id);
    out << d.pair.source_id << ',' << d.pair.target_id << ',' << d.winner << ','
        << d.match_label << ',' << format_value(d.memberships[0]) << ','
        << format_value(d.memberships[1]) << ',' << (d.reassigned ? 1 : 0)
        << "\n";
  }
}

std::vector<MatchDecision> read_decisions(std::istream& in) {
  std::vector<MatchDecision> decisions;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("source_id,", 0) == 0) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (fields.size() != 7) {
      throw ParseError("expected 7 decision fields", line_no);
    }
    MatchDecision d;
    d.pair = {fields[0], fields[1], std::nullopt};
    d.winner = fields[2];
    d.match_label = fields[3];
    d.memberships.resize(2);
    try {
      d.memberships[0] = std::stod(fields[4]);
      d.memberships[1] = std::stod(fields[5]);
    } catch (const std::exception&) {
      throw ParseError("bad membership value", line_no);
    }
    d.reassigned = fields[6] == "1";
    decisions.push_back(std::move(d));
  }
  return decisions;
}

json to_json(const ValidationReport& report) {
  return json{{"confusion", to_json(report.confusion)},
              {"per_class_agreement", report.per_class_agreement},
              {"stage8_reassignments", report.stage8_reassignments},
              {"batches", report.batches}};
}

}  // namespace lomatch
