#include "lomatch/bayes.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <set>

namespace lomatch {

using nlohmann::json;

Index NaiveBayesModel::class_index(const std::string& label) const {
  auto it = std::lower_bound(classes.begin(), classes.end(), label);
  if (it == classes.end() || *it != label) return -1;
  return static_cast<Index>(it - classes.begin());
}

NaiveBayesModel fit_naive_bayes(const Matrix& X,
                                const std::vector<std::string>& labels,
                                const NaiveBayesOptions& options) {
  if (X.rows() == 0) {
    throw std::invalid_argument("fit_naive_bayes: empty dataset");
  }
  if (static_cast<std::size_t>(X.rows()) != labels.size()) {
    throw std::invalid_argument("fit_naive_bayes: label count mismatch");
  }
  if (!options.categorical.empty() &&
      static_cast<Index>(options.categorical.size()) != X.cols()) {
    throw std::invalid_argument("fit_naive_bayes: categorical mask size");
  }

  NaiveBayesModel model;
  if (options.expected_classes.empty()) {
    std::set<std::string> distinct(labels.begin(), labels.end());
    model.classes.assign(distinct.begin(), distinct.end());
  } else {
    model.classes = options.expected_classes;
    std::sort(model.classes.begin(), model.classes.end());
  }
  const Index q = static_cast<Index>(model.classes.size());
  if (q < 2) {
    throw std::invalid_argument("fit_naive_bayes: need at least two classes");
  }
  const Index d = X.cols();
  model.training_count = X.rows();
  model.class_counts.assign(static_cast<std::size_t>(q), 0);
  model.means = Matrix::Zero(q, d);
  model.variances = Matrix::Zero(q, d);
  model.categorical = options.categorical;
  model.categorical_counts.resize(static_cast<std::size_t>(d));
  model.schema_id = options.schema_id;
  model.variance_floor = options.variance_floor;

  std::vector<Index> row_class(static_cast<std::size_t>(X.rows()));
  for (Index i = 0; i < X.rows(); ++i) {
    const Index c = model.class_index(labels[static_cast<std::size_t>(i)]);
    if (c < 0) {
      throw std::invalid_argument("fit_naive_bayes: label \"" +
                                  labels[static_cast<std::size_t>(i)] +
                                  "\" not in expected class set");
    }
    row_class[static_cast<std::size_t>(i)] = c;
    ++model.class_counts[static_cast<std::size_t>(c)];
    model.means.row(c) += X.row(i);
  }
  for (Index c = 0; c < q; ++c) {
    const Index n_c = model.class_counts[static_cast<std::size_t>(c)];
    if (n_c == 0) {
      throw std::invalid_argument("fit_naive_bayes: class \"" +
                                  model.classes[static_cast<std::size_t>(c)] +
                                  "\" has zero examples");
    }
    model.means.row(c) /= static_cast<double>(n_c);
  }
  for (Index i = 0; i < X.rows(); ++i) {
    const Index c = row_class[static_cast<std::size_t>(i)];
    model.variances.row(c) +=
        (X.row(i) - model.means.row(c)).array().square().matrix();
  }
  for (Index c = 0; c < q; ++c) {
    model.variances.row(c) /=
        static_cast<double>(model.class_counts[static_cast<std::size_t>(c)]);
  }
  model.variances = model.variances.cwiseMax(options.variance_floor);

  model.priors.resize(q);
  for (Index c = 0; c < q; ++c) {
    model.priors[c] =
        static_cast<double>(model.class_counts[static_cast<std::size_t>(c)]) /
        static_cast<double>(model.training_count);
  }

  for (Index j = 0; j < d; ++j) {
    if (model.categorical.empty() ||
        !model.categorical[static_cast<std::size_t>(j)]) {
      continue;
    }
    auto& table = model.categorical_counts[static_cast<std::size_t>(j)];
    for (Index i = 0; i < X.rows(); ++i) {
      auto& per_class = table[X(i, j)];
      if (per_class.empty()) per_class.assign(static_cast<std::size_t>(q), 0);
      ++per_class[static_cast<std::size_t>(row_class[static_cast<std::size_t>(
          i)])];
    }
  }
  return model;
}

namespace {

double log_gaussian_pdf(double x, double mean, double variance) {
  const double diff = x - mean;
  return -0.5 * std::log(2.0 * std::numbers::pi * variance) -
         diff * diff / (2.0 * variance);
}

Vector log_scores(const NaiveBayesModel& model, const Vector& x) {
  if (x.size() != model.feature_count()) {
    throw std::invalid_argument("posterior: feature dimension mismatch");
  }
  const Index q = static_cast<Index>(model.classes.size());
  Vector logs(q);
  for (Index c = 0; c < q; ++c) {
    double acc = std::log(model.priors[c]);
    for (Index j = 0; j < x.size(); ++j) {
      const bool is_cat = !model.categorical.empty() &&
                          model.categorical[static_cast<std::size_t>(j)];
      if (is_cat) {
        const auto& table =
            model.categorical_counts[static_cast<std::size_t>(j)];
        auto it = table.find(x[j]);
        const double n_xc =
            it == table.end()
                ? 0.0
                : static_cast<double>(it->second[static_cast<std::size_t>(c)]);
        const double n_c =
            static_cast<double>(model.class_counts[static_cast<std::size_t>(c)]);
        acc += n_xc > 0.0 ? std::log(n_xc / n_c)
                          : -std::numeric_limits<double>::infinity();
      } else {
        acc += log_gaussian_pdf(x[j], model.means(c, j), model.variances(c, j));
      }
    }
    logs[c] = acc;
  }
  return logs;
}

}  // namespace

Vector posterior_vector(const NaiveBayesModel& model, const Vector& x) {
  Vector logs = log_scores(model, x);
  const double top = logs.maxCoeff();
  if (!std::isfinite(top)) {
    // Every class has zero likelihood; fall back to uniform.
    return Vector::Constant(logs.size(), 1.0 / static_cast<double>(logs.size()));
  }
  Vector probs = (logs.array() - top).exp();
  return probs / probs.sum();
}

std::map<std::string, double> posterior(const NaiveBayesModel& model,
                                        const Vector& x) {
  const Vector probs = posterior_vector(model, x);
  std::map<std::string, double> out;
  for (Index c = 0; c < probs.size(); ++c) {
    out[model.classes[static_cast<std::size_t>(c)]] = probs[c];
  }
  return out;
}

std::string classify_nb(const NaiveBayesModel& model, const Vector& x) {
  const Vector probs = posterior_vector(model, x);
  Index best = 0;
  for (Index c = 1; c < probs.size(); ++c) {
    if (probs[c] > probs[best]) best = c;  // ties keep smaller label
  }
  return model.classes[static_cast<std::size_t>(best)];
}

void save_naive_bayes(std::ostream& out, const NaiveBayesModel& model) {
  json doc;
  doc["format"] = "lom.nb-model.v1";
  doc["schema_id"] = model.schema_id;
  doc["classes"] = model.classes;
  doc["priors"] = std::vector<double>(model.priors.data(),
                                      model.priors.data() + model.priors.size());
  auto matrix_rows = [](const Matrix& m) {
    std::vector<std::vector<double>> rows;
    for (Index i = 0; i < m.rows(); ++i) {
      rows.emplace_back(m.row(i).begin(), m.row(i).end());
    }
    return rows;
  };
  doc["means"] = matrix_rows(model.means);
  doc["variances"] = matrix_rows(model.variances);
  doc["class_counts"] = model.class_counts;
  doc["training_count"] = model.training_count;
  doc["variance_floor"] = model.variance_floor;
  doc["categorical"] = model.categorical;
  json cats = json::array();
  for (const auto& table : model.categorical_counts) {
    json t = json::array();
    for (const auto& [value, counts] : table) {
      t.push_back({{"value", value}, {"counts", counts}});
    }
    cats.push_back(std::move(t));
  }
  doc["categorical_counts"] = std::move(cats);
  out << doc.dump(2) << "\n";
}

NaiveBayesModel load_naive_bayes(std::istream& in) {
  json doc = json::parse(in);
  if (doc.value("format", "") != "lom.nb-model.v1") {
    throw std::invalid_argument("unrecognized naive-bayes model format");
  }
  NaiveBayesModel model;
  model.schema_id = doc.at("schema_id").get<std::string>();
  model.classes = doc.at("classes").get<std::vector<std::string>>();
  const auto priors = doc.at("priors").get<std::vector<double>>();
  model.priors = Eigen::Map<const Vector>(priors.data(),
                                          static_cast<Index>(priors.size()));
  auto to_matrix = [](const json& rows) {
    const auto data = rows.get<std::vector<std::vector<double>>>();
    Matrix m(static_cast<Index>(data.size()),
             data.empty() ? 0 : static_cast<Index>(data.front().size()));
    for (Index i = 0; i < m.rows(); ++i) {
      for (Index j = 0; j < m.cols(); ++j) {
        m(i, j) = data[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      }
    }
    return m;
  };
  model.means = to_matrix(doc.at("means"));
  model.variances = to_matrix(doc.at("variances"));
  model.class_counts = doc.at("class_counts").get<std::vector<Index>>();
  model.training_count = doc.at("training_count").get<Index>();
  model.variance_floor = doc.at("variance_floor").get<double>();
  model.categorical = doc.at("categorical").get<std::vector<bool>>();
  for (const auto& t : doc.at("categorical_counts")) {
    std::map<double, std::vector<Index>> table;
    for (const auto& entry : t) {
      table[entry.at("value").get<double>()] =
          entry.at("counts").get<std::vector<Index>>();
    }
    model.categorical_counts.push_back(std::move(table));
  }
  return model;
}

}  // namespace lomatch
