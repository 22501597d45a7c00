#include "lomatch/fuzzy.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>

namespace lomatch {

using nlohmann::json;

double triangular_membership(const TriangularMF& mf, double x) {
  if (!(mf.a <= mf.c && mf.c <= mf.b)) {
    throw std::invalid_argument("triangular_membership: requires a <= c <= b");
  }
  if (x == mf.c) return 1.0;
  if (x < mf.a || x > mf.b) return 0.0;
  if (x < mf.c) return (x - mf.a) / (mf.c - mf.a);
  if (x < mf.b) return (mf.b - x) / (mf.b - mf.c);
  return 0.0;  // x == b with b > c: right-flank limit
}

std::map<std::string, TriangularMF> fuzzify_class_labels(
    const std::vector<std::string>& classes, double lo, double hi) {
  if (classes.empty()) {
    throw std::invalid_argument("fuzzify_class_labels: no classes");
  }
  if (!(lo < hi)) {
    throw std::invalid_argument("fuzzify_class_labels: requires lo < hi");
  }
  std::map<std::string, TriangularMF> mfs;
  const std::size_t n = classes.size();
  if (n == 1) {
    const double mid = lo + (hi - lo) / 2.0;
    mfs[classes[0]] = {lo, mid, hi};
    return mfs;
  }
  const double spacing = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double peak = lo + spacing * static_cast<double>(i);
    const double left = i == 0 ? peak : peak - spacing;
    const double right = i + 1 == n ? peak : peak + spacing;
    mfs[classes[i]] = {left, peak, right};
  }
  return mfs;
}

std::optional<std::string> fuzzifier_range_note(double fuzzifier) {
  if (fuzzifier >= 1.25 && fuzzifier <= 2.0) return std::nullopt;
  return "fuzzifier " + format_value(fuzzifier) +
         " is outside the stated interval [1.25, 2] (the stated default is "
         "1.2)";
}

namespace {

Matrix sample_initial_centers(const Matrix& points, Index p,
                              std::uint64_t seed) {
  std::vector<Index> order(static_cast<std::size_t>(points.rows()));
  std::iota(order.begin(), order.end(), Index{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  Matrix centers(p, points.cols());
  for (Index j = 0; j < p; ++j) {
    centers.row(j) = points.row(order[static_cast<std::size_t>(j)]);
  }
  return centers;
}

// Re-seed clusters whose fuzzy mass vanished on the least-committed point.
void recover_dead_clusters(const Matrix& points, Matrix& centers,
                           Matrix& memberships, double fuzzifier) {
  for (Index j = 0; j < memberships.cols(); ++j) {
    const double mass = memberships.col(j).array().pow(fuzzifier).sum();
    if (mass > 0.0) continue;
    Index worst = 0;
    double lowest_max = memberships.row(0).maxCoeff();
    for (Index i = 1; i < memberships.rows(); ++i) {
      const double row_max = memberships.row(i).maxCoeff();
      if (row_max < lowest_max) {
        lowest_max = row_max;
        worst = i;
      }
    }
    centers.row(j) = points.row(worst);
    memberships = fcm_memberships(points, centers, fuzzifier);
  }
}

}  // namespace

FcmState fcm_cluster(const Matrix& points, const FcmParams& params) {
  const Index p = params.cluster_count;
  if (p < 2) {
    throw std::invalid_argument("fcm_cluster: need at least two clusters");
  }
  if (points.rows() < p) {
    throw std::invalid_argument("fcm_cluster: fewer points than clusters");
  }
  if (!(params.fuzzifier > 1.0)) {
    throw std::invalid_argument("fcm_cluster: fuzzifier must exceed 1");
  }
  if (params.init_centers &&
      (params.init_centers->rows() != p ||
       params.init_centers->cols() != points.cols())) {
    throw std::invalid_argument("fcm_cluster: init centers shape mismatch");
  }

  FcmState state;
  state.fuzzifier = params.fuzzifier;
  state.tol = params.tol;
  state.seed = params.seed;
  state.centers = params.init_centers
                      ? *params.init_centers
                      : sample_initial_centers(points, p, params.seed);

  for (int iter = 1; iter <= params.max_iter; ++iter) {
    Matrix u = fcm_memberships(points, state.centers, params.fuzzifier);
    recover_dead_clusters(points, state.centers, u, params.fuzzifier);
    Matrix next = fcm_update_centers(points, u, params.fuzzifier);
    const double displacement =
        (next - state.centers).rowwise().norm().maxCoeff();
    state.centers = std::move(next);
    state.memberships = std::move(u);
    state.objective_trace.push_back(fcm_objective(
        points, state.centers, state.memberships, params.fuzzifier));
    state.iterations = iter;
    if (displacement < params.tol) break;
  }
  // Memberships consistent with the final centers.
  state.memberships = fcm_memberships(points, state.centers, params.fuzzifier);
  return state;
}

void save_fcm_state(std::ostream& out, const FcmState& state) {
  json doc;
  doc["format"] = "lom.fcm-state.v1";
  auto matrix_rows = [](const Matrix& m) {
    std::vector<std::vector<double>> rows;
    for (Index i = 0; i < m.rows(); ++i) {
      rows.emplace_back(m.row(i).begin(), m.row(i).end());
    }
    return rows;
  };
  doc["centers"] = matrix_rows(state.centers);
  doc["fuzzifier"] = state.fuzzifier;
  doc["tol"] = state.tol;
  doc["iterations"] = state.iterations;
  doc["seed"] = state.seed;
  doc["objective_trace"] = state.objective_trace;
  out << doc.dump(2) << "\n";
}

FcmState load_fcm_state(std::istream& in) {
  json doc = json::parse(in);
  if (doc.value("format", "") != "lom.fcm-state.v1") {
    throw std::invalid_argument("unrecognized fcm state format");
  }
  FcmState state;
  const auto rows = doc.at("centers").get<std::vector<std::vector<double>>>();
  state.centers.resize(static_cast<Index>(rows.size()),
                       rows.empty() ? 0 : static_cast<Index>(rows[0].size()));
  for (Index i = 0; i < state.centers.rows(); ++i) {
    for (Index j = 0; j < state.centers.cols(); ++j) {
      state.centers(i, j) =
          rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  state.fuzzifier = doc.at("fuzzifier").get<double>();
  state.tol = doc.at("tol").get<double>();
  state.iterations = doc.at("iterations").get<int>();
  state.seed = doc.at("seed").get<std::uint64_t>();
  state.objective_trace = doc.at("objective_trace").get<std::vector<double>>();
  return state;
}

}  // namespace lomatch
