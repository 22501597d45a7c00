#pragma once

#include "lomatch/types.hpp"

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lomatch {

/// Triangular membership function with support [a, b] and peak at c.
struct TriangularMF {
  double a = 0.0;  // lower bound
  double c = 0.0;  // peak
  double b = 0.0;  // upper bound
};

/// Piecewise-linear membership: 0 outside [a, b], 1 exactly at the peak,
/// linear flanks otherwise. The value at x == b is 0 unless b == c.
double triangular_membership(const TriangularMF& mf, double x);

/// One MF per class, peaks evenly spaced across [lo, hi] in the order the
/// classes are given; each flank reaches the neighboring peak. A single
/// class gets a peak at the interval midpoint.
std::map<std::string, TriangularMF> fuzzify_class_labels(
    const std::vector<std::string>& classes, double lo, double hi);

/// The stated default fuzzifier (1.2) sits outside the stated valid
/// interval [1.25, 2]; values outside the interval produce a note rather
/// than an error.
std::optional<std::string> fuzzifier_range_note(double fuzzifier);

/// Squared-Euclidean distances, point rows x center rows.
template <typename DerivedP, typename DerivedC>
Eigen::Matrix<typename DerivedP::Scalar, Eigen::Dynamic, Eigen::Dynamic>
fcm_distances(const Eigen::MatrixBase<DerivedP>& points,
              const Eigen::MatrixBase<DerivedC>& centers) {
  using Scalar = typename DerivedP::Scalar;
  if (points.cols() != centers.cols()) {
    throw std::invalid_argument("fcm: dimension mismatch");
  }
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> d(points.rows(),
                                                          centers.rows());
  for (Index j = 0; j < centers.rows(); ++j) {
    d.col(j) = (points.rowwise() - centers.row(j)).rowwise().squaredNorm();
  }
  return d;
}

/// Memberships from squared distances: row-normalized inverse-distance
/// weights with exponent 1/(m-1). A point at zero distance from one or
/// more centers is assigned crisply (uniform over the coincident centers).
template <typename DerivedD>
Eigen::Matrix<typename DerivedD::Scalar, Eigen::Dynamic, Eigen::Dynamic>
fcm_memberships_from_distances(const Eigen::MatrixBase<DerivedD>& distances,
                               typename DerivedD::Scalar fuzzifier) {
  using Scalar = typename DerivedD::Scalar;
  if (!(fuzzifier > Scalar(1))) {
    throw std::invalid_argument("fcm: fuzzifier must exceed 1");
  }
  const Index k = distances.rows();
  const Index p = distances.cols();
  if (p < 2) {
    throw std::invalid_argument("fcm: need at least two clusters");
  }
  const Scalar exponent = Scalar(1) / (fuzzifier - Scalar(1));
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> u(k, p);
  for (Index i = 0; i < k; ++i) {
    Index coincident = 0;
    for (Index j = 0; j < p; ++j) {
      if (distances(i, j) == Scalar(0)) ++coincident;
    }
    if (coincident > 0) {
      for (Index j = 0; j < p; ++j) {
        u(i, j) = distances(i, j) == Scalar(0)
                      ? Scalar(1) / static_cast<Scalar>(coincident)
                      : Scalar(0);
      }
      continue;
    }
    for (Index j = 0; j < p; ++j) {
      // 1 / sum_k (d_j / d_k)^(1/(m-1)), the overflow-safe form of the
      // inverse-distance ratio.
      Scalar denom = Scalar(0);
      for (Index l = 0; l < p; ++l) {
        denom += std::pow(distances(i, j) / distances(i, l), exponent);
      }
      u(i, j) = Scalar(1) / denom;
    }
  }
  return u;
}

template <typename DerivedP, typename DerivedC>
Eigen::Matrix<typename DerivedP::Scalar, Eigen::Dynamic, Eigen::Dynamic>
fcm_memberships(const Eigen::MatrixBase<DerivedP>& points,
                const Eigen::MatrixBase<DerivedC>& centers,
                typename DerivedP::Scalar fuzzifier) {
  return fcm_memberships_from_distances(fcm_distances(points, centers),
                                        fuzzifier);
}

/// Weighted-mean center update. Throws when a cluster has zero membership
/// mass.
template <typename DerivedP, typename DerivedU>
Eigen::Matrix<typename DerivedP::Scalar, Eigen::Dynamic, Eigen::Dynamic>
fcm_update_centers(const Eigen::MatrixBase<DerivedP>& points,
                   const Eigen::MatrixBase<DerivedU>& memberships,
                   typename DerivedP::Scalar fuzzifier) {
  using Scalar = typename DerivedP::Scalar;
  if (memberships.rows() != points.rows()) {
    throw std::invalid_argument("fcm: membership row count mismatch");
  }
  const Index p = memberships.cols();
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> weights =
      memberships.derived().array().pow(fuzzifier).matrix();
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> centers(p,
                                                                points.cols());
  for (Index j = 0; j < p; ++j) {
    const Scalar mass = weights.col(j).sum();
    if (mass == Scalar(0)) {
      throw std::runtime_error("fcm: cluster " + std::to_string(j) +
                               " has zero membership mass");
    }
    centers.row(j) = (weights.col(j).transpose() * points.derived()) / mass;
  }
  return centers;
}

/// Objective sum_ij u_ij^m d_ij with d the squared Euclidean distance.
template <typename DerivedP, typename DerivedC, typename DerivedU>
typename DerivedP::Scalar fcm_objective(
    const Eigen::MatrixBase<DerivedP>& points,
    const Eigen::MatrixBase<DerivedC>& centers,
    const Eigen::MatrixBase<DerivedU>& memberships,
    typename DerivedP::Scalar fuzzifier) {
  const auto d = fcm_distances(points, centers);
  return (memberships.derived().array().pow(fuzzifier) * d.array()).sum();
}

struct FcmParams {
  Index cluster_count = 2;
  double fuzzifier = 1.2;
  double tol = 1e-6;
  int max_iter = 300;
  std::uint64_t seed = 0;
  std::optional<Matrix> init_centers;  // cluster_count x dims
};

struct FcmState {
  Matrix centers;      // p x d
  Matrix memberships;  // points x p, rows sum to 1
  double fuzzifier = 1.2;
  double tol = 1e-6;
  int iterations = 0;
  std::uint64_t seed = 0;
  std::vector<double> objective_trace;  // one entry per iteration
};

/// Alternates membership and center updates until the largest center
/// displacement drops below tol or max_iter is hit. Random initialization
/// samples distinct data points, deterministic per seed. A cluster whose
/// membership mass vanishes is re-seeded on the point with the lowest
/// maximum membership.
FcmState fcm_cluster(const Matrix& points, const FcmParams& params);

void save_fcm_state(std::ostream& out, const FcmState& state);
FcmState load_fcm_state(std::istream& in);

}  // namespace lomatch
