#include "lomatch/fuzzy.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace lomatch;

TEST_SUITE_BEGIN("fuzzy");

TEST_CASE("triangular membership") {
  const TriangularMF mf{0.0, 0.5, 1.0};
  CHECK(triangular_membership(mf, 0.5) == 1.0);   // peak
  CHECK(triangular_membership(mf, 0.0) == 0.0);   // lower bound
  CHECK(triangular_membership(mf, 0.25) == doctest::Approx(0.5));
  CHECK(triangular_membership(mf, 0.75) == doctest::Approx(0.5));
  CHECK(triangular_membership(mf, 1.0) == 0.0);   // upper bound, right flank
  CHECK(triangular_membership(mf, -0.1) == 0.0);
  CHECK(triangular_membership(mf, 1.1) == 0.0);

  SUBCASE("degenerate flanks evaluate to 1 at the shared point") {
    CHECK(triangular_membership({0.0, 0.0, 1.0}, 0.0) == 1.0);
    CHECK(triangular_membership({0.0, 1.0, 1.0}, 1.0) == 1.0);
  }
  SUBCASE("invalid shape is rejected") {
    CHECK_THROWS_AS(triangular_membership({1.0, 0.5, 0.0}, 0.5),
                    std::invalid_argument);
  }
}

TEST_CASE("fuzzify_class_labels spaces peaks evenly") {
  SUBCASE("single class peaks at the midpoint") {
    const auto mfs = fuzzify_class_labels({"only"}, 0.0, 1.0);
    REQUIRE(mfs.size() == 1);
    CHECK(mfs.at("only").c == doctest::Approx(0.5));
    CHECK(mfs.at("only").a == 0.0);
    CHECK(mfs.at("only").b == 1.0);
  }
  SUBCASE("two classes cross at one half") {
    const auto mfs = fuzzify_class_labels({"lo", "hi"}, 0.0, 1.0);
    CHECK(mfs.at("lo").c == 0.0);
    CHECK(mfs.at("hi").c == 1.0);
    CHECK(triangular_membership(mfs.at("lo"), 0.5) == doctest::Approx(0.5));
    CHECK(triangular_membership(mfs.at("hi"), 0.5) == doctest::Approx(0.5));
  }
  SUBCASE("three classes peak at 0, 1/2, 1") {
    const auto mfs = fuzzify_class_labels({"a", "b", "c"}, 0.0, 1.0);
    CHECK(mfs.at("a").c == 0.0);
    CHECK(mfs.at("b").c == doctest::Approx(0.5));
    CHECK(mfs.at("c").c == 1.0);
    // Flanks reach the neighboring peaks.
    CHECK(mfs.at("b").a == doctest::Approx(0.0));
    CHECK(mfs.at("b").b == doctest::Approx(1.0));
  }
  SUBCASE("bad interval rejected") {
    CHECK_THROWS_AS(fuzzify_class_labels({"a"}, 1.0, 0.0),
                    std::invalid_argument);
  }
}

TEST_CASE("fuzzifier range note") {
  CHECK(fuzzifier_range_note(1.2).has_value());
  CHECK_FALSE(fuzzifier_range_note(1.5).has_value());
  CHECK_FALSE(fuzzifier_range_note(2.0).has_value());
  CHECK(fuzzifier_range_note(2.5).has_value());
}

TEST_CASE("fcm membership rows") {
  Matrix centers(2, 1);
  centers << 1.0, 2.0;

  SUBCASE("equidistant point splits evenly") {
    Matrix points(1, 1);
    points << 1.5;
    const Matrix u = fcm_memberships(points, centers, 1.2);
    CHECK(u(0, 0) == doctest::Approx(0.5));
    CHECK(u(0, 1) == doctest::Approx(0.5));
  }
  SUBCASE("coincident point is assigned crisply") {
    Matrix points(1, 1);
    points << 1.0;
    const Matrix u = fcm_memberships(points, centers, 1.2);
    CHECK(u(0, 0) == 1.0);
    CHECK(u(0, 1) == 0.0);
  }
  SUBCASE("m=2 with squared distances (1, 4) gives (0.8, 0.2)") {
    Matrix points(1, 1);
    points << 0.0;  // squared distances to centers 1 and 2 are 1 and 4
    const Matrix u = fcm_memberships(points, centers, 2.0);
    CHECK(u(0, 0) == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(u(0, 1) == doctest::Approx(0.2).epsilon(1e-12));
  }
  SUBCASE("dimension mismatch is rejected") {
    Matrix points(1, 2);
    points << 0.0, 0.0;
    CHECK_THROWS_AS(fcm_memberships(points, centers, 2.0),
                    std::invalid_argument);
  }
}

TEST_CASE("fcm center updates") {
  SUBCASE("equal membership in one cluster averages the points") {
    Matrix points(2, 2);
    points << 0.0, 0.0, 2.0, 4.0;
    Matrix u(2, 2);
    u << 0.5, 0.5, 0.5, 0.5;
    const Matrix centers = fcm_update_centers(points, u, 2.0);
    CHECK(centers(0, 0) == doctest::Approx(1.0));
    CHECK(centers(0, 1) == doctest::Approx(2.0));
  }
  SUBCASE("membership one reproduces the point") {
    Matrix points(1, 2);
    points << 3.0, -1.0;
    Matrix u(1, 2);
    u << 1.0, 1.0;
    const Matrix centers = fcm_update_centers(points, u, 1.5);
    CHECK(centers(0, 0) == 3.0);
    CHECK(centers(1, 1) == -1.0);
  }
  SUBCASE("crisp memberships reproduce the points as centers") {
    Matrix points(2, 1);
    points << -1.0, 7.0;
    Matrix u(2, 2);
    u << 1.0, 0.0, 0.0, 1.0;
    const Matrix centers = fcm_update_centers(points, u, 2.0);
    CHECK(centers(0, 0) == -1.0);
    CHECK(centers(1, 0) == 7.0);
  }
  SUBCASE("a cluster with zero mass is an error") {
    Matrix points(2, 1);
    points << 0.0, 1.0;
    Matrix u(2, 2);
    u << 1.0, 0.0, 1.0, 0.0;
    CHECK_THROWS_AS(fcm_update_centers(points, u, 2.0), std::runtime_error);
  }
}

namespace {

Matrix two_blob_points(std::mt19937_64& rng, Index per_blob, double sigma,
                       const Vector& mean_a, const Vector& mean_b) {
  std::normal_distribution<double> noise(0.0, sigma);
  Matrix points(2 * per_blob, mean_a.size());
  for (Index i = 0; i < per_blob; ++i) {
    for (Index j = 0; j < mean_a.size(); ++j) {
      points(i, j) = mean_a[j] + noise(rng);
      points(per_blob + i, j) = mean_b[j] + noise(rng);
    }
  }
  return points;
}

}  // namespace

TEST_CASE("fcm_cluster recovers two well-separated blobs") {
  std::mt19937_64 rng(21);
  Vector mean_a(2), mean_b(2);
  mean_a << 0.0, 0.0;
  mean_b << 1.0, 1.0;
  const double sigma = 0.05;  // separation ~ sqrt(2) >> 6 sigma
  const Matrix points = two_blob_points(rng, 30, sigma, mean_a, mean_b);

  FcmParams params;
  params.cluster_count = 2;
  params.fuzzifier = 1.5;
  params.seed = 9;
  const auto state = fcm_cluster(points, params);

  const double d0a = (state.centers.row(0).transpose() - mean_a).norm();
  const double d0b = (state.centers.row(0).transpose() - mean_b).norm();
  const Vector& first = d0a < d0b ? mean_a : mean_b;
  const Vector& second = d0a < d0b ? mean_b : mean_a;
  CHECK((state.centers.row(0).transpose() - first).norm() < 0.1);
  CHECK((state.centers.row(1).transpose() - second).norm() < 0.1);
}

TEST_CASE("fcm_cluster with converged init stops after one iteration") {
  Matrix points(4, 1);
  points << 0.0, 0.1, 10.0, 10.1;
  FcmParams params;
  params.cluster_count = 2;
  params.fuzzifier = 2.0;
  params.seed = 1;
  const auto converged = fcm_cluster(points, params);

  FcmParams again = params;
  again.init_centers = converged.centers;
  const auto state = fcm_cluster(points, again);
  CHECK(state.iterations == 1);
}

TEST_CASE("fcm_cluster is deterministic for a fixed seed") {
  std::mt19937_64 rng(77);
  Vector mean_a(3), mean_b(3);
  mean_a << 0, 0, 0;
  mean_b << 2, 2, 2;
  const Matrix points = two_blob_points(rng, 15, 0.3, mean_a, mean_b);
  FcmParams params;
  params.cluster_count = 3;
  params.seed = 31337;
  const auto s1 = fcm_cluster(points, params);
  const auto s2 = fcm_cluster(points, params);
  CHECK(s1.iterations == s2.iterations);
  CHECK((s1.centers.array() == s2.centers.array()).all());
  CHECK((s1.memberships.array() == s2.memberships.array()).all());
  CHECK(s1.objective_trace == s2.objective_trace);
}

TEST_CASE("fcm_cluster reaches the crisp limit with one cluster per point") {
  Matrix points(3, 2);
  points << 0, 0, 5, 5, -3, 4;
  FcmParams params;
  params.cluster_count = 3;
  params.fuzzifier = 1.7;
  params.seed = 4;
  const auto state = fcm_cluster(points, params);
  // Every point is a center (order depends on the seeded init).
  for (Index i = 0; i < 3; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (Index j = 0; j < 3; ++j) {
      best = std::min(best,
                      (state.centers.row(j) - points.row(i)).norm());
    }
    CHECK(best < 1e-9);
  }
}

TEST_CASE("fcm_cluster input validation") {
  Matrix points(3, 1);
  points << 0, 1, 2;
  FcmParams params;
  params.cluster_count = 1;
  CHECK_THROWS_AS(fcm_cluster(points, params), std::invalid_argument);
  params.cluster_count = 5;
  CHECK_THROWS_AS(fcm_cluster(points, params), std::invalid_argument);
  params.cluster_count = 2;
  params.fuzzifier = 1.0;
  CHECK_THROWS_AS(fcm_cluster(points, params), std::invalid_argument);
}

TEST_CASE("membership rows sum to one and the objective never increases") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<Index> cluster_count(2, 5);
  std::uniform_int_distribution<Index> dim_count(1, 4);
  std::uniform_real_distribution<double> coord(-3.0, 3.0);
  for (int trial = 0; trial < 300; ++trial) {
    const Index p = cluster_count(rng);
    const Index d = dim_count(rng);
    const Index n = p + 10;
    Matrix points(n, d);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < d; ++j) points(i, j) = coord(rng);
    }
    FcmParams params;
    params.cluster_count = p;
    params.fuzzifier = 1.2;
    params.max_iter = 40;
    params.seed = static_cast<std::uint64_t>(trial);
    const auto state = fcm_cluster(points, params);

    for (Index i = 0; i < state.memberships.rows(); ++i) {
      REQUIRE(std::abs(state.memberships.row(i).sum() - 1.0) <= 1e-9);
      REQUIRE((state.memberships.row(i).array() >= 0.0).all());
      REQUIRE((state.memberships.row(i).array() <= 1.0).all());
    }
    for (std::size_t t = 1; t < state.objective_trace.size(); ++t) {
      REQUIRE(state.objective_trace[t] <=
              state.objective_trace[t - 1] + 1e-9);
    }
  }
}

TEST_CASE("fcm state persistence round-trip") {
  Matrix points(6, 2);
  points << 0, 0, 0.1, 0, 0, 0.1, 5, 5, 5.1, 5, 5, 5.1;
  FcmParams params;
  params.cluster_count = 2;
  params.seed = 8;
  const auto state = fcm_cluster(points, params);

  std::ostringstream out;
  save_fcm_state(out, state);
  std::istringstream in(out.str());
  const auto loaded = load_fcm_state(in);
  CHECK(loaded.iterations == state.iterations);
  CHECK(loaded.seed == state.seed);
  CHECK(loaded.fuzzifier == state.fuzzifier);
  CHECK((loaded.centers.array() == state.centers.array()).all());
  CHECK(loaded.objective_trace == state.objective_trace);
}

TEST_SUITE_END();
