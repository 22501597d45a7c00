#include "lomatch/recommend.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace lomatch;

TEST_SUITE_BEGIN("recommend");

namespace {

RatingMatrix small_matrix() {
  RatingMatrix r;
  r.add("u1", "i1", 5);
  r.add("u1", "i2", 3);
  r.add("u1", "i3", 4);
  r.add("u2", "i1", 4);
  r.add("u2", "i2", 2);
  r.add("u2", "i3", 5);
  r.add("u2", "i4", 5);
  r.add("u3", "i1", 4);
  r.add("u3", "i2", 3);
  r.add("u3", "i3", 2);
  r.add("u3", "i4", 2);
  return r;
}

std::map<std::string, Vector> toy_features() {
  std::map<std::string, Vector> f;
  f["i1"] = (Vector(2) << 1.0, 0.0).finished();
  f["i2"] = (Vector(2) << 0.0, 1.0).finished();
  f["i3"] = (Vector(2) << 0.7, 0.7).finished();
  f["i4"] = (Vector(2) << 0.2, 0.9).finished();
  return f;
}

}  // namespace

TEST_CASE("rating matrix invariants") {
  RatingMatrix r;
  r.add("u", "i", 3);
  CHECK_THROWS_AS(r.add("u", "i", 4), std::invalid_argument);  // duplicate
  CHECK_THROWS_AS(r.add("u", "j", 9), std::invalid_argument);  // off scale
  CHECK(r.rating("u", "i") == 3.0);
  CHECK_FALSE(r.rating("u", "nope").has_value());
  CHECK(r.size() == 1);
}

TEST_CASE("pearson similarity") {
  SUBCASE("identical non-constant profiles correlate perfectly") {
    RatingMatrix r;
    r.add("a", "i1", 1);
    r.add("a", "i2", 3);
    r.add("a", "i3", 5);
    r.add("b", "i1", 1);
    r.add("b", "i2", 3);
    r.add("b", "i3", 5);
    CHECK(pearson_user_similarity(r, "a", "b") == doctest::Approx(1.0));
  }
  SUBCASE("opposite deviations anti-correlate") {
    RatingMatrix r;
    r.add("a", "i1", 1);
    r.add("a", "i2", 5);
    r.add("b", "i1", 5);
    r.add("b", "i2", 1);
    CHECK(pearson_user_similarity(r, "a", "b") == doctest::Approx(-1.0));
  }
  SUBCASE("one co-rated item gives zero") {
    RatingMatrix r;
    r.add("a", "i1", 5);
    r.add("a", "i2", 1);
    r.add("b", "i1", 5);
    r.add("b", "i3", 2);
    CHECK(pearson_user_similarity(r, "a", "b") == 0.0);
  }
  SUBCASE("zero variance on co-rated items gives zero") {
    RatingMatrix r;
    r.add("a", "i1", 3);
    r.add("a", "i2", 3);
    r.add("b", "i1", 1);
    r.add("b", "i2", 5);
    CHECK(pearson_user_similarity(r, "a", "b") == 0.0);
  }
  SUBCASE("unknown users are an error") {
    RatingMatrix r;
    r.add("a", "i1", 3);
    CHECK_THROWS_AS(pearson_user_similarity(r, "a", "ghost"),
                    std::invalid_argument);
  }
  SUBCASE("similarity is symmetric on randomized matrices") {
    std::mt19937_64 rng(404);
    std::uniform_real_distribution<double> rating(1.0, 5.0);
    std::uniform_int_distribution<int> coin(0, 1);
    for (int trial = 0; trial < 300; ++trial) {
      RatingMatrix r;
      for (int u = 0; u < 4; ++u) {
        for (int i = 0; i < 6; ++i) {
          if (coin(rng)) {
            r.add("u" + std::to_string(u), "i" + std::to_string(i),
                  rating(rng));
          }
        }
      }
      if (!r.has_user("u0") || !r.has_user("u1")) continue;
      REQUIRE(pearson_user_similarity(r, "u0", "u1") ==
              doctest::Approx(pearson_user_similarity(r, "u1", "u0"))
                  .epsilon(1e-12));
    }
  }
}

TEST_CASE("predict_rating_cf single-neighbor arithmetic") {
  RatingMatrix r;
  // w(u,v) = 1 via perfectly correlated co-rated items.
  r.add("u", "i1", 2);
  r.add("u", "i2", 4);
  r.add("u", "i3", 3);  // mean(u) = 3
  r.add("v", "i1", 3);
  r.add("v", "i2", 5);
  r.add("v", "i4", 3);
  r.add("v", "target", 5);  // mean(v) = 4
  CHECK(pearson_user_similarity(r, "u", "v") == doctest::Approx(1.0));
  // 3 + 1*(5-4)/1 = 4
  CHECK(predict_rating_cf(r, "u", "target", 10) == doctest::Approx(4.0));
}

TEST_CASE("predict_rating_cf weighted multi-neighbor oracle") {
  const auto r = small_matrix();
  // Hand evaluation: co-rated deviations give w(u1,u2) = sqrt(3/7) and
  // w(u1,u3) = 1/2; both rated i4 (5 and 2), means 4 and 11/4.
  const double w2 = std::sqrt(3.0 / 7.0);
  const double w3 = 0.5;
  CHECK(pearson_user_similarity(r, "u1", "u2") ==
        doctest::Approx(w2).epsilon(1e-12));
  CHECK(pearson_user_similarity(r, "u1", "u3") ==
        doctest::Approx(w3).epsilon(1e-12));
  const double expected =
      4.0 + (w2 * (5.0 - 4.0) + w3 * (2.0 - 2.75)) / (w2 + w3);
  CHECK(expected == doctest::Approx(4.242197013530912).epsilon(1e-12));
  CHECK(predict_rating_cf(r, "u1", "i4", 10) ==
        doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("predict_rating_cf fallbacks and bounds") {
  auto r = small_matrix();
  SUBCASE("no rater of the item falls back to the user's mean") {
    r.add("u1", "i9", 4);  // only u1 knows i9; ask for u2
    CHECK(predict_rating_cf(r, "u2", "i9", 10) == doctest::Approx(4.0));
  }
  SUBCASE("a user with no ratings signals cold start") {
    CHECK_THROWS_AS(predict_rating_cf(r, "ghost", "i1", 10), ColdStartError);
  }
  SUBCASE("predictions stay within the scale on randomized data") {
    std::mt19937_64 rng(2023);
    std::uniform_real_distribution<double> rating(1.0, 5.0);
    std::uniform_int_distribution<int> coin(0, 1);
    for (int trial = 0; trial < 200; ++trial) {
      RatingMatrix m;
      for (int u = 0; u < 5; ++u) {
        m.add("u" + std::to_string(u), "seed", rating(rng));
        for (int i = 0; i < 5; ++i) {
          if (coin(rng)) {
            m.add("u" + std::to_string(u), "i" + std::to_string(i),
                  rating(rng));
          }
        }
      }
      for (int i = 0; i < 5; ++i) {
        const double p =
            predict_rating_cf(m, "u0", "i" + std::to_string(i), 3);
        REQUIRE(p >= m.scale().min);
        REQUIRE(p <= m.scale().max);
      }
    }
  }
}

TEST_CASE("content profiles") {
  const auto features = toy_features();
  SUBCASE("single max-rated item reproduces its vector") {
    RatingMatrix r;
    r.add("u", "i1", 5);
    const auto profile = build_content_profile(r, "u", features);
    CHECK(profile.profile.isApprox(features.at("i1")));
    CHECK(profile.mean_rating == 5.0);
  }
  SUBCASE("two equally rated items average") {
    RatingMatrix r;
    r.add("u", "i1", 4);
    r.add("u", "i2", 4);
    const auto profile = build_content_profile(r, "u", features);
    CHECK(profile.profile(0) == doctest::Approx(0.5));
    CHECK(profile.profile(1) == doctest::Approx(0.5));
  }
  SUBCASE("all ratings at the scale minimum signal cold start") {
    RatingMatrix r;
    r.add("u", "i1", 1);
    r.add("u", "i2", 1);
    CHECK_THROWS_AS(build_content_profile(r, "u", features), ColdStartError);
  }
  SUBCASE("no ratings signal cold start") {
    RatingMatrix r;
    CHECK_THROWS_AS(build_content_profile(r, "u", features), ColdStartError);
  }
}

TEST_CASE("content scoring") {
  UserProfile profile;
  profile.profile = (Vector(2) << 1.0, 0.0).finished();
  CHECK(score_content(profile, (Vector(2) << 1.0, 0.0).finished()) ==
        doctest::Approx(1.0));
  CHECK(score_content(profile, (Vector(2) << 0.0, 1.0).finished()) == 0.0);
  UserProfile zero;
  zero.profile = Vector::Zero(2);
  CHECK(score_content(zero, (Vector(2) << 1.0, 0.0).finished()) == 0.0);
  CHECK_THROWS_AS(score_content(profile, Vector::Zero(3)),
                  std::invalid_argument);
}

TEST_CASE("hybrid recommendation blending") {
  const auto r = small_matrix();
  const auto features = toy_features();

  SUBCASE("alpha one reproduces the CF ranking") {
    // i4 is the only item u1 has not rated.
    const auto recs = recommend_hybrid(r, features, "u1", 4, 1.0, 10);
    REQUIRE(recs.size() == 1);  // only i4 is unrated for u1
    const double cf = (predict_rating_cf(r, "u1", "i4", 10) - 1.0) / 4.0;
    CHECK(recs[0].score == doctest::Approx(cf).epsilon(1e-12));
  }
  SUBCASE("alpha zero reproduces the content ranking") {
    const auto recs = recommend_hybrid(r, features, "u1", 4, 0.0, 10);
    REQUIRE(recs.size() == 1);
    const auto profile = build_content_profile(r, "u1", features);
    CHECK(recs[0].score ==
          doctest::Approx(score_content(profile, features.at("i4")))
              .epsilon(1e-12));
  }
  SUBCASE("recommended items are never already rated") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> rating(1.0, 5.0);
    std::uniform_int_distribution<int> coin(0, 1);
    std::map<std::string, Vector> f;
    for (int i = 0; i < 8; ++i) {
      f["i" + std::to_string(i)] =
          (Vector(2) << rating(rng) / 5.0, rating(rng) / 5.0).finished();
    }
    for (int trial = 0; trial < 100; ++trial) {
      RatingMatrix m;
      for (int u = 0; u < 4; ++u) {
        m.add("u" + std::to_string(u), "i0", rating(rng));
        for (int i = 1; i < 8; ++i) {
          if (coin(rng)) {
            m.add("u" + std::to_string(u), "i" + std::to_string(i),
                  rating(rng));
          }
        }
      }
      const auto recs = recommend_hybrid(m, f, "u0", 8, 0.5, 3);
      const auto* rated = m.ratings_of("u0");
      for (const auto& rec : recs) {
        REQUIRE(rated->count(rec.item_id) == 0);
        REQUIRE(rec.score >= 0.0);
        REQUIRE(rec.score <= 1.0);
      }
      REQUIRE(recs.size() <= 8 - rated->size());
    }
  }
  SUBCASE("cold start requires a seed profile") {
    RatingMatrix empty;
    CHECK_THROWS_AS(recommend_hybrid(empty, features, "new", 2, 0.5, 10),
                    ColdStartError);
    UserProfile seed;
    seed.user_id = "new";
    seed.profile = (Vector(2) << 1.0, 0.0).finished();
    const auto recs =
        recommend_hybrid(empty, features, "new", 2, 0.5, 10, seed);
    REQUIRE(recs.size() == 2);
    CHECK(recs[0].item_id == "i1");  // most aligned with the seed
    CHECK_FALSE(recs[0].cf_component.has_value());
  }
  SUBCASE("output size is min(top_k, unrated items)") {
    RatingMatrix m;
    m.add("u", "r1", 5);
    m.add("u", "r2", 3);
    std::map<std::string, Vector> f = toy_features();  // four unrated items
    f["r1"] = (Vector(2) << 1.0, 0.0).finished();
    f["r2"] = (Vector(2) << 0.0, 1.0).finished();
    CHECK(recommend_hybrid(m, f, "u", 2, 0.0, 10).size() == 2);
    CHECK(recommend_hybrid(m, f, "u", 50, 0.0, 10).size() == 4);
  }
}

TEST_CASE("shifting one user's ratings keeps their ranking") {
  // Wide scale so no prediction clamps.
  const RatingScale scale{0.0, 10.0};
  auto build = [&](double shift) {
    RatingMatrix m(scale);
    m.add("u", "i1", 4 + shift);
    m.add("u", "i2", 6 + shift);
    m.add("u", "i3", 5 + shift);
    m.add("v", "i1", 5);
    m.add("v", "i2", 7);
    m.add("v", "i4", 8);
    m.add("v", "i5", 3);
    m.add("w", "i1", 6);
    m.add("w", "i2", 5);
    m.add("w", "i4", 4);
    m.add("w", "i5", 7);
    return m;
  };
  const auto base = build(0.0);
  const auto shifted = build(1.5);
  for (const auto& item : {"i4", "i5"}) {
    const double p0 = predict_rating_cf(base, "u", item, 10);
    const double p1 = predict_rating_cf(shifted, "u", item, 10);
    CHECK(p1 - p0 == doctest::Approx(1.5).epsilon(1e-9));
  }
  // Deviation ordering of the unrated items is preserved.
  const double d0 = predict_rating_cf(base, "u", "i4", 10) -
                    predict_rating_cf(base, "u", "i5", 10);
  const double d1 = predict_rating_cf(shifted, "u", "i4", 10) -
                    predict_rating_cf(shifted, "u", "i5", 10);
  CHECK(d0 == doctest::Approx(d1).epsilon(1e-9));
}

TEST_CASE("ratings file round-trip and validation") {
  const auto r = small_matrix();
  std::ostringstream out;
  write_rating_file(out, r);
  std::istringstream in(out.str());
  const auto back = read_rating_file(in);
  CHECK(back.size() == r.size());
  CHECK(back.rating("u2", "i4") == 5.0);

  std::istringstream bad("u,i,11\n");
  CHECK_THROWS_AS(read_rating_file(bad), ParseError);
  std::istringstream dup("u,i,3\nu,i,3\n");
  CHECK_THROWS_AS(read_rating_file(dup), ParseError);
}

TEST_SUITE_END();
