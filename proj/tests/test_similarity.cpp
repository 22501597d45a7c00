#include "lomatch/similarity.hpp"

#include "lomatch/record.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace lomatch;

TEST_SUITE_BEGIN("similarity");

namespace {

// Independent full-matrix Levenshtein over bytes (ASCII inputs only), kept
// separate from the production code path.
std::size_t reference_edit_distance(const std::string& a,
                                    const std::string& b) {
  std::vector<std::vector<std::size_t>> dp(a.size() + 1,
                                           std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) dp[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) dp[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      dp[i][j] = std::min({dp[i - 1][j] + 1, dp[i][j - 1] + 1,
                           dp[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0u : 1u)});
    }
  }
  return dp[a.size()][b.size()];
}

std::string random_ascii(std::mt19937_64& rng, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<int> ch(0, 3);
  std::string s;
  const std::size_t n = len(rng);
  for (std::size_t i = 0; i < n; ++i) {
    s.push_back(static_cast<char>('a' + ch(rng)));
  }
  return s;
}

LearningObjectRecord record_with(const std::string& id,
                                 const std::string& title,
                                 const std::string& description,
                                 std::set<std::string> keywords,
                                 const std::string& type) {
  LearningObjectRecord rec;
  rec.id = id;
  rec.title = title;
  rec.description = description;
  rec.keywords = std::move(keywords);
  rec.resource_type = type;
  rec.repository = "repo";
  return rec;
}

}  // namespace

TEST_CASE("edit similarity basics") {
  CHECK(edit_similarity("abc", "abc") == 1.0);
  CHECK(edit_similarity("", "x") == 0.0);
  CHECK(edit_similarity("", "") == 1.0);
  // kitten -> sitting needs 3 edits over max length 7.
  CHECK(reference_edit_distance("kitten", "sitting") == 3);
  CHECK(edit_similarity("kitten", "sitting") ==
        doctest::Approx(0.5714285714285714).epsilon(1e-12));
}

TEST_CASE("edit similarity counts UTF-8 code points, not bytes") {
  // Two-byte codepoint vs one ASCII letter: a single substitution.
  CHECK(edit_similarity("\xC3\xA9", "e") == 0.0);
  CHECK(edit_similarity("caf\xC3\xA9", "cafe") == doctest::Approx(0.75));
}

TEST_CASE("token set similarity") {
  CHECK(token_set_similarity({"a", "b", "c"}, {"b", "c", "d"}) == 0.5);
  const std::set<std::string> s = {"x", "y"};
  CHECK(token_set_similarity(s, s) == 1.0);
  CHECK(token_set_similarity({"a"}, {"b"}) == 0.0);
  CHECK(token_set_similarity({}, {}) == 1.0);
}

TEST_CASE("tf cosine similarity") {
  CHECK(tf_cosine_similarity("a b", "a b") == doctest::Approx(1.0));
  CHECK(tf_cosine_similarity("a b", "c d") == 0.0);
  CHECK(tf_cosine_similarity("a b", "a c") == doctest::Approx(0.5));
  CHECK(tf_cosine_similarity("", "anything") == 0.0);
  CHECK(tf_cosine_similarity("A b", "a B") == doctest::Approx(1.0));
}

TEST_CASE("extract_features composes the lom4 vector") {
  const auto source = make_ontology(
      {record_with("s1", "kitten", "", {"x"}, "lecture"),
       record_with("s2", "alpha beta", "shared words here", {"k1", "k2"},
                   "exercise")});
  const auto target = make_ontology(
      {record_with("t1", "sitting", "", {"y"}, "lecture"),
       record_with("t2", "alpha beta", "shared words here", {"k1", "k2"},
                   "exercise")});

  SUBCASE("identical records give the all-ones vector") {
    const auto fv = extract_features({"s2", "t2", std::nullopt}, source, target);
    REQUIRE(fv.values.size() == 4);
    for (Index i = 0; i < 4; ++i) CHECK(fv.values[i] == doctest::Approx(1.0));
  }
  SUBCASE("edit-distance-3 titles, same type, disjoint keywords") {
    const auto fv = extract_features({"s1", "t1", std::nullopt}, source, target);
    CHECK(fv.values[0] == doctest::Approx(0.5714285714285714).epsilon(1e-12));
    CHECK(fv.values[1] == 0.0);
    CHECK(fv.values[2] == 0.0);
    CHECK(fv.values[3] == 1.0);
  }
  SUBCASE("fully disjoint records of different type give all zeros") {
    const auto fv = extract_features({"s1", "t2", std::nullopt}, source, target);
    CHECK(fv.values[0] < 0.3);  // unrelated titles still share letters
    const auto disjoint = extract_features(
        {"s2", "t1", std::nullopt},
        make_ontology({record_with("s2", "aaaa", "xx yy", {"p"}, "exercise")}),
        make_ontology({record_with("t1", "bbbb", "zz ww", {"q"}, "lecture")}));
    for (Index i = 0; i < 4; ++i) CHECK(disjoint.values[i] == 0.0);
  }
  SUBCASE("unresolvable ids are an error") {
    CHECK_THROWS_AS(extract_features({"nope", "t1", std::nullopt}, source, target),
                    std::invalid_argument);
    CHECK_THROWS_AS(extract_features({"s1", "nope", std::nullopt}, source, target),
                    std::invalid_argument);
  }
}

TEST_CASE("empty-field conventions are configurable") {
  const auto source =
      make_ontology({record_with("s1", "", "", {}, "lecture")});
  const auto target =
      make_ontology({record_with("t1", "", "", {}, "lecture")});

  const auto defaults = extract_features({"s1", "t1", std::nullopt}, source,
                                         target);
  CHECK(defaults.values[0] == 1.0);  // both titles absent
  CHECK(defaults.values[1] == 0.0);  // absent descriptions carry no signal
  CHECK(defaults.values[2] == 1.0);  // both keyword sets absent

  FeatureConventions strict;
  strict.both_empty_title = 0.0;
  strict.both_empty_keywords = 0.5;
  strict.empty_description = 0.25;
  const auto adjusted =
      extract_features({"s1", "t1", std::nullopt}, source, target, strict);
  CHECK(adjusted.values[0] == 0.0);
  CHECK(adjusted.values[1] == 0.25);
  CHECK(adjusted.values[2] == 0.5);
}

TEST_CASE("type indicator honours the resource-type hierarchy") {
  const auto source = make_ontology(
      {record_with("s1", "t", "", {}, "quiz")},
      {{"quiz", "assessment"}, {"assessment", "activity"}});
  const auto target = make_ontology(
      {record_with("t1", "t", "", {}, "activity"),
       record_with("t2", "t", "", {}, "simulation")});

  const auto related = extract_features({"s1", "t1", std::nullopt}, source, target);
  CHECK(related.values[3] == 1.0);  // quiz -> assessment -> activity
  const auto unrelated =
      extract_features({"s1", "t2", std::nullopt}, source, target);
  CHECK(unrelated.values[3] == 0.0);
}

TEST_CASE("component similarities are symmetric and bounded") {
  std::mt19937_64 rng(1234);
  std::uniform_int_distribution<int> set_len(0, 5);
  for (int trial = 0; trial < 10000; ++trial) {
    const auto a = random_ascii(rng, 8);
    const auto b = random_ascii(rng, 8);
    const double es = edit_similarity(a, b);
    REQUIRE(es >= 0.0);
    REQUIRE(es <= 1.0);
    REQUIRE(es == edit_similarity(b, a));

    const double tc = tf_cosine_similarity(a, b);
    REQUIRE(tc >= 0.0);
    REQUIRE(tc <= 1.0);
    REQUIRE(tc == tf_cosine_similarity(b, a));

    std::set<std::string> sa, sb;
    for (int i = set_len(rng); i > 0; --i) sa.insert(random_ascii(rng, 2));
    for (int i = set_len(rng); i > 0; --i) sb.insert(random_ascii(rng, 2));
    const double js = token_set_similarity(sa, sb);
    REQUIRE(js >= 0.0);
    REQUIRE(js <= 1.0);
    REQUIRE(js == token_set_similarity(sb, sa));
  }
}

TEST_CASE("feature file round-trip") {
  FeatureDataset data;
  data.pairs = {{"s1", "t1", PairLabel::kMatch},
                {"s2", "t2", std::nullopt},
                {"s3", "t3", PairLabel::kNonMatch}};
  data.X.resize(3, 4);
  data.X << 1, 0.5714285714, 0, 1, 0.25, 0, 0.125, 0, 0, 0, 0, 0;

  std::ostringstream out;
  write_feature_file(out, data);
  std::istringstream in(out.str());
  const auto back = read_feature_file(in);
  REQUIRE(back.size() == 3);
  CHECK(back.schema_id == data.schema_id);
  CHECK(back.pairs == data.pairs);
  for (Index i = 0; i < 3; ++i) {
    for (Index j = 0; j < 4; ++j) {
      CHECK(back.X(i, j) == doctest::Approx(data.X(i, j)).epsilon(1e-9));
    }
  }
}

TEST_CASE("feature file rejects inconsistent dimensions") {
  std::istringstream in("s1,t1,0.5,0.5\ns2,t2,0.5\n");
  CHECK_THROWS_AS(read_feature_file(in), ParseError);
}

TEST_SUITE_END();
