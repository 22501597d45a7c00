#include "lomatch/recommend.hpp"

#include "lomatch/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace lomatch {

void RatingMatrix::add(const std::string& user, const std::string& item,
                       double rating) {
  if (user.empty() || item.empty()) {
    throw std::invalid_argument("rating with empty user or item id");
  }
  if (rating < scale_.min || rating > scale_.max) {
    throw std::invalid_argument("rating " + format_value(rating) +
                                " outside scale [" + format_value(scale_.min) +
                                ", " + format_value(scale_.max) + "]");
  }
  auto [it, inserted] = by_user_[user].emplace(item, rating);
  (void)it;
  if (!inserted) {
    throw std::invalid_argument("duplicate rating for (" + user + ", " + item +
                                ")");
  }
  ++count_;
}

bool RatingMatrix::has_user(const std::string& user) const {
  return by_user_.count(user) > 0;
}

const std::map<std::string, double>* RatingMatrix::ratings_of(
    const std::string& user) const {
  auto it = by_user_.find(user);
  return it == by_user_.end() ? nullptr : &it->second;
}

std::optional<double> RatingMatrix::rating(const std::string& user,
                                           const std::string& item) const {
  auto it = by_user_.find(user);
  if (it == by_user_.end()) return std::nullopt;
  auto jt = it->second.find(item);
  if (jt == it->second.end()) return std::nullopt;
  return jt->second;
}

std::optional<double> RatingMatrix::mean_rating(const std::string& user) const {
  const auto* r = ratings_of(user);
  if (!r || r->empty()) return std::nullopt;
  double sum = 0.0;
  for (const auto& [_, v] : *r) sum += v;
  return sum / static_cast<double>(r->size());
}

std::vector<std::string> RatingMatrix::users() const {
  std::vector<std::string> out;
  out.reserve(by_user_.size());
  for (const auto& [user, _] : by_user_) out.push_back(user);
  return out;
}

RatingMatrix read_rating_file(std::istream& in, RatingScale scale) {
  RatingMatrix ratings(scale);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("user_id,", 0) == 0) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (fields.size() != 3) {
      throw ParseError("expected user_id,item_id,rating", line_no);
    }
    double value = 0.0;
    try {
      value = std::stod(fields[2]);
    } catch (const std::exception&) {
      throw ParseError("bad rating value \"" + fields[2] + "\"", line_no);
    }
    try {
      ratings.add(fields[0], fields[1], value);
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return ratings;
}

void write_rating_file(std::ostream& out, const RatingMatrix& ratings) {
  out << "#format: lom.ratings.v1\n";
  for (const auto& user : ratings.users()) {
    for (const auto& [item, value] : *ratings.ratings_of(user)) {
      require_csv_safe(user);
      require_csv_safe(item);
      out << user << ',' << item << ',' << format_value(value) << "\n";
    }
  }
}

double pearson_user_similarity(const RatingMatrix& ratings,
                               const std::string& u, const std::string& v) {
  const auto* ru = ratings.ratings_of(u);
  const auto* rv = ratings.ratings_of(v);
  if (!ru) throw std::invalid_argument("unknown user id: " + u);
  if (!rv) throw std::invalid_argument("unknown user id: " + v);

  std::vector<std::pair<double, double>> co_rated;
  for (const auto& [item, a] : *ru) {
    auto it = rv->find(item);
    if (it != rv->end()) co_rated.emplace_back(a, it->second);
  }
  if (co_rated.size() < 2) return 0.0;

  double mu = 0.0, mv = 0.0;
  for (const auto& [a, b] : co_rated) {
    mu += a;
    mv += b;
  }
  mu /= static_cast<double>(co_rated.size());
  mv /= static_cast<double>(co_rated.size());
  double dot = 0.0, su = 0.0, sv = 0.0;
  for (const auto& [a, b] : co_rated) {
    dot += (a - mu) * (b - mv);
    su += (a - mu) * (a - mu);
    sv += (b - mv) * (b - mv);
  }
  if (su == 0.0 || sv == 0.0) return 0.0;
  return dot / std::sqrt(su * sv);
}

double predict_rating_cf(const RatingMatrix& ratings, const std::string& u,
                         const std::string& item, int k_neighbors) {
  const auto mean_u = ratings.mean_rating(u);
  if (!mean_u) {
    throw ColdStartError("user \"" + u + "\" has no ratings");
  }
  if (k_neighbors < 1) {
    throw std::invalid_argument("predict_rating_cf: k_neighbors must be >= 1");
  }

  // Positive-similarity raters of the item, most similar first.
  std::vector<std::pair<double, std::string>> candidates;
  for (const auto& v : ratings.users()) {
    if (v == u) continue;
    if (!ratings.rating(v, item)) continue;
    const double w = pearson_user_similarity(ratings, u, v);
    if (w > 0.0) candidates.emplace_back(w, v);
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const auto& a, const auto& b) {
              if (a.first != b.first) return a.first > b.first;
              return a.second < b.second;
            });
  if (candidates.size() > static_cast<std::size_t>(k_neighbors)) {
    candidates.resize(static_cast<std::size_t>(k_neighbors));
  }

  if (candidates.empty()) return *mean_u;  // no qualifying neighbor

  double numer = 0.0, denom = 0.0;
  for (const auto& [w, v] : candidates) {
    const double rv = *ratings.rating(v, item);
    const double mv = *ratings.mean_rating(v);
    numer += w * (rv - mv);
    denom += std::abs(w);
  }
  const double predicted = *mean_u + numer / denom;
  return std::clamp(predicted, ratings.scale().min, ratings.scale().max);
}

UserProfile build_content_profile(
    const RatingMatrix& ratings, const std::string& u,
    const std::map<std::string, Vector>& item_features) {
  const auto* ru = ratings.ratings_of(u);
  if (!ru || ru->empty()) {
    throw ColdStartError("user \"" + u + "\" has no ratings");
  }
  const auto& scale = ratings.scale();
  UserProfile profile;
  profile.user_id = u;
  profile.mean_rating = *ratings.mean_rating(u);

  double weight_sum = 0.0;
  for (const auto& [item, value] : *ru) {
    auto it = item_features.find(item);
    if (it == item_features.end()) continue;  // unfeatured items carry no signal
    const double w = (value - scale.min) / (scale.max - scale.min);
    if (profile.profile.size() == 0) {
      profile.profile = Vector::Zero(it->second.size());
    }
    if (it->second.size() != profile.profile.size()) {
      throw std::invalid_argument("item feature dimension mismatch: " + item);
    }
    profile.profile += w * it->second;
    weight_sum += w;
  }
  if (weight_sum == 0.0) {
    throw ColdStartError("user \"" + u +
                         "\" has no positively weighted rated items");
  }
  profile.profile /= weight_sum;
  return profile;
}

double score_content(const UserProfile& profile, const Vector& item) {
  if (profile.profile.size() != item.size()) {
    throw std::invalid_argument("score_content: dimension mismatch");
  }
  const double np = profile.profile.norm();
  const double ni = item.norm();
  if (np == 0.0 || ni == 0.0) return 0.0;
  const double cosine = profile.profile.dot(item) / (np * ni);
  return std::clamp(cosine, 0.0, 1.0);
}

std::vector<Recommendation> recommend_hybrid(
    const RatingMatrix& ratings,
    const std::map<std::string, Vector>& item_features, const std::string& u,
    int top_k, double alpha, int k_neighbors,
    const std::optional<UserProfile>& seed_profile) {
  if (top_k < 1) {
    throw std::invalid_argument("recommend_hybrid: top_k must be >= 1");
  }
  if (alpha < 0.0 || alpha > 1.0) {
    throw std::invalid_argument("recommend_hybrid: alpha must be in [0,1]");
  }

  const auto* rated = ratings.ratings_of(u);
  const bool cold_start = !rated || rated->empty();
  std::optional<UserProfile> profile;
  if (cold_start) {
    if (!seed_profile) {
      throw ColdStartError("user \"" + u +
                           "\" has no ratings and no seed profile");
    }
    profile = *seed_profile;
  } else {
    try {
      profile = build_content_profile(ratings, u, item_features);
    } catch (const ColdStartError&) {
      if (seed_profile) profile = *seed_profile;
      // else: all ratings at scale minimum and no seed; content scores 0.
    }
  }

  const auto& scale = ratings.scale();
  std::vector<Recommendation> recs;
  for (const auto& [item, features] : item_features) {
    if (rated && rated->count(item)) continue;  // never re-recommend

    Recommendation rec;
    rec.item_id = item;
    rec.alpha = alpha;
    if (profile) {
      rec.cb_component = score_content(*profile, features);
    }
    if (!cold_start) {
      const double predicted = predict_rating_cf(ratings, u, item, k_neighbors);
      rec.cf_component = (predicted - scale.min) / (scale.max - scale.min);
      rec.score = alpha * *rec.cf_component + (1.0 - alpha) * rec.cb_component;
    } else {
      rec.score = rec.cb_component;  // pure-content mode
    }
    recs.push_back(std::move(rec));
  }

  std::sort(recs.begin(), recs.end(), [](const auto& a, const auto& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.item_id < b.item_id;
  });
  if (recs.size() > static_cast<std::size_t>(top_k)) {
    recs.resize(static_cast<std::size_t>(top_k));
  }
  return recs;
}

std::map<std::string, Vector> build_item_features(const Ontology& items,
                                                  const Ontology& anchors) {
  if (anchors.instances.empty()) {
    throw std::invalid_argument("build_item_features: no anchor records");
  }
  std::vector<InstancePair> pairs;
  pairs.reserve(items.instances.size() * anchors.instances.size());
  for (const auto& item : items.instances) {
    for (const auto& anchor : anchors.instances) {
      pairs.push_back({item.id, anchor.id, std::nullopt});
    }
  }
  const auto data = extract_feature_matrix(pairs, items, anchors);
  const auto m = static_cast<Index>(anchors.instances.size());
  std::map<std::string, Vector> features;
  for (std::size_t i = 0; i < items.instances.size(); ++i) {
    Vector v(m);
    for (Index j = 0; j < m; ++j) {
      v[j] = data.X.row(static_cast<Index>(i) * m + j).mean();
    }
    features[items.instances[i].id] = std::move(v);
  }
  return features;
}

void write_recommendations(std::ostream& out,
                           const std::vector<UserRecommendations>& all) {
  out << "#format: lom.recommendations.v1\n";
  out << "user_id,item_id,score,cf,cb,alpha\n";
  for (const auto& entry : all) {
    require_csv_safe(entry.user_id);
    for (const auto& rec : entry.items) {
      require_csv_safe(rec.item_id);
      out << entry.user_id << ',' << rec.item_id << ','
          << format_value(rec.score) << ',';
      if (rec.cf_component) out << format_value(*rec.cf_component);
      out << ',' << format_value(rec.cb_component) << ','
          << format_value(rec.alpha) << "\n";
    }
  }
}

}  // namespace lomatch
