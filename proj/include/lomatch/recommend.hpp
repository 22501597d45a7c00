#pragma once

#include "lomatch/record.hpp"
#include "lomatch/types.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lomatch {

struct RatingScale {
  double min = 1.0;
  double max = 5.0;
};

/// Sparse user-item ratings on a fixed scale. At most one rating per
/// (user, item).
class RatingMatrix {
 public:
  explicit RatingMatrix(RatingScale scale = {}) : scale_(scale) {
    if (!(scale_.min < scale_.max)) {
      throw std::invalid_argument("rating scale: min must be below max");
    }
  }

  /// Throws on duplicate (user, item) or out-of-scale values.
  void add(const std::string& user, const std::string& item, double rating);

  bool has_user(const std::string& user) const;
  const std::map<std::string, double>* ratings_of(const std::string& user) const;
  std::optional<double> rating(const std::string& user,
                               const std::string& item) const;
  /// Mean over the user's ratings; empty when the user rated nothing.
  std::optional<double> mean_rating(const std::string& user) const;

  std::vector<std::string> users() const;
  const RatingScale& scale() const { return scale_; }
  std::size_t size() const { return count_; }

 private:
  std::map<std::string, std::map<std::string, double>> by_user_;
  RatingScale scale_;
  std::size_t count_ = 0;
};

/// `user_id,item_id,rating` lines; '#' lines and an optional header are
/// skipped.
RatingMatrix read_rating_file(std::istream& in, RatingScale scale = {});
void write_rating_file(std::ostream& out, const RatingMatrix& ratings);

struct UserProfile {
  std::string user_id;
  Vector profile;
  double mean_rating = 0.0;
};

struct Recommendation {
  std::string item_id;
  double score = 0.0;
  std::optional<double> cf_component;  // absent for seeded cold-start users
  double cb_component = 0.0;
  double alpha = 0.5;
};

/// Pearson correlation over co-rated items; 0 with fewer than 2 co-rated
/// items or zero variance on them. Throws on unknown users.
double pearson_user_similarity(const RatingMatrix& ratings,
                               const std::string& u, const std::string& v);

/// Mean-centered weighted deviation over the k most similar positive
/// neighbors who rated the item; falls back to the user's mean and clamps
/// to the scale. Throws ColdStartError when the user has no ratings.
double predict_rating_cf(const RatingMatrix& ratings, const std::string& u,
                         const std::string& item, int k_neighbors);

/// Rating-weighted mean of the rated items' feature vectors, weights
/// (r - r_min) / (r_max - r_min). Throws ColdStartError when the user has
/// no ratings or every rating sits at the scale minimum.
UserProfile build_content_profile(const RatingMatrix& ratings,
                                  const std::string& u,
                                  const std::map<std::string, Vector>& item_features);

/// Cosine similarity clamped to [0, 1]; 0 when either vector is zero.
double score_content(const UserProfile& profile, const Vector& item);

/// Blended top-k over the user's unrated items:
/// alpha * normalized CF prediction + (1 - alpha) * content score.
/// A user with no ratings needs seed_profile (pure-content mode).
std::vector<Recommendation> recommend_hybrid(
    const RatingMatrix& ratings,
    const std::map<std::string, Vector>& item_features, const std::string& u,
    int top_k, double alpha, int k_neighbors = 10,
    const std::optional<UserProfile>& seed_profile = std::nullopt);

/// Item content vectors: component j is the mean of the 4 pairwise
/// similarity features between the item and anchor j, so all items live
/// in one [0,1]^anchors space.
std::map<std::string, Vector> build_item_features(
    const Ontology& items, const Ontology& anchors);

struct UserRecommendations {
  std::string user_id;
  std::vector<Recommendation> items;
};

/// `user_id,item_id,score,cf,cb,alpha` lines, descending score per user.
void write_recommendations(std::ostream& out,
                           const std::vector<UserRecommendations>& all);

}  // namespace lomatch
