#pragma once

#include <cstdint>
#include <unordered_set>
#include <vector>

#include "privact/graph.hpp"
#include "privact/ldp.hpp"
#include "privact/tree.hpp"

namespace privact {

enum class SocialKind { kFriends, kHctNeighbors };

// Per-user 0/1 social relation, stored as explicit neighbor sets.
struct SocialFn {
  SocialKind kind = SocialKind::kFriends;
  std::vector<std::vector<std::int32_t>> sets;
};

SocialFn friend_sets(const Graph& g);

// m(u) = round(sum of u's noisy counts) clamped to [1, n-1]; N(u) = the m(u)
// closest leaves by community walk.
SocialFn hct_neighbor_sets(const ClusterTree& t,
                           const std::vector<DegreeVector>& noisy_vectors);

// Mean training rating per item; items with no raters get NaN.
std::vector<double> item_means(const RatingsMatrix& r,
                               const std::vector<char>& train_user);

// score(i) = mean(i) + sum over neighbor raters of (r - rater_mean) / count.
// Items without neighbor raters keep their mean (the itemAvg fallback).
// rater_mean is each rater's mean over their training ratings.
std::vector<double> neighbor_cf_scores(const RatingsMatrix& r,
                                       const std::vector<char>& train_user,
                                       const std::vector<double>& item_mean,
                                       const std::vector<double>& user_mean,
                                       const std::vector<std::int32_t>& neighbors);

// Item ids of the k largest scores among eligible items; ties break toward
// the smaller item id. NaN scores are ineligible.
std::vector<std::int32_t> top_k_items(const std::vector<double>& scores,
                                      std::size_t k);

// Binary-relevance ranking metrics. Empty relevant set gives 0.
double ndcg_at_k(const std::vector<std::int32_t>& ranked,
                 const std::unordered_set<std::int32_t>& relevant, std::int32_t k);
// AP over the top-k prefix, normalized by min(|relevant|, k) clamped to >= 1.
double ap_at_k(const std::vector<std::int32_t>& ranked,
               const std::unordered_set<std::int32_t>& relevant, std::int32_t k);
// Mean of ap_at_i over cutoffs i = 1..k.
double map_at_k(const std::vector<std::int32_t>& ranked,
                const std::unordered_set<std::int32_t>& relevant, std::int32_t k);

// Cold-start methods, in the order used by every per-method array here.
enum Method : int { kItemAvg = 0, kFriendsCf = 1, kPrivactCf = 2, kMethodCount = 3 };
const char* method_name(int method);

struct CvConfig {
  std::int32_t folds = 5;
  std::int32_t top_k = 100;
  std::uint64_t seed = 1;
  bool capture_items = false;  // keep each user's ranked list
};

struct UserEval {
  std::int32_t user = 0;
  std::int32_t fold = 0;
  double ndcg[kMethodCount] = {};
  double map[kMethodCount] = {};
  double ap[kMethodCount] = {};
  std::vector<std::int32_t> top_items[kMethodCount];
};

struct CvResult {
  std::vector<UserEval> users;          // evaluated cold-start targets
  std::size_t skipped_no_ratings = 0;   // fold users with empty profiles
  // Targets whose neighbor set was empty, served the itemAvg ranking instead.
  std::size_t empty_neighbor_fallbacks[kMethodCount] = {};
  double mean_ndcg[kMethodCount] = {};  // pooled over evaluated users
  double mean_map[kMethodCount] = {};
  double mean_ap[kMethodCount] = {};
};

// User-level k-fold cold start: a fold's users lose their entire rating
// history from training; their rated items form the relevant sets.
CvResult cross_validate(const Graph& g, const RatingsMatrix& ratings,
                        const ClusterTree& tree,
                        const std::vector<DegreeVector>& noisy_vectors,
                        const CvConfig& cfg);

}  // namespace privact
