#include "privact/recommend.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "privact/rng.hpp"

namespace privact {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

bool score_before(double sa, std::int32_t ia, double sb, std::int32_t ib) {
  if (sa != sb) return sa > sb;
  return ia < ib;
}

}  // namespace

SocialFn friend_sets(const Graph& g) {
  SocialFn fn;
  fn.kind = SocialKind::kFriends;
  fn.sets.resize(g.n());
  for (std::int32_t v = 0; v < static_cast<std::int32_t>(g.n()); ++v) {
    fn.sets[static_cast<std::size_t>(v)] = g.neighbors(v);
  }
  return fn;
}

SocialFn hct_neighbor_sets(const ClusterTree& t,
                           const std::vector<DegreeVector>& noisy_vectors) {
  if (noisy_vectors.size() != static_cast<std::size_t>(t.n)) {
    throw std::runtime_error("vector count disagrees with the tree");
  }
  SocialFn fn;
  fn.kind = SocialKind::kHctNeighbors;
  fn.sets.resize(noisy_vectors.size());
  for (std::int32_t u = 0; u < t.n; ++u) {
    double degree_estimate = 0.0;
    for (double c : noisy_vectors[static_cast<std::size_t>(u)]) degree_estimate += c;
    std::int64_t m = std::llround(degree_estimate);
    m = std::clamp<std::int64_t>(m, 1, t.n - 1);
    fn.sets[static_cast<std::size_t>(u)] =
        nearest_neighbors(t, u, static_cast<std::int32_t>(m));
  }
  return fn;
}

std::vector<double> item_means(const RatingsMatrix& r,
                               const std::vector<char>& train_user) {
  std::vector<double> sum(r.n_items, 0.0);
  std::vector<std::int32_t> count(r.n_items, 0);
  for (std::size_t u = 0; u < r.n_users; ++u) {
    if (!train_user[u]) continue;
    for (const auto& [item, rating] : r.by_user[u]) {
      sum[static_cast<std::size_t>(item)] += rating;
      ++count[static_cast<std::size_t>(item)];
    }
  }
  std::vector<double> mean(r.n_items, kNan);
  for (std::size_t i = 0; i < r.n_items; ++i) {
    if (count[i] > 0) mean[i] = sum[i] / count[i];
  }
  return mean;
}

std::vector<double> neighbor_cf_scores(const RatingsMatrix& r,
                                       const std::vector<char>& train_user,
                                       const std::vector<double>& item_mean,
                                       const std::vector<double>& user_mean,
                                       const std::vector<std::int32_t>& neighbors) {
  std::vector<double> num(r.n_items, 0.0);
  std::vector<std::int32_t> cnt(r.n_items, 0);
  for (std::int32_t nb : neighbors) {
    std::size_t u = static_cast<std::size_t>(nb);
    if (!train_user[u]) continue;
    for (const auto& [item, rating] : r.by_user[u]) {
      num[static_cast<std::size_t>(item)] += rating - user_mean[u];
      ++cnt[static_cast<std::size_t>(item)];
    }
  }
  std::vector<double> scores(item_mean);
  for (std::size_t i = 0; i < r.n_items; ++i) {
    if (cnt[i] > 0) scores[i] = item_mean[i] + num[i] / cnt[i];
  }
  return scores;
}

std::vector<std::int32_t> top_k_items(const std::vector<double>& scores,
                                      std::size_t k) {
  std::vector<std::int32_t> ids;
  ids.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!std::isnan(scores[i])) ids.push_back(static_cast<std::int32_t>(i));
  }
  auto before = [&](std::int32_t a, std::int32_t b) {
    return score_before(scores[static_cast<std::size_t>(a)], a,
                        scores[static_cast<std::size_t>(b)], b);
  };
  if (ids.size() > k) {
    std::nth_element(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(k),
                     ids.end(), before);
    ids.resize(k);
  }
  std::sort(ids.begin(), ids.end(), before);
  return ids;
}

double ndcg_at_k(const std::vector<std::int32_t>& ranked,
                 const std::unordered_set<std::int32_t>& relevant, std::int32_t k) {
  if (k < 1) throw std::runtime_error("k must be >= 1");
  if (relevant.empty()) return 0.0;
  std::size_t depth = std::min<std::size_t>(ranked.size(), static_cast<std::size_t>(k));
  double dcg = 0.0;
  for (std::size_t i = 0; i < depth; ++i) {
    if (relevant.count(ranked[i])) dcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
  }
  std::size_t ideal = std::min<std::size_t>(relevant.size(), static_cast<std::size_t>(k));
  double idcg = 0.0;
  for (std::size_t i = 0; i < ideal; ++i) {
    idcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
  }
  return dcg / idcg;
}

double ap_at_k(const std::vector<std::int32_t>& ranked,
               const std::unordered_set<std::int32_t>& relevant, std::int32_t k) {
  if (k < 1) throw std::runtime_error("k must be >= 1");
  if (relevant.empty()) return 0.0;
  std::size_t depth = std::min<std::size_t>(ranked.size(), static_cast<std::size_t>(k));
  double sum = 0.0;
  std::int32_t hits = 0;
  for (std::size_t i = 0; i < depth; ++i) {
    if (relevant.count(ranked[i])) {
      ++hits;
      sum += static_cast<double>(hits) / (static_cast<double>(i) + 1.0);
    }
  }
  std::size_t norm = std::max<std::size_t>(
      1, std::min<std::size_t>(relevant.size(), static_cast<std::size_t>(k)));
  return sum / static_cast<double>(norm);
}

double map_at_k(const std::vector<std::int32_t>& ranked,
                const std::unordered_set<std::int32_t>& relevant, std::int32_t k) {
  if (k < 1) throw std::runtime_error("k must be >= 1");
  if (relevant.empty()) return 0.0;
  // ap_at_i shares one precision-sum prefix across cutoffs.
  double sum_ap = 0.0;
  double precision_sum = 0.0;
  std::int32_t hits = 0;
  for (std::int32_t i = 1; i <= k; ++i) {
    std::size_t idx = static_cast<std::size_t>(i - 1);
    if (idx < ranked.size() && relevant.count(ranked[idx])) {
      ++hits;
      precision_sum += static_cast<double>(hits) / static_cast<double>(i);
    }
    std::size_t norm = std::max<std::size_t>(
        1, std::min<std::size_t>(relevant.size(), static_cast<std::size_t>(i)));
    sum_ap += precision_sum / static_cast<double>(norm);
  }
  return sum_ap / static_cast<double>(k);
}

const char* method_name(int method) {
  switch (method) {
    case kItemAvg: return "itemAvg";
    case kFriendsCf: return "friendsCF";
    case kPrivactCf: return "privactCF";
    default: throw std::runtime_error("unknown method index");
  }
}

namespace {

// Scores the candidate set (touched items plus a long enough prefix of the
// baseline order) instead of all items; untouched items keep their baseline
// order, so no item outside the prefix can reach the top k.
std::vector<std::int32_t> ranked_for_user(
    const std::vector<double>& item_mean, const std::vector<std::int32_t>& base_order,
    const std::vector<double>& num, const std::vector<std::int32_t>& cnt,
    const std::vector<std::int32_t>& touched, std::size_t k) {
  std::vector<std::int32_t> candidates;
  candidates.reserve(touched.size() + k + touched.size());
  std::vector<char> in_set;  // lazily sized below

  auto score_of = [&](std::int32_t item) {
    std::size_t i = static_cast<std::size_t>(item);
    double s = item_mean[i];
    if (cnt[i] > 0) s += num[i] / cnt[i];
    return s;
  };

  std::size_t prefix = std::min(base_order.size(), k + touched.size());
  in_set.assign(item_mean.size(), 0);
  for (std::int32_t item : touched) {
    if (std::isnan(item_mean[static_cast<std::size_t>(item)])) continue;
    in_set[static_cast<std::size_t>(item)] = 1;
    candidates.push_back(item);
  }
  for (std::size_t i = 0; i < prefix; ++i) {
    std::int32_t item = base_order[i];
    if (!in_set[static_cast<std::size_t>(item)]) candidates.push_back(item);
  }

  auto before = [&](std::int32_t a, std::int32_t b) {
    return score_before(score_of(a), a, score_of(b), b);
  };
  if (candidates.size() > k) {
    std::nth_element(candidates.begin(),
                     candidates.begin() + static_cast<std::ptrdiff_t>(k),
                     candidates.end(), before);
    candidates.resize(k);
  }
  std::sort(candidates.begin(), candidates.end(), before);
  return candidates;
}

}  // namespace

CvResult cross_validate(const Graph& g, const RatingsMatrix& ratings,
                        const ClusterTree& tree,
                        const std::vector<DegreeVector>& noisy_vectors,
                        const CvConfig& cfg) {
  if (ratings.n_users != g.n()) {
    throw std::runtime_error("ratings and graph disagree on user count");
  }
  if (cfg.folds < 2 || static_cast<std::size_t>(cfg.folds) > g.n()) {
    throw std::runtime_error("fold count out of range");
  }

  SocialFn friends = friend_sets(g);
  SocialFn hct = hct_neighbor_sets(tree, noisy_vectors);

  std::vector<std::int32_t> order(g.n());
  for (std::size_t i = 0; i < g.n(); ++i) order[i] = static_cast<std::int32_t>(i);
  Rng rng(mix_seed(cfg.seed, 0x666f6c64ull));
  rng.shuffle(order);

  CvResult result;
  std::vector<double> num(ratings.n_items, 0.0);
  std::vector<std::int32_t> cnt(ratings.n_items, 0);

  for (std::int32_t fold = 0; fold < cfg.folds; ++fold) {
    std::size_t lo = g.n() * static_cast<std::size_t>(fold) /
                     static_cast<std::size_t>(cfg.folds);
    std::size_t hi = g.n() * static_cast<std::size_t>(fold + 1) /
                     static_cast<std::size_t>(cfg.folds);

    std::vector<char> train_user(g.n(), 1);
    for (std::size_t i = lo; i < hi; ++i) {
      train_user[static_cast<std::size_t>(order[i])] = 0;
    }

    std::vector<double> item_mean = item_means(ratings, train_user);
    std::vector<double> user_mean(g.n(), kNan);
    for (std::size_t u = 0; u < g.n(); ++u) {
      if (!train_user[u] || ratings.by_user[u].empty()) continue;
      double sum = 0.0;
      for (const auto& e : ratings.by_user[u]) sum += e.second;
      user_mean[u] = sum / static_cast<double>(ratings.by_user[u].size());
    }

    std::vector<std::int32_t> base_order;
    base_order.reserve(ratings.n_items);
    for (std::size_t i = 0; i < ratings.n_items; ++i) {
      if (!std::isnan(item_mean[i])) base_order.push_back(static_cast<std::int32_t>(i));
    }
    std::sort(base_order.begin(), base_order.end(),
              [&](std::int32_t a, std::int32_t b) {
                return score_before(item_mean[static_cast<std::size_t>(a)], a,
                                    item_mean[static_cast<std::size_t>(b)], b);
              });
    std::vector<std::int32_t> item_avg_list(
        base_order.begin(),
        base_order.begin() + std::min<std::size_t>(base_order.size(),
                                                   static_cast<std::size_t>(cfg.top_k)));

    for (std::size_t i = lo; i < hi; ++i) {
      std::int32_t user = order[i];
      const auto& profile = ratings.by_user[static_cast<std::size_t>(user)];
      if (profile.empty()) {
        ++result.skipped_no_ratings;
        continue;
      }
      std::unordered_set<std::int32_t> relevant;
      for (const auto& e : profile) relevant.insert(e.first);

      UserEval eval;
      eval.user = user;
      eval.fold = fold;

      for (int method = 0; method < kMethodCount; ++method) {
        std::vector<std::int32_t> ranked;
        if (method == kItemAvg) {
          ranked = item_avg_list;
        } else {
          const auto& neighbors = method == kFriendsCf
                                      ? friends.sets[static_cast<std::size_t>(user)]
                                      : hct.sets[static_cast<std::size_t>(user)];
          if (neighbors.empty()) ++result.empty_neighbor_fallbacks[method];
          std::vector<std::int32_t> touched;
          for (std::int32_t nb : neighbors) {
            std::size_t u2 = static_cast<std::size_t>(nb);
            if (!train_user[u2]) continue;
            for (const auto& [item, rating] : ratings.by_user[u2]) {
              std::size_t it = static_cast<std::size_t>(item);
              if (cnt[it] == 0) touched.push_back(item);
              num[it] += rating - user_mean[u2];
              ++cnt[it];
            }
          }
          ranked = ranked_for_user(item_mean, base_order, num, cnt, touched,
                                   static_cast<std::size_t>(cfg.top_k));
          for (std::int32_t item : touched) {
            num[static_cast<std::size_t>(item)] = 0.0;
            cnt[static_cast<std::size_t>(item)] = 0;
          }
        }
        eval.ndcg[method] = ndcg_at_k(ranked, relevant, cfg.top_k);
        eval.map[method] = map_at_k(ranked, relevant, cfg.top_k);
        eval.ap[method] = ap_at_k(ranked, relevant, cfg.top_k);
        if (cfg.capture_items) eval.top_items[method] = std::move(ranked);
      }
      result.users.push_back(std::move(eval));
    }
  }

  if (!result.users.empty()) {
    for (const UserEval& e : result.users) {
      for (int m = 0; m < kMethodCount; ++m) {
        result.mean_ndcg[m] += e.ndcg[m];
        result.mean_map[m] += e.map[m];
        result.mean_ap[m] += e.ap[m];
      }
    }
    for (int m = 0; m < kMethodCount; ++m) {
      result.mean_ndcg[m] /= static_cast<double>(result.users.size());
      result.mean_map[m] /= static_cast<double>(result.users.size());
      result.mean_ap[m] /= static_cast<double>(result.users.size());
    }
  }
  return result;
}

}  // namespace privact
