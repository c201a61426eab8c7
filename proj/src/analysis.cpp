#include "privact/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "privact/cost.hpp"

namespace privact {

std::optional<double> pearson(const std::vector<double>& x,
                              const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::runtime_error("length mismatch");
  std::size_t n = x.size();
  if (n < 2) return std::nullopt;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double dx = x[i] - mx;
    double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

double dp_loss_bound(std::size_t n, std::int32_t k, double epsilon) {
  if (!(epsilon > 0.0) || k < 1) throw std::runtime_error("bad bound inputs");
  double kd = static_cast<double>(k);
  return (2.0 * kd / epsilon) * (1.5 + 6.0 / std::sqrt(kd)) *
         clique_cost(static_cast<std::int64_t>(n));
}

UtilityReport utility_report(double cost_dp_true, double cost_nondp_true,
                             std::size_t n, std::int32_t k, double epsilon) {
  if (!(cost_nondp_true > 0.0)) {
    throw std::runtime_error("non-DP cost must be positive");
  }
  UtilityReport rep;
  rep.cost_dp = cost_dp_true;
  rep.cost_nondp = cost_nondp_true;
  rep.rho = clique_cost(static_cast<std::int64_t>(n));
  rep.empirical_loss = std::abs(cost_dp_true - cost_nondp_true) / cost_nondp_true;
  rep.relative_utility = cost_nondp_true / rep.rho;
  rep.bound = dp_loss_bound(n, k, epsilon);
  return rep;
}

std::optional<double> profile_similarity(const RatingsMatrix& r, std::int32_t u,
                                         std::int32_t v, ProfileMode mode) {
  if (u == v) throw std::runtime_error("profile similarity needs u != v");
  const auto& a = r.by_user[static_cast<std::size_t>(u)];
  const auto& b = r.by_user[static_cast<std::size_t>(v)];

  double dot = 0.0, norm_a = 0.0, norm_b = 0.0;
  std::size_t i = 0, j = 0, shared = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first < b[j].first) {
      ++i;
    } else if (b[j].first < a[i].first) {
      ++j;
    } else {
      dot += a[i].second * b[j].second;
      norm_a += a[i].second * a[i].second;
      norm_b += b[j].second * b[j].second;
      ++shared;
      ++i;
      ++j;
    }
  }
  if (mode == ProfileMode::kPartial) {
    if (shared == 0) return std::nullopt;
    // Ratings are positive, so the restricted norms are nonzero here.
    return dot / std::sqrt(norm_a * norm_b);
  }
  if (a.empty() || b.empty()) return std::nullopt;
  norm_a = norm_b = 0.0;
  for (const auto& e : a) norm_a += e.second * e.second;
  for (const auto& e : b) norm_b += e.second * e.second;
  return dot / std::sqrt(norm_a * norm_b);
}

CorrelationSummary distance_similarity_correlation(const Graph& g,
                                                   const RatingsMatrix& r,
                                                   ProfileMode mode) {
  if (r.n_users != g.n()) throw std::runtime_error("user count mismatch");
  CorrelationSummary summary;
  std::size_t negatives = 0;
  for (std::int32_t u = 0; u < static_cast<std::int32_t>(g.n()); ++u) {
    std::vector<std::int32_t> dist = shortest_paths_from(g, u);
    std::vector<double> xs, ys;
    xs.reserve(g.n());
    ys.reserve(g.n());
    for (std::int32_t v = 0; v < static_cast<std::int32_t>(g.n()); ++v) {
      if (v == u || dist[static_cast<std::size_t>(v)] == kUnreachable) continue;
      auto sim = profile_similarity(r, u, v, mode);
      if (!sim) continue;
      xs.push_back(static_cast<double>(dist[static_cast<std::size_t>(v)]));
      ys.push_back(*sim);
    }
    if (xs.size() < 3) {
      ++summary.skipped;
      continue;
    }
    auto rho = pearson(xs, ys);
    if (!rho) {
      ++summary.skipped;
      continue;
    }
    if (summary.per_user.empty()) {
      summary.min_r = summary.max_r = *rho;
    } else {
      summary.min_r = std::min(summary.min_r, *rho);
      summary.max_r = std::max(summary.max_r, *rho);
    }
    if (*rho < 0.0) ++negatives;
    summary.per_user.push_back({u, *rho});
  }
  if (!summary.per_user.empty()) {
    summary.negative_fraction =
        static_cast<double>(negatives) / static_cast<double>(summary.per_user.size());
  }
  return summary;
}

NdcgPathResult ndcg_path_correlation(
    const Graph& g, const RatingsMatrix& ratings,
    const std::vector<std::int32_t>& users, const std::vector<double>& ndcg,
    const std::vector<std::vector<std::int32_t>>& top_items) {
  if (users.size() != ndcg.size() || users.size() != top_items.size()) {
    throw std::runtime_error("per-user inputs disagree in length");
  }
  std::vector<std::vector<std::int32_t>> raters(ratings.n_items);
  for (std::size_t u = 0; u < ratings.n_users; ++u) {
    for (const auto& e : ratings.by_user[u]) {
      raters[static_cast<std::size_t>(e.first)].push_back(static_cast<std::int32_t>(u));
    }
  }

  NdcgPathResult result;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < users.size(); ++i) {
    std::int32_t u = users[i];
    std::vector<std::int32_t> dist = shortest_paths_from(g, u);
    double sum_profile = 0.0;
    std::size_t items_used = 0;
    for (std::int32_t item : top_items[i]) {
      double sum_d = 0.0;
      std::size_t cnt = 0;
      for (std::int32_t rater : raters[static_cast<std::size_t>(item)]) {
        if (rater == u) continue;
        std::int32_t d = dist[static_cast<std::size_t>(rater)];
        if (d == kUnreachable) continue;
        sum_d += static_cast<double>(d);
        ++cnt;
      }
      if (cnt == 0) continue;
      sum_profile += sum_d / static_cast<double>(cnt);
      ++items_used;
    }
    if (items_used == 0) {
      ++result.users_skipped;
      continue;
    }
    xs.push_back(ndcg[i]);
    ys.push_back(sum_profile / static_cast<double>(items_used));
  }
  result.users_used = xs.size();
  result.r = pearson(xs, ys);
  return result;
}

}  // namespace privact
