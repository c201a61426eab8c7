#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "privact/graph.hpp"

namespace privact {

// Sample Pearson correlation; nullopt when either side has zero variance or
// fewer than 2 points are given.
std::optional<double> pearson(const std::vector<double>& x,
                              const std::vector<double>& y);

struct UtilityReport {
  double cost_dp = 0.0;      // final DP cost on the true matrix
  double cost_nondp = 0.0;   // final non-DP cost on the true matrix
  double rho = 0.0;
  double empirical_loss = 0.0;     // |cost_dp - cost_nondp| / cost_nondp
  double relative_utility = 0.0;   // cost_nondp / rho
  double bound = 0.0;              // (2K/eps)(3/2 + 6/sqrt(K)) * rho
};

// Worst-case loss bound for the noisy pipeline at the given bin count.
double dp_loss_bound(std::size_t n, std::int32_t k, double epsilon);

UtilityReport utility_report(double cost_dp_true, double cost_nondp_true,
                             std::size_t n, std::int32_t k, double epsilon);

enum class ProfileMode { kPartial, kFull };

// Cosine similarity between two users' rating profiles. Partial restricts
// both vectors to the co-rated items (nullopt when there are none); full uses
// the whole item universe with implicit zeros (nullopt when either profile is
// empty).
std::optional<double> profile_similarity(const RatingsMatrix& r, std::int32_t u,
                                         std::int32_t v, ProfileMode mode);

struct CorrelationSummary {
  // Per user with a defined correlation: (user, r).
  std::vector<std::pair<std::int32_t, double>> per_user;
  std::size_t skipped = 0;  // under 3 valid pairs or zero variance
  double negative_fraction = 0.0;
  double min_r = 0.0;
  double max_r = 0.0;
};

// Per target user, Pearson correlation between hop distance and profile
// similarity across all reachable users with a defined similarity.
CorrelationSummary distance_similarity_correlation(const Graph& g,
                                                   const RatingsMatrix& r,
                                                   ProfileMode mode);

// Correlation between per-user ranking quality and the mean over the user's
// recommended items of the average hop distance to each item's raters.
// Users whose profile has no finite distances are skipped.
struct NdcgPathResult {
  std::optional<double> r;
  std::size_t users_used = 0;
  std::size_t users_skipped = 0;
};
NdcgPathResult ndcg_path_correlation(
    const Graph& g, const RatingsMatrix& ratings,
    const std::vector<std::int32_t>& users, const std::vector<double>& ndcg,
    const std::vector<std::vector<std::int32_t>>& top_items);

}  // namespace privact
