#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "privact/analysis.hpp"
#include "privact/graph.hpp"

using privact::Graph;
using privact::ProfileMode;
using privact::RatingsMatrix;

namespace {

RatingsMatrix make_ratings(
    std::size_t n_users, std::size_t n_items,
    std::vector<std::vector<std::pair<std::int32_t, double>>> rows) {
  RatingsMatrix r;
  r.n_users = n_users;
  r.n_items = n_items;
  r.by_user = std::move(rows);
  r.by_user.resize(n_users);
  return r;
}

// Path 0-1-2-3-4; user u rates items {2u, 2u+1, 2u+2} at 1.0, so full-profile
// cosine is 1/3 for adjacent users and 0 otherwise.
struct PathFixture {
  Graph g = Graph::from_edges(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
  RatingsMatrix r;
  PathFixture() {
    std::vector<std::vector<std::pair<std::int32_t, double>>> rows(5);
    for (std::int32_t u = 0; u < 5; ++u)
      rows[static_cast<std::size_t>(u)] = {
          {2 * u, 1.0}, {2 * u + 1, 1.0}, {2 * u + 2, 1.0}};
    r = make_ratings(5, 11, std::move(rows));
  }
};

}  // namespace

TEST_CASE("pearson matches hand-computed values") {
  CHECK(*privact::pearson({1, 2, 3}, {2, 4, 6}) == doctest::Approx(1.0));
  CHECK(*privact::pearson({1, 2, 3}, {6, 4, 2}) == doctest::Approx(-1.0));
  // mx=3, my=3, sxy=8, sxx=syy=10.
  CHECK(*privact::pearson({1, 2, 3, 4, 5}, {2, 1, 4, 3, 5}) ==
        doctest::Approx(0.8));
}

TEST_CASE("pearson degenerate inputs yield nullopt") {
  CHECK(!privact::pearson({}, {}).has_value());
  CHECK(!privact::pearson({1.0}, {2.0}).has_value());
  CHECK(!privact::pearson({1, 1, 1}, {2, 5, 9}).has_value());
  CHECK(!privact::pearson({2, 5, 9}, {4, 4, 4}).has_value());
  CHECK_THROWS(privact::pearson({1, 2}, {1, 2, 3}));
}

TEST_CASE("dp_loss_bound at perfect-square bin counts is exact") {
  // k=4: (8/eps)(1.5 + 3) = 36/eps, rho(4) = 20.
  CHECK(privact::dp_loss_bound(4, 4, 1.0) == doctest::Approx(720.0));
  // k=9: (18/eps)(1.5 + 2) = 63/eps, rho(10) = 330.
  CHECK(privact::dp_loss_bound(10, 9, 2.0) == doctest::Approx(10395.0));
  // Linear in 1/eps and in rho.
  CHECK(privact::dp_loss_bound(10, 9, 0.5) ==
        doctest::Approx(4.0 * privact::dp_loss_bound(10, 9, 2.0)));
  CHECK_THROWS(privact::dp_loss_bound(10, 9, 0.0));
  CHECK_THROWS(privact::dp_loss_bound(10, 0, 1.0));
}

TEST_CASE("utility_report assembles the derived quantities") {
  privact::UtilityReport rep = privact::utility_report(110.0, 100.0, 10, 9, 2.0);
  CHECK(rep.cost_dp == 110.0);
  CHECK(rep.cost_nondp == 100.0);
  CHECK(rep.rho == doctest::Approx(330.0));
  CHECK(rep.empirical_loss == doctest::Approx(0.1));
  CHECK(rep.relative_utility == doctest::Approx(100.0 / 330.0));
  CHECK(rep.bound == doctest::Approx(10395.0));
  // Loss is symmetric around the non-DP cost.
  CHECK(privact::utility_report(90.0, 100.0, 10, 9, 2.0).empirical_loss ==
        doctest::Approx(0.1));
  CHECK_THROWS(privact::utility_report(1.0, 0.0, 10, 9, 2.0));
}

TEST_CASE("partial profile similarity uses only co-rated items") {
  RatingsMatrix r = make_ratings(4, 3,
                                 {{{0, 1.0}, {1, 2.0}},
                                  {{1, 2.0}, {2, 5.0}},
                                  {{0, 3.0}, {1, 4.0}},
                                  {}});
  // Single shared item: always 1 for positive ratings.
  CHECK(*privact::profile_similarity(r, 0, 1, ProfileMode::kPartial) ==
        doctest::Approx(1.0));
  // Users 0 and 2 share items 0 and 1: dot=1*3+2*4=11, norms sqrt(5)*sqrt(25).
  CHECK(*privact::profile_similarity(r, 0, 2, ProfileMode::kPartial) ==
        doctest::Approx(11.0 / std::sqrt(5.0 * 25.0)));
  // Disjoint or empty profiles have no co-rated items.
  CHECK(!privact::profile_similarity(r, 1, 3, ProfileMode::kPartial).has_value());
  CHECK_THROWS(privact::profile_similarity(r, 1, 1, ProfileMode::kPartial));
}

TEST_CASE("full profile similarity uses whole-profile norms") {
  RatingsMatrix r = make_ratings(3, 4, {{{0, 1.0}}, {{0, 1.0}, {1, 1.0}}, {}});
  CHECK(*privact::profile_similarity(r, 0, 1, ProfileMode::kFull) ==
        doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(!privact::profile_similarity(r, 0, 2, ProfileMode::kFull).has_value());
  // Partial sees one shared item and reports 1; full penalizes the unshared one.
  CHECK(*privact::profile_similarity(r, 0, 1, ProfileMode::kPartial) ==
        doctest::Approx(1.0));
}

TEST_CASE("distance and similarity anticorrelate on the path fixture") {
  PathFixture f;
  privact::CorrelationSummary s =
      privact::distance_similarity_correlation(f.g, f.r, ProfileMode::kFull);
  CHECK(s.per_user.size() == 5);
  CHECK(s.skipped == 0);
  CHECK(s.negative_fraction == doctest::Approx(1.0));
  // User 2 sees sim = (2 - d)/3 exactly; users 0 and 4 are the weakest fit.
  CHECK(s.min_r == doctest::Approx(-1.0));
  CHECK(s.max_r == doctest::Approx(-std::sqrt(3.0 / 5.0)));
  for (const auto& [u, r] : s.per_user) {
    CHECK(u >= 0);
    CHECK(u < 5);
    CHECK(r < 0.0);
  }
}

TEST_CASE("users without usable pairs are skipped, not counted") {
  PathFixture f;
  f.r.by_user[4].clear();  // empty profile: full similarity is undefined
  privact::CorrelationSummary s =
      privact::distance_similarity_correlation(f.g, f.r, ProfileMode::kFull);
  CHECK(s.per_user.size() == 4);
  CHECK(s.skipped == 1);
  CHECK(s.negative_fraction == doctest::Approx(1.0));
  CHECK_THROWS(privact::distance_similarity_correlation(
      Graph::from_edges(3, {{0, 1}}), f.r, ProfileMode::kFull));
}

TEST_CASE("ndcg_path_correlation averages rater distances over top items") {
  Graph g = Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}});
  // Item 0 rated only by user 1, item 1 only by user 0, item 2 only by user 3.
  RatingsMatrix r = make_ratings(
      4, 3, {{{1, 1.0}}, {{0, 1.0}}, {}, {{2, 1.0}}});

  // Two points: user 0 -> mean distance 1, user 3 -> mean distance 3.
  privact::NdcgPathResult res = privact::ndcg_path_correlation(
      g, r, {0, 3}, {0.9, 0.1}, {{0}, {1}});
  CHECK(res.users_used == 2);
  CHECK(res.users_skipped == 0);
  REQUIRE(res.r.has_value());
  CHECK(*res.r == doctest::Approx(-1.0));

  // A top item whose only rater is the user is unusable.
  privact::NdcgPathResult skipped = privact::ndcg_path_correlation(
      g, r, {0, 3}, {0.9, 0.1}, {{0}, {2}});
  CHECK(skipped.users_used == 1);
  CHECK(skipped.users_skipped == 1);
  CHECK(!skipped.r.has_value());

  CHECK_THROWS(privact::ndcg_path_correlation(g, r, {0, 3}, {0.9}, {{0}}));
}
