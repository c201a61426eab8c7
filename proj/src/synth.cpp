#include "privact/synth.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <fstream>
#include <stdexcept>
#include <unordered_map>

#include "privact/rng.hpp"

namespace privact {

namespace {

constexpr std::uint64_t kGraphTag = 0x6772617068ull;
constexpr std::uint64_t kRatingsTag = 0x7261746573ull;
constexpr std::uint64_t kTasteTag = 0x7461737465ull;
constexpr std::uint64_t kQualityTag = 0x7175616cull;

// Deterministic per-(user, item) uniform in [0, 1): repeat draws of the same
// pair agree, distinct pairs are independent.
double taste_u01(std::uint64_t seed, std::int32_t u, std::int32_t item) {
  std::uint64_t h = splitmix64(mix_seed(mix_seed(seed, kTasteTag),
                                        static_cast<std::uint64_t>(u),
                                        static_cast<std::uint64_t>(item)));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// Deterministic per-item uniform in [0, 1): intrinsic quality all local
// raters agree on.
double quality_u01(std::uint64_t seed, std::int32_t item) {
  std::uint64_t h = splitmix64(
      mix_seed(mix_seed(seed, kQualityTag), static_cast<std::uint64_t>(item)));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

std::int32_t community_of(std::int32_t u, std::int32_t n, std::int32_t l) {
  return static_cast<std::int32_t>(static_cast<std::int64_t>(u) * l / n);
}

// Doublings of line distance between two communities: 0 = same,
// 1 = adjacent, 2 = within 3, 3 = within 7, ...
std::int32_t level_between(std::int32_t ca, std::int32_t cb) {
  return std::bit_width(static_cast<std::uint32_t>(std::abs(ca - cb)));
}

}  // namespace

SynthProfile lastfm_like() {
  SynthProfile p;
  p.name = "lastfm-like";
  p.n_users = 1843;
  p.leaf_communities = 64;
  p.target_edges = 12668;
  p.level_decay = 0.25;
  p.degree_spread = 3.7;
  p.items_per_community = 200;
  p.global_items = 4832;  // 64 * 200 + 4832 = 17632 items
  p.ratings_per_user = 50;
  p.friend_copy_prob = 0.35;
  p.anthem_adopt_prob = 0.04;
  p.own_pool_prob = 0.34;
  p.near_pool_prob = 0.15;
  p.zipf_s = 1.15;
  p.obscure_favorite_prob = 1.0;
  p.explicit_scale = false;
  p.max_plays = 500;
  return p;
}

SynthProfile delicious_like() {
  SynthProfile p;
  p.name = "delicious-like";
  p.n_users = 1503;
  p.leaf_communities = 64;
  p.target_edges = 6350;
  p.level_decay = 0.25;
  p.degree_spread = 3.7;
  p.items_per_community = 280;
  p.global_items = 2080;  // 20000 items
  p.ratings_per_user = 30;
  p.friend_copy_prob = 0.25;
  p.anthem_adopt_prob = 0.04;
  p.own_pool_prob = 0.40;
  p.near_pool_prob = 0.15;
  p.zipf_s = 1.1;
  p.obscure_favorite_prob = 1.0;
  p.explicit_scale = false;
  p.max_plays = 200;
  return p;
}

SynthProfile douban_like() {
  SynthProfile p;
  p.name = "douban-like";
  p.n_users = 2848;
  p.leaf_communities = 64;
  p.target_edges = 95000;
  p.level_decay = 0.22;
  p.degree_ramp = 14.0;
  p.items_per_community = 100;
  p.global_items = 1600;  // 8000 items
  p.ratings_per_user = 220;
  p.friend_copy_prob = 0.0;
  p.own_pool_prob = 0.20;
  p.near_pool_span = 6;
  p.near_pool_prob = 0.70;
  p.zipf_s = 0.9;
  p.local_edge_scale = 0.12;
  p.backbone_chord = 0;
  p.explicit_scale = true;
  return p;
}

SynthData generate(const SynthProfile& p, std::uint64_t seed) {
  if (p.n_users < 4 || p.target_edges < 1) throw std::runtime_error("bad profile");
  if ((p.leaf_communities & (p.leaf_communities - 1)) != 0) {
    throw std::runtime_error("leaf_communities must be a power of two");
  }
  std::int32_t n = p.n_users;
  std::int32_t l = p.leaf_communities;

  SynthData d;
  d.community.resize(static_cast<std::size_t>(n));
  for (std::int32_t u = 0; u < n; ++u) {
    d.community[static_cast<std::size_t>(u)] = community_of(u, n, l);
  }

  // Solve the base edge probability so expected edges hit the target.
  std::vector<std::int64_t> size(static_cast<std::size_t>(l), 0);
  for (std::int32_t u = 0; u < n; ++u) ++size[static_cast<std::size_t>(d.community[u])];
  std::vector<double> mu(static_cast<std::size_t>(l));
  for (std::int32_t c = 0; c < l; ++c) {
    double x = (c + 0.5) / static_cast<double>(l);
    mu[static_cast<std::size_t>(c)] =
        p.degree_ramp > 0.0 ? 1.0 + p.degree_ramp * x
                            : std::exp(p.degree_spread * (x - 0.5));
  }
  double weighted_pairs = 0.0;
  for (std::int32_t a = 0; a < l; ++a) {
    weighted_pairs += static_cast<double>(size[a] * (size[a] - 1) / 2) * mu[a] *
                      p.local_edge_scale;
    for (std::int32_t b = a + 1; b < l; ++b) {
      weighted_pairs += static_cast<double>(size[a] * size[b]) *
                        std::pow(p.level_decay, level_between(a, b)) *
                        std::sqrt(mu[a] * mu[b]);
    }
  }
  double base_p = static_cast<double>(p.target_edges) / weighted_pairs;

  std::vector<double> level_p(static_cast<std::size_t>(std::bit_width(
                                  static_cast<std::uint32_t>(l - 1)) + 1));
  for (std::size_t lev = 0; lev < level_p.size(); ++lev) {
    level_p[lev] = base_p * std::pow(p.level_decay, static_cast<double>(lev));
  }
  level_p[0] *= p.local_edge_scale;

  Rng graph_rng(mix_seed(seed, kGraphTag));
  std::vector<std::pair<std::int32_t, std::int32_t>> edges;
  edges.reserve(static_cast<std::size_t>(p.target_edges) * 11 / 10);
  for (std::int32_t u = 0; u < n; ++u) {
    for (std::int32_t v = u + 1; v < n; ++v) {
      std::int32_t ca = d.community[static_cast<std::size_t>(u)];
      std::int32_t cb = d.community[static_cast<std::size_t>(v)];
      double prob = level_p[static_cast<std::size_t>(level_between(ca, cb))] *
                    std::sqrt(mu[static_cast<std::size_t>(ca)] *
                              mu[static_cast<std::size_t>(cb)]);
      if (graph_rng.uniform01() < std::min(0.95, prob)) edges.emplace_back(u, v);
    }
  }

  // A local backbone: everyone knows their immediate line neighbors plus
  // one short skip. This keeps hop distance proportional to line distance
  // in the sparse half, where organic edges alone would leave community
  // mates many hops apart, and it connects the graph. Duplicates against
  // organic edges are merged by from_edges.
  for (std::int32_t u = 0; u + 1 < n; ++u) edges.emplace_back(u, u + 1);
  for (std::int32_t u = 0; p.backbone_chord > 0 && u + p.backbone_chord < n; ++u) {
    edges.emplace_back(u, u + p.backbone_chord);
  }
  d.graph = Graph::from_edges(static_cast<std::size_t>(n), edges);

  // Zipf popularity over ranks, one table per pool. The global pool is
  // steeper so strangers who both rate globally share a few head items
  // rather than exactly one.
  auto zipf_table = [&](std::int32_t items, double s) {
    std::vector<double> cum(static_cast<std::size_t>(items));
    double acc = 0.0;
    for (std::int32_t r = 0; r < items; ++r) {
      acc += 1.0 / std::pow(static_cast<double>(r + 1), s);
      cum[static_cast<std::size_t>(r)] = acc;
    }
    for (double& c : cum) c /= acc;
    return cum;
  };
  // The back quarter of each pool is reserved for personal anthems, so an
  // organic draw can never land on someone else's anthem slot.
  std::int32_t anthem_span =
      p.explicit_scale ? 0 : std::max(1, p.items_per_community / 4);
  std::vector<double> pool_cum =
      zipf_table(p.items_per_community - anthem_span, p.zipf_s);
  std::vector<double> global_cum =
      p.global_items > 0 ? zipf_table(p.global_items, p.zipf_s + 0.35)
                         : std::vector<double>{};

  Rng rate_rng(mix_seed(seed, kRatingsTag));
  auto zipf_rank = [&](const std::vector<double>& cum) {
    double u01 = rate_rng.uniform01();
    return static_cast<std::int32_t>(
        std::lower_bound(cum.begin(), cum.end(), u01) - cum.begin());
  };
  auto flat = [&](double half_width) {
    return (rate_rng.uniform01() * 2.0 - 1.0) * half_width;
  };

  // Pool relation of an item to a rater in community c: 0 own community,
  // 1 within the near span on the line, 2 anything farther (other pools and
  // globals).
  // dist is the item pool's line distance from c (0 for globals).
  std::int32_t community_items = l * p.items_per_community;
  auto relation_and_pop = [&](std::int32_t item, std::int32_t c, double* pop,
                              std::int32_t* dist) {
    *dist = 0;
    if (item < community_items) {
      std::int32_t pool = item / p.items_per_community;
      std::int32_t rank = item % p.items_per_community;
      *pop = 1.0 - static_cast<double>(rank) / p.items_per_community;
      if (pool == c) return 0;
      *dist = std::abs(pool - c);
      return *dist <= p.near_pool_span ? 1 : 2;
    }
    std::int32_t rank = item - community_items;
    *pop = 1.0 - static_cast<double>(rank) / std::max(1, p.global_items);
    return 2;
  };

  // Plays are max_plays^a. Local exponents are dominated by the item's
  // intrinsic quality and rank (shared by all local raters, so a good local
  // item is near the top of everyone's chart) with a small personal part.
  // Foreign items get purely personal exponents with a low, wide range, so
  // most of a profile is filler and two strangers who co-rate disagree.
  double log_max = std::log(static_cast<double>(p.max_plays));
  auto implicit_weight = [&](int relation, double pop, std::int32_t dist,
                             std::int32_t u, std::int32_t item) {
    double taste = taste_u01(seed, u, item) * 2.0 - 1.0;
    double quality = quality_u01(seed, item) * 2.0 - 1.0;
    double a;
    bool hit_song = pop >= 1.0 - 2.5 / p.items_per_community;
    if (relation <= 1 && hit_song) {
      // A local hit is on heavy rotation for the whole neighborhood, fading
      // slowly along the line. That keeps its raters' play counts high and
      // mutually consistent for several communities around the pool.
      a = 0.96 - 0.025 * dist + 0.025 * quality_u01(seed, item) +
          0.015 * taste_u01(seed, u, item);
    } else if (relation == 0) {
      a = 0.45 + 0.18 * pop + 0.25 * quality + 0.06 * taste;
    } else if (relation == 1) {
      a = 0.33 + 0.15 * pop + 0.20 * quality + 0.06 * taste;
    } else {
      a = 0.02 + 0.70 * taste_u01(seed, u, item);
    }
    double plays = std::floor(std::exp(std::clamp(a, 0.02, 1.0) * log_max));
    return std::clamp(plays, 1.0, static_cast<double>(p.max_plays));
  };
  auto explicit_weight = [&](int relation, std::int32_t dist, std::int32_t u,
                             std::int32_t item) {
    double taste = taste_u01(seed, u, item);
    double quality = quality_u01(seed, item);
    (void)dist;
    if (relation <= 1) return quality < 0.6 ? 5.0 : quality < 0.85 ? 4.0 : 3.0;
    return taste < 0.5 ? 1.0 : 2.0;
  };

  std::int32_t total_items = community_items + p.global_items;
  d.raw_rows.assign(static_cast<std::size_t>(n), {});
  std::unordered_map<std::int32_t, double> row;
  for (std::int32_t u = 0; u < n; ++u) {
    row.clear();
    std::int32_t c = d.community[static_cast<std::size_t>(u)];
    for (std::int32_t t = 0; t < p.ratings_per_user; ++t) {
      double pick = rate_rng.uniform01();
      std::int32_t item = -1;
      double copied_weight = -1.0;
      if (pick < p.friend_copy_prob) {
        const auto& nb = d.graph.neighbors(u);
        std::int32_t w = nb[rate_rng.uniform_index(nb.size())];
        const auto& friend_row = d.raw_rows[static_cast<std::size_t>(w)];
        if (!friend_row.empty() && rate_rng.uniform01() < p.anthem_adopt_prob) {
          // Occasionally the recommendation really lands: adopt whatever the
          // friend plays most, at full strength.
          const auto* best = &friend_row[0];
          for (const auto& e : friend_row) {
            if (e.second > best->second) best = &e;
          }
          item = best->first;
          double level = rate_rng.uniform01() < 0.15
                             ? 1.0
                             : 0.75 + 0.2 * rate_rng.uniform01();
          copied_weight =
              p.explicit_scale
                  ? best->second
                  : std::clamp(std::floor(best->second * level), 1.0,
                               static_cast<double>(p.max_plays));
        } else if (!friend_row.empty()) {
          // People pass along what they play most, so the pick is weighted
          // by play count; nobody recommends the back half of a pool.
          std::int32_t open_ranks = p.items_per_community - anthem_span;
          auto anthem_slot = [&](std::int32_t it) {
            return it < community_items && it % p.items_per_community >= open_ranks;
          };
          double total = 0.0;
          for (const auto& e : friend_row) {
            if (!anthem_slot(e.first)) total += e.second;
          }
          if (total > 0.0) {
            double x = rate_rng.uniform01() * total;
            for (const auto& e : friend_row) {
              if (anthem_slot(e.first)) continue;
              x -= e.second;
              if (x <= 0.0) {
                item = e.first;
                // The copy lands close to the friend's level but never
                // above it, so shared records carry consistent play counts.
                copied_weight =
                    p.explicit_scale
                        ? e.second
                        : std::clamp(std::floor(e.second * std::exp(flat(0.4) - 0.4)),
                                     1.0, static_cast<double>(p.max_plays));
                break;
              }
            }
          }
        }
        // Neighbor not generated yet: fall through to an own-pool draw.
      } else if (pick < p.friend_copy_prob + p.own_pool_prob) {
        // Own pool below.
      } else if (pick < p.friend_copy_prob + p.own_pool_prob + p.near_pool_prob) {
        // Nearby pool. Tight windows lean toward adjacency, wide ones are
        // flat. Clamping at the line ends folds the draw back into the
        // user's own pool, which is fine.
        std::int32_t dist;
        if (p.near_pool_span <= 3) {
          double r = rate_rng.uniform01();
          dist = r < 0.55 ? 1 : r < 0.85 ? 2 : 3;
          dist = std::min(dist, p.near_pool_span);
        } else {
          dist = 1 + static_cast<std::int32_t>(rate_rng.uniform_index(
                         static_cast<std::size_t>(p.near_pool_span)));
        }
        if (rate_rng.uniform01() < 0.5) dist = -dist;
        std::int32_t pool = std::clamp(c + dist, 0, l - 1);
        item = pool * p.items_per_community + zipf_rank(pool_cum);
      } else if (p.global_items > 0) {
        item = community_items + zipf_rank(global_cum);
      }
      if (item < 0) item = c * p.items_per_community + zipf_rank(pool_cum);

      double weight;
      if (copied_weight >= 0.0) {
        weight = copied_weight;
      } else {
        double pop = 0.0;
        std::int32_t dist = 0;
        int relation = relation_and_pop(item, c, &pop, &dist);
        weight = p.explicit_scale ? explicit_weight(relation, dist, u, item)
                                  : implicit_weight(relation, pop, dist, u, item);
      }
      auto [it, inserted] = row.emplace(item, weight);
      if (!inserted) it->second = std::max(it->second, weight);
    }
    if (!p.explicit_scale && rate_rng.uniform01() < p.obscure_favorite_prob) {
      // A deep-tail local item played at the cap: a listener's
      // nobody-else-knows-it favorite on loop. Rarely rated but always at
      // the rater's max, these dominate a plain by-item-mean ranking.
      std::int32_t rank = p.items_per_community - 1 - (u % anthem_span);
      std::int32_t item = c * p.items_per_community + rank;
      double plays = static_cast<double>(p.max_plays);
      auto [it, inserted] = row.emplace(item, plays);
      if (!inserted) it->second = std::max(it->second, plays);
    }
    auto& out = d.raw_rows[static_cast<std::size_t>(u)];
    out.assign(row.begin(), row.end());
    std::sort(out.begin(), out.end());
  }

  d.ratings.n_users = static_cast<std::size_t>(n);
  d.ratings.n_items = static_cast<std::size_t>(total_items);
  d.ratings.by_user = d.raw_rows;
  normalize_rows(d.ratings.by_user,
                 p.explicit_scale ? Normalization::kMaxGlobal : Normalization::kMaxPerUser,
                 5.0);
  d.ratings.item_ids.resize(static_cast<std::size_t>(total_items));
  for (std::int32_t i = 0; i < total_items; ++i) {
    d.ratings.item_ids[static_cast<std::size_t>(i)] = std::to_string(i);
  }
  return d;
}

void write_dataset(const SynthData& d, const std::string& dir) {
  std::filesystem::create_directories(dir);
  write_graph(d.graph, dir + "/graph.txt");

  std::ofstream out(dir + "/ratings.txt");
  if (!out) throw std::runtime_error(dir + "/ratings.txt: cannot open for writing");
  for (std::size_t u = 0; u < d.raw_rows.size(); ++u) {
    for (const auto& [item, weight] : d.raw_rows[u]) {
      out << u << ' ' << item << ' ' << weight << '\n';
    }
  }
  if (!out) throw std::runtime_error(dir + "/ratings.txt: write failed");
}

}  // namespace privact
