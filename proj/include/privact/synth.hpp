#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "privact/graph.hpp"

namespace privact {

// Benchmark-scale synthetic social datasets: users sit on a line of
// communities (a taste spectrum); edge probability, item-pool sharing and
// expected degree all fall off with line distance, so friendship, rating
// overlap and degree structure carry the same community signal. Each
// community owns a contiguous item pool with Zipf popularity.
struct SynthProfile {
  std::string name;
  std::int32_t n_users = 0;
  std::int32_t leaf_communities = 64;  // power of two
  std::int32_t target_edges = 0;
  // Edge probability multiplier per doubling of line distance between two
  // users' communities (same 1.0, adjacent decay, within 3 decay^2, ...).
  double level_decay = 0.25;
  // Extra multiplier on same-community pairs; < 1 pushes friendships across
  // pool lines.
  double local_edge_scale = 1.0;
  // Skip width of the second backbone edge; 0 drops it.
  std::int32_t backbone_chord = 7;
  // Density gradient along the line: community c's edge probabilities scale
  // by exp(degree_spread * (c/L - 1/2)). Nearby communities end up with
  // similar degrees, far ones very different, so even a coarse degree
  // reading places a user on the line.
  double degree_spread = 0.0;
  // Alternative gradient: scale by 1 + degree_ramp * c/L instead. A linear
  // ramp spends the same edge budget on a constant degree slope, so every
  // part of the line is equally readable through the noise.
  double degree_ramp = 0.0;

  std::int32_t items_per_community = 200;
  std::int32_t global_items = 0;
  std::int32_t ratings_per_user = 50;
  double friend_copy_prob = 0.0;   // re-rate an item a neighbor already rated
  double anthem_adopt_prob = 0.0;  // chance a copy takes the friend's top item
  double own_pool_prob = 0.7;      // draw from the user's community pool
  std::int32_t near_pool_span = 3;  // how many communities away a near draw
                                    // can reach on the line
  double near_pool_prob = 0.15;    // draw from a pool within near_pool_span of the user's
  double zipf_s = 1.0;             // popularity skew inside a pool
  // Chance a user gets one deep-tail own-pool item played at their cap (the
  // private anthem nobody else knows). These become the 1.0-mean
  // rarely-rated items that a plain by-item-mean ranking surfaces.
  double obscure_favorite_prob = 0.0;

  bool explicit_scale = false;  // true: integer 1..5 ratings, global /5
  // Implicit weights are max_plays^a with the exponent a driven by how close
  // the item's home community is to the rater and by the item's pool rank:
  // local popular items get near-max plays, foreign items get low, widely
  // scattered plays.
  std::int32_t max_plays = 500;
};

SynthProfile lastfm_like();
SynthProfile delicious_like();
SynthProfile douban_like();

struct SynthData {
  Graph graph;
  RatingsMatrix ratings;  // normalized the same way the file loader would
  std::vector<std::vector<std::pair<std::int32_t, double>>> raw_rows;
  std::vector<std::int32_t> community;  // per user line position
};

SynthData generate(const SynthProfile& p, std::uint64_t seed);

// graph.txt ("u v" lines) and ratings.txt ("user item weight" lines) with the
// raw (un-normalized) weights, consumable by the CLI loaders.
void write_dataset(const SynthData& d, const std::string& dir);

}  // namespace privact
