#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace privact {

// Hop distance for vertices not reachable from the BFS source.
constexpr std::int32_t kUnreachable = -1;

// Undirected simple graph over dense vertex ids [0, n).
// Immutable after construction; adjacency lists are sorted ascending.
class Graph {
 public:
  Graph() = default;

  // Symmetrizes, deduplicates, and drops self loops. Edge endpoints must be
  // in [0, n).
  static Graph from_edges(std::size_t n,
                          const std::vector<std::pair<std::int32_t, std::int32_t>>& edges);

  std::size_t n() const { return adj_.size(); }
  std::size_t m() const { return m_; }

  const std::vector<std::int32_t>& neighbors(std::int32_t v) const {
    return adj_[static_cast<std::size_t>(v)];
  }
  std::size_t degree(std::int32_t v) const {
    return adj_[static_cast<std::size_t>(v)].size();
  }
  bool has_edge(std::int32_t u, std::int32_t v) const;

 private:
  std::vector<std::vector<std::int32_t>> adj_;
  std::size_t m_ = 0;
};

struct GraphLoadResult {
  Graph graph;
  // Dense id -> original id token. Ids are assigned in order of first
  // appearance on a kept edge, so every dense vertex has degree >= 1.
  std::vector<std::string> original_ids;
  std::size_t dropped_self_loops = 0;
  std::size_t merged_duplicates = 0;
};

// Edge-list loader: one "u<ws>v" pair per non-comment line, '#' comments.
// Throws std::runtime_error with a line number on parse failure.
GraphLoadResult load_graph(const std::string& path);

// Writes "u v" lines (dense ids, u < v, sorted); reloading yields an
// identical adjacency structure.
void write_graph(const Graph& g, const std::string& path);

// Sidecar format: "original_id<TAB>dense_id" lines.
void write_id_map(const std::vector<std::string>& original_ids,
                  const std::string& path);

// Sparse user x item ratings, normalized to [0, 1].
struct RatingsMatrix {
  std::size_t n_users = 0;
  std::size_t n_items = 0;
  // Per user, (item, rating) sorted by item id; at most one entry per item.
  std::vector<std::vector<std::pair<std::int32_t, double>>> by_user;
  // Dense item id -> original id token.
  std::vector<std::string> item_ids;

  std::size_t entry_count() const;
  // Returns 0 when the user has no rating for the item.
  double rating(std::int32_t user, std::int32_t item) const;
};

enum class Normalization {
  kMaxPerUser,  // divide each user's weights by that user's max
  kMaxGlobal,   // divide by a supplied constant
};

struct RatingsLoadResult {
  RatingsMatrix ratings;
  std::size_t rejected_nonpositive = 0;
  std::size_t dropped_unknown_users = 0;
  std::size_t merged_duplicates = 0;
  std::size_t clamped = 0;  // max-global entries above the constant
};

struct RatingsLoadOptions {
  Normalization normalization = Normalization::kMaxPerUser;
  double global_max = 1.0;  // used by kMaxGlobal
  // When true, a user id absent from user_ids is an error; when false the
  // line is dropped and counted (ratings and graph id sets are intersected).
  bool strict_users = true;
};

// Triple-list loader: "user<ws>item<ws>weight" lines, '#' comments.
// user_ids maps original user tokens to dense graph ids.
RatingsLoadResult load_ratings(const std::string& path,
                               const std::vector<std::string>& user_ids,
                               const RatingsLoadOptions& opts);

// In-place normalization of raw weight rows; returns how many kMaxGlobal
// entries exceeded the constant and were clamped to 1.
std::size_t normalize_rows(
    std::vector<std::vector<std::pair<std::int32_t, double>>>& rows,
    Normalization normalization, double global_max);

// BFS hop distances from source; kUnreachable marks the other components.
std::vector<std::int32_t> shortest_paths_from(const Graph& g, std::int32_t source);

}  // namespace privact
