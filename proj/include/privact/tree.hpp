#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace privact {

// Full binary tree with n leaves. Node ids: leaves are 0..n-1 and carry the
// vertex of the same id; internal nodes are n..2n-2. The root id is fixed at
// construction and never changes (swaps happen strictly below it).
struct ClusterTree {
  std::int32_t n = 0;
  std::vector<std::int32_t> parent;      // -1 for the root
  std::vector<std::int32_t> left, right; // -1 for leaves
  std::vector<std::int32_t> leaf_count;  // cached subtree leaf counts
  std::int32_t root = -1;
  std::uint64_t version = 0;  // bumped by every applied swap

  std::int32_t node_count() const { return 2 * n - 1; }
  bool is_leaf(std::int32_t node) const { return node < n; }
  std::int32_t sibling(std::int32_t node) const {
    std::int32_t p = parent[static_cast<std::size_t>(node)];
    return left[static_cast<std::size_t>(p)] == node
               ? right[static_cast<std::size_t>(p)]
               : left[static_cast<std::size_t>(p)];
  }
};

// Uniform random insertion over a shuffled leaf order: each new leaf attaches
// above a uniformly chosen existing node (choosing the root grows a new root).
// Throws when n < 2.
ClusterTree random_tree(std::int32_t n, std::uint64_t seed);

// Throws std::runtime_error describing the first violated invariant.
void validate(const ClusterTree& t);

// Leaf ids under node, ascending.
std::vector<std::int32_t> leaves_under(const ClusterTree& t, std::int32_t node);

// Walk from u's leaf toward the root, appending each newly joined sibling
// subtree (its leaves in ascending id order), truncated at m. Throws when m
// is outside [1, n-1].
std::vector<std::int32_t> nearest_neighbors(const ClusterTree& t, std::int32_t u,
                                            std::int32_t m);

// Newick text with leaf vertex ids, child order preserved: "((0,1),(2,3));".
std::string to_newick(const ClusterTree& t);
ClusterTree from_newick(const std::string& text);

// Topology signature invariant to left/right child order; equal signatures
// mean the trees are equal up to child swaps.
std::string canonical_signature(const ClusterTree& t);

}  // namespace privact
