#pragma once

#include <cstdint>
#include <vector>

#include "privact/graph.hpp"
#include "privact/ldp.hpp"
#include "privact/tree.hpp"

namespace privact {

// All costs here use the unordered-pair scale: each vertex pair contributes
// once. clique_cost matches dasgupta_cost on that same scale.

// Sum of S(x,y) * |leaves(lca(x,y))| over unordered pairs, computed in one
// post-order pass. Throws on dimension mismatch.
double dasgupta_cost(const ClusterTree& t, const DissimilarityMatrix& s);

// (n^3 - n) / 3: the cost of any tree over an all-ones matrix.
double clique_cost(std::int64_t n);

// Cross-subtree dissimilarity sum: sum of S(x,y) over x in xs, y in ys.
double s_sum(const DissimilarityMatrix& s, const std::vector<std::int32_t>& xs,
             const std::vector<std::int32_t>& ys);

// theta(node) = S_sum(L, R) / (|L| * |R|) for the node's child subtrees.
double node_theta(const ClusterTree& t, const DissimilarityMatrix& s,
                  std::int32_t node);

// Log likelihood of the graph under the hierarchical random-graph model:
// sum over internal nodes of E*log(pi) + (LR - E)*log(1 - pi), pi = E/(L*R),
// with 0*log(0) = 0. Always <= 0. Throws on dimension mismatch.
double cmn_log_cost(const ClusterTree& t, const Graph& g);

}  // namespace privact
