#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "privact/ldp.hpp"
#include "privact/rng.hpp"
#include "privact/tree.hpp"

namespace privact {

// Which child of the chosen node is exchanged with the node's sibling
// subtree. kLeft keeps the right child in place and vice versa.
enum class SwapSide { kLeft, kRight };

struct SwapMove {
  std::int32_t node = -1;  // internal, non-root
  SwapSide side = SwapSide::kLeft;
  double delta = 0.0;      // cost(after) - cost(before)
  std::uint64_t version = 0;
};

// Cost delta of exchanging the chosen child of `node` with the sibling
// subtree, without touching the tree. With child subtrees A, B and sibling C
// (sizes a, b, c): moving B out costs c*S_sum(A,B) - b*S_sum(A,C); moving A
// out costs c*S_sum(A,B) - a*S_sum(B,C). Throws on the root or a leaf.
SwapMove propose_swap(const ClusterTree& t, const DissimilarityMatrix& s,
                      std::int32_t node, SwapSide side);

// Pointer rewiring for a proposed move; updates the one affected leaf count
// and bumps the tree version. Throws when the move is stale.
void apply_swap(ClusterTree& t, const SwapMove& move);

struct McmcConfig {
  std::int64_t max_steps = 0;     // proposal cap; 0 = 500 * n
  std::int64_t window = 0;        // convergence window; 0 = 50 * n
  double rel_improvement = 1e-4;  // stop when window mean improves less
  double temperature = 1.0;       // experimental divisor; 1 = raw rule
};

// Called once per proposal with the post-decision cost and tree state.
using StepObserver = std::function<void(std::int64_t step, double cost,
                                        bool accepted, const ClusterTree& tree)>;

struct McmcState {
  ClusterTree tree;
  double current_cost = 0.0;
  std::int64_t step = 0;
  Rng rng{0};
  std::vector<double> trace;  // ring buffer of the last 2 * window costs
  McmcConfig cfg;
  bool converged = false;
};

McmcState mcmc_init(const DissimilarityMatrix& s, const McmcConfig& cfg,
                    std::uint64_t seed);

// One proposal: uniform non-root internal node, uniform side, accept with
// min(1, exp(delta / temperature)) tested in log space. Returns acceptance.
bool mcmc_step(McmcState& st, const DissimilarityMatrix& s);

struct GentreeResult {
  ClusterTree tree;
  double initial_cost = 0.0;
  double final_cost = 0.0;
  std::int64_t steps = 0;
  bool converged = false;
};

// Runs the chain until the windowed mean stops improving or the cap hits.
GentreeResult gentree(const DissimilarityMatrix& s, const McmcConfig& cfg,
                      std::uint64_t seed, const StepObserver& observer = {});

}  // namespace privact
