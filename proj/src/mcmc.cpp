#include "privact/mcmc.hpp"

#include <cmath>
#include <stdexcept>

#include "privact/cost.hpp"

namespace privact {

SwapMove propose_swap(const ClusterTree& t, const DissimilarityMatrix& s,
                      std::int32_t node, SwapSide side) {
  if (t.is_leaf(node)) throw std::runtime_error("swap node must be internal");
  if (node == t.root) throw std::runtime_error("the root has no swap");

  std::size_t i = static_cast<std::size_t>(node);
  std::int32_t kept = side == SwapSide::kLeft ? t.right[i] : t.left[i];
  std::int32_t moved = side == SwapSide::kLeft ? t.left[i] : t.right[i];
  std::int32_t sib = t.sibling(node);

  auto kept_leaves = leaves_under(t, kept);
  auto moved_leaves = leaves_under(t, moved);
  auto sib_leaves = leaves_under(t, sib);

  double c = static_cast<double>(sib_leaves.size());
  double m = static_cast<double>(moved_leaves.size());
  SwapMove move;
  move.node = node;
  move.side = side;
  move.version = t.version;
  move.delta = c * s_sum(s, kept_leaves, moved_leaves) -
               m * s_sum(s, kept_leaves, sib_leaves);
  return move;
}

void apply_swap(ClusterTree& t, const SwapMove& move) {
  if (move.version != t.version) throw std::runtime_error("stale swap move");
  std::size_t i = static_cast<std::size_t>(move.node);
  std::int32_t parent = t.parent[i];
  std::int32_t kept = move.side == SwapSide::kLeft ? t.right[i] : t.left[i];
  std::int32_t moved = move.side == SwapSide::kLeft ? t.left[i] : t.right[i];
  std::int32_t sib = t.sibling(move.node);

  // The moved child takes the sibling's slot under the parent and vice versa.
  std::size_t p = static_cast<std::size_t>(parent);
  if (t.left[p] == sib) {
    t.left[p] = moved;
  } else {
    t.right[p] = moved;
  }
  t.parent[static_cast<std::size_t>(moved)] = parent;
  if (move.side == SwapSide::kLeft) {
    t.left[i] = sib;
  } else {
    t.right[i] = sib;
  }
  t.parent[static_cast<std::size_t>(sib)] = move.node;

  t.leaf_count[i] = t.leaf_count[static_cast<std::size_t>(kept)] +
                    t.leaf_count[static_cast<std::size_t>(sib)];
  ++t.version;
}

namespace {

McmcConfig resolve(const McmcConfig& cfg, std::int32_t n) {
  McmcConfig out = cfg;
  if (out.max_steps <= 0) out.max_steps = 500ll * n;
  if (out.window <= 0) out.window = 50ll * n;
  if (out.max_steps < 1) throw std::runtime_error("max_steps must be >= 1");
  if (!(out.temperature > 0.0)) throw std::runtime_error("temperature must be > 0");
  return out;
}

// Uniform over internal ids skipping the root.
std::int32_t sample_non_root_internal(const ClusterTree& t, Rng& rng) {
  std::int32_t node =
      t.n + static_cast<std::int32_t>(rng.uniform_index(
                static_cast<std::size_t>(t.n - 2)));
  if (node >= t.root) ++node;
  return node;
}

}  // namespace

McmcState mcmc_init(const DissimilarityMatrix& s, const McmcConfig& cfg,
                    std::uint64_t seed) {
  if (s.n() < 2) throw std::runtime_error("need at least 2 vertices");
  McmcState st;
  st.cfg = resolve(cfg, static_cast<std::int32_t>(s.n()));
  st.rng = Rng(mix_seed(seed, 0x6d636d63ull));  // chain stream
  st.tree = random_tree(static_cast<std::int32_t>(s.n()),
                        mix_seed(seed, 0x696e6974ull));  // init stream
  st.current_cost = dasgupta_cost(st.tree, s);
  st.trace.assign(static_cast<std::size_t>(2 * st.cfg.window), 0.0);
  return st;
}

bool mcmc_step(McmcState& st, const DissimilarityMatrix& s) {
  std::int32_t node = sample_non_root_internal(st.tree, st.rng);
  SwapSide side = st.rng.coin() ? SwapSide::kLeft : SwapSide::kRight;
  SwapMove move = propose_swap(st.tree, s, node, side);

  bool accept = move.delta >= 0.0;
  if (!accept) {
    accept = std::log(st.rng.uniform01()) < move.delta / st.cfg.temperature;
  }
  if (accept) {
    apply_swap(st.tree, move);
    st.current_cost += move.delta;
  }
  st.trace[static_cast<std::size_t>(st.step % (2 * st.cfg.window))] =
      st.current_cost;
  ++st.step;
  return accept;
}

GentreeResult gentree(const DissimilarityMatrix& s, const McmcConfig& cfg,
                      std::uint64_t seed, const StepObserver& observer) {
  McmcState st = mcmc_init(s, cfg, seed);
  GentreeResult result;
  result.initial_cost = st.current_cost;

  if (st.tree.n < 3) {
    // No non-root internal node exists, so there are no moves.
    result.tree = st.tree;
    result.final_cost = st.current_cost;
    result.converged = true;
    return result;
  }

  const std::int64_t w = st.cfg.window;
  double prev_mean = 0.0;
  bool have_prev = false;
  while (st.step < st.cfg.max_steps) {
    bool accepted = mcmc_step(st, s);
    if (observer) observer(st.step - 1, st.current_cost, accepted, st.tree);

    if (st.step % w == 0) {
      // Checkpoint: fold accumulated per-move deltas back to the exact cost.
      st.current_cost = dasgupta_cost(st.tree, s);
      double sum = 0.0;
      std::int64_t base = (st.step / w - 1) % 2 * w;
      for (std::int64_t j = 0; j < w; ++j) {
        sum += st.trace[static_cast<std::size_t>(base + j)];
      }
      double mean = sum / static_cast<double>(w);
      if (have_prev &&
          (mean - prev_mean) < st.cfg.rel_improvement * std::abs(prev_mean)) {
        st.converged = true;
        break;
      }
      prev_mean = mean;
      have_prev = true;
    }
  }

  result.tree = st.tree;
  result.final_cost = dasgupta_cost(result.tree, s);
  result.steps = st.step;
  result.converged = st.converged;
  return result;
}

}  // namespace privact
