#include "privact/pipeline.hpp"

#include <stdexcept>

#include "privact/cost.hpp"
#include "privact/rng.hpp"

namespace privact {

namespace {

constexpr std::uint64_t kPartitionTag = 0x7061727469ull;
constexpr std::uint64_t kNoiseTag = 0x6e6f697365ull;
constexpr std::uint64_t kChainTag = 0x636861696eull;

}  // namespace

PipelineResult run_pipeline(const Graph& g, const PipelineConfig& cfg,
                            const StepObserver& observer) {
  if (g.n() < 2) throw std::runtime_error("pipeline needs at least 2 vertices");
  if (cfg.dp && !(cfg.epsilon > 0.0)) {
    throw std::runtime_error("epsilon must be positive");
  }

  PipelineResult out;
  std::int32_t k = cfg.k > 0 ? cfg.k : auto_bin_count(g.n());
  out.partition = random_partition(g.n(), k, mix_seed(cfg.seed, kPartitionTag));

  std::vector<DegreeVector> exact(g.n());
  for (std::int32_t v = 0; v < static_cast<std::int32_t>(g.n()); ++v) {
    exact[static_cast<std::size_t>(v)] = degree_vector(g, v, out.partition);
  }
  out.s_true = build_dissimilarity(exact);

  if (cfg.dp) {
    noise_audit_reset();
    out.vectors.resize(g.n());
    for (std::int32_t v = 0; v < static_cast<std::int32_t>(g.n()); ++v) {
      out.vectors[static_cast<std::size_t>(v)] =
          noise_vector(exact[static_cast<std::size_t>(v)], cfg.epsilon,
                       mix_seed(cfg.seed, kNoiseTag, static_cast<std::uint64_t>(v)));
    }
    NoiseAudit audit = noise_audit();
    if (audit.invocations != g.n() ||
        audit.bins_noised != g.n() * static_cast<std::size_t>(k)) {
      throw std::logic_error("noise accounting violated: expected one "
                             "noising pass per user");
    }
    out.s_opt = build_dissimilarity(out.vectors);
  } else {
    out.vectors = exact;
    out.s_opt = out.s_true;
  }

  GentreeResult run =
      gentree(out.s_opt, cfg.mcmc, mix_seed(cfg.seed, kChainTag), observer);
  out.tree = std::move(run.tree);

  RunMetadata& meta = out.meta;
  meta.n = g.n();
  meta.edges = g.m();
  meta.k = k;
  meta.dp = cfg.dp;
  meta.epsilon = cfg.dp ? cfg.epsilon : 0.0;
  meta.effective_edge_epsilon = cfg.dp ? 2.0 * cfg.epsilon : 0.0;
  meta.seed = cfg.seed;
  meta.steps = run.steps;
  meta.converged = run.converged;
  meta.initial_cost = run.initial_cost;
  meta.cost_opt = run.final_cost;
  meta.cost_true =
      cfg.dp ? dasgupta_cost(out.tree, out.s_true) : run.final_cost;
  meta.rho = clique_cost(static_cast<std::int64_t>(g.n()));
  return out;
}

DissimilarityMatrix true_dissimilarity(const Graph& g, std::int32_t k,
                                       std::uint64_t seed) {
  if (k <= 0) k = auto_bin_count(g.n());
  BinPartition partition = random_partition(g.n(), k, mix_seed(seed, kPartitionTag));
  std::vector<DegreeVector> exact(g.n());
  for (std::int32_t v = 0; v < static_cast<std::int32_t>(g.n()); ++v) {
    exact[static_cast<std::size_t>(v)] = degree_vector(g, v, partition);
  }
  return build_dissimilarity(exact);
}

}  // namespace privact
