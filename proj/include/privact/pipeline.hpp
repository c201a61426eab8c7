#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "privact/graph.hpp"
#include "privact/ldp.hpp"
#include "privact/mcmc.hpp"
#include "privact/tree.hpp"

namespace privact {

struct PipelineConfig {
  double epsilon = 1.0;  // ignored when dp = false
  bool dp = true;
  std::int32_t k = 0;    // bin count; 0 = floor(log2 n)
  McmcConfig mcmc;
  std::uint64_t seed = 1;
};

struct RunMetadata {
  std::size_t n = 0;
  std::size_t edges = 0;
  std::int32_t k = 0;
  bool dp = false;
  double epsilon = 0.0;                  // 0 when dp = false
  double effective_edge_epsilon = 0.0;   // 2 * epsilon: both endpoints report
  std::uint64_t seed = 0;
  std::int64_t steps = 0;
  bool converged = false;
  double initial_cost = 0.0;  // on the optimized matrix
  double cost_opt = 0.0;      // final cost on the matrix the chain optimized
  double cost_true = 0.0;     // final cost on the exact-vector matrix
  double rho = 0.0;           // (n^3 - n) / 3
  // Costs count each vertex pair once.
  std::string pair_convention = "unordered";
};

struct PipelineResult {
  ClusterTree tree;
  RunMetadata meta;
  BinPartition partition;
  std::vector<DegreeVector> vectors;  // noisy when dp, exact otherwise
  DissimilarityMatrix s_opt;          // the matrix the chain optimized
  DissimilarityMatrix s_true;         // from exact vectors
};

// One end-to-end run: partition -> per-user degree vectors -> (noise) ->
// dissimilarities -> chain. Seeds derive from cfg.seed: the partition and
// chain get tagged streams, each user's noise gets a (seed, vertex) stream so
// results do not depend on iteration order. When dp, noise_vector is invoked
// exactly once per user (audited).
PipelineResult run_pipeline(const Graph& g, const PipelineConfig& cfg,
                            const StepObserver& observer = {});

// Exact-vector dissimilarity matrix a run with this (k, seed) used, without
// the chain. k = 0 means floor(log2 n), as in run_pipeline.
DissimilarityMatrix true_dissimilarity(const Graph& g, std::int32_t k,
                                       std::uint64_t seed);

}  // namespace privact
