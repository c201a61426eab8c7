#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <vector>

#include "privact/cost.hpp"
#include "privact/graph.hpp"
#include "privact/ldp.hpp"
#include "privact/pipeline.hpp"
#include "privact/rng.hpp"
#include "privact/tree.hpp"

using privact::Graph;
using privact::PipelineConfig;
using privact::PipelineResult;

namespace {

Graph test_graph(std::size_t n = 48, double p = 0.18, std::uint64_t seed = 3) {
  privact::Rng rng(seed);
  std::vector<std::pair<std::int32_t, std::int32_t>> edges;
  for (std::size_t i = 0; i < n; ++i) {
    edges.emplace_back(static_cast<std::int32_t>(i),
                       static_cast<std::int32_t>((i + 1) % n));  // connected
    for (std::size_t j = i + 2; j < n; ++j)
      if (rng.uniform01() < p)
        edges.emplace_back(static_cast<std::int32_t>(i),
                           static_cast<std::int32_t>(j));
  }
  return Graph::from_edges(n, edges);
}

}  // namespace

TEST_CASE("non-dp runs use the exact vectors for everything") {
  Graph g = test_graph();
  PipelineConfig cfg;
  cfg.dp = false;
  cfg.mcmc.max_steps = 2000;
  PipelineResult r = privact::run_pipeline(g, cfg);
  REQUIRE(r.s_opt.n() == g.n());
  for (std::int32_t i = 0; i < static_cast<std::int32_t>(g.n()); ++i)
    for (std::int32_t j = 0; j < static_cast<std::int32_t>(g.n()); ++j)
      CHECK(r.s_opt.at(i, j) == r.s_true.at(i, j));
  CHECK(r.meta.cost_opt == r.meta.cost_true);
  CHECK(r.meta.dp == false);
  CHECK(r.meta.epsilon == 0.0);
  for (const auto& v : r.vectors)
    for (double x : v) CHECK(x == std::round(x));  // exact integer counts
}

TEST_CASE("run metadata reflects the run") {
  Graph g = test_graph();
  PipelineConfig cfg;
  cfg.dp = true;
  cfg.epsilon = 1.5;
  cfg.seed = 11;
  cfg.mcmc.max_steps = 1500;
  PipelineResult r = privact::run_pipeline(g, cfg);
  CHECK(r.meta.n == g.n());
  CHECK(r.meta.edges == g.m());
  CHECK(r.meta.k == privact::auto_bin_count(g.n()));  // 48 vertices -> 5 bins
  CHECK(r.meta.k == 5);
  CHECK(r.meta.dp);
  CHECK(r.meta.epsilon == 1.5);
  CHECK(r.meta.effective_edge_epsilon == 3.0);
  CHECK(r.meta.seed == 11);
  CHECK(r.meta.steps >= 1);
  CHECK(r.meta.steps <= 1500);
  CHECK(r.meta.rho == doctest::Approx(privact::clique_cost(
                          static_cast<std::int64_t>(g.n()))));
  CHECK(r.meta.pair_convention == "unordered");
  CHECK(r.meta.cost_opt == doctest::Approx(privact::dasgupta_cost(r.tree, r.s_opt)));
  CHECK(r.meta.cost_true ==
        doctest::Approx(privact::dasgupta_cost(r.tree, r.s_true)));
  CHECK_NOTHROW(privact::validate(r.tree));
}

TEST_CASE("huge epsilon leaves the dissimilarity matrix nearly exact") {
  Graph g = test_graph();
  PipelineConfig cfg;
  cfg.dp = true;
  cfg.epsilon = 1e9;
  cfg.seed = 7;
  cfg.mcmc.max_steps = 2000;
  PipelineResult dp = privact::run_pipeline(g, cfg);
  for (std::int32_t i = 0; i < static_cast<std::int32_t>(g.n()); ++i)
    for (std::int32_t j = 0; j < static_cast<std::int32_t>(g.n()); ++j)
      CHECK(dp.s_opt.at(i, j) == doctest::Approx(dp.s_true.at(i, j)).epsilon(1e-6));

  // The chains are not comparable step for step: a proposal whose exact delta
  // is 0 skips the acceptance draw, while a perturbed delta of -1e-9 consumes
  // one, so the streams diverge. The trees just have to be equally good.
  cfg.dp = false;
  PipelineResult exact = privact::run_pipeline(g, cfg);
  double gap = std::abs(dp.meta.cost_true - exact.meta.cost_true) /
               exact.meta.cost_true;
  CHECK(gap < 0.02);
}

TEST_CASE("the partition is shared between dp and exact runs of a seed") {
  Graph g = test_graph();
  PipelineConfig cfg;
  cfg.seed = 21;
  cfg.mcmc.max_steps = 200;
  cfg.dp = true;
  PipelineResult dp = privact::run_pipeline(g, cfg);
  cfg.dp = false;
  PipelineResult exact = privact::run_pipeline(g, cfg);
  CHECK(dp.partition.assignment == exact.partition.assignment);
  CHECK(dp.partition.k == exact.partition.k);
}

TEST_CASE("true_dissimilarity reproduces a run's exact matrix") {
  Graph g = test_graph();
  PipelineConfig cfg;
  cfg.dp = true;
  cfg.epsilon = 0.5;
  cfg.seed = 33;
  cfg.k = 4;
  cfg.mcmc.max_steps = 500;
  PipelineResult r = privact::run_pipeline(g, cfg);
  auto s = privact::true_dissimilarity(g, 4, 33);
  REQUIRE(s.n() == r.s_true.n());
  for (std::int32_t i = 0; i < static_cast<std::int32_t>(s.n()); ++i)
    for (std::int32_t j = 0; j < static_cast<std::int32_t>(s.n()); ++j)
      CHECK(s.at(i, j) == r.s_true.at(i, j));
}

TEST_CASE("noise is audited: once per user, every bin touched") {
  Graph g = test_graph();
  privact::noise_audit_reset();
  PipelineConfig cfg;
  cfg.dp = true;
  cfg.epsilon = 2.0;
  cfg.mcmc.max_steps = 100;
  PipelineResult r = privact::run_pipeline(g, cfg);
  auto audit = privact::noise_audit();
  CHECK(audit.invocations == g.n());
  CHECK(audit.bins_noised ==
        g.n() * static_cast<std::size_t>(r.meta.k));

  privact::noise_audit_reset();
  cfg.dp = false;
  privact::run_pipeline(g, cfg);
  CHECK(privact::noise_audit().invocations == 0);
}

TEST_CASE("noise streams are keyed by vertex, not iteration order") {
  // Per-(seed, vertex) streams: the same user gets the same noise in two
  // runs regardless of everything else in the config.
  Graph g = test_graph();
  PipelineConfig a;
  a.dp = true;
  a.epsilon = 1.0;
  a.seed = 5;
  a.mcmc.max_steps = 100;
  PipelineConfig b = a;
  b.mcmc.max_steps = 900;  // different chain, same noise
  PipelineResult ra = privact::run_pipeline(g, a);
  PipelineResult rb = privact::run_pipeline(g, b);
  REQUIRE(ra.vectors.size() == rb.vectors.size());
  for (std::size_t v = 0; v < ra.vectors.size(); ++v)
    CHECK(ra.vectors[v] == rb.vectors[v]);
}

TEST_CASE("identical configs replay identical runs") {
  Graph g = test_graph();
  PipelineConfig cfg;
  cfg.dp = true;
  cfg.epsilon = 1.0;
  cfg.seed = 9;
  cfg.mcmc.max_steps = 3000;
  PipelineResult a = privact::run_pipeline(g, cfg);
  PipelineResult b = privact::run_pipeline(g, cfg);
  CHECK(privact::to_newick(a.tree) == privact::to_newick(b.tree));
  CHECK(a.meta.cost_opt == b.meta.cost_opt);
  CHECK(a.meta.cost_true == b.meta.cost_true);
  CHECK(a.meta.steps == b.meta.steps);

  cfg.seed = 10;
  PipelineResult c = privact::run_pipeline(g, cfg);
  CHECK(privact::to_newick(a.tree) != privact::to_newick(c.tree));
}

TEST_CASE("invalid configs are rejected") {
  Graph g = test_graph();
  PipelineConfig cfg;
  cfg.dp = true;
  cfg.epsilon = 0.0;
  CHECK_THROWS(privact::run_pipeline(g, cfg));
  cfg.epsilon = 1.0;
  cfg.k = static_cast<std::int32_t>(g.n()) + 1;
  CHECK_THROWS(privact::run_pipeline(g, cfg));
}
