#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "privact/graph.hpp"
#include "privact/rng.hpp"

using privact::Graph;
using privact::kUnreachable;

namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  fs::path dir = fs::temp_directory_path() / "privact_test_graph";
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

Graph random_graph(std::size_t n, double p, std::uint64_t seed) {
  privact::Rng rng(seed);
  std::vector<std::pair<std::int32_t, std::int32_t>> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (rng.uniform01() < p) {
        edges.emplace_back(static_cast<std::int32_t>(i),
                           static_cast<std::int32_t>(j));
      }
    }
  }
  return Graph::from_edges(n, edges);
}

// O(n^3) all-pairs oracle for the BFS distances.
std::vector<std::vector<std::int32_t>> floyd_warshall(const Graph& g) {
  const std::int32_t inf = 1 << 28;
  std::size_t n = g.n();
  std::vector<std::vector<std::int32_t>> d(n, std::vector<std::int32_t>(n, inf));
  for (std::size_t i = 0; i < n; ++i) {
    d[i][i] = 0;
    for (std::int32_t j : g.neighbors(static_cast<std::int32_t>(i))) {
      d[i][static_cast<std::size_t>(j)] = 1;
    }
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  for (auto& row : d)
    for (auto& x : row)
      if (x >= inf) x = kUnreachable;
  return d;
}

}  // namespace

TEST_CASE("from_edges symmetrizes, dedupes and drops self loops") {
  Graph g = Graph::from_edges(4, {{0, 1}, {1, 0}, {0, 1}, {2, 2}, {3, 1}});
  CHECK(g.n() == 4);
  CHECK(g.m() == 2);
  CHECK(g.has_edge(0, 1));
  CHECK(g.has_edge(1, 0));
  CHECK(g.has_edge(1, 3));
  CHECK_FALSE(g.has_edge(2, 2));
  CHECK_FALSE(g.has_edge(0, 2));
  CHECK(g.degree(1) == 2);
  CHECK(g.degree(2) == 0);
  // Adjacency sorted ascending.
  CHECK(g.neighbors(1) == std::vector<std::int32_t>{0, 3});
}

TEST_CASE("edge list loader assigns dense ids by first appearance") {
  fs::path p = scratch_dir() / "ids.txt";
  write_file(p,
             "# comment line\n"
             "alice bob\n"
             "bob carol\n"
             "alice alice\n"
             "bob alice\n"
             "\n"
             "dave carol\n");
  auto res = privact::load_graph(p.string());
  CHECK(res.original_ids ==
        std::vector<std::string>{"alice", "bob", "carol", "dave"});
  CHECK(res.graph.n() == 4);
  CHECK(res.graph.m() == 3);
  CHECK(res.dropped_self_loops == 1);
  CHECK(res.merged_duplicates == 1);
  CHECK(res.graph.has_edge(0, 1));
  CHECK(res.graph.has_edge(1, 2));
  CHECK(res.graph.has_edge(3, 2));
}

TEST_CASE("loader reports the offending line number") {
  fs::path p = scratch_dir() / "bad.txt";
  write_file(p, "a b\nc\n");
  try {
    privact::load_graph(p.string());
    FAIL("expected parse error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("2") != std::string::npos);
  }
  CHECK_THROWS_AS(privact::load_graph((scratch_dir() / "missing.txt").string()),
                  std::runtime_error);
}

TEST_CASE("write_graph round-trips the adjacency structure") {
  Graph g = random_graph(37, 0.15, 12345);
  fs::path p = scratch_dir() / "round.txt";
  privact::write_graph(g, p.string());
  auto res = privact::load_graph(p.string());
  // Written ids are dense and ordered, so they reload onto themselves.
  REQUIRE(res.graph.n() <= g.n());
  for (std::size_t v = 0; v < res.graph.n(); ++v) {
    std::int32_t dense = static_cast<std::int32_t>(v);
    std::int32_t orig = std::stoi(res.original_ids[v]);
    CHECK(res.graph.degree(dense) == g.degree(orig));
  }
  CHECK(res.graph.m() == g.m());
}

TEST_CASE("bfs distances equal the all-pairs oracle") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Graph g = random_graph(30, seed % 3 == 0 ? 0.05 : 0.12, seed);
    auto oracle = floyd_warshall(g);
    for (std::size_t s = 0; s < g.n(); ++s) {
      auto bfs = privact::shortest_paths_from(g, static_cast<std::int32_t>(s));
      REQUIRE(bfs.size() == g.n());
      for (std::size_t v = 0; v < g.n(); ++v) {
        CHECK(bfs[v] == oracle[s][v]);
      }
    }
  }
}

TEST_CASE("ratings loader applies normalization and merge rules") {
  fs::path p = scratch_dir() / "ratings.txt";
  write_file(p,
             "# user item weight\n"
             "alice song1 10\n"
             "alice song2 40\n"
             "alice song1 30\n"
             "bob song2 5\n"
             "bob song3 0\n"
             "bob song4 -2\n");
  std::vector<std::string> users{"alice", "bob"};

  SUBCASE("per-user max normalization keeps the larger duplicate") {
    privact::RatingsLoadOptions opts;
    auto res = privact::load_ratings(p.string(), users, opts);
    CHECK(res.merged_duplicates == 1);
    CHECK(res.rejected_nonpositive == 2);
    CHECK(res.ratings.n_users == 2);
    CHECK(res.ratings.entry_count() == 3);
    // alice: song1 max(10,30)=30, song2 40 -> 0.75, 1.0
    CHECK(res.ratings.rating(0, 0) == doctest::Approx(0.75));
    CHECK(res.ratings.rating(0, 1) == doctest::Approx(1.0));
    CHECK(res.ratings.rating(1, 1) == doctest::Approx(1.0));  // bob's max
    CHECK(res.ratings.rating(1, 0) == 0.0);                   // not rated
  }

  SUBCASE("global max divides by the constant and clamps overflow") {
    privact::RatingsLoadOptions opts;
    opts.normalization = privact::Normalization::kMaxGlobal;
    opts.global_max = 20.0;
    auto res = privact::load_ratings(p.string(), users, opts);
    CHECK(res.clamped == 2);  // alice 30 and 40 exceed 20
    CHECK(res.ratings.rating(0, 0) == doctest::Approx(1.0));
    CHECK(res.ratings.rating(0, 1) == doctest::Approx(1.0));
    CHECK(res.ratings.rating(1, 1) == doctest::Approx(0.25));
  }

  SUBCASE("unknown users throw when strict, drop and count otherwise") {
    write_file(p, "alice song1 3\nmallory song1 4\n");
    privact::RatingsLoadOptions opts;
    CHECK_THROWS_AS(privact::load_ratings(p.string(), users, opts),
                    std::runtime_error);
    opts.strict_users = false;
    auto res = privact::load_ratings(p.string(), users, opts);
    CHECK(res.dropped_unknown_users == 1);
    CHECK(res.ratings.entry_count() == 1);
  }
}

TEST_CASE("normalize_rows matches the loader arithmetic") {
  std::vector<std::vector<std::pair<std::int32_t, double>>> rows{
      {{0, 2.0}, {1, 8.0}},
      {{2, 6.0}},
      {},
  };
  SUBCASE("per-user") {
    auto clamped =
        privact::normalize_rows(rows, privact::Normalization::kMaxPerUser, 0.0);
    CHECK(clamped == 0);
    CHECK(rows[0][0].second == doctest::Approx(0.25));
    CHECK(rows[0][1].second == doctest::Approx(1.0));
    CHECK(rows[1][0].second == doctest::Approx(1.0));
  }
  SUBCASE("global with clamping") {
    auto clamped =
        privact::normalize_rows(rows, privact::Normalization::kMaxGlobal, 4.0);
    CHECK(clamped == 2);
    CHECK(rows[0][0].second == doctest::Approx(0.5));
    CHECK(rows[0][1].second == doctest::Approx(1.0));
    CHECK(rows[1][0].second == doctest::Approx(1.0));
  }
}
