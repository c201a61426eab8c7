#include "privact/ldp.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "privact/kernels.hpp"
#include "privact/rng.hpp"

namespace privact {

namespace {

NoiseAudit g_audit;

}  // namespace

std::int32_t auto_bin_count(std::size_t n) {
  if (n < 2) return 1;
  std::int32_t k = static_cast<std::int32_t>(std::floor(std::log2(static_cast<double>(n))));
  if (k < 1) k = 1;
  if (static_cast<std::size_t>(k) > n) k = static_cast<std::int32_t>(n);
  return k;
}

BinPartition random_partition(std::size_t n, std::int32_t k, std::uint64_t seed) {
  if (k < 1 || static_cast<std::size_t>(k) > n) {
    throw std::runtime_error("bin count must satisfy 1 <= K <= n");
  }
  // First K slots cover every bin once; the rest are uniform. Shuffling the
  // whole slot vector makes the assignment exchangeable across vertices.
  BinPartition p;
  p.k = k;
  p.assignment.resize(n);
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    p.assignment[i] = i < static_cast<std::size_t>(k)
                          ? static_cast<std::int32_t>(i)
                          : static_cast<std::int32_t>(rng.uniform_index(
                                static_cast<std::size_t>(k)));
  }
  rng.shuffle(p.assignment);
  return p;
}

DegreeVector degree_vector(const Graph& g, std::int32_t v, const BinPartition& p) {
  DegreeVector counts(static_cast<std::size_t>(p.k), 0.0);
  for (std::int32_t u : g.neighbors(v)) {
    counts[static_cast<std::size_t>(p.assignment[static_cast<std::size_t>(u)])] += 1.0;
  }
  return counts;
}

DegreeVector noise_vector(const DegreeVector& dv, double epsilon, std::uint64_t seed) {
  if (!(epsilon > 0.0)) throw std::runtime_error("epsilon must be positive");
  Rng rng(seed);
  DegreeVector noisy(dv.size());
  for (std::size_t b = 0; b < dv.size(); ++b) {
    noisy[b] = dv[b] + rng.laplace(1.0 / epsilon);
    ++g_audit.bins_noised;
  }
  ++g_audit.invocations;
  return noisy;
}

DissimilarityMatrix build_dissimilarity(const std::vector<DegreeVector>& vectors) {
  std::size_t n = vectors.size();
  if (n > 20000) {
    std::fprintf(stderr,
                 "warning: materializing a %zu x %zu dissimilarity matrix (%.1f GiB)\n",
                 n, n, static_cast<double>(n) * n * 8.0 / (1024.0 * 1024.0 * 1024.0));
  }
  std::size_t k = n == 0 ? 0 : vectors[0].size();
  for (const auto& v : vectors) {
    if (v.size() != k) throw std::runtime_error("degree vectors disagree on K");
  }
  DissimilarityMatrix s(n);
  for (std::int32_t i = 0; i < static_cast<std::int32_t>(n); ++i) {
    const double* vi = vectors[static_cast<std::size_t>(i)].data();
    for (std::int32_t j = i + 1; j < static_cast<std::int32_t>(n); ++j) {
      double d = kernels::l1_distance(vi, vectors[static_cast<std::size_t>(j)].data(), k);
      s.set(i, j, d < 1.0 ? 1.0 : d);
    }
  }
  return s;
}

void noise_audit_reset() { g_audit = {}; }

NoiseAudit noise_audit() { return g_audit; }

}  // namespace privact
