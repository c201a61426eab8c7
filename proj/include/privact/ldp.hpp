#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "privact/graph.hpp"

namespace privact {

// Random assignment of vertices to K bins, every bin nonempty.
struct BinPartition {
  std::int32_t k = 0;
  std::vector<std::int32_t> assignment;  // per vertex, in [0, k)
};

// Per-vertex K-bin neighbor counts; integer before noising, real after.
using DegreeVector = std::vector<double>;

// Symmetric dissimilarity matrix: diagonal 0, off-diagonal >= 1.
class DissimilarityMatrix {
 public:
  DissimilarityMatrix() = default;
  explicit DissimilarityMatrix(std::size_t n) : n_(n), values_(n * n, 0.0) {}

  std::size_t n() const { return n_; }
  double at(std::int32_t i, std::int32_t j) const {
    return values_[static_cast<std::size_t>(i) * n_ + static_cast<std::size_t>(j)];
  }
  void set(std::int32_t i, std::int32_t j, double v) {
    values_[static_cast<std::size_t>(i) * n_ + static_cast<std::size_t>(j)] = v;
    values_[static_cast<std::size_t>(j) * n_ + static_cast<std::size_t>(i)] = v;
  }
  const double* row(std::int32_t i) const {
    return values_.data() + static_cast<std::size_t>(i) * n_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> values_;
};

// Default bin count: floor(log2 n), clamped to [1, n].
std::int32_t auto_bin_count(std::size_t n);

// Uniform assignment conditioned on every bin nonempty (one slot reserved
// per bin, the rest uniform, then shuffled). Throws when k < 1 or k > n.
BinPartition random_partition(std::size_t n, std::int32_t k, std::uint64_t seed);

// counts[b] = number of v's neighbors assigned to bin b; sums to deg(v).
DegreeVector degree_vector(const Graph& g, std::int32_t v, const BinPartition& p);

// Adds i.i.d. Laplace(scale 1/epsilon) noise per bin; deterministic under a
// fixed seed. Noisy counts are not rounded or clamped. Throws on epsilon <= 0.
DegreeVector noise_vector(const DegreeVector& dv, double epsilon, std::uint64_t seed);

// S(i,j) = max(1, L1(v_i, v_j)) off-diagonal, 0 on the diagonal.
// Throws when vector lengths are mismatched.
DissimilarityMatrix build_dissimilarity(const std::vector<DegreeVector>& vectors);

// Privacy accounting instrumentation: noise_vector must touch each bin
// exactly once per call and be called exactly once per user per pipeline run.
struct NoiseAudit {
  std::size_t invocations = 0;
  std::size_t bins_noised = 0;
};
void noise_audit_reset();
NoiseAudit noise_audit();

}  // namespace privact
