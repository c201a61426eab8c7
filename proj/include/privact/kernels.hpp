#pragma once

#include <cstddef>
#include <cstdint>

// Data-parallel inner loops shared by the dissimilarity builder, the tree
// sampler and the correlation analyses. Every kernel has a scalar reference
// implementation and an AVX2 variant; the active variant is picked once at
// startup from CPUID and can be overridden (tests run both and compare).

namespace privact::kernels {

enum class Level { kScalar, kAvx2 };

Level detected_level();
Level active_level();
void set_level(Level level);
const char* level_name(Level level);

namespace scalar {
double sum(const double* a, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
double l1_distance(const double* a, const double* b, std::size_t n);
double sum_at(const double* row, const std::int32_t* idx, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
double sum(const double* a, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
double l1_distance(const double* a, const double* b, std::size_t n);
double sum_at(const double* row, const std::int32_t* idx, std::size_t n);
}  // namespace avx2
#endif

// Dispatched entry points.
double sum(const double* a, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
double l1_distance(const double* a, const double* b, std::size_t n);

// Gather-style reduction: sum of row[idx[i]] for i in [0, n).
double sum_at(const double* row, const std::int32_t* idx, std::size_t n);

}  // namespace privact::kernels
