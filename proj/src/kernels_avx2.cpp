// AVX2 kernel variants. Compiled with -mavx2; only reached when runtime
// detection (or an explicit set_level) selects Level::kAvx2.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "privact/kernels.hpp"

namespace privact::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

const __m256d kAbsMask = _mm256_castsi256_pd(
    _mm256_set1_epi64x(0x7fffffffffffffffll));

}  // namespace

double sum(const double* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += a[i];
  return hsum(acc) + tail;
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += a[i] * b[i];
  return hsum(acc) + tail;
}

double l1_distance(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_add_pd(acc, _mm256_and_pd(d, kAbsMask));
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += a[i] > b[i] ? a[i] - b[i] : b[i] - a[i];
  return hsum(acc) + tail;
}

double sum_at(const double* row, const std::int32_t* idx, std::size_t n) {
  // Two accumulators to hide gather latency.
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m128i ix0 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + i));
    __m128i ix1 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + i + 4));
    acc0 = _mm256_add_pd(acc0, _mm256_i32gather_pd(row, ix0, 8));
    acc1 = _mm256_add_pd(acc1, _mm256_i32gather_pd(row, ix1, 8));
  }
  for (; i + 4 <= n; i += 4) {
    __m128i ix = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + i));
    acc0 = _mm256_add_pd(acc0, _mm256_i32gather_pd(row, ix, 8));
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += row[idx[i]];
  return hsum(_mm256_add_pd(acc0, acc1)) + tail;
}

}  // namespace privact::kernels::avx2

#endif  // x86_64
