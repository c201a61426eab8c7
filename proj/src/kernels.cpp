#include "privact/kernels.hpp"

#include <cmath>
#include <cstdlib>

#if defined(__x86_64__) || defined(_M_X64)
#include <cpuid.h>
#endif

namespace privact::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  unsigned int eax = 0, ebx = 0, ecx = 0, edx = 0;
  if (__get_cpuid_count(7, 0, &eax, &ebx, &ecx, &edx)) {
    return (ebx & (1u << 5)) != 0;  // AVX2 bit in EBX
  }
#endif
  return false;
}

Level pick_default() {
  if (std::getenv("PRIVACT_FORCE_SCALAR") != nullptr) {
    return Level::kScalar;
  }
  return cpu_has_avx2() ? Level::kAvx2 : Level::kScalar;
}

Level g_level = pick_default();

}  // namespace

Level detected_level() { return cpu_has_avx2() ? Level::kAvx2 : Level::kScalar; }

Level active_level() { return g_level; }

void set_level(Level level) {
#if defined(__x86_64__) || defined(_M_X64)
  g_level = level;
#else
  (void)level;
  g_level = Level::kScalar;
#endif
}

const char* level_name(Level level) {
  switch (level) {
    case Level::kAvx2:
      return "avx2";
    case Level::kScalar:
    default:
      return "scalar";
  }
}

namespace scalar {

double sum(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i];
  return acc;
}

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double l1_distance(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::abs(a[i] - b[i]);
  return acc;
}

double sum_at(const double* row, const std::int32_t* idx, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += row[idx[i]];
  return acc;
}

}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define PRIVACT_DISPATCH(fn, ...) \
  (g_level == Level::kAvx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__))
#else
#define PRIVACT_DISPATCH(fn, ...) scalar::fn(__VA_ARGS__)
#endif

double sum(const double* a, std::size_t n) { return PRIVACT_DISPATCH(sum, a, n); }

double dot(const double* a, const double* b, std::size_t n) {
  return PRIVACT_DISPATCH(dot, a, b, n);
}

double l1_distance(const double* a, const double* b, std::size_t n) {
  return PRIVACT_DISPATCH(l1_distance, a, b, n);
}

double sum_at(const double* row, const std::int32_t* idx, std::size_t n) {
  return PRIVACT_DISPATCH(sum_at, row, idx, n);
}

#undef PRIVACT_DISPATCH

}  // namespace privact::kernels
