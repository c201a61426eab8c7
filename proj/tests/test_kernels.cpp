#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include "privact/kernels.hpp"
#include "privact/rng.hpp"

namespace k = privact::kernels;

namespace {

std::vector<double> random_row(std::size_t n, std::uint64_t seed, double lo,
                               double hi) {
  privact::Rng rng(seed);
  std::vector<double> out(n);
  for (auto& x : out) x = lo + (hi - lo) * rng.uniform01();
  return out;
}

// Plain loops, written independently of the scalar kernels.
double naive_sum(const std::vector<double>& a) {
  double s = 0.0;
  for (double x : a) s += x;
  return s;
}
double naive_dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}
double naive_l1(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::fabs(a[i] - b[i]);
  return s;
}

}  // namespace

TEST_CASE("scalar kernels match naive loops") {
  for (std::size_t n : {0ul, 1ul, 2ul, 3ul, 4ul, 5ul, 7ul, 8ul, 15ul, 64ul, 1001ul}) {
    auto a = random_row(n, 100 + n, -3.0, 3.0);
    auto b = random_row(n, 200 + n, -3.0, 3.0);
    CHECK(k::scalar::sum(a.data(), n) == doctest::Approx(naive_sum(a)).epsilon(1e-12));
    CHECK(k::scalar::dot(a.data(), b.data(), n) ==
          doctest::Approx(naive_dot(a, b)).epsilon(1e-12));
    CHECK(k::scalar::l1_distance(a.data(), b.data(), n) ==
          doctest::Approx(naive_l1(a, b)).epsilon(1e-12));
  }
}

TEST_CASE("scalar sum_at gathers the indexed entries") {
  auto row = random_row(50, 7, 0.0, 10.0);
  std::vector<std::int32_t> idx{0, 49, 7, 7, 13};
  double expect = row[0] + row[49] + row[7] + row[7] + row[13];
  CHECK(k::scalar::sum_at(row.data(), idx.data(), idx.size()) ==
        doctest::Approx(expect).epsilon(1e-12));
  CHECK(k::scalar::sum_at(row.data(), idx.data(), 0) == 0.0);
}

#if defined(__x86_64__) || defined(_M_X64)
TEST_CASE("avx2 kernels agree with scalar across lane remainders") {
  if (k::detected_level() != k::Level::kAvx2) {
    MESSAGE("AVX2 not available on this host; skipping");
    return;
  }
  // Sweep every remainder mod 4 plus sizes spanning several vector widths.
  for (std::size_t n = 0; n <= 67; ++n) {
    auto a = random_row(n, 300 + n, -5.0, 5.0);
    auto b = random_row(n, 400 + n, -5.0, 5.0);
    CHECK(k::avx2::sum(a.data(), n) ==
          doctest::Approx(k::scalar::sum(a.data(), n)).epsilon(1e-12));
    CHECK(k::avx2::dot(a.data(), b.data(), n) ==
          doctest::Approx(k::scalar::dot(a.data(), b.data(), n)).epsilon(1e-12));
    CHECK(k::avx2::l1_distance(a.data(), b.data(), n) ==
          doctest::Approx(k::scalar::l1_distance(a.data(), b.data(), n))
              .epsilon(1e-12));
  }
  auto big_a = random_row(100003, 1, -2.0, 2.0);
  auto big_b = random_row(100003, 2, -2.0, 2.0);
  CHECK(k::avx2::l1_distance(big_a.data(), big_b.data(), big_a.size()) ==
        doctest::Approx(k::scalar::l1_distance(big_a.data(), big_b.data(),
                                               big_a.size()))
            .epsilon(1e-10));

  auto row = random_row(512, 9, 0.0, 1.0);
  privact::Rng rng(10);
  std::vector<std::int32_t> idx(333);
  for (auto& i : idx) i = static_cast<std::int32_t>(rng.uniform_index(512));
  CHECK(k::avx2::sum_at(row.data(), idx.data(), idx.size()) ==
        doctest::Approx(k::scalar::sum_at(row.data(), idx.data(), idx.size()))
            .epsilon(1e-12));
}
#endif

TEST_CASE("dispatch honors the active level") {
  k::Level original = k::active_level();
  auto a = random_row(37, 5, -1.0, 1.0);
  auto b = random_row(37, 6, -1.0, 1.0);

  k::set_level(k::Level::kScalar);
  CHECK(k::active_level() == k::Level::kScalar);
  CHECK(k::dot(a.data(), b.data(), a.size()) ==
        k::scalar::dot(a.data(), b.data(), a.size()));

#if defined(__x86_64__) || defined(_M_X64)
  if (k::detected_level() == k::Level::kAvx2) {
    k::set_level(k::Level::kAvx2);
    CHECK(k::active_level() == k::Level::kAvx2);
    CHECK(k::dot(a.data(), b.data(), a.size()) ==
          k::avx2::dot(a.data(), b.data(), a.size()));
  }
#endif
  k::set_level(original);
}

TEST_CASE("level names are stable identifiers") {
  CHECK(std::string(k::level_name(k::Level::kScalar)) == "scalar");
  CHECK(std::string(k::level_name(k::Level::kAvx2)) == "avx2");
}
