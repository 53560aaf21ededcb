// SPDX-License-Identifier: Apache-2.0
#include "figr/kernels/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#define FIGR_AVX2 __attribute__((target("avx2,popcnt")))

namespace figr::kernels::avx2 {

FIGR_AVX2 std::size_t count_equal(const std::uint8_t* data, std::size_t n, std::uint8_t value) {
  const __m256i needle = _mm256_set1_epi8(static_cast<char>(value));
  std::size_t count = 0;
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    const __m256i chunk = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(data + i));
    const unsigned mask = static_cast<unsigned>(_mm256_movemask_epi8(_mm256_cmpeq_epi8(chunk, needle)));
    count += static_cast<std::size_t>(_mm_popcnt_u32(mask));
  }
  return count + scalar::count_equal(data + i, n - i, value);
}

FIGR_AVX2 std::size_t count_nonzero(const std::uint8_t* data, std::size_t n) {
  const __m256i zero = _mm256_setzero_si256();
  std::size_t count = 0;
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    const __m256i chunk = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(data + i));
    const unsigned mask = static_cast<unsigned>(_mm256_movemask_epi8(_mm256_cmpeq_epi8(chunk, zero)));
    count += 32 - static_cast<std::size_t>(_mm_popcnt_u32(mask));
  }
  return count + scalar::count_nonzero(data + i, n - i);
}

FIGR_AVX2 void max_blend(std::uint8_t* dst, const std::uint8_t* src, std::size_t n) {
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    const __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + i));
    const __m256i b = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), _mm256_max_epu8(a, b));
  }
  scalar::max_blend(dst + i, src + i, n - i);
}

FIGR_AVX2 void clipped_terms(const double* ratio, const double* adv, double eps, double* out, std::size_t n) {
  const __m256d lo = _mm256_set1_pd(1.0 - eps);
  const __m256d hi = _mm256_set1_pd(1.0 + eps);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = _mm256_loadu_pd(ratio + i);
    const __m256d a = _mm256_loadu_pd(adv + i);
    const __m256d c = _mm256_min_pd(_mm256_max_pd(r, lo), hi);
    _mm256_storeu_pd(out + i, _mm256_min_pd(_mm256_mul_pd(r, a), _mm256_mul_pd(c, a)));
  }
  scalar::clipped_terms(ratio + i, adv + i, eps, out + i, n - i);
}

}  // namespace figr::kernels::avx2

#endif
