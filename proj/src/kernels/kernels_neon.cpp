// SPDX-License-Identifier: Apache-2.0
#include "figr/kernels/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

namespace figr::kernels::neon {

std::size_t count_equal(const std::uint8_t* data, std::size_t n, std::uint8_t value) {
  const uint8x16_t needle = vdupq_n_u8(value);
  std::size_t count = 0;
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    const uint8x16_t eq = vceqq_u8(vld1q_u8(data + i), needle);
    count += vaddvq_u8(vshrq_n_u8(eq, 7));
  }
  return count + scalar::count_equal(data + i, n - i, value);
}

std::size_t count_nonzero(const std::uint8_t* data, std::size_t n) {
  std::size_t count = 0;
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    const uint8x16_t nz = vtstq_u8(vld1q_u8(data + i), vdupq_n_u8(0xFF));
    count += vaddvq_u8(vshrq_n_u8(nz, 7));
  }
  return count + scalar::count_nonzero(data + i, n - i);
}

void max_blend(std::uint8_t* dst, const std::uint8_t* src, std::size_t n) {
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) vst1q_u8(dst + i, vmaxq_u8(vld1q_u8(dst + i), vld1q_u8(src + i)));
  scalar::max_blend(dst + i, src + i, n - i);
}

void clipped_terms(const double* ratio, const double* adv, double eps, double* out, std::size_t n) {
  const float64x2_t lo = vdupq_n_f64(1.0 - eps);
  const float64x2_t hi = vdupq_n_f64(1.0 + eps);
  std::size_t i = 0;
  // vmin/vmax order signed zeros, so select explicitly to keep scalar tie rules.
  for (; i + 2 <= n; i += 2) {
    const float64x2_t r = vld1q_f64(ratio + i);
    const float64x2_t a = vld1q_f64(adv + i);
    float64x2_t c = vbslq_f64(vcgtq_f64(r, lo), r, lo);
    c = vbslq_f64(vcltq_f64(c, hi), c, hi);
    const float64x2_t u = vmulq_f64(r, a);
    const float64x2_t v = vmulq_f64(c, a);
    vst1q_f64(out + i, vbslq_f64(vcltq_f64(u, v), u, v));
  }
  scalar::clipped_terms(ratio + i, adv + i, eps, out + i, n - i);
}

}  // namespace figr::kernels::neon

#endif
