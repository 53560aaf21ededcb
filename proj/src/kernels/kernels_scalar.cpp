// SPDX-License-Identifier: Apache-2.0
#include "figr/kernels/kernels.hpp"

namespace figr::kernels::scalar {

std::size_t count_equal(const std::uint8_t* data, std::size_t n, std::uint8_t value) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) count += data[i] == value;
  return count;
}

std::size_t count_nonzero(const std::uint8_t* data, std::size_t n) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) count += data[i] != 0;
  return count;
}

void max_blend(std::uint8_t* dst, const std::uint8_t* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = dst[i] < src[i] ? src[i] : dst[i];
}

void clipped_terms(const double* ratio, const double* adv, double eps, double* out, std::size_t n) {
  const double lo = 1.0 - eps;
  const double hi = 1.0 + eps;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ratio[i];
    // maxpd/minpd semantics: a > b ? a : b and a < b ? a : b.
    double c = r > lo ? r : lo;
    c = c < hi ? c : hi;
    const double unclipped = r * adv[i];
    const double clipped = c * adv[i];
    out[i] = unclipped < clipped ? unclipped : clipped;
  }
}

}  // namespace figr::kernels::scalar
