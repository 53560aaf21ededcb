// SPDX-License-Identifier: Apache-2.0
#pragma once

// Data-parallel inner loops shared by the rasterizer and the GRPO objective.
//
// Every kernel has a scalar reference in figr::kernels::scalar and vector
// variants (AVX2 on x86-64, NEON on AArch64). The public entry points dispatch
// once, at first use, to the best variant the CPU supports. All variants are
// required to produce bit-identical results; tests/unit/test_kernels.cpp
// checks this on random inputs.
//
// Set FIGR_SIMD=scalar to force the reference path.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace figr::kernels {

enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa) noexcept;
bool isa_supported(Isa isa) noexcept;
Isa active_isa() noexcept;

struct KernelTable {
  std::size_t (*count_equal)(const std::uint8_t* data, std::size_t n, std::uint8_t value);
  std::size_t (*count_nonzero)(const std::uint8_t* data, std::size_t n);
  void (*max_blend)(std::uint8_t* dst, const std::uint8_t* src, std::size_t n);
  // out[i] = min(ratio[i] * adv[i], clamp(ratio[i], 1 - eps, 1 + eps) * adv[i])
  void (*clipped_terms)(const double* ratio, const double* adv, double eps, double* out, std::size_t n);
};

/// Table for a specific ISA; the scalar table is returned when unsupported.
const KernelTable& table_for(Isa isa) noexcept;

std::size_t count_equal(std::span<const std::uint8_t> data, std::uint8_t value);
std::size_t count_nonzero(std::span<const std::uint8_t> data);

/// dst[i] = max(dst[i], src[i]); spans must have equal length.
void max_blend(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src);

/// Elementwise clipped surrogate (min of unclipped and clipped products).
/// Ties resolve as `a < b ? a : b`, matching the vector min instructions.
void clipped_terms(std::span<const double> ratio, std::span<const double> adv, double eps,
                   std::span<double> out);

namespace scalar {
std::size_t count_equal(const std::uint8_t* data, std::size_t n, std::uint8_t value);
std::size_t count_nonzero(const std::uint8_t* data, std::size_t n);
void max_blend(std::uint8_t* dst, const std::uint8_t* src, std::size_t n);
void clipped_terms(const double* ratio, const double* adv, double eps, double* out, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
std::size_t count_equal(const std::uint8_t* data, std::size_t n, std::uint8_t value);
std::size_t count_nonzero(const std::uint8_t* data, std::size_t n);
void max_blend(std::uint8_t* dst, const std::uint8_t* src, std::size_t n);
void clipped_terms(const double* ratio, const double* adv, double eps, double* out, std::size_t n);
}  // namespace avx2
#endif

#if defined(__aarch64__)
namespace neon {
std::size_t count_equal(const std::uint8_t* data, std::size_t n, std::uint8_t value);
std::size_t count_nonzero(const std::uint8_t* data, std::size_t n);
void max_blend(std::uint8_t* dst, const std::uint8_t* src, std::size_t n);
void clipped_terms(const double* ratio, const double* adv, double eps, double* out, std::size_t n);
}  // namespace neon
#endif

}  // namespace figr::kernels
