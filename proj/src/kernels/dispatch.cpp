// SPDX-License-Identifier: Apache-2.0
#include <cstdlib>
#include <string_view>

#include "figr/kernels/kernels.hpp"
#include "figr/util/error.hpp"

namespace figr::kernels {
namespace {

constexpr KernelTable kScalar{scalar::count_equal, scalar::count_nonzero, scalar::max_blend,
                              scalar::clipped_terms};
#if defined(__x86_64__) || defined(_M_X64)
constexpr KernelTable kAvx2{avx2::count_equal, avx2::count_nonzero, avx2::max_blend, avx2::clipped_terms};
#endif
#if defined(__aarch64__)
constexpr KernelTable kNeon{neon::count_equal, neon::count_nonzero, neon::max_blend, neon::clipped_terms};
#endif

Isa detect() noexcept {
  const char* env = std::getenv("FIGR_SIMD");
  if (env && std::string_view(env) == "scalar") return Isa::Scalar;
  if (isa_supported(Isa::Avx2)) return Isa::Avx2;
  if (isa_supported(Isa::Neon)) return Isa::Neon;
  return Isa::Scalar;
}

const KernelTable& active() noexcept {
  static const KernelTable& table = table_for(active_isa());
  return table;
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "scalar";
}

bool isa_supported(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if defined(__x86_64__) || defined(_M_X64)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt");
#else
      return false;
#endif
    case Isa::Neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() noexcept {
  static const Isa isa = detect();
  return isa;
}

const KernelTable& table_for(Isa isa) noexcept {
  if (!isa_supported(isa)) return kScalar;
  switch (isa) {
#if defined(__x86_64__) || defined(_M_X64)
    case Isa::Avx2: return kAvx2;
#endif
#if defined(__aarch64__)
    case Isa::Neon: return kNeon;
#endif
    default: return kScalar;
  }
}

std::size_t count_equal(std::span<const std::uint8_t> data, std::uint8_t value) {
  return active().count_equal(data.data(), data.size(), value);
}

std::size_t count_nonzero(std::span<const std::uint8_t> data) {
  return active().count_nonzero(data.data(), data.size());
}

void max_blend(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src) {
  if (dst.size() != src.size()) throw Error(Errc::LengthMismatch, "max_blend span sizes differ");
  active().max_blend(dst.data(), src.data(), dst.size());
}

void clipped_terms(std::span<const double> ratio, std::span<const double> adv, double eps,
                   std::span<double> out) {
  if (ratio.size() != adv.size() || ratio.size() != out.size())
    throw Error(Errc::LengthMismatch, "clipped_terms span sizes differ");
  active().clipped_terms(ratio.data(), adv.data(), eps, out.data(), ratio.size());
}

}  // namespace figr::kernels
