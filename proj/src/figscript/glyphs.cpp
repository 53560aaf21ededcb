// SPDX-License-Identifier: Apache-2.0
#include <array>
#include <cctype>

#include "figr/figscript/raster.hpp"

namespace figr::figscript {
namespace {

using Glyph = std::array<std::uint8_t, 5>;

struct Entry {
  char c;
  Glyph rows;
};

// Rows top to bottom, bit 2 is the leftmost column.
constexpr std::array<Entry, 50> kFont{{
    {'0', {07, 05, 05, 05, 07}}, {'1', {02, 06, 02, 02, 07}}, {'2', {07, 01, 07, 04, 07}},
    {'3', {07, 01, 07, 01, 07}}, {'4', {05, 05, 07, 01, 01}}, {'5', {07, 04, 07, 01, 07}},
    {'6', {07, 04, 07, 05, 07}}, {'7', {07, 01, 01, 01, 01}}, {'8', {07, 05, 07, 05, 07}},
    {'9', {07, 05, 07, 01, 07}}, {'A', {02, 05, 07, 05, 05}}, {'B', {06, 05, 06, 05, 06}},
    {'C', {03, 04, 04, 04, 03}}, {'D', {06, 05, 05, 05, 06}}, {'E', {07, 04, 06, 04, 07}},
    {'F', {07, 04, 06, 04, 04}}, {'G', {03, 04, 05, 05, 03}}, {'H', {05, 05, 07, 05, 05}},
    {'I', {07, 02, 02, 02, 07}}, {'J', {01, 01, 01, 05, 02}}, {'K', {05, 05, 06, 05, 05}},
    {'L', {04, 04, 04, 04, 07}}, {'M', {05, 07, 07, 05, 05}}, {'N', {06, 05, 05, 05, 05}},
    {'O', {02, 05, 05, 05, 02}}, {'P', {06, 05, 06, 04, 04}}, {'Q', {02, 05, 05, 06, 03}},
    {'R', {06, 05, 06, 05, 05}}, {'S', {03, 04, 02, 01, 06}}, {'T', {07, 02, 02, 02, 02}},
    {'U', {05, 05, 05, 05, 07}}, {'V', {05, 05, 05, 05, 02}}, {'W', {05, 05, 07, 07, 05}},
    {'X', {05, 05, 02, 05, 05}}, {'Y', {05, 05, 02, 02, 02}}, {'Z', {07, 01, 02, 04, 07}},
    {' ', {00, 00, 00, 00, 00}}, {'-', {00, 00, 07, 00, 00}}, {'.', {00, 00, 00, 00, 02}},
    {',', {00, 00, 00, 02, 04}}, {'=', {00, 07, 00, 07, 00}}, {'(', {01, 02, 02, 02, 01}},
    {')', {04, 02, 02, 02, 04}}, {'+', {00, 02, 07, 02, 00}}, {'/', {01, 01, 02, 04, 04}},
    {'?', {07, 01, 02, 00, 02}}, {':', {00, 02, 00, 02, 00}}, {'\'', {02, 02, 00, 00, 00}},
    {'*', {00, 05, 02, 05, 00}}, {'_', {00, 00, 00, 00, 07}},
}};

}  // namespace

std::span<const std::uint8_t, 5> glyph_rows(char c) noexcept {
  const char up = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (const auto& e : kFont)
    if (e.c == up) return std::span<const std::uint8_t, 5>(e.rows);
  for (const auto& e : kFont)
    if (e.c == '?') return std::span<const std::uint8_t, 5>(e.rows);
  return std::span<const std::uint8_t, 5>(kFont[0].rows);
}

}  // namespace figr::figscript
