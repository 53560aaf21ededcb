// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "figr/evalbench/problem.hpp"
#include "figr/figscript/geometry.hpp"

namespace figr::evalbench {

enum class Category { SegmentCrossings, CircleLineHits, PolygonLatticePoints, ArithmeticNoFigure };

std::string_view to_string(Category c) noexcept;
std::optional<Category> category_from_string(std::string_view name) noexcept;

/// Integer-coordinate scene recovered from a synthetic question.
struct Scene {
  Category category = Category::SegmentCrossings;
  std::vector<std::pair<figscript::Vec2, figscript::Vec2>> segments;
  figscript::Vec2 center, p, q;
  std::int64_t radius = 0;
  std::vector<figscript::Vec2> polygon;
  std::int64_t a = 0, b = 0, c = 0;
  char op1 = '+', op2 = '+';
  bool grouped = false;  // (a op1 b) op2 c instead of a op1 b op2 c
};

std::string question_for(const Scene& scene);
std::optional<Scene> parse_question(std::string_view question);

/// Brute-force gold answer: pairwise orientation tests, exact integer
/// circle-line distance, dense lattice scan, direct arithmetic.
std::int64_t oracle_answer(const Scene& scene);

/// FigScript that draws the scene and measures into `ans` for geometry.
/// Arithmetic scenes get a number-line sketch of the first two operands.
std::string build_construction(const Scene& scene);

/// Deterministic in (category, n, seed). Geometry carries s=1, arithmetic s=0.
std::vector<ProblemRecord> generate_synthetic(Category category, std::size_t n, std::uint64_t seed);

}  // namespace figr::evalbench
