// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "figr/figscript/geometry.hpp"

namespace figr::figscript {

inline constexpr std::uint8_t kInk = 255;
inline constexpr std::uint8_t kLabelInk = 128;

struct WorldWindow {
  double xmin = -1.0, xmax = 1.0, ymin = -1.0, ymax = 1.0;
  friend bool operator==(const WorldWindow&, const WorldWindow&) = default;
};

struct Raster {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;  // row-major, row 0 at the top
  WorldWindow world_window;

  Raster() = default;
  Raster(std::size_t w, std::size_t h, WorldWindow window = {})
      : width(w), height(h), pixels(w * h, 0), world_window(window) {}

  std::uint8_t at(std::size_t x, std::size_t y) const { return pixels[y * width + x]; }
  friend bool operator==(const Raster&, const Raster&) = default;
};

struct PointMark { Vec2 p; };
struct SegmentPrim { Vec2 a, b; };
struct LinePrim { Vec2 a, b; };
struct CirclePrim { Vec2 center; double radius; };
/// Consecutive finite vertices are joined; non-finite vertices break the path.
struct PolylinePrim { std::vector<Vec2> points; bool closed = false; };
struct LabelPrim { Vec2 anchor; std::string text; };

using Primitive = std::variant<PointMark, SegmentPrim, LinePrim, CirclePrim, PolylinePrim, LabelPrim>;

struct Scene {
  std::vector<Primitive> items;
};

/// Square window around the scene's bounding box with a 10% margin.
WorldWindow auto_window(const Scene& scene);

/// Pure and deterministic: identical inputs give identical bytes.
Raster rasterize(const Scene& scene, const WorldWindow& window, std::size_t width, std::size_t height);

/// Integer midpoint line between pixel centres. Pixels outside the raster
/// are discarded; cost is linear in the endpoint distance, so callers clip
/// first. The pixel set does not depend on endpoint order.
void draw_line_px(Raster& raster, std::int64_t x0, std::int64_t y0, std::int64_t x1, std::int64_t y1,
                  std::uint8_t value);
/// Integer midpoint circle, clipped to the raster.
void draw_circle_px(Raster& raster, std::int64_t cx, std::int64_t cy, std::int64_t r, std::uint8_t value);

/// Binary PGM (P5, maxval 255).
std::vector<std::uint8_t> to_pgm(const Raster& raster);
std::optional<Raster> from_pgm(std::span<const std::uint8_t> bytes);

std::size_t ink_count(const Raster& raster);
std::size_t label_pixel_count(const Raster& raster);

/// 16 lines of 16 density characters (".:-=+*#", '.' only for empty blocks)
/// followed by one statistics line; a pure function of the raster bytes.
std::string raster_summary(const Raster& raster);

/// 3x5 glyph rows for `c` (bit 2 = leftmost column); unknown characters map to '?'.
std::span<const std::uint8_t, 5> glyph_rows(char c) noexcept;

}  // namespace figr::figscript
