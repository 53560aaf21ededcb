// SPDX-License-Identifier: Apache-2.0
#include "figr/figscript/raster.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "figr/kernels/kernels.hpp"

namespace figr::figscript {
namespace {

// Pixel coordinates beyond this are never rasterised.
constexpr double kMaxPixelCoord = 1u << 30;
// Above this pixel radius circles are scanned per window row/column.
constexpr std::int64_t kMidpointRadiusLimit = 4096;

struct Mapper {
  WorldWindow w;
  double sx, sy;

  Mapper(const WorldWindow& window, std::size_t width, std::size_t height)
      : w(window),
        sx(width > 1 ? static_cast<double>(width - 1) / (window.xmax - window.xmin) : 0.0),
        sy(height > 1 ? static_cast<double>(height - 1) / (window.ymax - window.ymin) : 0.0) {}

  double fx(double x) const { return (x - w.xmin) * sx; }
  double fy(double y) const { return (w.ymax - y) * sy; }
};

// Round half to even under the default floating-point environment.
bool quantize(double v, std::int64_t& out) {
  if (!std::isfinite(v) || std::abs(v) > kMaxPixelCoord) return false;
  out = static_cast<std::int64_t>(std::nearbyint(v));
  return true;
}

void plot(Raster& r, std::int64_t x, std::int64_t y, std::uint8_t value) {
  if (x < 0 || y < 0 || x >= static_cast<std::int64_t>(r.width) || y >= static_cast<std::int64_t>(r.height)) return;
  auto& px = r.pixels[static_cast<std::size_t>(y) * r.width + static_cast<std::size_t>(x)];
  px = std::max(px, value);
}

// Liang–Barsky against [lo, hi] in both pixel axes; t range given by caller.
bool clip(double& x0, double& y0, double& x1, double& y1, double xlo, double xhi, double ylo, double yhi,
          double t0, double t1) {
  const double dx = x1 - x0, dy = y1 - y0;
  const double p[4] = {-dx, dx, -dy, dy};
  const double q[4] = {x0 - xlo, xhi - x0, y0 - ylo, yhi - y0};
  for (int k = 0; k < 4; ++k) {
    if (p[k] == 0.0) {
      if (q[k] < 0) return false;
      continue;
    }
    const double t = q[k] / p[k];
    if (p[k] < 0)
      t0 = std::max(t0, t);
    else
      t1 = std::min(t1, t);
  }
  if (t0 > t1 || !std::isfinite(t0) || !std::isfinite(t1)) return false;
  const double nx0 = x0 + t0 * dx, ny0 = y0 + t0 * dy;
  const double nx1 = x0 + t1 * dx, ny1 = y0 + t1 * dy;
  x0 = nx0;
  y0 = ny0;
  x1 = nx1;
  y1 = ny1;
  return true;
}

void draw_world_segment(Raster& r, const Mapper& m, Vec2 a, Vec2 b, bool infinite) {
  double x0 = m.fx(a.x), y0 = m.fy(a.y), x1 = m.fx(b.x), y1 = m.fy(b.y);
  if (!std::isfinite(x0) || !std::isfinite(y0) || !std::isfinite(x1) || !std::isfinite(y1)) return;
  const double xhi = static_cast<double>(r.width), yhi = static_cast<double>(r.height);
  if (infinite) {
    if (x0 == x1 && y0 == y1) return;
    const double inf = std::numeric_limits<double>::infinity();
    if (!clip(x0, y0, x1, y1, -1.0, xhi, -1.0, yhi, -inf, inf)) return;
  } else {
    const bool inside = x0 >= -1 && x0 <= xhi && x1 >= -1 && x1 <= xhi && y0 >= -1 && y0 <= yhi && y1 >= -1 &&
                        y1 <= yhi;
    if (!inside && !clip(x0, y0, x1, y1, -1.0, xhi, -1.0, yhi, 0.0, 1.0)) return;
  }
  std::int64_t ix0, iy0, ix1, iy1;
  if (!quantize(x0, ix0) || !quantize(y0, iy0) || !quantize(x1, ix1) || !quantize(y1, iy1)) return;
  draw_line_px(r, ix0, iy0, ix1, iy1, kInk);
}

// Pixel nearest to sqrt(n) for n >= 0; exact integer arithmetic.
std::int64_t round_sqrt(std::int64_t n) {
  auto s = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (s * s > n) --s;
  while ((s + 1) * (s + 1) <= n) ++s;
  return n - s * s > s ? s + 1 : s;
}

void draw_big_circle(Raster& r, std::int64_t cx, std::int64_t cy, std::int64_t rad, std::uint8_t value) {
  const std::int64_t r2 = rad * rad;
  for (std::int64_t x = 0; x < static_cast<std::int64_t>(r.width); ++x) {
    const std::int64_t a = std::abs(x - cx);
    if (a > rad) continue;
    const std::int64_t b = round_sqrt(r2 - a * a);
    if (a > b) continue;
    plot(r, x, cy + b, value);
    plot(r, x, cy - b, value);
  }
  for (std::int64_t y = 0; y < static_cast<std::int64_t>(r.height); ++y) {
    const std::int64_t a = std::abs(y - cy);
    if (a > rad) continue;
    const std::int64_t b = round_sqrt(r2 - a * a);
    if (a > b) continue;
    plot(r, cx + b, y, value);
    plot(r, cx - b, y, value);
  }
}

void draw_label(Raster& layer, const Mapper& m, const LabelPrim& label) {
  std::int64_t ax, ay;
  if (!quantize(m.fx(label.anchor.x), ax) || !quantize(m.fy(label.anchor.y), ay)) return;
  const std::int64_t left = ax + 2;
  const std::int64_t top = ay - 6;
  for (std::size_t i = 0; i < label.text.size(); ++i) {
    const auto rows = glyph_rows(label.text[i]);
    const std::int64_t gx = left + static_cast<std::int64_t>(4 * i);
    for (int row = 0; row < 5; ++row)
      for (int col = 0; col < 3; ++col)
        if (rows[row] & (4 >> col)) plot(layer, gx + col, top + row, kLabelInk);
  }
}

void extend(WorldWindow& b, bool& any, Vec2 p) {
  if (!std::isfinite(p.x) || !std::isfinite(p.y)) return;
  if (!any) {
    b = {p.x, p.x, p.y, p.y};
    any = true;
    return;
  }
  b.xmin = std::min(b.xmin, p.x);
  b.xmax = std::max(b.xmax, p.x);
  b.ymin = std::min(b.ymin, p.y);
  b.ymax = std::max(b.ymax, p.y);
}

}  // namespace

void draw_line_px(Raster& raster, std::int64_t x0, std::int64_t y0, std::int64_t x1, std::int64_t y1,
                  std::uint8_t value) {
  if (x1 < x0 || (x1 == x0 && y1 < y0)) {
    std::swap(x0, x1);
    std::swap(y0, y1);
  }
  const std::int64_t dx = x1 - x0;
  const std::int64_t dy = std::abs(y1 - y0);
  const std::int64_t sy = y1 >= y0 ? 1 : -1;
  if (dx >= dy) {
    std::int64_t d = 2 * dy - dx;
    std::int64_t y = y0;
    for (std::int64_t x = x0; x <= x1; ++x) {
      plot(raster, x, y, value);
      if (d > 0) {
        y += sy;
        d -= 2 * dx;
      }
      d += 2 * dy;
    }
  } else {
    std::int64_t d = 2 * dx - dy;
    std::int64_t x = x0;
    for (std::int64_t i = 0, y = y0; i <= dy; ++i, y += sy) {
      plot(raster, x, y, value);
      if (d > 0) {
        ++x;
        d -= 2 * dy;
      }
      d += 2 * dx;
    }
  }
}

void draw_circle_px(Raster& raster, std::int64_t cx, std::int64_t cy, std::int64_t r, std::uint8_t value) {
  if (r < 0) return;
  if (r > kMidpointRadiusLimit) {
    draw_big_circle(raster, cx, cy, r, value);
    return;
  }
  std::int64_t x = 0, y = r, d = 1 - r;
  while (x <= y) {
    plot(raster, cx + x, cy + y, value);
    plot(raster, cx - x, cy + y, value);
    plot(raster, cx + x, cy - y, value);
    plot(raster, cx - x, cy - y, value);
    plot(raster, cx + y, cy + x, value);
    plot(raster, cx - y, cy + x, value);
    plot(raster, cx + y, cy - x, value);
    plot(raster, cx - y, cy - x, value);
    if (d < 0) {
      d += 2 * x + 3;
    } else {
      d += 2 * (x - y) + 5;
      --y;
    }
    ++x;
  }
}

WorldWindow auto_window(const Scene& scene) {
  WorldWindow b;
  bool any = false;
  for (const auto& item : scene.items) {
    std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, PointMark>) {
            extend(b, any, p.p);
          } else if constexpr (std::is_same_v<T, SegmentPrim> || std::is_same_v<T, LinePrim>) {
            extend(b, any, p.a);
            extend(b, any, p.b);
          } else if constexpr (std::is_same_v<T, CirclePrim>) {
            extend(b, any, {p.center.x - p.radius, p.center.y - p.radius});
            extend(b, any, {p.center.x + p.radius, p.center.y + p.radius});
          } else if constexpr (std::is_same_v<T, PolylinePrim>) {
            for (auto q : p.points) extend(b, any, q);
          } else if constexpr (std::is_same_v<T, LabelPrim>) {
            extend(b, any, p.anchor);
          }
        },
        item);
  }
  if (!any) return {};
  double size = std::max(b.xmax - b.xmin, b.ymax - b.ymin);
  if (!(size > 0) || !std::isfinite(size)) size = 1.0;
  const double cx = b.xmin / 2 + b.xmax / 2;
  const double cy = b.ymin / 2 + b.ymax / 2;
  const double half = size * 0.6;  // half extent plus 10% margin per side
  return {cx - half, cx + half, cy - half, cy + half};
}

Raster rasterize(const Scene& scene, const WorldWindow& window, std::size_t width, std::size_t height) {
  Raster raster(width, height, window);
  if (width == 0 || height == 0 || !(window.xmax > window.xmin) || !(window.ymax > window.ymin)) return raster;
  const Mapper m(window, width, height);
  std::optional<Raster> labels;
  for (const auto& item : scene.items) {
    std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, PointMark>) {
            std::int64_t x, y;
            if (!quantize(m.fx(p.p.x), x) || !quantize(m.fy(p.p.y), y)) return;
            plot(raster, x, y, kInk);
            plot(raster, x - 1, y, kInk);
            plot(raster, x + 1, y, kInk);
            plot(raster, x, y - 1, kInk);
            plot(raster, x, y + 1, kInk);
          } else if constexpr (std::is_same_v<T, SegmentPrim>) {
            draw_world_segment(raster, m, p.a, p.b, false);
          } else if constexpr (std::is_same_v<T, LinePrim>) {
            draw_world_segment(raster, m, p.a, p.b, true);
          } else if constexpr (std::is_same_v<T, CirclePrim>) {
            std::int64_t cx, cy, rad;
            if (!quantize(m.fx(p.center.x), cx) || !quantize(m.fy(p.center.y), cy) || !quantize(p.radius * m.sx, rad))
              return;
            const auto w = static_cast<std::int64_t>(width), h = static_cast<std::int64_t>(height);
            if (cx + rad < 0 || cx - rad >= w || cy + rad < 0 || cy - rad >= h) return;
            draw_circle_px(raster, cx, cy, rad, kInk);
          } else if constexpr (std::is_same_v<T, PolylinePrim>) {
            const std::size_t n = p.points.size();
            const std::size_t edges = p.closed ? n : (n == 0 ? 0 : n - 1);
            for (std::size_t i = 0; i < edges; ++i) {
              const Vec2 a = p.points[i], b = p.points[(i + 1) % n];
              if (std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(b.x) && std::isfinite(b.y))
                draw_world_segment(raster, m, a, b, false);
            }
          } else if constexpr (std::is_same_v<T, LabelPrim>) {
            if (!labels) labels.emplace(width, height, window);
            draw_label(*labels, m, p);
          }
        },
        item);
  }
  if (labels) kernels::max_blend(raster.pixels, labels->pixels);
  return raster;
}

std::vector<std::uint8_t> to_pgm(const Raster& raster) {
  char header[64];
  const int n = std::snprintf(header, sizeof header, "P5\n%zu %zu\n255\n", raster.width, raster.height);
  std::vector<std::uint8_t> out(header, header + n);
  out.insert(out.end(), raster.pixels.begin(), raster.pixels.end());
  return out;
}

std::optional<Raster> from_pgm(std::span<const std::uint8_t> bytes) {
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (bytes[pos] == ' ' || bytes[pos] == '\t' || bytes[pos] == '\n' || bytes[pos] == '\r') {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto read_uint = [&](std::size_t& v) {
    skip_ws();
    const std::size_t start = pos;
    v = 0;
    while (pos < bytes.size() && bytes[pos] >= '0' && bytes[pos] <= '9') {
      v = v * 10 + (bytes[pos] - '0');
      if (v > (1u << 24)) return false;
      ++pos;
    }
    return pos > start;
  };
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') return std::nullopt;
  pos = 2;
  std::size_t w, h, maxval;
  if (!read_uint(w) || !read_uint(h) || !read_uint(maxval) || maxval != 255) return std::nullopt;
  if (pos >= bytes.size()) return std::nullopt;
  const std::uint8_t sep = bytes[pos++];
  if (sep != ' ' && sep != '\n' && sep != '\t' && sep != '\r') return std::nullopt;
  if (bytes.size() - pos != w * h) return std::nullopt;
  Raster r(w, h);
  std::copy(bytes.begin() + static_cast<std::ptrdiff_t>(pos), bytes.end(), r.pixels.begin());
  return r;
}

std::size_t ink_count(const Raster& raster) { return kernels::count_equal(raster.pixels, kInk); }

std::size_t label_pixel_count(const Raster& raster) {
  return kernels::count_nonzero(raster.pixels) - kernels::count_equal(raster.pixels, kInk);
}

std::string raster_summary(const Raster& raster) {
  static constexpr char kRamp[] = ".:-=+*#";
  constexpr std::size_t kCells = 16;
  std::string out;
  out.reserve(kCells * (kCells + 1) + 64);
  auto range = [](std::size_t cell, std::size_t extent, std::size_t& lo, std::size_t& hi) {
    lo = cell * extent / kCells;
    hi = std::max(lo + 1, (cell + 1) * extent / kCells);
  };
  const std::span<const std::uint8_t> px(raster.pixels);
  for (std::size_t by = 0; by < kCells; ++by) {
    for (std::size_t bx = 0; bx < kCells; ++bx) {
      if (raster.width == 0 || raster.height == 0) {
        out.push_back('.');
        continue;
      }
      std::size_t y0, y1, x0, x1;
      range(by, raster.height, y0, y1);
      range(bx, raster.width, x0, x1);
      std::size_t inked = 0;
      for (std::size_t y = y0; y < y1; ++y) inked += kernels::count_nonzero(px.subspan(y * raster.width + x0, x1 - x0));
      const std::size_t total = (y1 - y0) * (x1 - x0);
      const std::size_t level = (inked * 6 + total - 1) / total;
      out.push_back(kRamp[level]);
    }
    out.push_back('\n');
  }
  char stats[128];
  std::snprintf(stats, sizeof stats, "ink_count=%zu label_pixels=%zu size=%zux%zu\n", ink_count(raster),
                label_pixel_count(raster), raster.width, raster.height);
  out += stats;
  return out;
}

}  // namespace figr::figscript
