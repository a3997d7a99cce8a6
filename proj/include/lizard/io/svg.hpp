#pragma once

#include <array>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "lizard/gait.hpp"
#include "lizard/synthesis.hpp"

namespace lizard::io {

struct Rgb {
  int r, g, b;
};

/// 256-step ramp, linear between five fixed anchors (dark blue to yellow).
inline Rgb ramp(int step) {
  static constexpr std::array<Rgb, 5> kAnchors{
      Rgb{13, 8, 135}, Rgb{126, 3, 168}, Rgb{204, 71, 120}, Rgb{248, 149, 64}, Rgb{240, 249, 33}};
  step = std::clamp(step, 0, 255);
  const int seg = std::min(step * 4 / 255, 3);
  const int lo = seg * 255 / 4;
  const int hi = (seg + 1) * 255 / 4;
  const auto& a = kAnchors[static_cast<std::size_t>(seg)];
  const auto& b = kAnchors[static_cast<std::size_t>(seg) + 1];
  auto mix = [&](int x, int y) { return x + (y - x) * (step - lo) / (hi - lo); };
  return {mix(a.r, b.r), mix(a.g, b.g), mix(a.b, b.b)};
}

inline int ramp_step(double v) {
  return std::clamp(static_cast<int>(std::floor(v * 255.0 + 0.5)), 0, 255);
}

/// One rectangle per sample; grey outside the workspace. For workspace-only
/// charts (`use_values` false) inside samples take the top of the ramp.
inline std::string chart_svg(const ChartGrid& c, bool use_values, int cell_px = 3) {
  const int w = c.spec.nx * cell_px, h = c.spec.ny * cell_px;
  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n",
      w, h, w, h);
  for (int j = 0; j < c.spec.ny; ++j)
    for (int i = 0; i < c.spec.nx; ++i) {
      Rgb col{220, 220, 220};
      if (c.inside(i, j)) col = ramp(use_values ? ramp_step(c.value(i, j)) : 255);
      out += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#{:02x}{:02x}{:02x}\"/>\n",
                         i * cell_px, (c.spec.ny - 1 - j) * cell_px, cell_px, cell_px, col.r,
                         col.g, col.b);
    }
  out += "</svg>\n";
  return out;
}

/// Foot-tip paths in the world frame, one polyline per leg, plus the head
/// and tail endpoint paths.
inline std::string trajectory_svg(const Trajectory& tr, double px_per_mm = 2.0) {
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  auto grow = [&](const Vec2& p) {
    x0 = std::min(x0, p.x());
    x1 = std::max(x1, p.x());
    y0 = std::min(y0, p.y());
    y1 = std::max(y1, p.y());
  };
  for (const auto& s : tr.samples) {
    for (const auto& f : s.state.foot_tips) grow(f);
    grow(s.state.head_point);
    grow(s.state.tail_point);
  }
  if (tr.samples.empty()) x0 = x1 = y0 = y1 = 0;
  const double pad = 10.0;
  const double w = (x1 - x0 + 2 * pad) * px_per_mm, h = (y1 - y0 + 2 * pad) * px_per_mm;
  auto px = [&](const Vec2& p) {
    return fmt::format("{:.2f},{:.2f}", (p.x() - x0 + pad) * px_per_mm,
                       (y1 - p.y() + pad) * px_per_mm);
  };
  static constexpr std::array<const char*, 6> kColors{"#1f77b4", "#d62728", "#2ca02c",
                                                      "#9467bd", "#444444", "#888888"};
  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\">\n", w, h);
  for (std::size_t path = 0; path < 6; ++path) {
    out += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1\" points=\"",
                       kColors[path]);
    for (std::size_t i = 0; i < tr.samples.size(); ++i) {
      const auto& st = tr.samples[i].state;
      const Vec2 p = path < 4 ? st.foot_tips[path] : (path == 4 ? st.head_point : st.tail_point);
      out += (i ? " " : "") + px(p);
    }
    out += "\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace lizard::io
