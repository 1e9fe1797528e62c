#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "nonvanish/polynomial.hpp"
#include "nonvanish/region.hpp"
#include "nonvanish/target.hpp"

namespace nonvanish {

struct HeatmapOptions {
  int cells = 96;
  int pixels = 480;
  double margin = 0.08;  // fraction of the box size added on each side
};

namespace detail {

// Five-stop dark-blue to yellow ramp, t in [0, 1].
inline std::string ramp_color(double t) {
  static constexpr double stops[5][3] = {
      {13, 8, 135}, {126, 3, 168}, {204, 71, 120}, {248, 149, 64}, {240, 249, 33}};
  t = std::clamp(t, 0.0, 1.0) * 4.0;
  int i = std::min(static_cast<int>(t), 3);
  double u = t - i;
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(stops[i][0] + u * (stops[i + 1][0] - stops[i][0])),
                static_cast<int>(stops[i][1] + u * (stops[i + 1][1] - stops[i][1])),
                static_cast<int>(stops[i][2] + u * (stops[i + 1][2] - stops[i][2])));
  return buf;
}

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace detail

/// Static SVG: log10 |p - f| over the padded bounding box of K, with the
/// boundary of K and the zeros of p drawn on top.
inline std::string error_heatmap_svg(const ComplexPolynomial& p, const std::vector<complex>& roots,
                                     const TargetFunction& f, const CompactRegion& K, const HeatmapOptions& opt = {}) {
  Box box = K.bounds();
  double side = std::max({box.width(), box.height(), 1e-9});
  complex c = box.center();
  double half = 0.5 * side * (1.0 + 2.0 * opt.margin);
  const double x0 = c.real() - half, y0 = c.imag() - half, span = 2.0 * half;
  const int n = opt.cells;
  const double px = static_cast<double>(opt.pixels);
  auto sx = [&](double x) { return (x - x0) / span * px; };
  auto sy = [&](double y) { return px - (y - y0) / span * px; };

  std::vector<double> logerr(static_cast<std::size_t>(n * n));
  double lo = INFINITY, hi = -INFINITY;
  for (int r = 0; r < n; ++r)
    for (int col = 0; col < n; ++col) {
      complex z{x0 + (col + 0.5) * span / n, y0 + (r + 0.5) * span / n};
      double e = std::abs(p(z) - f(z));
      double v = std::isfinite(e) ? std::log10(std::max(e, 1e-300)) : NAN;
      logerr[static_cast<std::size_t>(r * n + col)] = v;
      if (std::isfinite(v)) lo = std::min(lo, v), hi = std::max(hi, v);
    }
  if (!(hi > lo)) hi = lo + 1.0;

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::fmt(px) + "\" height=\"" + detail::fmt(px) +
         "\" viewBox=\"0 0 " + detail::fmt(px) + " " + detail::fmt(px) + "\">\n";
  svg += "<title>log10 |p - f|, range " + detail::fmt(lo) + " to " + detail::fmt(hi) + "</title>\n";
  const double cell = px / n;
  for (int r = 0; r < n; ++r)
    for (int col = 0; col < n; ++col) {
      double v = logerr[static_cast<std::size_t>(r * n + col)];
      std::string color = std::isfinite(v) ? detail::ramp_color((v - lo) / (hi - lo)) : std::string("#ffffff");
      svg += "<rect x=\"" + detail::fmt(col * cell) + "\" y=\"" + detail::fmt(px - (r + 1) * cell) + "\" width=\"" +
             detail::fmt(cell) + "\" height=\"" + detail::fmt(cell) + "\" fill=\"" + color + "\"/>\n";
    }
  auto polyline = [&](const std::vector<complex>& pts, bool closed) {
    std::string d;
    for (std::size_t i = 0; i < pts.size(); ++i)
      d += (i == 0 ? "M" : "L") + detail::fmt(sx(pts[i].real())) + "," + detail::fmt(sy(pts[i].imag())) + " ";
    if (closed) d += "Z";
    svg += "<path d=\"" + d + "\" fill=\"none\" stroke=\"#ffffff\" stroke-width=\"1.5\"/>\n";
  };
  for (const auto& comp : K.components()) polyline(comp.boundary_samples(256), true);
  for (const auto& fil : K.filaments()) polyline(fil, false);
  for (auto z : K.points())
    svg += "<circle cx=\"" + detail::fmt(sx(z.real())) + "\" cy=\"" + detail::fmt(sy(z.imag())) +
           "\" r=\"2.5\" fill=\"#ffffff\"/>\n";
  for (auto z : roots) {
    double x = sx(z.real()), y = sy(z.imag());
    if (x < 0 || x > px || y < 0 || y > px) continue;
    svg += "<path d=\"M" + detail::fmt(x - 4) + "," + detail::fmt(y - 4) + " L" + detail::fmt(x + 4) + "," +
           detail::fmt(y + 4) + " M" + detail::fmt(x - 4) + "," + detail::fmt(y + 4) + " L" + detail::fmt(x + 4) + "," +
           detail::fmt(y - 4) + "\" stroke=\"#00ff66\" stroke-width=\"2\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace nonvanish
