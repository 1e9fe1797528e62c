#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <span>

namespace nonvanish {

using complex = std::complex<double>;

/// Axis-aligned rectangle.
struct Box {
  double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;

  static Box empty() {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return {inf, -inf, inf, -inf};
  }
  bool is_empty() const { return xmin > xmax; }
  void include(complex z) {
    xmin = std::min(xmin, z.real());
    xmax = std::max(xmax, z.real());
    ymin = std::min(ymin, z.imag());
    ymax = std::max(ymax, z.imag());
  }
  void include(const Box& b) {
    if (b.is_empty()) return;
    include(complex{b.xmin, b.ymin});
    include(complex{b.xmax, b.ymax});
  }
  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  double diagonal() const { return std::hypot(width(), height()); }
  complex center() const { return {0.5 * (xmin + xmax), 0.5 * (ymin + ymax)}; }
  Box expanded(double margin) const { return {xmin - margin, xmax + margin, ymin - margin, ymax + margin}; }
  /// Euclidean distance from z to the box (0 inside).
  double distance(complex z) const {
    double dx = std::max({xmin - z.real(), 0.0, z.real() - xmax});
    double dy = std::max({ymin - z.imag(), 0.0, z.imag() - ymax});
    return std::hypot(dx, dy);
  }
  bool overlaps(const Box& b) const {
    return !(b.xmin > xmax || b.xmax < xmin || b.ymin > ymax || b.ymax < ymin);
  }
};

namespace detail {

inline double cross(complex a, complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

struct SegmentProjection {
  complex point;
  double t;  // position along the segment in [0, 1]
  double distance;
};

inline SegmentProjection project_onto_segment(complex a, complex b, complex z) {
  complex ab = b - a;
  double len2 = std::norm(ab);
  double t = len2 > 0.0 ? std::clamp(((z - a) * std::conj(ab)).real() / len2, 0.0, 1.0) : 0.0;
  complex p = a + t * ab;
  return {p, t, std::abs(z - p)};
}

inline int orientation_sign(complex a, complex b, complex c) {
  double v = cross(b - a, c - a);
  double scale = std::abs(b - a) * std::abs(c - a);
  if (std::abs(v) <= 1e-14 * scale) return 0;
  return v > 0 ? 1 : -1;
}

inline bool on_segment(complex a, complex b, complex p) {
  return std::min(a.real(), b.real()) - 1e-15 <= p.real() && p.real() <= std::max(a.real(), b.real()) + 1e-15 &&
         std::min(a.imag(), b.imag()) - 1e-15 <= p.imag() && p.imag() <= std::max(a.imag(), b.imag()) + 1e-15;
}

/// Closed-segment intersection test (touching counts).
inline bool segments_intersect(complex a, complex b, complex c, complex d) {
  int o1 = orientation_sign(a, b, c), o2 = orientation_sign(a, b, d);
  int o3 = orientation_sign(c, d, a), o4 = orientation_sign(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

/// Signed shoelace area of a closed polygon (positive when counter-clockwise).
inline double signed_area(std::span<const complex> v) {
  double a = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) a += cross(v[i], v[(i + 1) % v.size()]);
  return 0.5 * a;
}

/// Winding number of a closed polygon around z (nonzero means inside).
inline int winding_number(std::span<const complex> v, complex z) {
  int wn = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    complex a = v[i], b = v[(i + 1) % v.size()];
    if (a.imag() <= z.imag()) {
      if (b.imag() > z.imag() && cross(b - a, z - a) > 0) ++wn;
    } else if (b.imag() <= z.imag() && cross(b - a, z - a) < 0) {
      --wn;
    }
  }
  return wn;
}

/// Golden-section minimization of a unimodal function on [lo, hi].
template <class F>
double golden_section_minimize(F&& f, double lo, double hi, int iterations = 80) {
  constexpr double inv_phi = 0.6180339887498949;
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iterations && hi - lo > 1e-16 * (1.0 + std::abs(lo)); ++i) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    }
  }
  return f1 < f2 ? x1 : x2;
}

}  // namespace detail
}  // namespace nonvanish
