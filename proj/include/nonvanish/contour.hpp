#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "nonvanish/error.hpp"

namespace nonvanish {

using complex = std::complex<double>;
using AnalyticFunction = std::function<complex(complex)>;

/// Rectangle [sigma_min, sigma_max] x [t_min, t_max] in the complex plane.
struct Rectangle {
  double sigma_min = 0.0, sigma_max = 0.0, t_min = 0.0, t_max = 0.0;

  Rectangle expanded(double m) const { return {sigma_min - m, sigma_max + m, t_min - m, t_max + m}; }
  double perimeter() const { return 2.0 * ((sigma_max - sigma_min) + (t_max - t_min)); }
};

struct ZeroCountResult {
  Rectangle rectangle;
  int count = 0;
  int contour_samples = 0;
  double winding_residual = 0.0;
};

struct ZeroCountOptions {
  int initial_samples_per_edge = 16;
  int max_refinements = 12;
  double derivative_step = 1e-6;
  int perturbation_retries = 3;
  double max_residual = 0.1;
};

namespace detail {

inline std::vector<complex> rectangle_contour(const Rectangle& r, int per_edge) {
  const std::array<complex, 4> corners{complex{r.sigma_min, r.t_min}, complex{r.sigma_max, r.t_min},
                                       complex{r.sigma_max, r.t_max}, complex{r.sigma_min, r.t_max}};
  std::vector<complex> pts;
  pts.reserve(static_cast<std::size_t>(4 * per_edge) + 1);
  for (int e = 0; e < 4; ++e)
    for (int k = 0; k < per_edge; ++k)
      pts.push_back(corners[static_cast<std::size_t>(e)] +
                    (corners[static_cast<std::size_t>((e + 1) % 4)] - corners[static_cast<std::size_t>(e)]) *
                        (static_cast<double>(k) / per_edge));
  pts.push_back(corners[0]);
  return pts;
}

}  // namespace detail

/// Number of zeros of an analytic F inside a rectangle: trapezoid rule for
/// the contour integral of F'/F (F' by central differences), refined by
/// doubling until the integral is within max_residual of 2 pi i n and two
/// consecutive refinements agree. A contour hitting a zero is nudged
/// outward and retried.
inline ZeroCountResult count_zeros(const AnalyticFunction& f, const Rectangle& rect,
                                   const ZeroCountOptions& opt = {}) {
  if (!(rect.sigma_max > rect.sigma_min && rect.t_max > rect.t_min))
    throw Error(ErrorCode::InvalidArgument, "degenerate rectangle");
  const double nudge = 1e-3 * std::max(rect.sigma_max - rect.sigma_min, rect.t_max - rect.t_min);
  for (int attempt = 0; attempt <= opt.perturbation_retries; ++attempt) {
    Rectangle r = rect.expanded(attempt * nudge);
    std::optional<int> previous;
    bool hit_zero = false;
    double residual = 0.0;
    int per_edge = opt.initial_samples_per_edge;
    for (int level = 0; level <= opt.max_refinements; ++level, per_edge *= 2) {
      auto pts = detail::rectangle_contour(r, per_edge);
      std::vector<complex> integrand(pts.size());
      double fmax = 0.0, fmin = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < pts.size(); ++k) {
        complex z = pts[k];
        double h = opt.derivative_step * std::max(1.0, std::abs(z));
        complex fz = f(z);
        complex df = (f(z + h) - f(z - h)) / (2.0 * h);
        fmax = std::max(fmax, std::abs(fz));
        fmin = std::min(fmin, std::abs(fz));
        integrand[k] = df / fz;
      }
      if (!(fmin > 1e-12 * std::max(1.0, fmax))) {
        hit_zero = true;
        break;
      }
      complex integral = 0.0;
      for (std::size_t k = 0; k + 1 < pts.size(); ++k)
        integral += 0.5 * (integrand[k] + integrand[k + 1]) * (pts[k + 1] - pts[k]);
      const double two_pi = 2.0 * std::numbers::pi;
      int count = static_cast<int>(std::lround(integral.imag() / two_pi));
      residual = std::abs(integral - complex{0.0, two_pi * count});
      if (residual <= opt.max_residual && previous && *previous == count)
        return {r, count, static_cast<int>(pts.size()) - 1, residual};
      previous = count;
    }
    if (!hit_zero)
      throw Error(ErrorCode::WindingResidual,
                  "winding integral did not settle (residual " + std::to_string(residual) + ")");
  }
  throw Error(ErrorCode::ContourThroughZero, "contour passes through a zero after perturbation retries");
}

/// Winding number of the closed curve tau -> g(tau), tau in [0, 2 pi), around
/// 0, by accumulating argument increments with adaptive bisection wherever
/// an increment exceeds pi/4. Returns nullopt when g vanishes on the curve
/// or the curve cannot be resolved.
inline std::optional<int> winding_number(const std::function<complex(double)>& g, int initial_samples = 256,
                                         int max_depth = 24) {
  const double two_pi = 2.0 * std::numbers::pi;
  double total = 0.0;
  bool failed = false;
  std::function<void(double, complex, double, complex, int)> walk = [&](double a, complex ga, double b, complex gb,
                                                                         int depth) {
    if (failed) return;
    double inc = std::arg(gb / ga);
    if (std::abs(inc) <= std::numbers::pi / 4.0) {
      total += inc;
      return;
    }
    if (depth >= max_depth) {
      failed = true;
      return;
    }
    double m = 0.5 * (a + b);
    complex gm = g(m);
    if (gm == complex{0.0} || !std::isfinite(std::abs(gm))) {
      failed = true;
      return;
    }
    walk(a, ga, m, gm, depth + 1);
    walk(m, gm, b, gb, depth + 1);
  };
  std::vector<complex> vals(static_cast<std::size_t>(initial_samples) + 1);
  for (int k = 0; k < initial_samples; ++k) {
    vals[static_cast<std::size_t>(k)] = g(two_pi * k / initial_samples);
    if (vals[static_cast<std::size_t>(k)] == complex{0.0} || !std::isfinite(std::abs(vals[static_cast<std::size_t>(k)])))
      return std::nullopt;
  }
  vals.back() = vals.front();
  for (int k = 0; k < initial_samples; ++k)
    walk(two_pi * k / initial_samples, vals[static_cast<std::size_t>(k)], two_pi * (k + 1) / initial_samples,
         vals[static_cast<std::size_t>(k) + 1], 0);
  if (failed) return std::nullopt;
  return static_cast<int>(std::lround(total / two_pi));
}

}  // namespace nonvanish
