#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "nonvanish/error.hpp"

namespace nonvanish {

using complex = std::complex<double>;

/// Dense polynomial over C, coefficients in ascending degree.
///
/// The coefficient vector is trimmed so the leading coefficient is nonzero;
/// the zero polynomial is stored as a single 0 coefficient and reports
/// degree 0 with is_zero() == true.
class ComplexPolynomial {
 public:
  ComplexPolynomial() : coeffs_{complex{0.0}} {}

  explicit ComplexPolynomial(std::vector<complex> coeffs) : coeffs_(std::move(coeffs)) {
    while (coeffs_.size() > 1 && coeffs_.back() == complex{0.0}) coeffs_.pop_back();
    if (coeffs_.empty()) coeffs_.push_back(0.0);
  }

  static ComplexPolynomial constant(complex c) { return ComplexPolynomial({c}); }
  static ComplexPolynomial monomial(int k, complex c = 1.0) {
    std::vector<complex> v(static_cast<std::size_t>(k) + 1, 0.0);
    v.back() = c;
    return ComplexPolynomial(std::move(v));
  }

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == complex{0.0}; }
  std::span<const complex> coefficients() const { return coeffs_; }
  complex coefficient(int k) const {
    return k >= 0 && k <= degree() ? coeffs_[static_cast<std::size_t>(k)] : complex{0.0};
  }
  complex leading() const { return coeffs_.back(); }

  /// Horner evaluation.
  complex operator()(complex z) const {
    complex acc = coeffs_.back();
    for (auto it = coeffs_.rbegin() + 1; it != coeffs_.rend(); ++it) acc = acc * z + *it;
    return acc;
  }

  /// Value and first derivative in one Horner pass.
  std::pair<complex, complex> value_and_derivative(complex z) const {
    complex p = coeffs_.back();
    complex dp = 0.0;
    for (auto it = coeffs_.rbegin() + 1; it != coeffs_.rend(); ++it) {
      dp = dp * z + p;
      p = p * z + *it;
    }
    return {p, dp};
  }

  ComplexPolynomial derivative() const {
    if (degree() == 0) return {};
    std::vector<complex> d(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = static_cast<double>(k) * coeffs_[k];
    return ComplexPolynomial(std::move(d));
  }

  /// q(z) = p(a z + b), by Horner in polynomial arithmetic.
  ComplexPolynomial compose_affine(complex a, complex b) const {
    std::vector<complex> acc{coeffs_.back()};
    for (auto it = coeffs_.rbegin() + 1; it != coeffs_.rend(); ++it) {
      std::vector<complex> next(acc.size() + 1, 0.0);
      for (std::size_t k = 0; k < acc.size(); ++k) {
        next[k] += acc[k] * b;
        next[k + 1] += acc[k] * a;
      }
      next[0] += *it;
      acc = std::move(next);
    }
    return ComplexPolynomial(std::move(acc));
  }

  /// Drops trailing coefficients that are negligible on the disc |z - center| <= radius
  /// relative to the largest term there.
  ComplexPolynomial trimmed(double rel_tol, double radius = 1.0) const {
    double biggest = 0.0;
    double rk = 1.0;
    for (const auto& c : coeffs_) {
      biggest = std::max(biggest, std::abs(c) * rk);
      rk *= radius;
    }
    std::vector<complex> v = coeffs_;
    while (v.size() > 1 && std::abs(v.back()) * std::pow(radius, static_cast<double>(v.size() - 1)) <=
                               rel_tol * biggest)
      v.pop_back();
    return ComplexPolynomial(std::move(v));
  }

  friend ComplexPolynomial operator+(const ComplexPolynomial& a, const ComplexPolynomial& b) {
    std::vector<complex> v(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
    for (std::size_t k = 0; k < a.coeffs_.size(); ++k) v[k] += a.coeffs_[k];
    for (std::size_t k = 0; k < b.coeffs_.size(); ++k) v[k] += b.coeffs_[k];
    return ComplexPolynomial(std::move(v));
  }
  friend ComplexPolynomial operator-(const ComplexPolynomial& a, const ComplexPolynomial& b) {
    return a + b * complex{-1.0};
  }
  friend ComplexPolynomial operator*(const ComplexPolynomial& a, const ComplexPolynomial& b) {
    std::vector<complex> v(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) v[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return ComplexPolynomial(std::move(v));
  }
  friend ComplexPolynomial operator*(const ComplexPolynomial& a, complex s) {
    std::vector<complex> v = a.coeffs_;
    for (auto& c : v) c *= s;
    return ComplexPolynomial(std::move(v));
  }

  friend bool operator==(const ComplexPolynomial&, const ComplexPolynomial&) = default;

 private:
  std::vector<complex> coeffs_;
};

/// Roots with multiplicity plus the leading coefficient: c0 * prod (z - r).
struct RootSet {
  std::vector<complex> roots;
  complex leading_coefficient{1.0};
};

inline complex evaluate(const ComplexPolynomial& p, complex z) { return p(z); }

inline ComplexPolynomial from_roots(const RootSet& r) {
  std::vector<complex> c{r.leading_coefficient};
  for (const auto& root : r.roots) {
    std::vector<complex> next(c.size() + 1, 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) {
      next[k + 1] += c[k];
      next[k] -= c[k] * root;
    }
    c = std::move(next);
  }
  return ComplexPolynomial(std::move(c));
}

struct RootFinderOptions {
  int max_iterations = 200;
  double tolerance = 1e-12;
  int degree_cap = 64;
};

/// All roots of p by Aberth-Ehrlich simultaneous iteration.
///
/// Convergence per root: the Newton correction falls below tolerance*(1+|z|)
/// or |p(z)| reaches the rounding floor sum |c_k||z|^k * 8u. Clustered
/// (multiple) roots converge linearly and are reported as separate nearby
/// values.
inline RootSet find_roots(const ComplexPolynomial& p, const RootFinderOptions& opt = {}) {
  const int n = p.degree();
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "find_roots requires degree >= 1");
  if (n > opt.degree_cap)
    throw Error(ErrorCode::DegreeCapExceeded,
                "degree " + std::to_string(n) + " exceeds cap " + std::to_string(opt.degree_cap));
  const auto c = p.coefficients();
  RootSet out;
  out.leading_coefficient = p.leading();

  // Exact zeros at the origin are peeled off first.
  int zeros_at_origin = 0;
  while (zeros_at_origin < n && c[static_cast<std::size_t>(zeros_at_origin)] == complex{0.0}) ++zeros_at_origin;
  std::vector<complex> reduced(c.begin() + zeros_at_origin, c.end());
  const int m = n - zeros_at_origin;
  for (int k = 0; k < zeros_at_origin; ++k) out.roots.emplace_back(0.0);
  if (m == 0) return out;

  ComplexPolynomial q(reduced);
  std::vector<double> abs_coeffs(reduced.size());
  for (std::size_t k = 0; k < reduced.size(); ++k) abs_coeffs[k] = std::abs(reduced[k]);
  auto rounding_floor = [&](complex z) {
    double az = std::abs(z), acc = 0.0;
    for (auto it = abs_coeffs.rbegin(); it != abs_coeffs.rend(); ++it) acc = acc * az + *it;
    return 8.0 * std::numeric_limits<double>::epsilon() * acc;
  };

  // Initial guesses on a circle of the geometric-mean root radius, rotated off the axes.
  const double radius = std::pow(std::abs(reduced.front() / reduced.back()), 1.0 / m);
  std::vector<complex> z(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k)
    z[static_cast<std::size_t>(k)] = std::polar(radius, 2.0 * std::numbers::pi * k / m + 0.4);
  std::vector<bool> done(static_cast<std::size_t>(m), false);

  for (int iter = 0; iter < opt.max_iterations; ++iter) {
    bool all_done = true;
    for (int k = 0; k < m; ++k) {
      auto ku = static_cast<std::size_t>(k);
      if (done[ku]) continue;
      auto [val, der] = q.value_and_derivative(z[ku]);
      if (std::abs(val) <= rounding_floor(z[ku])) {
        done[ku] = true;
        continue;
      }
      complex ratio = val / der;
      complex repulsion = 0.0;
      for (int j = 0; j < m; ++j)
        if (j != k) repulsion += 1.0 / (z[ku] - z[static_cast<std::size_t>(j)]);
      complex step = ratio / (1.0 - ratio * repulsion);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) step = ratio;
      z[ku] -= step;
      if (std::abs(step) <= opt.tolerance * (1.0 + std::abs(z[ku]))) done[ku] = true;
      else all_done = false;
    }
    if (all_done) {
      for (auto r : z) out.roots.push_back(r);
      return out;
    }
  }
  throw Error(ErrorCode::NonConvergence,
              "Aberth iteration did not converge in " + std::to_string(opt.max_iterations) + " iterations");
}

/// max |p(z)| over the samples.
inline double sup_norm(const ComplexPolynomial& p, std::span<const complex> samples) {
  if (samples.empty()) throw Error(ErrorCode::EmptySampleSet, "sup_norm needs at least one sample");
  double best = 0.0;
  for (auto z : samples) best = std::max(best, std::abs(p(z)));
  return best;
}

}  // namespace nonvanish
