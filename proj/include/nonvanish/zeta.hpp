#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>

#include "nonvanish/contour.hpp"
#include "nonvanish/error.hpp"

namespace nonvanish {

/// Riemann zeta by Euler-Maclaurin summation.
///
/// The truncation point grows with the height: N = max(terms, ceil(|Im s|)),
/// which keeps the Bernoulli remainder below ~1e-12 up to the height cap.
struct ZetaEvaluator {
  int terms = 64;
  int bernoulli_order = 8;
  double sigma_min = 0.25;
  double t_max = 1000.0;

  static constexpr int kMaxBernoulliOrder = 12;

  /// Unchecked evaluation (valid for Re s > 1 - 2 M - 1 away from the pole).
  complex operator()(complex s) const {
    static constexpr std::array<double, kMaxBernoulliOrder> b2k{
        1.0 / 6.0,          -1.0 / 30.0,   1.0 / 42.0,      -1.0 / 30.0,
        5.0 / 66.0,         -691.0 / 2730.0, 7.0 / 6.0,     -3617.0 / 510.0,
        43867.0 / 798.0,    -174611.0 / 330.0, 854513.0 / 138.0, -236364091.0 / 2730.0};
    const int n_terms = std::max(terms, static_cast<int>(std::ceil(std::abs(s.imag()))));
    const int order = std::clamp(bernoulli_order, 0, kMaxBernoulliOrder);
    complex sum = 0.0;
    for (int n = n_terms - 1; n >= 1; --n) {
      double ln = std::log(static_cast<double>(n));
      sum += std::polar(std::exp(-s.real() * ln), -s.imag() * ln);
    }
    const double N = n_terms;
    const double lnN = std::log(N);
    const complex n_pow = std::polar(std::exp(-s.real() * lnN), -s.imag() * lnN);  // N^{-s}
    sum += N * n_pow / (s - 1.0) + 0.5 * n_pow;
    // Remainder terms B_{2k}/(2k)! * s(s+1)...(s+2k-2) * N^{1-s-2k}.
    complex rising = s;
    complex power = n_pow / N;  // N^{-s-1}
    double factorial = 2.0;     // (2k)!
    for (int k = 1; k <= order; ++k) {
      sum += b2k[static_cast<std::size_t>(k - 1)] / factorial * rising * power;
      rising *= (s + (2.0 * k - 1.0)) * (s + 2.0 * k);
      power /= N * N;
      factorial *= (2.0 * k + 1.0) * (2.0 * k + 2.0);
    }
    return sum;
  }

  void check(complex s) const {
    if (std::abs(s - 1.0) < 1e-8) throw Error(ErrorCode::PoleProximity, "s is within 1e-8 of the pole at 1");
    if (!(s.real() > sigma_min) || !(std::abs(s.imag()) <= t_max))
      throw Error(ErrorCode::OutOfValidity, "s = " + std::to_string(s.real()) + (s.imag() < 0 ? "" : "+") +
                                                std::to_string(s.imag()) + "i is outside the evaluator's validity region");
  }
};

/// Checked evaluation.
inline complex zeta(const ZetaEvaluator& ev, complex s) {
  ev.check(s);
  return ev(s);
}

/// Zeros of zeta inside the rectangle via the argument principle.
inline ZeroCountResult count_zeros_rectangle(const ZetaEvaluator& ev, const Rectangle& rect,
                                             const ZeroCountOptions& opt = {}) {
  // Only the requested contour is pre-checked; a perturbed retry that leaves
  // the valid region is reported by the evaluator itself.
  const double pad = 2.0 * opt.derivative_step * (1.0 + std::abs(complex{rect.sigma_max, rect.t_max}));
  ev.check({rect.sigma_min - pad, rect.t_min - pad});
  ev.check({rect.sigma_max + pad, rect.t_max + pad});
  if (rect.sigma_min - pad <= 1.0 && rect.sigma_max + pad >= 1.0 && rect.t_min - pad <= 0.0 && rect.t_max + pad >= 0.0)
    throw Error(ErrorCode::PoleProximity, "rectangle contains the pole at s = 1");
  return count_zeros([&ev](complex s) { return ev(s); }, rect, opt);
}

/// Exponent a(sigma) = 3(1-sigma)/(2-sigma) of the zero-density bound N(sigma,T) << T^a log^5 T.
inline double ingham_exponent(double sigma) {
  if (!(sigma > 0.5 && sigma < 1.0)) throw Error(ErrorCode::DomainError, "sigma must lie in (1/2, 1)");
  return 3.0 * (1.0 - sigma) / (2.0 - sigma);
}

struct Fraction {
  long long num = 0, den = 1;
  friend bool operator==(const Fraction&, const Fraction&) = default;
};

/// Exact exponent for rational sigma = p/q: 3(q-p)/(2q-p) in lowest terms.
inline Fraction ingham_exponent(long long p, long long q) {
  if (q <= 0 || !(2 * p > q && p < q)) throw Error(ErrorCode::DomainError, "sigma must lie in (1/2, 1)");
  long long num = 3 * (q - p), den = 2 * q - p;
  long long g = std::gcd(num, den);
  return {num / g, den / g};
}

}  // namespace nonvanish
