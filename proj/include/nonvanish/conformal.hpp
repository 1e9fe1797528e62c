#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "nonvanish/detail/fft.hpp"
#include "nonvanish/error.hpp"
#include "nonvanish/region.hpp"

namespace nonvanish {

enum class MapKind { affine_disc, starlike_theodorsen };

struct TheodorsenOptions {
  int grid = 1024;
  int max_iterations = 500;
  double tolerance = 1e-14;
};

/// Conformal map phi from the closed unit disc onto the closure of a Jordan
/// component, normalized by phi(0) = anchor and phi'(0) > 0.
///
/// For star-like components phi(w) = c + w exp(G(w)) with G a truncated
/// Taylor series obtained from Theodorsen's boundary correspondence
/// theta(tau) = tau + psi(tau), psi = K[log r(theta)].
class ConformalMap {
 public:
  MapKind kind() const { return kind_; }
  complex anchor() const { return center_; }
  /// Certified bound from the construction test grid (roundtrip and boundary fidelity).
  double accuracy() const { return accuracy_; }
  int component_id() const { return component_id_; }
  const std::vector<double>& table_tau() const { return tau_; }
  const std::vector<double>& table_theta() const { return theta_; }
  const std::vector<complex>& series() const { return series_; }

  complex forward(complex w) const {
    if (kind_ == MapKind::affine_disc) return center_ + radius_ * w;
    return center_ + w * std::exp(eval_series(w));
  }

  complex derivative(complex w) const {
    if (kind_ == MapKind::affine_disc) return radius_;
    complex g = 0.0, dg = 0.0;
    for (auto it = series_.rbegin(); it != series_.rend(); ++it) {
      dg = dg * w + g;
      g = g * w + *it;
    }
    return std::exp(g) * (1.0 + w * dg);
  }

  /// phi^{-1}(z): Newton on the forward map seeded from the correspondence table.
  complex inverse(complex z) const {
    if (kind_ == MapKind::affine_disc) {
      complex w = (z - center_) / radius_;
      double m = std::abs(w);
      if (m > 1.0 && m < 1.0 + 1e-12) w /= m;
      return w;
    }
    complex d = z - center_;
    if (d == complex{0.0}) return 0.0;
    double theta = std::arg(d);
    double rho = std::abs(d) / profile_(theta);
    complex w = std::polar(std::min(rho, 1.0), tau_of_theta(theta));
    const double scale = std::max(1.0, std::abs(d));
    for (int it = 0; it < 60; ++it) {
      complex step = (forward(w) - z) / derivative(w);
      w -= step;
      if (std::abs(step) <= 1e-15 * (1.0 + std::abs(w))) break;
    }
    if (!(std::abs(forward(w) - z) <= 1e-11 * scale))
      throw Error(ErrorCode::InverseNonConvergence, "Newton inversion of the conformal map did not converge");
    double m = std::abs(w);
    if (m > 1.0) {
      if (m > 1.0 + 1e-8)
        throw Error(ErrorCode::InverseNonConvergence, "point lies outside the mapped domain");
      w /= m;
    }
    return w;
  }

  /// Boundary correspondence: tau with theta(tau) = theta (linear interpolation of the table).
  double tau_of_theta(double theta) const {
    if (kind_ == MapKind::affine_disc) return theta;
    const double two_pi = 2.0 * std::numbers::pi;
    theta -= two_pi * std::floor((theta - theta_.front()) / two_pi);
    auto it = std::upper_bound(theta_.begin(), theta_.end(), theta);
    std::size_t i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - theta_.begin() - 1, 0));
    double t0 = theta_[i], t1 = i + 1 < theta_.size() ? theta_[i + 1] : theta_.front() + two_pi;
    double u0 = tau_[i], u1 = i + 1 < tau_.size() ? tau_[i + 1] : two_pi;
    return u0 + (u1 - u0) * (theta - t0) / (t1 - t0);
  }

 private:
  friend ConformalMap disc_to_domain(const JordanComponent&, const TheodorsenOptions&);

  complex eval_series(complex w) const {
    complex g = 0.0;
    for (auto it = series_.rbegin(); it != series_.rend(); ++it) g = g * w + *it;
    return g;
  }

  MapKind kind_ = MapKind::affine_disc;
  int component_id_ = 0;
  complex center_{0.0};
  double radius_ = 1.0;
  std::function<double(double)> profile_;
  std::vector<complex> series_;
  std::vector<double> tau_, theta_;
  double accuracy_ = 0.0;
};

namespace detail {

inline double certify_map(const ConformalMap& map, const JordanComponent& comp) {
  double worst = 0.0;
  for (int k = 0; k < 512; ++k) {
    double t = 2.0 * std::numbers::pi * k / 512.0;
    complex zb = comp.point_at(static_cast<double>(k) / 512.0);
    worst = std::max(worst, std::abs(map.forward(map.inverse(zb)) - zb));
    complex img = map.forward(std::polar(1.0, t));
    complex d = img - comp.center();
    worst = std::max(worst, std::abs(std::abs(d) - comp.profile(std::arg(d))));
  }
  return std::max(worst, 1e-16);
}

}  // namespace detail

/// Numerical Riemann map of the unit disc onto a disc or star-like component.
inline ConformalMap disc_to_domain(const JordanComponent& comp, const TheodorsenOptions& opt = {}) {
  ConformalMap map;
  map.component_id_ = comp.id();
  map.center_ = comp.center();
  if (comp.kind() == ComponentKind::disc) {
    map.kind_ = MapKind::affine_disc;
    map.radius_ = comp.radius();
    map.accuracy_ = detail::certify_map(map, comp);
    return map;
  }
  if (comp.kind() != ComponentKind::starlike)
    throw Error(ErrorCode::UnsupportedGeometry, "conformal maps are available for discs and star-like components only");

  map.kind_ = MapKind::starlike_theodorsen;
  map.profile_ = [comp](double theta) { return comp.profile(theta); };
  const int n = opt.grid;
  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<double> tau(static_cast<std::size_t>(n)), psi(static_cast<std::size_t>(n), 0.0),
      logr(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) tau[static_cast<std::size_t>(j)] = two_pi * j / n;

  bool converged = false;
  for (int it = 0; it < opt.max_iterations; ++it) {
    for (std::size_t j = 0; j < tau.size(); ++j) logr[j] = std::log(comp.profile(tau[j] + psi[j]));
    auto next = detail::conjugate_function(logr);
    double change = 0.0;
    for (std::size_t j = 0; j < tau.size(); ++j) change = std::max(change, std::abs(next[j] - psi[j]));
    psi = std::move(next);
    if (!std::isfinite(change)) break;
    if (change <= opt.tolerance) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw Error(ErrorCode::TheodorsenDivergence,
                "boundary correspondence iteration failed to converge in " + std::to_string(opt.max_iterations) +
                    " iterations");
  for (std::size_t j = 0; j < tau.size(); ++j) logr[j] = std::log(comp.profile(tau[j] + psi[j]));

  // G(w) = g0 + sum_{k>=1} 2 uhat_k w^k where uhat are the Fourier modes of log r(theta(tau)).
  std::vector<complex> modes(logr.begin(), logr.end());
  detail::fft(modes, -1);
  map.series_.assign(static_cast<std::size_t>(n / 2), 0.0);
  map.series_[0] = modes[0].real() / n;
  double biggest = std::abs(map.series_[0]);
  for (int k = 1; k < n / 2; ++k) {
    map.series_[static_cast<std::size_t>(k)] = 2.0 * modes[static_cast<std::size_t>(k)] / static_cast<double>(n);
    biggest = std::max(biggest, std::abs(map.series_[static_cast<std::size_t>(k)]));
  }
  while (map.series_.size() > 1 && std::abs(map.series_.back()) < 1e-17 * std::max(biggest, 1.0)) map.series_.pop_back();

  map.tau_ = tau;
  map.theta_.resize(tau.size());
  for (std::size_t j = 0; j < tau.size(); ++j) map.theta_[j] = tau[j] + psi[j];
  map.accuracy_ = detail::certify_map(map, comp);
  return map;
}

inline complex inverse_point(const ConformalMap& map, complex w) { return map.inverse(w); }

/// z -> phi((1 - xi) phi^{-1}(z)): pulls the closure strictly inside the domain.
inline std::function<complex(complex)> radial_precompose(const ConformalMap& map, double xi) {
  if (!(xi > 0.0 && xi < 1.0)) throw Error(ErrorCode::InvalidArgument, "xi must lie in (0, 1)");
  return [map, xi](complex z) { return map.forward((1.0 - xi) * map.inverse(z)); };
}

}  // namespace nonvanish
