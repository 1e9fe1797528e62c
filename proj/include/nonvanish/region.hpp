#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "nonvanish/detail/geometry.hpp"
#include "nonvanish/error.hpp"

namespace nonvanish {

enum class ComponentKind { disc, polygon, starlike };

/// Nearest point on a component boundary.
struct BoundaryPoint {
  complex point;
  double parameter;  // boundary parameter in [0, 1)
  double distance;
};

/// Closure of one Jordan domain of K: a disc, a simple polygon, or a
/// star-like domain r(theta) = a0 + sum a_k cos k theta + b_k sin k theta
/// around a center. The boundary is positively oriented and parametrized
/// by s in [0, 1).
class JordanComponent {
 public:
  static constexpr int kPolylineSize = 2048;

  static JordanComponent disc(int id, complex center, double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius))
      throw Error(ErrorCode::InvalidRegion, "disc radius must be positive");
    JordanComponent c(ComponentKind::disc, id);
    c.center_ = center;
    c.radius_ = radius;
    c.build_polyline();
    return c;
  }

  static JordanComponent polygon(int id, std::vector<complex> vertices) {
    if (vertices.size() >= 2 && vertices.front() == vertices.back()) vertices.pop_back();
    if (vertices.size() < 3) throw Error(ErrorCode::InvalidRegion, "polygon needs at least 3 vertices");
    double area = detail::signed_area(vertices);
    if (area < 0.0) {
      std::reverse(vertices.begin(), vertices.end());
      area = -area;
    }
    if (!(area > 1e-12)) throw Error(ErrorCode::InvalidRegion, "polygon encloses no area");
    const std::size_t n = vertices.size();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
        if (adjacent) continue;
        if (detail::segments_intersect(vertices[i], vertices[(i + 1) % n], vertices[j], vertices[(j + 1) % n]))
          throw Error(ErrorCode::InvalidRegion,
                      "polygon boundary is not simple (segments " + std::to_string(i) + " and " +
                          std::to_string(j) + " intersect)");
      }
    JordanComponent c(ComponentKind::polygon, id);
    c.polyline_ = std::move(vertices);
    complex centroid = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      complex a = c.polyline_[i], b = c.polyline_[(i + 1) % n];
      centroid += (a + b) * detail::cross(a, b);
    }
    c.center_ = centroid / (6.0 * area);
    c.finish_polyline();
    return c;
  }

  static JordanComponent starlike(int id, complex center, std::vector<double> fourier_cos,
                                  std::vector<double> fourier_sin) {
    if (fourier_cos.empty()) throw Error(ErrorCode::InvalidRegion, "starlike profile needs a0");
    JordanComponent c(ComponentKind::starlike, id);
    c.center_ = center;
    c.fourier_cos_ = std::move(fourier_cos);
    c.fourier_sin_ = std::move(fourier_sin);
    for (int j = 0; j < 4096; ++j) {
      double r = c.profile(2.0 * std::numbers::pi * j / 4096.0);
      if (!(r > 0.0)) throw Error(ErrorCode::InvalidRegion, "starlike profile must stay positive");
    }
    c.build_polyline();
    return c;
  }

  ComponentKind kind() const { return kind_; }
  int id() const { return id_; }
  complex center() const { return center_; }
  double radius() const { return radius_; }
  const std::vector<double>& fourier_cos() const { return fourier_cos_; }
  const std::vector<double>& fourier_sin() const { return fourier_sin_; }
  /// Polygon vertices, or a dense boundary polyline for curved components.
  const std::vector<complex>& polyline() const { return polyline_; }
  const Box& bounds() const { return bounds_; }
  double perimeter() const { return perimeter_; }

  /// Radial profile about center(); constant for discs.
  double profile(double theta) const {
    if (kind_ == ComponentKind::disc) return radius_;
    double r = fourier_cos_[0];
    for (std::size_t k = 1; k < fourier_cos_.size(); ++k) r += fourier_cos_[k] * std::cos(k * theta);
    for (std::size_t k = 0; k < fourier_sin_.size(); ++k) r += fourier_sin_[k] * std::sin((k + 1) * theta);
    return r;
  }
  double profile_derivative(double theta) const {
    if (kind_ == ComponentKind::disc) return 0.0;
    double d = 0.0;
    for (std::size_t k = 1; k < fourier_cos_.size(); ++k)
      d -= fourier_cos_[k] * static_cast<double>(k) * std::sin(k * theta);
    for (std::size_t k = 0; k < fourier_sin_.size(); ++k)
      d += fourier_sin_[k] * static_cast<double>(k + 1) * std::cos((k + 1) * theta);
    return d;
  }

  complex point_at(double s) const {
    s -= std::floor(s);
    if (kind_ == ComponentKind::polygon) {
      double target = s * perimeter_;
      auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
      std::size_t i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - cumulative_.begin() - 1, 0));
      i = std::min(i, polyline_.size() - 1);
      double seg = cumulative_[i + 1] - cumulative_[i];
      double t = seg > 0.0 ? (target - cumulative_[i]) / seg : 0.0;
      return polyline_[i] + t * (polyline_[(i + 1) % polyline_.size()] - polyline_[i]);
    }
    double theta = 2.0 * std::numbers::pi * s;
    return center_ + profile(theta) * std::polar(1.0, theta);
  }

  /// Unit tangent in the direction of positive orientation.
  complex unit_tangent_at(double s) const {
    s -= std::floor(s);
    if (kind_ == ComponentKind::polygon) {
      const std::size_t n = polyline_.size();
      double target = s * perimeter_;
      for (std::size_t i = 0; i < n; ++i) {
        complex dir = polyline_[(i + 1) % n] - polyline_[i];
        dir /= std::abs(dir);
        if (std::abs(target - cumulative_[i]) <= 1e-12 * perimeter_) {
          complex prev = polyline_[i] - polyline_[(i + n - 1) % n];
          prev /= std::abs(prev);
          complex avg = prev + dir;
          return std::abs(avg) > 1e-12 ? avg / std::abs(avg) : dir;
        }
        if (target < cumulative_[i + 1]) return dir;
      }
      complex dir = polyline_[0] - polyline_[n - 1];
      return dir / std::abs(dir);
    }
    double theta = 2.0 * std::numbers::pi * s;
    complex t = complex{profile_derivative(theta), profile(theta)} * std::polar(1.0, theta);
    return t / std::abs(t);
  }

  /// Outward unit normal (right of the positively oriented tangent).
  complex outward_normal_at(double s) const { return unit_tangent_at(s) * complex{0.0, -1.0}; }

  /// Open-interior membership.
  bool inside(complex z) const {
    if (bounds_.distance(z) > 0.0) return false;
    switch (kind_) {
      case ComponentKind::disc: return std::abs(z - center_) < radius_;
      case ComponentKind::starlike: {
        complex d = z - center_;
        if (d == complex{0.0}) return true;
        return std::abs(d) < profile(std::arg(d));
      }
      case ComponentKind::polygon: {
        if (project(z).distance == 0.0) return false;
        return detail::winding_number(polyline_, z) != 0;
      }
    }
    return false;
  }

  BoundaryPoint project(complex z) const {
    if (kind_ == ComponentKind::disc) {
      complex d = z - center_;
      double theta = d == complex{0.0} ? 0.0 : std::arg(d);
      if (theta < 0) theta += 2.0 * std::numbers::pi;
      complex p = center_ + std::polar(radius_, theta);
      return {p, theta / (2.0 * std::numbers::pi), std::abs(std::abs(d) - radius_)};
    }
    const std::size_t n = polyline_.size();
    BoundaryPoint best{polyline_[0], 0.0, std::numeric_limits<double>::infinity()};
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < n; ++i) {
      auto pr = detail::project_onto_segment(polyline_[i], polyline_[(i + 1) % n], z);
      if (pr.distance < best.distance) {
        best_i = i;
        double seg = cumulative_[i + 1] - cumulative_[i];
        double s = kind_ == ComponentKind::polygon ? (cumulative_[i] + pr.t * seg) / perimeter_
                                                   : (static_cast<double>(i) + pr.t) / static_cast<double>(n);
        best = {pr.point, s >= 1.0 ? s - 1.0 : s, pr.distance};
      }
    }
    if (kind_ == ComponentKind::starlike) {
      // Polyline chords are refined on the true curve around the coarse winner.
      const double h = 1.0 / static_cast<double>(n);
      double lo = (static_cast<double>(best_i) - 1.0) * h, hi = (static_cast<double>(best_i) + 2.0) * h;
      double s = detail::golden_section_minimize([&](double t) { return std::norm(point_at(t) - z); }, lo, hi);
      complex p = point_at(s);
      double d = std::abs(p - z);
      if (d <= best.distance + 1e-15) {
        s -= std::floor(s);
        best = {p, s, d};
      }
    }
    return best;
  }

  double boundary_distance(complex z) const { return project(z).distance; }

  /// n samples equidistributed in arclength, starting at boundary parameter 0.
  std::vector<complex> boundary_samples(int n) const {
    std::vector<complex> out;
    out.reserve(static_cast<std::size_t>(std::max(n, 0)));
    if (n <= 0) return out;
    if (kind_ == ComponentKind::disc) {
      for (int k = 0; k < n; ++k) out.push_back(center_ + std::polar(radius_, 2.0 * std::numbers::pi * k / n));
      return out;
    }
    if (kind_ == ComponentKind::polygon) {
      for (int k = 0; k < n; ++k) out.push_back(point_at(static_cast<double>(k) / n));
      return out;
    }
    // Starlike: invert a fine cumulative-arclength table.
    const int m = static_cast<int>(arc_table_.size()) - 1;
    for (int k = 0; k < n; ++k) {
      double target = arc_table_.back() * k / n;
      auto it = std::upper_bound(arc_table_.begin(), arc_table_.end(), target);
      int i = std::clamp(static_cast<int>(it - arc_table_.begin()) - 1, 0, m - 1);
      double seg = arc_table_[static_cast<std::size_t>(i) + 1] - arc_table_[static_cast<std::size_t>(i)];
      double t = seg > 0.0 ? (target - arc_table_[static_cast<std::size_t>(i)]) / seg : 0.0;
      out.push_back(point_at((i + t) / m));
    }
    return out;
  }

  /// Points of a regular grid over the bounding box lying strictly inside.
  std::vector<complex> interior_grid(int resolution) const {
    std::vector<complex> out;
    if (resolution <= 0) return out;
    for (int i = 0; i < resolution; ++i)
      for (int j = 0; j < resolution; ++j) {
        complex z{bounds_.xmin + (i + 0.5) * bounds_.width() / resolution,
                  bounds_.ymin + (j + 0.5) * bounds_.height() / resolution};
        if (inside(z)) out.push_back(z);
      }
    return out;
  }

  double area() const {
    if (kind_ == ComponentKind::disc) return std::numbers::pi * radius_ * radius_;
    return detail::signed_area(polyline_);
  }

 private:
  JordanComponent(ComponentKind kind, int id) : kind_(kind), id_(id) {}

  void build_polyline() {
    polyline_.resize(kPolylineSize);
    for (int j = 0; j < kPolylineSize; ++j) polyline_[static_cast<std::size_t>(j)] = point_at(static_cast<double>(j) / kPolylineSize);
    finish_polyline();
    if (kind_ == ComponentKind::disc) {
      perimeter_ = 2.0 * std::numbers::pi * radius_;
      bounds_ = {center_.real() - radius_, center_.real() + radius_, center_.imag() - radius_, center_.imag() + radius_};
    }
    if (kind_ == ComponentKind::starlike) {
      const int m = 8 * kPolylineSize;
      arc_table_.assign(static_cast<std::size_t>(m) + 1, 0.0);
      complex prev = point_at(0.0);
      double rmax = 0.0;
      for (int j = 1; j <= m; ++j) {
        complex cur = point_at(static_cast<double>(j) / m);
        arc_table_[static_cast<std::size_t>(j)] = arc_table_[static_cast<std::size_t>(j) - 1] + std::abs(cur - prev);
        rmax = std::max(rmax, profile(2.0 * std::numbers::pi * j / m));
        prev = cur;
      }
      perimeter_ = arc_table_.back();
      // Chord sagitta bound keeps the polyline box conservative.
      bounds_ = bounds_.expanded(rmax * 1e-5);
    }
  }

  void finish_polyline() {
    const std::size_t n = polyline_.size();
    cumulative_.assign(n + 1, 0.0);
    bounds_ = Box::empty();
    for (std::size_t i = 0; i < n; ++i) {
      cumulative_[i + 1] = cumulative_[i] + std::abs(polyline_[(i + 1) % n] - polyline_[i]);
      bounds_.include(polyline_[i]);
    }
    perimeter_ = cumulative_.back();
  }

  ComponentKind kind_;
  int id_;
  complex center_{0.0};
  double radius_ = 0.0;
  std::vector<double> fourier_cos_, fourier_sin_;
  std::vector<complex> polyline_;
  std::vector<double> cumulative_;
  std::vector<double> arc_table_;
  double perimeter_ = 0.0;
  Box bounds_ = Box::empty();
};

enum class Membership { interior, boundary, outside };

inline const char* to_string(Membership m) {
  switch (m) {
    case Membership::interior: return "interior";
    case Membership::boundary: return "boundary";
    case Membership::outside: return "outside";
  }
  return "?";
}

/// Compact set K: Jordan-domain closures, filaments (polylines) and isolated points.
class CompactRegion {
 public:
  CompactRegion() = default;
  CompactRegion(std::vector<JordanComponent> components, std::vector<std::vector<complex>> filaments,
                std::vector<complex> points)
      : components_(std::move(components)), filaments_(std::move(filaments)), points_(std::move(points)) {
    for (const auto& f : filaments_)
      if (f.size() < 2) throw Error(ErrorCode::InvalidRegion, "filament needs at least 2 vertices");
    if (components_.empty() && filaments_.empty() && points_.empty())
      throw Error(ErrorCode::InvalidRegion, "region is empty");
    for (std::size_t i = 0; i < components_.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (components_[i].id() == components_[j].id())
          throw Error(ErrorCode::InvalidRegion, "duplicate component id " + std::to_string(components_[i].id()));
    bounds_ = Box::empty();
    for (const auto& c : components_) bounds_.include(c.bounds());
    for (const auto& f : filaments_)
      for (auto z : f) bounds_.include(z);
    for (auto z : points_) bounds_.include(z);
    check_disjoint_interiors();
    diameter_ = compute_diameter();
  }

  const std::vector<JordanComponent>& components() const { return components_; }
  const std::vector<std::vector<complex>>& filaments() const { return filaments_; }
  const std::vector<complex>& points() const { return points_; }
  const Box& bounds() const { return bounds_; }
  /// Euclidean diameter of K (exact for discs, polygons, filaments and points;
  /// starlike boundaries are sampled). Unlike the box diagonal it does not
  /// change when K is rotated.
  double diameter() const { return diameter_; }
  bool has_interior() const { return !components_.empty(); }

  const JordanComponent& component(int id) const {
    for (const auto& c : components_)
      if (c.id() == id) return c;
    throw Error(ErrorCode::InvalidArgument, "no component with id " + std::to_string(id));
  }

  /// Distance from z to K (0 on K).
  double distance(complex z) const {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& c : components_) {
      if (c.bounds().distance(z) >= d) continue;
      if (c.inside(z)) return 0.0;
      d = std::min(d, c.boundary_distance(z));
    }
    for (const auto& f : filaments_)
      for (std::size_t i = 0; i + 1 < f.size(); ++i) d = std::min(d, detail::project_onto_segment(f[i], f[i + 1], z).distance);
    for (auto p : points_) d = std::min(d, std::abs(z - p));
    return d;
  }

  /// Distance from z to the topological boundary pieces of K (component
  /// boundaries, filaments, points).
  double boundary_distance(complex z, double stop_below = -1.0) const {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& f : filaments_)
      for (std::size_t i = 0; i + 1 < f.size(); ++i) d = std::min(d, detail::project_onto_segment(f[i], f[i + 1], z).distance);
    for (auto p : points_) d = std::min(d, std::abs(z - p));
    for (const auto& c : components_) {
      if (d <= stop_below) break;
      if (c.bounds().distance(z) >= d) continue;
      d = std::min(d, c.boundary_distance(z));
    }
    return d;
  }

 private:
  void check_disjoint_interiors() const {
    for (std::size_t i = 0; i < components_.size(); ++i)
      for (std::size_t j = 0; j < components_.size(); ++j) {
        if (i == j || !components_[i].bounds().overlaps(components_[j].bounds())) continue;
        const auto& a = components_[i];
        const auto& b = components_[j];
        double margin = 1e-9 * std::max(1.0, a.bounds().diagonal());
        auto probes = a.interior_grid(16);
        auto edge = a.boundary_samples(256);
        probes.insert(probes.end(), edge.begin(), edge.end());
        for (auto z : probes)
          if (b.inside(z) && b.boundary_distance(z) > margin)
            throw Error(ErrorCode::InvalidRegion, "interiors of components " + std::to_string(a.id()) + " and " +
                                                      std::to_string(b.id()) + " overlap");
      }
  }

  // Every piece is a set of (center, radius) atoms; the diameter of a union of
  // discs is the largest |c_i - c_j| + r_i + r_j.
  double compute_diameter() const {
    std::vector<std::pair<complex, double>> atoms;
    for (const auto& c : components_) {
      if (c.kind() == ComponentKind::disc) {
        atoms.emplace_back(c.center(), c.radius());
      } else if (c.kind() == ComponentKind::polygon) {
        for (auto z : c.polyline()) atoms.emplace_back(z, 0.0);
      } else {
        for (auto z : c.boundary_samples(512)) atoms.emplace_back(z, 0.0);
      }
    }
    for (const auto& f : filaments_)
      for (auto z : f) atoms.emplace_back(z, 0.0);
    for (auto z : points_) atoms.emplace_back(z, 0.0);
    double d = 0.0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      d = std::max(d, 2.0 * atoms[i].second);
      for (std::size_t j = 0; j < i; ++j)
        d = std::max(d, std::abs(atoms[i].first - atoms[j].first) + atoms[i].second + atoms[j].second);
    }
    return d;
  }

  std::vector<JordanComponent> components_;
  std::vector<std::vector<complex>> filaments_;
  std::vector<complex> points_;
  Box bounds_ = Box::empty();
  double diameter_ = 0.0;
};

/// Interior / boundary / outside classification; "boundary" when the
/// distance to the boundary pieces of K is at most tol.
inline Membership contains(const CompactRegion& K, complex z, double tol) {
  if (tol < 0.0) throw Error(ErrorCode::InvalidArgument, "tolerance must be nonnegative");
  for (const auto& c : K.components()) {
    if (!c.inside(z)) continue;
    if (tol == 0.0 || c.boundary_distance(z) > tol) return Membership::interior;
    return Membership::boundary;
  }
  return K.boundary_distance(z, tol) <= tol ? Membership::boundary : Membership::outside;
}

/// Arclength-equidistributed samples: n per component boundary, n per
/// filament (endpoints included), and every isolated point once.
inline std::vector<complex> boundary_samples(const CompactRegion& K, int n_per_component) {
  if (n_per_component < 1) throw Error(ErrorCode::InvalidArgument, "need at least one sample per component");
  std::vector<complex> out;
  for (const auto& c : K.components()) {
    auto s = c.boundary_samples(n_per_component);
    out.insert(out.end(), s.begin(), s.end());
  }
  for (const auto& f : K.filaments()) {
    std::vector<double> cum(f.size(), 0.0);
    for (std::size_t i = 1; i < f.size(); ++i) cum[i] = cum[i - 1] + std::abs(f[i] - f[i - 1]);
    const double total = cum.back();
    const int n = std::max(n_per_component, 2);
    for (int k = 0; k < n; ++k) {
      double target = total * k / (n - 1);
      if (k == n - 1) {
        out.push_back(f.back());
        continue;
      }
      std::size_t i = 0;
      while (i + 2 < f.size() && cum[i + 1] <= target) ++i;
      double seg = cum[i + 1] - cum[i];
      double t = seg > 0.0 ? (target - cum[i]) / seg : 0.0;
      out.push_back(f[i] + t * (f[i + 1] - f[i]));
    }
  }
  out.insert(out.end(), K.points().begin(), K.points().end());
  return out;
}

/// Samples used for sup/min estimates over K: boundary samples plus a
/// regular interior grid of each component.
struct SampleResolution {
  int boundary_per_component = 1024;
  int interior_grid = 64;
};

inline std::vector<complex> dense_samples(const CompactRegion& K, const SampleResolution& res) {
  auto out = boundary_samples(K, res.boundary_per_component);
  for (const auto& c : K.components()) {
    auto g = c.interior_grid(res.interior_grid);
    out.insert(out.end(), g.begin(), g.end());
  }
  return out;
}

/// A nearby point of the complement of K, at most delta away from z and at
/// least a quarter of the accepted step away from K. Points already delta
/// away from K are returned unchanged.
///
/// Probe directions, in order: outward normals of components whose boundary
/// passes near z, the two tangential directions there, perpendiculars of
/// nearby filament segments, then a fan of 32 directions anchored to the first of those. Steps are
/// halved from delta until some probe lands outside.
inline complex exterior_displacement(const CompactRegion& K, complex z, double delta, int max_halvings = 60) {
  if (!(delta > 0.0)) throw Error(ErrorCode::InvalidArgument, "displacement must be positive");
  if (K.distance(z) >= delta) return z;
  std::vector<complex> directions;
  for (const auto& c : K.components()) {
    if (c.bounds().distance(z) > delta) continue;
    auto bp = c.project(z);
    if (bp.distance > delta) continue;
    complex n = c.outward_normal_at(bp.parameter);
    directions.push_back(n);
  }
  const std::size_t normals = directions.size();
  for (std::size_t i = 0; i < normals; ++i) {
    directions.push_back(directions[i] * complex{0.0, 1.0});
    directions.push_back(directions[i] * complex{0.0, -1.0});
  }
  for (const auto& f : K.filaments())
    for (std::size_t i = 0; i + 1 < f.size(); ++i) {
      if (detail::project_onto_segment(f[i], f[i + 1], z).distance > delta) continue;
      complex dir = f[i + 1] - f[i];
      if (std::abs(dir) == 0.0) continue;
      dir /= std::abs(dir);
      directions.push_back(dir * complex{0.0, 1.0});
      directions.push_back(dir * complex{0.0, -1.0});
    }
  // The fan is anchored to the first local direction so the choice turns with K.
  const complex anchor = directions.empty() ? complex{1.0, 0.0} : directions.front() / std::abs(directions.front());
  for (int k = 0; k < 32; ++k) directions.push_back(anchor * std::polar(1.0, 2.0 * std::numbers::pi * k / 32.0));

  double step = delta;
  for (int h = 0; h <= max_halvings; ++h, step *= 0.5) {
    // Among the probes that land outside, keep the one with the most clearance
    // so near-tangential escapes are not preferred.
    std::vector<double> clearance(directions.size(), 0.0);
    double best = 0.0;
    for (std::size_t i = 0; i < directions.size(); ++i) {
      complex probe = z + step * directions[i];
      if (contains(K, probe, 0.0) != Membership::outside) continue;
      clearance[i] = K.distance(probe);
      best = std::max(best, clearance[i]);
    }
    // Near-ties go to the earliest direction, so rounding cannot flip the choice.
    if (best > 0.0)
      for (std::size_t i = 0; i < directions.size(); ++i)
        if (clearance[i] >= best * (1.0 - 1e-9)) return z + step * directions[i];
  }
  throw Error(ErrorCode::NoExteriorPointFound, "no exterior point within the probe cap");
}

/// Rooted tree over the components of one touching cluster.
struct ComponentTree {
  std::vector<int> nodes;                 // component ids, ascending
  int root = 0;
  std::map<int, int> parent;              // child -> parent
  std::map<int, complex> contact_points;  // child -> shared closure point with its parent
  std::vector<int> order;                 // breadth-first total order from the root

  std::size_t edge_count() const { return parent.size(); }
};

struct ClosureContact {
  double distance;
  complex point;
  double locus_diameter;
};

namespace detail {

inline std::optional<ClosureContact> closure_contact(const JordanComponent& a, const JordanComponent& b,
                                                     double tol) {
  if (!a.bounds().expanded(tol).overlaps(b.bounds())) return std::nullopt;
  if (a.kind() == ComponentKind::disc && b.kind() == ComponentKind::disc) {
    complex d = b.center() - a.center();
    double gap = std::abs(d) - a.radius() - b.radius();
    if (gap > tol) return std::nullopt;
    complex u = d / std::abs(d);
    complex pa = a.center() + a.radius() * u, pb = b.center() - b.radius() * u;
    return ClosureContact{std::max(gap, 0.0), 0.5 * (pa + pb), 0.0};
  }
  // Sampled distance profile along a's boundary, refined at local minima.
  const int n = JordanComponent::kPolylineSize;
  std::vector<double> dist(static_cast<std::size_t>(n));
  std::vector<double> param(static_cast<std::size_t>(n));
  const double spacing = a.perimeter() / n;
  for (int k = 0; k < n; ++k) {
    double s = static_cast<double>(k) / n;
    complex p = a.point_at(s);
    param[static_cast<std::size_t>(k)] = s;
    dist[static_cast<std::size_t>(k)] =
        b.bounds().distance(p) > tol + 2.0 * spacing ? std::numeric_limits<double>::infinity() : b.boundary_distance(p);
  }
  std::vector<complex> locus;
  double best = std::numeric_limits<double>::infinity();
  complex best_a{}, best_b{};
  for (int k = 0; k < n; ++k) {
    double dk = dist[static_cast<std::size_t>(k)];
    if (!std::isfinite(dk)) continue;
    double prev = dist[static_cast<std::size_t>((k + n - 1) % n)], next = dist[static_cast<std::size_t>((k + 1) % n)];
    complex pa = a.point_at(param[static_cast<std::size_t>(k)]);
    if (dk <= tol) locus.push_back(pa);
    if (dk > prev || dk > next || dk > tol + spacing) continue;
    double s = golden_section_minimize(
        [&](double t) { return b.boundary_distance(a.point_at(t)); }, param[static_cast<std::size_t>(k)] - 1.0 / n,
        param[static_cast<std::size_t>(k)] + 1.0 / n);
    complex ra = a.point_at(s);
    auto proj = b.project(ra);
    if (proj.distance <= tol) locus.push_back(ra);
    if (proj.distance < best) {
      best = proj.distance;
      best_a = ra;
      best_b = proj.point;
    }
    if (dk < best) {
      auto pb = b.project(pa);
      best = pb.distance;
      best_a = pa;
      best_b = pb.point;
    }
  }
  if (!(best <= tol)) return std::nullopt;
  double diam = 0.0;
  for (std::size_t i = 0; i < locus.size(); ++i)
    for (std::size_t j = i + 1; j < locus.size(); ++j) diam = std::max(diam, std::abs(locus[i] - locus[j]));
  return ClosureContact{best, 0.5 * (best_a + best_b), diam};
}

}  // namespace detail

/// Default closure-touching threshold: 1e-6 * diam(K).
inline double default_contact_tolerance(const CompactRegion& K) { return 1e-6 * std::max(K.diameter(), 1e-300); }

/// Touching graph of the components, one rooted tree per connected cluster.
/// Throws CycleDetected when a cluster graph has a cycle and
/// MultipleContactPoints when two closures touch along a locus wider than
/// 100 * contact_tol.
inline std::vector<ComponentTree> build_component_tree(const CompactRegion& K, double contact_tol) {
  if (K.components().empty()) throw Error(ErrorCode::InvalidArgument, "region has no interior components");
  if (!(contact_tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "contact tolerance must be positive");
  std::vector<int> ids;
  for (const auto& c : K.components()) ids.push_back(c.id());
  std::sort(ids.begin(), ids.end());

  std::map<int, std::vector<int>> adjacency;
  std::map<std::pair<int, int>, complex> contacts;
  for (int id : ids) adjacency[id];
  for (std::size_t i = 0; i < ids.size(); ++i)
    for (std::size_t j = i + 1; j < ids.size(); ++j) {
      const auto& a = K.component(ids[i]);
      const auto& b = K.component(ids[j]);
      auto contact = detail::closure_contact(a, b, contact_tol);
      if (!contact) continue;
      if (contact->locus_diameter > 100.0 * contact_tol)
        throw Error(ErrorCode::MultipleContactPoints,
                    "closures of components " + std::to_string(ids[i]) + " and " + std::to_string(ids[j]) +
                        " meet in more than one point");
      adjacency[ids[i]].push_back(ids[j]);
      adjacency[ids[j]].push_back(ids[i]);
      contacts[{ids[i], ids[j]}] = contact->point;
    }

  std::vector<ComponentTree> trees;
  std::map<int, bool> seen;
  for (int start : ids) {
    if (seen[start]) continue;
    ComponentTree tree;
    tree.root = start;
    std::queue<int> frontier;
    frontier.push(start);
    seen[start] = true;
    std::size_t edge_ends = 0;
    while (!frontier.empty()) {
      int u = frontier.front();
      frontier.pop();
      tree.order.push_back(u);
      tree.nodes.push_back(u);
      auto nbrs = adjacency[u];
      std::sort(nbrs.begin(), nbrs.end());
      edge_ends += nbrs.size();
      for (int v : nbrs) {
        if (seen[v]) continue;
        seen[v] = true;
        tree.parent[v] = u;
        tree.contact_points[v] = contacts.at({std::min(u, v), std::max(u, v)});
        frontier.push(v);
      }
    }
    std::sort(tree.nodes.begin(), tree.nodes.end());
    if (edge_ends / 2 != tree.nodes.size() - 1)
      throw Error(ErrorCode::CycleDetected,
                  "touching graph of the cluster rooted at component " + std::to_string(start) +
                      " has a cycle; the complement of K is not connected");
    trees.push_back(std::move(tree));
  }
  return trees;
}

/// Grid heuristic for connectedness of C \ K: cells of a resolution^2 grid
/// over a square twice the size of the bounding box are blocked when K
/// comes within a half cell diagonal of the cell center; flood fill from a
/// corner must reach every unblocked cell.
inline bool complement_connected(const CompactRegion& K, int grid_resolution) {
  if (grid_resolution < 64) throw Error(ErrorCode::InvalidArgument, "grid resolution must be at least 64");
  const Box& b = K.bounds();
  double side = 2.0 * std::max({b.width(), b.height(), 1e-12 * (1.0 + std::abs(b.center()))});
  if (side <= 0.0) side = 1.0;
  const complex origin = b.center() - complex{0.5 * side, 0.5 * side};
  const int n = grid_resolution;
  const double cell = side / n;
  const double half_diag = 0.5 * std::sqrt(2.0) * cell;
  std::vector<char> blocked(static_cast<std::size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      complex z = origin + complex{(i + 0.5) * cell, (j + 0.5) * cell};
      if (b.distance(z) > half_diag) continue;
      blocked[static_cast<std::size_t>(i) * n + j] = K.distance(z) <= half_diag;
    }
  std::vector<char> reached(blocked.size(), 0);
  std::vector<std::pair<int, int>> stack{{0, 0}};
  reached[0] = 1;
  while (!stack.empty()) {
    auto [i, j] = stack.back();
    stack.pop_back();
    const std::array<std::pair<int, int>, 4> nbrs{{{i + 1, j}, {i - 1, j}, {i, j + 1}, {i, j - 1}}};
    for (auto [a, c] : nbrs) {
      if (a < 0 || c < 0 || a >= n || c >= n) continue;
      auto idx = static_cast<std::size_t>(a) * n + c;
      if (blocked[idx] || reached[idx]) continue;
      reached[idx] = 1;
      stack.emplace_back(a, c);
    }
  }
  for (std::size_t k = 0; k < blocked.size(); ++k)
    if (!blocked[k] && !reached[k]) return false;
  return true;
}

}  // namespace nonvanish
