#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nonvanish/conformal.hpp"
#include "nonvanish/contour.hpp"
#include "nonvanish/polynomial.hpp"
#include "nonvanish/region.hpp"
#include "nonvanish/target.hpp"

namespace nonvanish {

// ---------------------------------------------------------------------------
// Least squares on boundary samples
// ---------------------------------------------------------------------------

struct LeastSquaresOptions {
  int lawson_iterations = 8;
  int degree_cap = 64;
};

namespace detail {

struct ArnoldiFit {
  std::vector<complex> monomial;  // coefficients in the normalized variable x
  double max_error = 0.0;         // max over samples of |fit - f|
  std::vector<double> errors;
};

/// Weighted least-squares fit in the Arnoldi basis of span{1, x, ..., x^n}
/// (inner product sum_j w_j conj(u_j) v_j), then converted to monomials.
inline ArnoldiFit arnoldi_fit(const std::vector<complex>& x, const std::vector<complex>& f,
                              const std::vector<double>& w, int degree) {
  const std::size_t m = x.size();
  auto dot = [&](const std::vector<complex>& a, const std::vector<complex>& b) {
    complex s = 0.0;
    for (std::size_t j = 0; j < m; ++j) s += w[j] * std::conj(a[j]) * b[j];
    return s;
  };
  double wsum = 0.0;
  for (double v : w) wsum += v;
  std::vector<std::vector<complex>> q{std::vector<complex>(m, 1.0 / std::sqrt(wsum))};
  std::vector<std::vector<complex>> poly{{1.0 / std::sqrt(wsum)}};
  for (int k = 0; k < degree; ++k) {
    std::vector<complex> v(m);
    for (std::size_t j = 0; j < m; ++j) v[j] = x[j] * q.back()[j];
    std::vector<complex> pv(poly.back().size() + 1, 0.0);
    for (std::size_t i = 0; i < poly.back().size(); ++i) pv[i + 1] = poly.back()[i];
    const double start_norm = std::sqrt(dot(v, v).real());
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t i = 0; i < q.size(); ++i) {
        complex h = dot(q[i], v);
        for (std::size_t j = 0; j < m; ++j) v[j] -= h * q[i][j];
        for (std::size_t c = 0; c < poly[i].size(); ++c) pv[c] -= h * poly[i][c];
      }
    const double h = std::sqrt(dot(v, v).real());
    if (!(h > 1e-13 * start_norm)) break;  // basis exhausted (e.g. few distinct samples)
    for (auto& vj : v) vj /= h;
    for (auto& c : pv) c /= h;
    q.push_back(std::move(v));
    poly.push_back(std::move(pv));
  }
  ArnoldiFit out;
  out.monomial.assign(poly.back().size(), 0.0);
  std::vector<complex> fit(m, 0.0);
  for (std::size_t i = 0; i < q.size(); ++i) {
    complex d = dot(q[i], f);
    for (std::size_t j = 0; j < m; ++j) fit[j] += d * q[i][j];
    for (std::size_t c = 0; c < poly[i].size(); ++c) out.monomial[c] += d * poly[i][c];
  }
  ComplexPolynomial mono(out.monomial);
  double fmax = 0.0, discrepancy = 0.0;
  out.errors.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    complex pj = mono(x[j]);
    fmax = std::max(fmax, std::abs(f[j]));
    discrepancy = std::max(discrepancy, std::abs(pj - fit[j]));
    out.errors[j] = std::abs(pj - f[j]);
    out.max_error = std::max(out.max_error, out.errors[j]);
  }
  if (!(discrepancy <= 1e-8 * (1.0 + fmax)))
    throw Error(ErrorCode::IllConditioned, "monomial conversion of the orthogonalized fit lost accuracy at degree " +
                                               std::to_string(degree));
  return out;
}

/// Center and radius of the normalizing circle of K.
inline std::pair<complex, double> bounding_circle(const CompactRegion& K) {
  const Box& b = K.bounds();
  double r = 0.5 * b.diagonal();
  return {b.center(), r > 0.0 ? r : 1.0};
}

}  // namespace detail

/// Least-squares polynomial of the given degree fitted to f on the boundary
/// samples of K, after mapping K's bounding circle to the unit disc. Lawson
/// reweighting pushes the fit towards the discrete minimax solution.
inline ComplexPolynomial polynomial_least_squares(const TargetFunction& f, const CompactRegion& K, int degree,
                                                  int samples, const LeastSquaresOptions& opt = {}) {
  if (degree < 0 || degree > opt.degree_cap)
    throw Error(ErrorCode::DegreeCapExceeded, "degree " + std::to_string(degree) + " outside [0, cap]");
  if (samples < 4 * degree) throw Error(ErrorCode::InvalidArgument, "need at least 4*degree samples");
  auto pts = boundary_samples(K, std::max(samples, 1));
  auto [center, radius] = detail::bounding_circle(K);
  std::vector<complex> x(pts.size()), vals(pts.size());
  for (std::size_t j = 0; j < pts.size(); ++j) {
    x[j] = (pts[j] - center) / radius;
    vals[j] = f(pts[j]);
  }
  std::vector<double> w(pts.size(), 1.0);
  auto best = detail::arnoldi_fit(x, vals, w, degree);
  double fscale = 0.0;
  for (auto v : vals) fscale = std::max(fscale, std::abs(v));
  for (int it = 0; it < opt.lawson_iterations && best.max_error > 1e-14 * (1.0 + fscale); ++it) {
    const auto& errors = best.errors;
    double total = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) {
      w[j] *= errors[j];
      total += w[j];
    }
    if (!(total > 0.0)) break;
    const double floor = 1e-10;
    for (auto& v : w) v = std::max(v * static_cast<double>(w.size()) / total, floor);
    auto next = detail::arnoldi_fit(x, vals, w, degree);
    if (next.max_error < best.max_error) {
      best = std::move(next);
    } else {
      best.errors = next.errors;  // keep reweighting from the latest residuals
    }
  }
  ComplexPolynomial q = ComplexPolynomial(best.monomial).trimmed(1e-15);
  return q.compose_affine(1.0 / radius, -center / radius);
}

// ---------------------------------------------------------------------------
// Dilation, extension, nudging
// ---------------------------------------------------------------------------

struct XiChoice {
  double xi = 0.5;
  double gap = 0.0;
};

/// Largest xi in {1/2, 1/4, ...} with sup |f(phi((1-xi) phi^{-1}(z))) - f(z)| <= budget
/// over the sampled closure of the component.
inline XiChoice choose_xi(const TargetFunction& f, const ConformalMap& map, const JordanComponent& comp,
                          double budget, const SampleResolution& res = {1024, 32}) {
  if (!(budget > 0.0)) throw Error(ErrorCode::InvalidArgument, "budget must be positive");
  auto pts = comp.boundary_samples(res.boundary_per_component);
  auto grid = comp.interior_grid(res.interior_grid);
  pts.insert(pts.end(), grid.begin(), grid.end());
  std::vector<complex> pre(pts.size()), fv(pts.size());
  for (std::size_t j = 0; j < pts.size(); ++j) {
    pre[j] = map.inverse(pts[j]);
    fv[j] = f(pts[j]);
  }
  for (double xi = 0.5; xi >= 1e-12; xi *= 0.5) {
    double gap = 0.0;
    for (std::size_t j = 0; j < pts.size() && gap <= budget; ++j)
      gap = std::max(gap, std::abs(f(map.forward((1.0 - xi) * pre[j])) - fv[j]));
    if (gap <= budget) return {xi, gap};
  }
  throw Error(ErrorCode::XiUnderflow, "no xi >= 1e-12 meets the dilation budget");
}

/// H(z) = f(phi((1 - xi) phi^{-1}(z))) on the component closure.
inline TargetFunction dilate(const TargetFunction& f, const ConformalMap& map, double xi) {
  auto inner = radial_precompose(map, xi);
  return TargetFunction([g = f.evaluator(), inner](complex z) { return g(inner(z)); }, TargetKind::custom,
                        "dilate(" + f.description() + ")");
}

/// Continuous extension of H from the union of the component closures to K:
/// H itself on the closures, H at the nearest closure point elsewhere
/// (ties go to the lowest component id).
inline TargetFunction tietze_extend(const TargetFunction& H, const CompactRegion& K) {
  if (K.components().empty()) return H;
  const double closure_tol = 1e-12 * std::max(K.diameter(), 1e-300);
  std::vector<JordanComponent> comps = K.components();
  std::sort(comps.begin(), comps.end(), [](const auto& a, const auto& b) { return a.id() < b.id(); });
  return TargetFunction(
      [h = H.evaluator(), comps, closure_tol](complex z) {
        for (const auto& c : comps)
          if (c.bounds().distance(z) <= closure_tol && (c.inside(z) || c.boundary_distance(z) <= closure_tol)) return h(z);
        BoundaryPoint best = comps.front().project(z);
        for (std::size_t i = 1; i < comps.size(); ++i) {
          auto p = comps[i].project(z);
          if (p.distance < best.distance) best = p;
        }
        return h(best.point);
      },
      TargetKind::custom, "tietze(" + H.description() + ")");
}

struct NudgeResult {
  ComplexPolynomial polynomial;
  std::vector<complex> roots;  // roots of the returned polynomial (empty for constants)
  int moved_roots = 0;
  double final_step = 0.0;
  double gap = 0.0;  // dense-sample sup_K |p - P|
};

/// Replace every zero of P lying on K by a nearby exterior point, halving the
/// displacement until sup_K |p - P| <= budget. Zeros already outside stay.
inline NudgeResult nudge_zeros(const ComplexPolynomial& P, const CompactRegion& K, double step, double budget,
                               const SampleResolution& res = {1024, 64}, double root_tol = -1.0,
                               int max_halvings = 60) {
  if (!(step > 0.0) || !(budget > 0.0)) throw Error(ErrorCode::InvalidArgument, "step and budget must be positive");
  if (P.is_zero()) throw Error(ErrorCode::InteriorZero, "the zero polynomial vanishes on K");
  NudgeResult out{P, {}, 0, 0.0, 0.0};
  if (P.degree() == 0) return out;
  if (root_tol < 0.0) root_tol = 1e-9 * std::max(K.diameter(), 1e-300);
  RootSet rs = find_roots(P, {200, 1e-12, std::max(64, P.degree())});
  std::vector<std::size_t> on_k;
  for (std::size_t i = 0; i < rs.roots.size(); ++i) {
    auto m = contains(K, rs.roots[i], root_tol);
    if (m == Membership::interior)
      throw Error(ErrorCode::InteriorZero, "polynomial has a zero in the interior of K; it cannot be nudged away");
    if (m == Membership::boundary) on_k.push_back(i);
  }
  out.roots = rs.roots;
  if (on_k.empty()) return out;

  auto samples = dense_samples(K, res);
  std::vector<complex> base(samples.size());
  for (std::size_t j = 0; j < samples.size(); ++j) base[j] = P(samples[j]);
  for (int h = 0; h <= max_halvings; ++h, step *= 0.5) {
    RootSet moved = rs;
    for (auto i : on_k) moved.roots[i] = exterior_displacement(K, rs.roots[i], step);
    ComplexPolynomial p = from_roots(moved);
    double gap = 0.0;
    for (std::size_t j = 0; j < samples.size(); ++j) gap = std::max(gap, std::abs(p(samples[j]) - base[j]));
    if (gap <= budget) {
      out.polynomial = std::move(p);
      out.roots = std::move(moved.roots);
      out.moved_roots = static_cast<int>(on_k.size());
      out.final_step = step;
      out.gap = gap;
      return out;
    }
  }
  throw Error(ErrorCode::NudgeBudgetUnreachable, "zero displacement could not meet the nudge budget");
}

// ---------------------------------------------------------------------------
// Pipelines
// ---------------------------------------------------------------------------

struct PipelineOptions {
  int degree_max = 64;
  int ls_samples = 1024;
  SampleResolution verification{1024, 64};
  SampleResolution xi_resolution{1024, 32};
  int nonvanishing_grid = 128;
  int complement_grid = 256;
  double contact_tol = 0.0;  // 0 selects 1e-6 * diam(K)
  int lawson_iterations = 8;
  TheodorsenOptions theodorsen{};
  std::uint64_t seed = 0;
};

struct StageEntry {
  std::string stage;
  double error = 0.0;
  double budget = 0.0;
};

/// Gluing bookkeeping for one touching cluster.
struct GlueState {
  ComponentTree tree;
  std::map<int, double> component_xi;  // dilation parameter of each f_n
  std::map<int, complex> rescale;      // cumulative factor of each component (root: 1)
  double xi_glue = 0.0;
  double C = 0.0;                      // max_K |f|
  double delta_contact = 0.0;          // min_n |f(z_n)|
  double continuity_residual = 0.0;    // max_n |H_child(z_n) - H_parent(z_n)|
  double gap = 0.0;                    // sampled sup |H - f| over the cluster closures
  std::vector<TargetFunction> approximants;  // f_n in tree order
};

struct SampleCounts {
  int boundary_per_component = 0;
  int interior_grid = 0;
  int total = 0;
  int least_squares = 0;
};

struct ApproximationReport {
  ComplexPolynomial polynomial;
  std::vector<complex> roots;
  double sup_error = 0.0;
  double min_modulus = 0.0;
  double epsilon = 0.0;
  std::vector<StageEntry> stage_ledger;
  double xi_used = 0.0;
  double delta_used = 0.0;
  int degree = 0;
  SampleCounts samples;
  std::string region_hash;
  std::map<int, double> component_xi;
  std::vector<GlueState> glue;
  double nudge_step = 0.0;
  int moved_roots = 0;
  int complement_grid = 0;
};

namespace detail {

inline std::string region_fingerprint(const CompactRegion& K) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](double v) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &v, sizeof v);
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 1099511628211ULL;
    }
  };
  for (const auto& c : K.components()) {
    mix(static_cast<double>(c.kind()));
    mix(c.id());
    if (c.kind() == ComponentKind::polygon)
      for (auto v : c.polyline()) mix(v.real()), mix(v.imag());
    else {
      mix(c.center().real()), mix(c.center().imag()), mix(c.radius());
      for (double a : c.fourier_cos()) mix(a);
      for (double b : c.fourier_sin()) mix(b);
    }
  }
  for (const auto& f : K.filaments()) {
    mix(-1.0);
    for (auto v : f) mix(v.real()), mix(v.imag());
  }
  for (auto p : K.points()) mix(p.real()), mix(p.imag());
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline void check_declared_poles(const TargetFunction& f, const CompactRegion& K) {
  for (auto pole : f.declared_poles())
    if (K.distance(pole) <= 1e-9 * std::max(K.diameter(), 1e-300))
      throw Error(ErrorCode::PoleInRegion, "a declared pole of the target lies on K");
}

/// Grid and argument-principle checks that f has no zero in phi(|w| <= 1 - xi).
inline void check_interior_nonvanishing(const TargetFunction& f, const ConformalMap& map, const JordanComponent& comp,
                                        double xi, int grid) {
  for (auto z : comp.interior_grid(grid)) {
    complex v = f(z);
    if (!std::isfinite(std::abs(v))) throw Error(ErrorCode::NonvanishingCheckFailed, "target is not finite inside K");
    if (v == complex{0.0}) throw Error(ErrorCode::InteriorZero, "target vanishes in the interior of K");
  }
  const double rho = 1.0 - xi;
  auto wn = nonvanish::winding_number([&](double t) { return f(map.forward(std::polar(rho, t))); });
  if (!wn) throw Error(ErrorCode::NonvanishingCheckFailed, "could not resolve the argument of f on the dilated contour");
  if (*wn != 0)
    throw Error(ErrorCode::InteriorZero, "target has " + std::to_string(*wn) + " zero(s) in the interior of component " +
                                             std::to_string(comp.id()));
}

inline bool in_closure(const JordanComponent& c, complex z, double tol) {
  return c.bounds().distance(z) <= tol && (c.inside(z) || c.boundary_distance(z) <= tol);
}

/// Glue per-component approximants over one cluster. Returns the state with
/// approximants/rescale factors filled in.
inline GlueState glue_cluster(const TargetFunction& f, const CompactRegion& K, const ComponentTree& tree,
                              const std::map<int, ConformalMap>& maps, double eps, double C,
                              const PipelineOptions& opt) {
  GlueState st;
  st.tree = tree;
  st.C = C;
  st.delta_contact = std::numeric_limits<double>::infinity();
  for (const auto& [child, zc] : tree.contact_points) {
    double v = std::abs(f(zc));
    st.delta_contact = std::min(st.delta_contact, v);
    if (!(v > 1e-12 * std::max(1.0, C)))
      throw Error(ErrorCode::ContactZero, "target vanishes at the contact point of component " + std::to_string(child));
  }
  if (tree.contact_points.empty()) st.delta_contact = 0.0;

  std::vector<complex> samples;
  for (int id : tree.order) {
    auto s = K.component(id).boundary_samples(opt.xi_resolution.boundary_per_component);
    auto g = K.component(id).interior_grid(opt.xi_resolution.interior_grid);
    samples.insert(samples.end(), s.begin(), s.end());
    samples.insert(samples.end(), g.begin(), g.end());
  }
  const double closure_tol = 1e-12 * std::max(K.diameter(), 1e-300);
  const double band = eps / (3.0 * C);

  double xi_glue = eps / 3.0;
  for (int attempt = 0; attempt < 50; ++attempt, xi_glue *= 0.5) {
    st.component_xi.clear();
    st.rescale.clear();
    st.approximants.clear();
    std::map<int, std::size_t> slot;
    for (int id : tree.order) {
      const auto& comp = K.component(id);
      auto choice = choose_xi(f, maps.at(id), comp, xi_glue, opt.xi_resolution);
      st.component_xi[id] = choice.xi;
      slot[id] = st.approximants.size();
      st.approximants.push_back(dilate(f, maps.at(id), choice.xi));
    }
    bool in_band = true;
    st.continuity_residual = 0.0;
    for (int id : tree.order) {
      if (id == tree.root) {
        st.rescale[id] = 1.0;
        continue;
      }
      int par = tree.parent.at(id);
      complex zc = tree.contact_points.at(id);
      complex parent_value = st.rescale.at(par) * st.approximants[slot.at(par)](zc);
      complex fn_zc = st.approximants[slot.at(id)](zc);
      st.rescale[id] = parent_value / fn_zc;
      st.continuity_residual = std::max(st.continuity_residual, std::abs(st.rescale[id] * fn_zc - parent_value));
      double m = std::abs(st.rescale[id]);
      if (m < 1.0 - band || m > 1.0 + band) in_band = false;
    }
    if (!in_band) continue;
    double gap = 0.0;
    for (auto z : samples) {
      for (int id : tree.order)
        if (in_closure(K.component(id), z, closure_tol)) {
          gap = std::max(gap, std::abs(st.rescale.at(id) * st.approximants[slot.at(id)](z) - f(z)));
          break;
        }
    }
    if (gap <= eps / 3.0) {
      st.xi_glue = xi_glue;
      st.gap = gap;
      return st;
    }
  }
  throw Error(ErrorCode::GlueBudgetUnreachable, "gluing could not meet the eps/3 budget");
}

}  // namespace detail

/// Gluing of dilated per-component approximants over one
/// component tree. The returned function is defined on the union of the
/// cluster's closures (earlier components in tree order win on overlaps).
inline std::pair<TargetFunction, GlueState> glue_components(const TargetFunction& f, const CompactRegion& K,
                                                            const ComponentTree& tree, double eps,
                                                            const PipelineOptions& opt = {}) {
  std::map<int, ConformalMap> maps;
  for (int id : tree.order) maps.emplace(id, disc_to_domain(K.component(id), opt.theodorsen));
  double C = 0.0;
  for (auto z : dense_samples(K, opt.verification)) C = std::max(C, std::abs(f(z)));
  auto st = detail::glue_cluster(f, K, tree, maps, eps, C, opt);
  for (int id : tree.order)
    detail::check_interior_nonvanishing(f, maps.at(id), K.component(id), st.component_xi.at(id), opt.nonvanishing_grid);

  std::vector<JordanComponent> comps;
  std::vector<complex> factors;
  for (int id : tree.order) {
    comps.push_back(K.component(id));
    factors.push_back(st.rescale.at(id));
  }
  const double closure_tol = 1e-12 * std::max(K.diameter(), 1e-300);
  auto parts = st.approximants;
  TargetFunction H(
      [comps, factors, parts, closure_tol](complex z) {
        for (std::size_t i = 0; i < comps.size(); ++i)
          if (detail::in_closure(comps[i], z, closure_tol)) return factors[i] * parts[i](z);
        // Off the closures: nearest component.
        std::size_t best = 0;
        double bd = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < comps.size(); ++i) {
          double d = comps[i].boundary_distance(z);
          if (d < bd) bd = d, best = i;
        }
        return factors[best] * parts[best](z);
      },
      TargetKind::custom, "glue(" + f.description() + ")");
  return {std::move(H), std::move(st)};
}

namespace detail {

struct InteriorStage {
  TargetFunction H;  // on the union of closures
  std::map<int, double> component_xi;
  std::vector<GlueState> glue;
};

inline InteriorStage build_interior_stage(const TargetFunction& f, const CompactRegion& K, double budget,
                                          const PipelineOptions& opt) {
  const double contact_tol = opt.contact_tol > 0.0 ? opt.contact_tol : default_contact_tolerance(K);
  auto trees = build_component_tree(K, contact_tol);
  std::vector<JordanComponent> comps;
  std::vector<TargetFunction> parts;
  std::vector<complex> factors;
  InteriorStage out{TargetFunction::constant(0.0), {}, {}};
  double C = -1.0;
  for (const auto& tree : trees) {
    if (tree.nodes.size() == 1) {
      const auto& comp = K.component(tree.root);
      auto map = disc_to_domain(comp, opt.theodorsen);
      auto choice = choose_xi(f, map, comp, budget, opt.xi_resolution);
      check_interior_nonvanishing(f, map, comp, choice.xi, opt.nonvanishing_grid);
      comps.push_back(comp);
      parts.push_back(dilate(f, map, choice.xi));
      factors.push_back(1.0);
      out.component_xi[comp.id()] = choice.xi;
      continue;
    }
    std::map<int, ConformalMap> maps;
    for (int id : tree.order) maps.emplace(id, disc_to_domain(K.component(id), opt.theodorsen));
    if (C < 0.0) {
      C = 0.0;
      for (auto z : dense_samples(K, opt.verification)) C = std::max(C, std::abs(f(z)));
    }
    auto st = glue_cluster(f, K, tree, maps, 3.0 * budget, C, opt);
    for (int id : tree.order) {
      check_interior_nonvanishing(f, maps.at(id), K.component(id), st.component_xi.at(id), opt.nonvanishing_grid);
      comps.push_back(K.component(id));
      factors.push_back(st.rescale.at(id));
      out.component_xi[id] = st.component_xi.at(id);
    }
    parts.insert(parts.end(), st.approximants.begin(), st.approximants.end());
    out.glue.push_back(std::move(st));
  }
  const double closure_tol = 1e-12 * std::max(K.diameter(), 1e-300);
  out.H = TargetFunction(
      [comps, factors, parts, closure_tol](complex z) {
        for (std::size_t i = 0; i < comps.size(); ++i)
          if (in_closure(comps[i], z, closure_tol)) return factors[i] * parts[i](z);
        std::size_t best = 0;
        double bd = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < comps.size(); ++i) {
          double d = comps[i].boundary_distance(z);
          if (d < bd) bd = d, best = i;
        }
        return factors[best] * parts[best](z);
      },
      TargetKind::custom, "interior(" + f.description() + ")");
  return out;
}

inline ApproximationReport run_pipeline(const TargetFunction& f, const CompactRegion& K, double eps,
                                        const PipelineOptions& opt) {
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
  check_declared_poles(f, K);
  ApproximationReport rep;
  rep.epsilon = eps;
  rep.region_hash = region_fingerprint(K);
  rep.complement_grid = opt.complement_grid;
  const auto samples = dense_samples(K, opt.verification);
  rep.samples = {opt.verification.boundary_per_component, opt.verification.interior_grid,
                 static_cast<int>(samples.size()), 0};
  std::vector<complex> fv(samples.size());
  for (std::size_t j = 0; j < samples.size(); ++j) fv[j] = f(samples[j]);

  // Stage 1: H on the closures, extended to K (difference extension).
  TargetFunction H_ext = f;
  double dilation_gap = 0.0;
  double delta = std::numeric_limits<double>::infinity();
  if (K.has_interior()) {
    double budget = eps / 3.0;
    for (int attempt = 0;; ++attempt, budget *= 0.5) {
      auto stage = build_interior_stage(f, K, budget, opt);
      TargetFunction diff([h = stage.H.evaluator(), g = f.evaluator()](complex z) { return h(z) - g(z); },
                          TargetKind::custom, "difference");
      auto ext = tietze_extend(diff, K);
      H_ext = TargetFunction([e = ext.evaluator(), g = f.evaluator()](complex z) { return g(z) + e(z); },
                             TargetKind::custom, "extended(" + f.description() + ")");
      dilation_gap = 0.0;
      for (std::size_t j = 0; j < samples.size(); ++j)
        dilation_gap = std::max(dilation_gap, std::abs(H_ext(samples[j]) - fv[j]));
      if (dilation_gap <= eps / 3.0 || attempt >= 20) {
        rep.component_xi = stage.component_xi;
        rep.glue = std::move(stage.glue);
        break;
      }
    }
    rep.xi_used = 0.5;
    for (const auto& [id, xi] : rep.component_xi) rep.xi_used = std::min(rep.xi_used, xi);
    delta = std::numeric_limits<double>::infinity();
    for (const auto& c : K.components()) {
      for (auto z : c.boundary_samples(opt.verification.boundary_per_component)) delta = std::min(delta, std::abs(H_ext(z)));
      for (auto z : c.interior_grid(opt.verification.interior_grid)) delta = std::min(delta, std::abs(H_ext(z)));
    }
    if (!(delta > 0.0)) throw Error(ErrorCode::NonvanishingCheckFailed, "dilated target vanishes on a closure");
  }
  rep.delta_used = delta;
  rep.stage_ledger.push_back({rep.glue.empty() ? "dilation" : "gluing", dilation_gap, eps / 3.0});

  // Stage 2: polynomial approximation of H_ext to min(eps/3, delta/2).
  const double ls_budget = std::min(eps / 3.0, 0.5 * delta);
  std::vector<complex> hv(samples.size());
  for (std::size_t j = 0; j < samples.size(); ++j) hv[j] = H_ext(samples[j]);
  std::optional<ComplexPolynomial> P;
  double approx_gap = 0.0;
  LeastSquaresOptions ls{opt.lawson_iterations, opt.degree_max};
  std::vector<int> degrees{0, 1};
  for (int d = 2; d < opt.degree_max; d *= 2) degrees.push_back(d);
  if (degrees.back() != opt.degree_max && opt.degree_max > 1) degrees.push_back(opt.degree_max);
  for (int d : degrees) {
    if (d > opt.degree_max) break;
    int ns = std::max(opt.ls_samples, 4 * d);
    auto cand = polynomial_least_squares(H_ext, K, d, ns, ls);
    double gap = 0.0;
    for (std::size_t j = 0; j < samples.size(); ++j) gap = std::max(gap, std::abs(cand(samples[j]) - hv[j]));
    if (gap <= ls_budget) {
      P = std::move(cand);
      approx_gap = gap;
      rep.samples.least_squares = ns;
      break;
    }
  }
  if (!P)
    throw Error(ErrorCode::DegreeCapExceeded,
                "least squares did not reach the budget by degree " + std::to_string(opt.degree_max));
  rep.stage_ledger.push_back({"approximation", approx_gap, ls_budget});

  // Stage 3: move boundary zeros off K.
  // Half the diameter as the length scale keeps the step invariant under rotations of K.
  const double radius = K.diameter() > 0.0 ? 0.5 * K.diameter() : 1.0;
  const int m = std::max(P->degree(), 1);
  const double c0n = std::abs(P->leading()) * std::pow(radius, P->degree());
  const double diam_n = K.diameter() / radius;
  const double step = radius * 0.1 * eps / (m * std::max(1.0, c0n) * std::pow(1.0 + diam_n, m - 1));
  auto nudged = nudge_zeros(*P, K, step, eps / 3.0, opt.verification);
  rep.stage_ledger.push_back({"nudge", nudged.gap, eps / 3.0});
  rep.polynomial = nudged.polynomial;
  rep.roots = nudged.roots;
  rep.nudge_step = nudged.final_step;
  rep.moved_roots = nudged.moved_roots;
  rep.degree = rep.polynomial.degree();

  rep.sup_error = 0.0;
  rep.min_modulus = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < samples.size(); ++j) {
    complex pv = rep.polynomial(samples[j]);
    rep.sup_error = std::max(rep.sup_error, std::abs(pv - fv[j]));
    rep.min_modulus = std::min(rep.min_modulus, std::abs(pv));
  }
  for (auto r : rep.roots)
    if (contains(K, r, 0.0) != Membership::outside)
      throw Error(ErrorCode::NonvanishingCheckFailed, "a zero of the final polynomial lies on K");
  if (!(rep.min_modulus > 0.0)) throw Error(ErrorCode::NonvanishingCheckFailed, "final polynomial vanishes on a sample");
  if (!(rep.sup_error < eps))
    throw Error(ErrorCode::NonvanishingCheckFailed, "sampled sup error does not beat epsilon");
  return rep;
}

}  // namespace detail

/// Full pipeline for a region with exactly one interior component.
inline ApproximationReport approx_jordan(const TargetFunction& f, const CompactRegion& K, double eps,
                                         const PipelineOptions& opt = {}) {
  if (K.components().size() != 1)
    throw Error(ErrorCode::InvalidArgument, "approx_jordan expects exactly one interior component");
  return detail::run_pipeline(f, K, eps, opt);
}

/// Full orchestrator: connected-complement check, component trees and
/// gluing, extension, approximation, zero nudging. Regions without interior
/// go straight to approximation and nudging.
inline ApproximationReport nonvanishing_approx(const TargetFunction& f, const CompactRegion& K, double eps,
                                               const PipelineOptions& opt = {}) {
  // Tree construction first: a cycle of touching components is the specific
  // reason the complement splits, so it is reported as such.
  if (K.has_interior())
    build_component_tree(K, opt.contact_tol > 0.0 ? opt.contact_tol : default_contact_tolerance(K));
  if (!complement_connected(K, opt.complement_grid))
    throw Error(ErrorCode::ComplementNotConnected, "the complement of K is not connected");
  return detail::run_pipeline(f, K, eps, opt);
}

}  // namespace nonvanish
