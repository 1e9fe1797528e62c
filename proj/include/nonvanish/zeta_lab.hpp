#pragma once

#include <cmath>
#include <cstdio>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nonvanish/contour.hpp"
#include "nonvanish/polynomial.hpp"
#include "nonvanish/region.hpp"
#include "nonvanish/target.hpp"
#include "nonvanish/zeta.hpp"

namespace nonvanish {

// ---------------------------------------------------------------------------
// Shift scanning
// ---------------------------------------------------------------------------

struct ScanRecord {
  double t = 0.0;
  double d = 0.0;  // sampled sup_K |zeta(z + it) - f(z)|
  bool zero_free = true;
  double min_modulus = 0.0;  // sampled min_K |zeta(z + it)|
};

struct ScanOptions {
  SampleResolution resolution{128, 16};
  std::size_t checkpoint_every = 10000;
  std::size_t stop_after = 0;  // records computed in this run before stopping; 0 = no limit
  ZeroCountOptions zero_count{};
};

struct ScanGrid {
  double t_min = 0.0, t_max = 0.0, t_step = 1.0;

  std::size_t size() const {
    return static_cast<std::size_t>(std::floor((t_max - t_min) / t_step + 1e-9)) + 1;
  }
  double at(std::size_t k) const { return t_min + static_cast<double>(k) * t_step; }
};

struct ScanSummary {
  std::size_t points = 0;
  std::size_t below = 0;  // records with d(t) < eps
  double density = 0.0;
  bool complete = false;
};

namespace detail {

inline void check_scan_inputs(const ZetaEvaluator& ev, const CompactRegion& K, const ScanGrid& grid) {
  if (!(grid.t_step > 0.0)) throw Error(ErrorCode::InvalidArgument, "t_step must be positive");
  if (!(grid.t_max >= grid.t_min)) throw Error(ErrorCode::InvalidArgument, "t_max must be >= t_min");
  const Box& b = K.bounds();
  if (!(b.xmin > 0.5 && b.xmax < 1.0))
    throw Error(ErrorCode::OutOfValidity, "region must lie in the strip 1/2 < Re z < 1");
  const double reach = std::max({std::abs(grid.t_min + b.ymin), std::abs(grid.t_max + b.ymax),
                                 std::abs(grid.t_min + b.ymax), std::abs(grid.t_max + b.ymin)});
  if (reach > ev.t_max) throw Error(ErrorCode::OutOfValidity, "scan range exceeds the evaluator height cap");
}

}  // namespace detail

/// One grid point of the scan.
inline ScanRecord scan_point(const ZetaEvaluator& ev, const CompactRegion& K,
                             const std::vector<complex>& samples, const std::vector<complex>& f_values, double t,
                             const ZeroCountOptions& zopt = {}) {
  ScanRecord rec;
  rec.t = t;
  rec.min_modulus = std::numeric_limits<double>::infinity();
  const complex shift{0.0, t};
  for (std::size_t j = 0; j < samples.size(); ++j) {
    complex z = ev(samples[j] + shift);
    rec.d = std::max(rec.d, std::abs(z - f_values[j]));
    rec.min_modulus = std::min(rec.min_modulus, std::abs(z));
  }
  const Box& b = K.bounds();
  Rectangle box{b.xmin, b.xmax, b.ymin + t, b.ymax + t};
  if (!(box.sigma_max > box.sigma_min)) box.sigma_max = box.sigma_min + 1e-6;
  if (!(box.t_max > box.t_min)) box.t_max = box.t_min + 1e-6;
  try {
    rec.zero_free = count_zeros_rectangle(ev, box, zopt).count == 0;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ContourThroughZero) throw;
    rec.zero_free = false;
  }
  return rec;
}

/// In-memory scan over the whole grid.
inline std::vector<ScanRecord> scan_shifts(const ZetaEvaluator& ev, const TargetFunction& f, const CompactRegion& K,
                                           const ScanGrid& grid, const ScanOptions& opt = {}) {
  detail::check_scan_inputs(ev, K, grid);
  auto samples = dense_samples(K, opt.resolution);
  std::vector<complex> fv(samples.size());
  for (std::size_t j = 0; j < samples.size(); ++j) fv[j] = f(samples[j]);
  std::vector<ScanRecord> out;
  out.reserve(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) out.push_back(scan_point(ev, K, samples, fv, grid.at(k), opt.zero_count));
  return out;
}

/// Fraction of records with d(t) < eps.
inline double scan_density(const std::vector<ScanRecord>& records, double eps) {
  if (records.empty()) return 0.0;
  std::size_t below = 0;
  for (const auto& r : records) below += r.d < eps ? 1 : 0;
  return static_cast<double>(below) / static_cast<double>(records.size());
}

inline std::string format_scan_row(const ScanRecord& r) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d,%.17g\n", r.t, r.d, r.zero_free ? 1 : 0, r.min_modulus);
  return buf;
}

inline constexpr const char* kScanHeader = "t,d_t,zero_free,min_modulus\n";

inline std::filesystem::path checkpoint_path(const std::filesystem::path& csv) {
  return std::filesystem::path(csv.string() + ".ckpt.json");
}

/// Scan streamed to CSV with a JSON checkpoint next to it. With resume set,
/// the CSV is truncated to the checkpointed row count and the scan continues
/// from there; the finished file is byte-identical to an uninterrupted run.
inline ScanSummary scan_to_csv(const ZetaEvaluator& ev, const TargetFunction& f, const CompactRegion& K, double eps,
                               const ScanGrid& grid, const std::filesystem::path& csv, bool resume,
                               const ScanOptions& opt = {}) {
  detail::check_scan_inputs(ev, K, grid);
  const auto ckpt = checkpoint_path(csv);
  const std::size_t total = grid.size();
  std::size_t start = 0, below = 0;

  if (resume && std::filesystem::exists(ckpt)) {
    std::ifstream in(ckpt);
    auto j = nlohmann::json::parse(in);
    if (j.at("t_min").get<double>() != grid.t_min || j.at("t_step").get<double>() != grid.t_step ||
        j.at("epsilon").get<double>() != eps)
      throw Error(ErrorCode::InvalidArgument, "checkpoint does not match the requested scan");
    start = j.at("next_index").get<std::size_t>();
    below = j.at("below").get<std::size_t>();
    // Drop any rows written after the checkpoint.
    std::ifstream old(csv);
    std::string header, line, kept;
    std::getline(old, header);
    kept = header + "\n";
    for (std::size_t k = 0; k < start && std::getline(old, line); ++k) kept += line + "\n";
    old.close();
    std::ofstream rewrite(csv, std::ios::binary | std::ios::trunc);
    rewrite << kept;
  } else {
    std::ofstream fresh(csv, std::ios::binary | std::ios::trunc);
    fresh << kScanHeader;
  }

  auto write_checkpoint = [&](std::size_t next) {
    nlohmann::ordered_json j;
    j["schema"] = "1";
    j["next_index"] = next;
    j["below"] = below;
    j["total"] = total;
    j["t_min"] = grid.t_min;
    j["t_max"] = grid.t_max;
    j["t_step"] = grid.t_step;
    j["epsilon"] = eps;
    std::ofstream o(ckpt, std::ios::binary | std::ios::trunc);
    o << j.dump(2) << "\n";
  };

  auto samples = dense_samples(K, opt.resolution);
  std::vector<complex> fv(samples.size());
  for (std::size_t j = 0; j < samples.size(); ++j) fv[j] = f(samples[j]);
  std::ofstream out(csv, std::ios::binary | std::ios::app);
  std::size_t done_this_run = 0;
  std::size_t k = start;
  for (; k < total; ++k) {
    if (opt.stop_after != 0 && done_this_run == opt.stop_after) break;
    auto rec = scan_point(ev, K, samples, fv, grid.at(k), opt.zero_count);
    below += rec.d < eps ? 1 : 0;
    out << format_scan_row(rec);
    ++done_this_run;
    if (opt.checkpoint_every != 0 && (k + 1) % opt.checkpoint_every == 0) {
      out.flush();
      write_checkpoint(k + 1);
    }
  }
  out.flush();
  write_checkpoint(k);
  ScanSummary s;
  s.points = k;
  s.below = below;
  s.density = k == 0 ? 0.0 : static_cast<double>(below) / static_cast<double>(k);
  s.complete = k == total;
  return s;
}

/// Parse a scan CSV back into records.
inline std::vector<ScanRecord> read_scan_csv(const std::filesystem::path& csv) {
  std::ifstream in(csv);
  std::string line;
  std::getline(in, line);
  std::vector<ScanRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ScanRecord r;
    int zf = 0;
    if (std::sscanf(line.c_str(), "%lf,%lf,%d,%lf", &r.t, &r.d, &zf, &r.min_modulus) != 4)
      throw Error(ErrorCode::SchemaError, "malformed scan row: " + line);
    r.zero_free = zf != 0;
    out.push_back(r);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Polynomial extraction from a shift
// ---------------------------------------------------------------------------

struct ExtractionOptions {
  double taylor_radius = 1.2;
  int quadrature_points = 2048;
  int degree_cap = 64;
  int check_points = 1024;  // samples on |z| = 1 for the Taylor gap
  SampleResolution resolution{1024, 64};
};

struct ExtractionReport {
  ComplexPolynomial polynomial;  // p(z) = q(3/4 + eps z)
  ComplexPolynomial taylor;      // q
  std::vector<complex> roots;    // roots of p
  double epsilon = 0.0;
  double delta = 0.0;            // sampled min_{K0} |g|
  double budget = 0.0;           // min(eps/2, delta/2)
  double taylor_gap = 0.0;       // sampled sup_{|z|=1} |q - g|
  double sup_error_k0 = 0.0;     // sampled sup_K |p(z) - g(3/4 + eps z)|
  double min_modulus = 0.0;      // sampled min_K |p|
  int degree = 0;
  Rectangle cover;               // covering rectangle of K0
  int zero_count = 0;
  double winding_residual = 0.0;
};

/// Taylor coefficients of g about 0 by the trapezoid rule on |z| = radius.
inline std::vector<complex> cauchy_coefficients(const AnalyticFunction& g, double radius, int points, int count) {
  if (points < 2 * count) throw Error(ErrorCode::InvalidArgument, "too few quadrature points for the requested count");
  std::vector<complex> vals(static_cast<std::size_t>(points));
  for (int j = 0; j < points; ++j) vals[static_cast<std::size_t>(j)] = g(std::polar(radius, 2.0 * std::numbers::pi * j / points));
  std::vector<complex> coeffs(static_cast<std::size_t>(count), 0.0);
  for (int k = 0; k < count; ++k) {
    complex s = 0.0;
    for (int j = 0; j < points; ++j)
      s += vals[static_cast<std::size_t>(j)] * std::polar(1.0, -2.0 * std::numbers::pi * k * j / points);
    coeffs[static_cast<std::size_t>(k)] = s / (static_cast<double>(points) * std::pow(radius, k));
  }
  return coeffs;
}

/// Core extraction for any evaluator g analytic on |z| <= taylor_radius
/// (g stands for z -> zeta(z + iT)).
inline ExtractionReport extract_polynomial(const AnalyticFunction& g, const CompactRegion& K, double eps,
                                           const ExtractionOptions& opt = {}) {
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
  const complex c0{0.75, 0.0};
  auto to_k0 = [&](complex z) { return c0 + eps * z; };
  const Box& b = K.bounds();
  for (complex corner : {complex{b.xmin, b.ymin}, complex{b.xmax, b.ymax}, complex{b.xmin, b.ymax},
                         complex{b.xmax, b.ymin}})
    if (std::abs(to_k0(corner) - c0) > 0.125 + 1e-15)
      throw Error(ErrorCode::OutOfValidity, "K0 = 3/4 + eps K must lie within 1/8 of 3/4");

  ExtractionReport rep;
  rep.epsilon = eps;
  Rectangle cover{c0.real() + eps * b.xmin, c0.real() + eps * b.xmax, eps * b.ymin, eps * b.ymax};
  const double pad = 1e-3 * std::max(1e-3, eps * b.diagonal());
  cover = cover.expanded(pad);
  auto zc = count_zeros(g, cover);
  rep.cover = zc.rectangle;
  rep.zero_count = zc.count;
  rep.winding_residual = zc.winding_residual;
  if (zc.count != 0) throw Error(ErrorCode::ZeroOnK0, "the shifted function has zeros near K0");

  const auto samples = dense_samples(K, opt.resolution);
  std::vector<complex> gv(samples.size());
  rep.delta = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < samples.size(); ++j) {
    gv[j] = g(to_k0(samples[j]));
    rep.delta = std::min(rep.delta, std::abs(gv[j]));
  }
  if (!(rep.delta > 0.0)) throw Error(ErrorCode::ZeroOnK0, "the shifted function vanishes on K0");
  rep.budget = std::min(0.5 * eps, 0.5 * rep.delta);

  auto coeffs = cauchy_coefficients(g, opt.taylor_radius, opt.quadrature_points, opt.degree_cap + 1);
  std::vector<complex> circle(static_cast<std::size_t>(opt.check_points)), gc(circle.size());
  for (std::size_t j = 0; j < circle.size(); ++j) {
    circle[j] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(circle.size()));
    gc[j] = g(circle[j]);
  }
  bool found = false;
  for (int d = 0; d <= opt.degree_cap; ++d) {
    ComplexPolynomial q(std::vector<complex>(coeffs.begin(), coeffs.begin() + d + 1));
    double gap = 0.0;
    for (std::size_t j = 0; j < circle.size(); ++j) gap = std::max(gap, std::abs(q(circle[j]) - gc[j]));
    if (gap <= rep.budget) {
      rep.taylor = std::move(q);
      rep.taylor_gap = gap;
      found = true;
      break;
    }
  }
  if (!found) throw Error(ErrorCode::DegreeCapExceeded, "Taylor gap did not reach min(eps/2, delta/2)");

  rep.polynomial = rep.taylor.compose_affine(eps, c0);
  rep.degree = rep.polynomial.degree();
  rep.min_modulus = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < samples.size(); ++j) {
    complex pv = rep.polynomial(samples[j]);
    rep.sup_error_k0 = std::max(rep.sup_error_k0, std::abs(pv - gv[j]));
    rep.min_modulus = std::min(rep.min_modulus, std::abs(pv));
  }
  if (rep.degree >= 1) {
    rep.roots = find_roots(rep.polynomial, {200, 1e-12, std::max(64, rep.degree)}).roots;
    for (auto r : rep.roots)
      if (contains(K, r, 0.0) != Membership::outside)
        throw Error(ErrorCode::ZeroOnK0, "extracted polynomial has a zero on K");
  }
  if (!(rep.min_modulus > 0.0)) throw Error(ErrorCode::ZeroOnK0, "extracted polynomial vanishes on K");
  return rep;
}

/// Extraction from zeta(z + iT). The Taylor circle reaches Re z = -1.2, so the
/// evaluator runs with its validity floor lowered accordingly.
inline ExtractionReport extract_polynomial_from_shift(const ZetaEvaluator& ev, double T, const CompactRegion& K,
                                                      double eps, const ExtractionOptions& opt = {}) {
  if (!(std::abs(T) >= 2.0))
    throw Error(ErrorCode::OutOfValidity, "|T| must be at least 2 so the pole stays off the Taylor disc");
  if (std::abs(T) + opt.taylor_radius > ev.t_max)
    throw Error(ErrorCode::OutOfValidity, "T exceeds the evaluator height cap");
  ZetaEvaluator wide = ev;
  wide.sigma_min = std::min(ev.sigma_min, -2.0);
  return extract_polynomial([wide, T](complex z) { return wide(z + complex{0.0, T}); }, K, eps, opt);
}

// ---------------------------------------------------------------------------
// Triangle-inequality composition
// ---------------------------------------------------------------------------

struct CompositionVerdict {
  double certified = 0.0;   // bound_p + bound_zp
  double observed = 0.0;    // sampled sup_K |zeta(z + it) - f(z)|
  double observed_p = 0.0;  // sampled sup_K |p - f|
  double observed_zp = 0.0; // sampled sup_K |zeta(z + it) - p|
  bool holds = false;
};

/// Certifies sup_K |zeta(. + it) - f| <= bound_p + bound_zp from the two
/// claimed bounds, after checking both claims against a dense recomputation.
inline CompositionVerdict compose_universality(const TargetFunction& f, const ComplexPolynomial& p, double t,
                                               const CompactRegion& K, double bound_p, double bound_zp,
                                               const AnalyticFunction& zeta_fn,
                                               const SampleResolution& res = {256, 16}) {
  if (!(bound_p >= 0.0) || !(bound_zp >= 0.0)) throw Error(ErrorCode::InvalidArgument, "bounds must be nonnegative");
  CompositionVerdict v;
  v.certified = bound_p + bound_zp;
  const complex shift{0.0, t};
  for (auto z : dense_samples(K, res)) {
    complex fz = f(z), pz = p(z), zt = zeta_fn(z + shift);
    v.observed_p = std::max(v.observed_p, std::abs(pz - fz));
    v.observed_zp = std::max(v.observed_zp, std::abs(zt - pz));
    v.observed = std::max(v.observed, std::abs(zt - fz));
  }
  auto exceeds = [](double seen, double claim) { return seen > claim * (1.0 + 1e-9) + 1e-12; };
  if (exceeds(v.observed_p, bound_p) || exceeds(v.observed_zp, bound_zp))
    throw Error(ErrorCode::InconsistentSampling, "a claimed bound is violated on the verification samples");
  v.holds = v.observed <= v.certified * (1.0 + 1e-12) + 1e-15;
  return v;
}

inline CompositionVerdict compose_universality(const TargetFunction& f, const ComplexPolynomial& p, double t,
                                               const CompactRegion& K, double bound_p, double bound_zp,
                                               const ZetaEvaluator& ev = {},
                                               const SampleResolution& res = {256, 16}) {
  return compose_universality(f, p, t, K, bound_p, bound_zp, [ev](complex s) { return zeta(ev, s); }, res);
}

}  // namespace nonvanish
