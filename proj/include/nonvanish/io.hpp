#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nonvanish/approx.hpp"
#include "nonvanish/error.hpp"
#include "nonvanish/region.hpp"
#include "nonvanish/target.hpp"
#include "nonvanish/zeta_lab.hpp"

namespace nonvanish::io {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1";

namespace detail {

[[noreturn]] inline void schema_error(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::SchemaError, "key '" + where + "': " + what);
}

inline const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) schema_error(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema_error(where.empty() ? key : where + "." + key, "missing");
  return *it;
}

inline double number(const json& j, const std::string& where) {
  if (!j.is_number()) schema_error(where, "expected a number");
  return j.get<double>();
}

inline complex complex_value(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    schema_error(where, "expected [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline std::vector<complex> complex_list(const json& j, const std::string& where) {
  if (!j.is_array()) schema_error(where, "expected an array of [re, im] pairs");
  std::vector<complex> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(complex_value(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

inline std::vector<double> real_list(const json& j, const std::string& where) {
  if (!j.is_array()) schema_error(where, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

inline void check_schema_version(const json& j) {
  if (!j.is_object()) return;
  auto it = j.find("schema");
  if (it == j.end()) return;
  if (!it->is_string() || it->get<std::string>() != kSchemaVersion) schema_error("schema", "unsupported version");
}

inline ordered_json complex_json(complex z) { return ordered_json::array({z.real(), z.imag()}); }

// JSON has no infinity; unbounded quantities are written as null.
inline ordered_json finite_or_null(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

}  // namespace detail

inline json parse_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::SchemaError, "malformed JSON in " + source + ": " + e.what());
  }
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str(), path);
}

// --- polynomials -----------------------------------------------------------

inline ordered_json polynomial_to_json(const ComplexPolynomial& p) {
  ordered_json a = ordered_json::array();
  for (auto c : p.coefficients()) a.push_back(detail::complex_json(c));
  return a;
}

inline ComplexPolynomial polynomial_from_json(const json& j, const std::string& where = "coeffs") {
  return ComplexPolynomial(detail::complex_list(j, where));
}

// --- regions ---------------------------------------------------------------

inline CompactRegion region_from_json(const json& j) {
  detail::check_schema_version(j);
  if (!j.is_object()) detail::schema_error("region", "expected an object");
  std::vector<JordanComponent> comps;
  std::vector<std::vector<complex>> filaments;
  std::vector<complex> points;
  if (auto it = j.find("components"); it != j.end()) {
    if (!it->is_array()) detail::schema_error("components", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const json& c = (*it)[i];
      const std::string where = "components[" + std::to_string(i) + "]";
      const json& type = detail::require(c, "type", where);
      if (!type.is_string()) detail::schema_error(where + ".type", "expected a string");
      int id = static_cast<int>(i);
      if (auto idit = c.find("id"); idit != c.end()) {
        if (!idit->is_number_integer()) detail::schema_error(where + ".id", "expected an integer");
        id = idit->get<int>();
      }
      const std::string t = type.get<std::string>();
      if (t == "disc") {
        comps.push_back(JordanComponent::disc(
            id, detail::complex_value(detail::require(c, "center", where), where + ".center"),
            detail::number(detail::require(c, "radius", where), where + ".radius")));
      } else if (t == "polygon") {
        comps.push_back(JordanComponent::polygon(
            id, detail::complex_list(detail::require(c, "vertices", where), where + ".vertices")));
      } else if (t == "starlike") {
        std::vector<double> bs;
        if (auto s = c.find("fourier_sin"); s != c.end()) bs = detail::real_list(*s, where + ".fourier_sin");
        comps.push_back(JordanComponent::starlike(
            id, detail::complex_value(detail::require(c, "center", where), where + ".center"),
            detail::real_list(detail::require(c, "fourier_cos", where), where + ".fourier_cos"), std::move(bs)));
      } else {
        detail::schema_error(where + ".type", "unknown component type '" + t + "'");
      }
    }
  }
  if (auto it = j.find("filaments"); it != j.end()) {
    if (!it->is_array()) detail::schema_error("filaments", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i)
      filaments.push_back(detail::complex_list((*it)[i], "filaments[" + std::to_string(i) + "]"));
  }
  if (auto it = j.find("points"); it != j.end()) points = detail::complex_list(*it, "points");
  return CompactRegion(std::move(comps), std::move(filaments), std::move(points));
}

inline ordered_json region_to_json(const CompactRegion& K) {
  ordered_json j;
  j["schema"] = kSchemaVersion;
  ordered_json comps = ordered_json::array();
  for (const auto& c : K.components()) {
    ordered_json o;
    o["id"] = c.id();
    switch (c.kind()) {
      case ComponentKind::disc:
        o["type"] = "disc";
        o["center"] = detail::complex_json(c.center());
        o["radius"] = c.radius();
        break;
      case ComponentKind::polygon: {
        o["type"] = "polygon";
        ordered_json v = ordered_json::array();
        for (auto z : c.polyline()) v.push_back(detail::complex_json(z));
        o["vertices"] = v;
        break;
      }
      case ComponentKind::starlike:
        o["type"] = "starlike";
        o["center"] = detail::complex_json(c.center());
        o["fourier_cos"] = c.fourier_cos();
        o["fourier_sin"] = c.fourier_sin();
        break;
    }
    comps.push_back(o);
  }
  j["components"] = comps;
  ordered_json fil = ordered_json::array();
  for (const auto& f : K.filaments()) {
    ordered_json a = ordered_json::array();
    for (auto z : f) a.push_back(detail::complex_json(z));
    fil.push_back(a);
  }
  j["filaments"] = fil;
  ordered_json pts = ordered_json::array();
  for (auto z : K.points()) pts.push_back(detail::complex_json(z));
  j["points"] = pts;
  return j;
}

// --- target functions ------------------------------------------------------

inline TargetFunction function_from_json(const json& j, const std::string& where = "function") {
  detail::check_schema_version(j);
  const json& type = detail::require(j, "type", where == "function" ? "" : where);
  if (!type.is_string()) detail::schema_error(where + ".type", "expected a string");
  const std::string t = type.get<std::string>();
  const std::string prefix = where == "function" ? "" : where + ".";
  if (t == "const") return TargetFunction::constant(detail::complex_value(detail::require(j, "value", where), prefix + "value"));
  if (t == "poly")
    return TargetFunction::polynomial(polynomial_from_json(detail::require(j, "coeffs", where), prefix + "coeffs"));
  if (t == "exp") return TargetFunction::exponential();
  if (t == "rational")
    return TargetFunction::rational(polynomial_from_json(detail::require(j, "num", where), prefix + "num"),
                                    polynomial_from_json(detail::require(j, "den", where), prefix + "den"));
  if (t == "zeta_shift") return TargetFunction::zeta_shift(detail::number(detail::require(j, "t", where), prefix + "t"));
  if (t == "compose")
    return TargetFunction::compose(function_from_json(detail::require(j, "outer", where), prefix + "outer"),
                                   function_from_json(detail::require(j, "inner", where), prefix + "inner"));
  detail::schema_error(prefix + "type", "unknown function type '" + t + "'");
}

// --- reports ---------------------------------------------------------------

inline ordered_json report_to_json(const ApproximationReport& r) {
  ordered_json j;
  j["schema"] = kSchemaVersion;
  j["status"] = "ok";
  j["epsilon"] = r.epsilon;
  j["degree"] = r.degree;
  j["polynomial"] = polynomial_to_json(r.polynomial);
  ordered_json roots = ordered_json::array();
  for (auto z : r.roots) roots.push_back(detail::complex_json(z));
  j["roots"] = roots;
  j["sup_error"] = r.sup_error;
  j["min_modulus"] = r.min_modulus;
  ordered_json ledger = ordered_json::array();
  for (const auto& e : r.stage_ledger) {
    ordered_json o;
    o["stage"] = e.stage;
    o["error"] = e.error;
    o["budget"] = e.budget;
    ledger.push_back(o);
  }
  j["stage_ledger"] = ledger;
  j["xi_used"] = r.xi_used;
  j["delta_used"] = detail::finite_or_null(r.delta_used);
  ordered_json cx = ordered_json::object();
  for (const auto& [id, xi] : r.component_xi) cx[std::to_string(id)] = xi;
  j["component_xi"] = cx;
  ordered_json glue = ordered_json::array();
  for (const auto& g : r.glue) {
    ordered_json o;
    o["root"] = g.tree.root;
    o["order"] = g.tree.order;
    ordered_json edges = ordered_json::array();
    for (const auto& [child, parent] : g.tree.parent) {
      ordered_json e;
      e["child"] = child;
      e["parent"] = parent;
      e["contact_point"] = detail::complex_json(g.tree.contact_points.at(child));
      e["rescale"] = detail::complex_json(g.rescale.at(child));
      edges.push_back(e);
    }
    o["edges"] = edges;
    o["xi_glue"] = g.xi_glue;
    o["C"] = g.C;
    o["delta_contact"] = g.delta_contact;
    o["continuity_residual"] = g.continuity_residual;
    o["gap"] = g.gap;
    glue.push_back(o);
  }
  j["glue"] = glue;
  j["nudge_step"] = r.nudge_step;
  j["moved_roots"] = r.moved_roots;
  ordered_json res;
  res["boundary_per_component"] = r.samples.boundary_per_component;
  res["interior_grid"] = r.samples.interior_grid;
  res["total_samples"] = r.samples.total;
  res["least_squares_samples"] = r.samples.least_squares;
  j["verification_resolution"] = res;
  j["region_hash"] = r.region_hash;
  return j;
}

inline ordered_json error_report_json(const Error& e) {
  ordered_json j;
  j["schema"] = kSchemaVersion;
  j["status"] = "error";
  j["error"] = std::string(e.name());
  j["message"] = e.what();
  return j;
}

inline ordered_json extraction_to_json(const ExtractionReport& r, double T) {
  ordered_json j;
  j["schema"] = kSchemaVersion;
  j["status"] = "ok";
  j["T"] = T;
  j["epsilon"] = r.epsilon;
  j["degree"] = r.degree;
  j["polynomial"] = polynomial_to_json(r.polynomial);
  j["taylor"] = polynomial_to_json(r.taylor);
  ordered_json roots = ordered_json::array();
  for (auto z : r.roots) roots.push_back(detail::complex_json(z));
  j["roots"] = roots;
  j["delta"] = r.delta;
  j["budget"] = r.budget;
  j["taylor_gap"] = r.taylor_gap;
  j["sup_error_k0"] = r.sup_error_k0;
  j["min_modulus"] = r.min_modulus;
  ordered_json rect;
  rect["sigma_min"] = r.cover.sigma_min;
  rect["sigma_max"] = r.cover.sigma_max;
  rect["t_min"] = r.cover.t_min;
  rect["t_max"] = r.cover.t_max;
  j["cover"] = rect;
  j["zero_count"] = r.zero_count;
  j["winding_residual"] = r.winding_residual;
  return j;
}

inline ordered_json zero_count_to_json(const ZeroCountResult& r) {
  ordered_json j;
  j["schema"] = kSchemaVersion;
  j["status"] = "ok";
  ordered_json rect;
  rect["sigma_min"] = r.rectangle.sigma_min;
  rect["sigma_max"] = r.rectangle.sigma_max;
  rect["t_min"] = r.rectangle.t_min;
  rect["t_max"] = r.rectangle.t_max;
  j["rectangle"] = rect;
  j["count"] = r.count;
  j["contour_samples"] = r.contour_samples;
  j["winding_residual"] = r.winding_residual;
  return j;
}

inline void write_json_file(const std::string& path, const ordered_json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace nonvanish::io
