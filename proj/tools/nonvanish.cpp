// Command-line front end: approx | scan | extract | zeros | verify.
//
// Exit codes: 0 success, 1 usage or input error, 2 pipeline error (an error
// report is still written), 3 verification failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "nonvanish/nonvanish.hpp"

namespace nv = nonvanish;
using nv::io::ordered_json;

namespace {

constexpr int kOk = 0, kUsage = 1, kPipeline = 2, kVerification = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("nonvanish");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("NONVANISH_LOG")) spdlog::set_level(spdlog::level::from_str(env));
}

void require_positive(double v, const char* flag) {
  if (!(v > 0.0)) throw UsageError(std::string(flag) + " must be positive");
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

// Pipeline errors come back as a report; input problems are usage errors.
bool is_input_error(const nv::Error& e) {
  return e.code() == nv::ErrorCode::SchemaError || e.code() == nv::ErrorCode::InvalidRegion;
}

int pipeline_failure(const nv::Error& e, const std::string& out) {
  spdlog::error("{}", e.what());
  if (!out.empty()) nv::io::write_json_file(out, nv::io::error_report_json(e));
  std::cerr << e.what() << "\n";
  return kPipeline;
}

struct Common {
  std::string region, function, out, plot;
  double epsilon = 0.0;
  int degree_max = 64;
  int samples = 1024;
  std::uint64_t seed = 0;
};

int run_approx(const Common& c) {
  require_positive(c.epsilon, "--epsilon");
  if (c.degree_max < 0 || c.degree_max > 64) throw UsageError("--degree-max must lie in [0, 64]");
  if (c.samples < 16) throw UsageError("--samples must be at least 16");
  auto K = nv::io::region_from_json(nv::io::read_json_file(c.region));
  auto f = nv::io::function_from_json(nv::io::read_json_file(c.function));
  nv::PipelineOptions opt;
  opt.degree_max = c.degree_max;
  opt.verification.boundary_per_component = c.samples;
  opt.seed = c.seed;
  spdlog::info("approx: {} component(s), {} filament(s), {} point(s), eps={}", K.components().size(),
               K.filaments().size(), K.points().size(), c.epsilon);
  nv::ApproximationReport rep;
  try {
    rep = nv::nonvanishing_approx(f, K, c.epsilon, opt);
  } catch (const nv::Error& e) {
    if (is_input_error(e)) throw;
    return pipeline_failure(e, c.out);
  }
  auto j = nv::io::report_to_json(rep);
  j["function"] = nv::to_string(f.kind());
  j["seed"] = c.seed;
  if (!c.out.empty()) nv::io::write_json_file(c.out, j);
  if (!c.plot.empty()) write_text(c.plot, nv::error_heatmap_svg(rep.polynomial, rep.roots, f, K));
  spdlog::info("approx: degree {} sup_error {} min_modulus {}", rep.degree, rep.sup_error, rep.min_modulus);
  return kOk;
}

struct ScanArgs {
  double t_min = 0.0, t_max = 0.0, t_step = 0.0;
  bool resume = false;
  std::size_t checkpoint_every = 10000;
  std::size_t stop_after = 0;
};

int run_scan(const Common& c, const ScanArgs& s) {
  require_positive(c.epsilon, "--epsilon");
  require_positive(s.t_step, "--t-step");
  if (!(s.t_max >= s.t_min)) throw UsageError("--t-max must be >= --t-min");
  if (c.out.empty()) throw UsageError("--out is required for scan");
  auto K = nv::io::region_from_json(nv::io::read_json_file(c.region));
  auto f = nv::io::function_from_json(nv::io::read_json_file(c.function));
  nv::ScanOptions opt;
  opt.checkpoint_every = s.checkpoint_every;
  opt.stop_after = s.stop_after;
  if (c.samples != 1024) opt.resolution.boundary_per_component = c.samples;
  nv::ScanSummary summary;
  try {
    summary = nv::scan_to_csv(nv::ZetaEvaluator{}, f, K, c.epsilon, {s.t_min, s.t_max, s.t_step}, c.out, s.resume, opt);
  } catch (const nv::Error& e) {
    if (is_input_error(e)) throw;
    return pipeline_failure(e, "");
  }
  ordered_json j;
  j["schema"] = nv::io::kSchemaVersion;
  j["points"] = summary.points;
  j["below"] = summary.below;
  j["density"] = summary.density;
  j["complete"] = summary.complete;
  std::cout << j.dump() << "\n";
  return kOk;
}

int run_extract(const Common& c, double T) {
  require_positive(c.epsilon, "--epsilon");
  auto K = nv::io::region_from_json(nv::io::read_json_file(c.region));
  try {
    auto rep = nv::extract_polynomial_from_shift(nv::ZetaEvaluator{}, T, K, c.epsilon);
    if (!c.out.empty()) nv::io::write_json_file(c.out, nv::io::extraction_to_json(rep, T));
    spdlog::info("extract: degree {} taylor gap {} budget {}", rep.degree, rep.taylor_gap, rep.budget);
  } catch (const nv::Error& e) {
    if (is_input_error(e)) throw;
    return pipeline_failure(e, c.out);
  }
  return kOk;
}

int run_zeros(const std::vector<double>& rect, const std::string& out) {
  if (rect.size() != 4) throw UsageError("--rect takes sigma_min sigma_max t_min t_max");
  nv::Rectangle r{rect[0], rect[1], rect[2], rect[3]};
  if (!(r.sigma_max > r.sigma_min && r.t_max > r.t_min)) throw UsageError("--rect is degenerate");
  try {
    auto res = nv::count_zeros_rectangle(nv::ZetaEvaluator{}, r);
    auto j = nv::io::zero_count_to_json(res);
    if (!out.empty()) nv::io::write_json_file(out, j);
    std::cout << j.dump() << "\n";
  } catch (const nv::Error& e) {
    return pipeline_failure(e, out);
  }
  return kOk;
}

int run_verify(const Common& c, const std::string& report_path) {
  auto report = nv::io::read_json_file(report_path);
  nv::io::detail::check_schema_version(report);
  if (!report.is_object() || report.value("status", std::string()) != "ok") {
    std::cerr << "report does not describe a successful run\n";
    return kVerification;
  }
  auto K = nv::io::region_from_json(nv::io::read_json_file(c.region));
  auto f = nv::io::function_from_json(nv::io::read_json_file(c.function));
  auto p = nv::io::polynomial_from_json(nv::io::detail::require(report, "polynomial", ""), "polynomial");
  const double sup_claim = nv::io::detail::number(nv::io::detail::require(report, "sup_error", ""), "sup_error");
  const double min_claim = nv::io::detail::number(nv::io::detail::require(report, "min_modulus", ""), "min_modulus");
  const double eps = nv::io::detail::number(nv::io::detail::require(report, "epsilon", ""), "epsilon");
  const auto& res = nv::io::detail::require(report, "verification_resolution", "");
  nv::SampleResolution doubled{
      2 * static_cast<int>(nv::io::detail::number(nv::io::detail::require(res, "boundary_per_component", "verification_resolution"),
                                                  "verification_resolution.boundary_per_component")),
      2 * static_cast<int>(nv::io::detail::number(nv::io::detail::require(res, "interior_grid", "verification_resolution"),
                                                  "verification_resolution.interior_grid"))};
  double sup = 0.0, mn = std::numeric_limits<double>::infinity();
  for (auto z : nv::dense_samples(K, doubled)) {
    auto pv = p(z);
    sup = std::max(sup, std::abs(pv - f(z)));
    mn = std::min(mn, std::abs(pv));
  }
  bool roots_outside = true;
  if (p.degree() >= 1)
    for (auto r : nv::find_roots(p, {200, 1e-12, std::max(64, p.degree())}).roots)
      roots_outside = roots_outside && nv::contains(K, r, 0.0) == nv::Membership::outside;
  const bool sup_ok = sup <= 1.1 * sup_claim + 1e-12;
  const bool min_ok = mn >= 0.9 * min_claim && mn > 0.0;
  ordered_json j;
  j["schema"] = nv::io::kSchemaVersion;
  j["status"] = sup_ok && min_ok && roots_outside ? "ok" : "failed";
  j["epsilon"] = eps;
  j["sup_error"] = sup;
  j["sup_error_reported"] = sup_claim;
  j["min_modulus"] = mn;
  j["min_modulus_reported"] = min_claim;
  j["roots_outside"] = roots_outside;
  j["boundary_per_component"] = doubled.boundary_per_component;
  j["interior_grid"] = doubled.interior_grid;
  if (!c.out.empty()) nv::io::write_json_file(c.out, j);
  std::cout << j.dump() << "\n";
  return j["status"] == "ok" ? kOk : kVerification;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Polynomial approximation without zeros on compact sets, plus zeta-shift tools"};
  app.require_subcommand(1);
  Common c;
  ScanArgs scan_args;
  double T = 0.0;
  std::vector<double> rect;
  std::string report_path;

  auto add_common = [&](CLI::App* sub, bool with_function) {
    sub->add_option("--region", c.region, "region JSON file")->required()->check(CLI::ExistingFile);
    if (with_function) sub->add_option("--function", c.function, "function JSON file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", c.out, "output file");
    sub->add_option("--seed", c.seed, "random seed (recorded; the pipelines are deterministic)");
  };

  auto* approx = app.add_subcommand("approx", "nonvanishing polynomial approximation");
  add_common(approx, true);
  approx->add_option("--epsilon", c.epsilon, "target accuracy")->required();
  approx->add_option("--degree-max", c.degree_max, "degree cap (<= 64)");
  approx->add_option("--samples", c.samples, "verification samples per boundary component");
  approx->add_option("--plot", c.plot, "SVG heatmap of |p - f|");

  auto* scan = app.add_subcommand("scan", "scan vertical shifts of zeta against a target");
  add_common(scan, true);
  scan->add_option("--epsilon", c.epsilon, "closeness threshold")->required();
  scan->add_option("--t-min", scan_args.t_min)->required();
  scan->add_option("--t-max", scan_args.t_max)->required();
  scan->add_option("--t-step", scan_args.t_step)->required();
  scan->add_option("--samples", c.samples, "boundary samples per component");
  scan->add_flag("--resume", scan_args.resume, "continue from the checkpoint next to --out");
  scan->add_option("--checkpoint-every", scan_args.checkpoint_every, "grid points between checkpoints");
  scan->add_option("--stop-after", scan_args.stop_after, "stop after this many grid points (0: run to the end)");

  auto* extract = app.add_subcommand("extract", "Taylor polynomial of zeta(z + iT) rescaled to K");
  add_common(extract, false);
  extract->add_option("--t", T, "shift height T")->required();
  extract->add_option("--epsilon", c.epsilon, "scale and accuracy")->required();

  auto* zeros = app.add_subcommand("zeros", "count zeta zeros in a rectangle");
  zeros->add_option("--rect", rect, "sigma_min sigma_max t_min t_max")->required()->expected(4);
  zeros->add_option("--out", c.out, "output JSON");

  auto* verify = app.add_subcommand("verify", "re-check a report at doubled resolution");
  add_common(verify, true);
  verify->add_option("--report", report_path, "report JSON")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*approx) return run_approx(c);
    if (*scan) return run_scan(c, scan_args);
    if (*extract) return run_extract(c, T);
    if (*zeros) return run_zeros(rect, c.out);
    if (*verify) return run_verify(c, report_path);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const nv::Error& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
