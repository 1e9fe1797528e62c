#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "nonvanish/io.hpp"

using namespace nonvanish;
using nlohmann::json;

namespace {

std::string schema_message(const std::string& text, bool as_region) {
  try {
    auto j = io::parse_text(text, "test");
    if (as_region)
      io::region_from_json(j);
    else
      io::function_from_json(j);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SchemaError) << e.what();
    return e.what();
  }
  ADD_FAILURE() << "accepted: " << text;
  return {};
}

}  // namespace

TEST(RegionJson, ParsesAllKinds) {
  auto K = io::region_from_json(io::parse_text(R"({
    "schema": "1",
    "components": [
      {"type": "disc", "center": [0, 0], "radius": 1},
      {"type": "polygon", "id": 7, "vertices": [[3, -1], [5, -1], [5, 1], [3, 1]]},
      {"type": "starlike", "center": [10, 0], "fourier_cos": [1, 0, 0.2]}
    ],
    "filaments": [[[20, 0], [21, 0]]],
    "points": [[30, 0]]
  })", "inline"));
  ASSERT_EQ(K.components().size(), 3u);
  EXPECT_EQ(K.components()[0].id(), 0);
  EXPECT_EQ(K.components()[1].id(), 7);
  EXPECT_EQ(K.components()[2].kind(), ComponentKind::starlike);
  EXPECT_EQ(K.filaments().size(), 1u);
  EXPECT_EQ(K.points().size(), 1u);
  EXPECT_EQ(contains(K, {30.0, 0.0}, 1e-12), Membership::boundary);
}

TEST(RegionJson, ErrorsNameTheKey) {
  EXPECT_NE(schema_message(R"({"components": [{"type": "disc", "center": [0, 0]}]})", true)
                .find("components[0].radius"),
            std::string::npos);
  EXPECT_NE(schema_message(R"({"components": [{"type": "disc", "center": [0], "radius": 1}]})", true)
                .find("components[0].center"),
            std::string::npos);
  EXPECT_NE(schema_message(R"({"components": [{"type": "blob"}]})", true).find("components[0].type"),
            std::string::npos);
  EXPECT_NE(schema_message(R"({"points": [[0, 0], [1, "x"]]})", true).find("points[1]"), std::string::npos);
  EXPECT_NE(schema_message(R"({"schema": "2", "points": []})", true).find("schema"), std::string::npos);
  EXPECT_NE(schema_message(R"({"components": [)", true).find("malformed"), std::string::npos);
}

TEST(FunctionJson, Kinds) {
  auto c = io::function_from_json(json::parse(R"({"type": "const", "value": [2, 1]})"));
  EXPECT_EQ(c({0.3, 0.1}), complex(2.0, 1.0));
  auto p = io::function_from_json(json::parse(R"({"type": "poly", "coeffs": [[-1, 0], [0, 0], [1, 0]]})"));
  EXPECT_LT(std::abs(p(2.0) - 3.0), 1e-15);
  auto e = io::function_from_json(json::parse(R"({"type": "exp"})"));
  EXPECT_LT(std::abs(e(1.0) - std::exp(1.0)), 1e-15);
  auto r = io::function_from_json(json::parse(R"({"type": "rational", "num": [[1, 0]], "den": [[-3, 0], [1, 0]]})"));
  EXPECT_LT(std::abs(r(1.0) + 0.5), 1e-15);
  auto z = io::function_from_json(json::parse(R"({"type": "zeta_shift", "t": 20})"));
  EXPECT_LT(std::abs(z(0.75) - zeta(ZetaEvaluator{}, {0.75, 20.0})), 1e-15);
  auto comp = io::function_from_json(
      json::parse(R"({"type": "compose", "outer": {"type": "exp"}, "inner": {"type": "poly", "coeffs": [[0, 0], [2, 0]]}})"));
  EXPECT_LT(std::abs(comp(0.5) - std::exp(1.0)), 1e-14);
}

TEST(FunctionJson, ErrorsNameTheKey) {
  EXPECT_NE(schema_message(R"({"value": [1, 0]})", false).find("'type'"), std::string::npos);
  EXPECT_NE(schema_message(R"({"type": "poly"})", false).find("coeffs"), std::string::npos);
  EXPECT_NE(schema_message(R"({"type": "zeta_shift", "t": "x"})", false).find("'t'"), std::string::npos);
  EXPECT_NE(schema_message(R"({"type": "compose", "outer": {"type": "exp"}, "inner": {"type": "nope"}})", false)
                .find("inner.type"),
            std::string::npos);
}

TEST(Roundtrip, Region) {
  CompactRegion K({JordanComponent::disc(3, {0.5, -0.25}, 0.3),
                   JordanComponent::starlike(4, {3.0, 0.0}, {0.8, 0.05, 0.1}, {0.0, 0.03}),
                   JordanComponent::polygon(5, {{6, 0}, {7, 0}, {7, 1}})},
                  {{{10, 0}, {11, 1}}}, {{20, 0}});
  auto text = io::region_to_json(K).dump();
  auto back = io::region_from_json(json::parse(text));
  EXPECT_EQ(io::region_to_json(back).dump(), text);
}

TEST(Roundtrip, PolynomialsAreExact) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n(0.0, 1e3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<complex> c(1 + trial % 9);
    for (auto& x : c) x = {n(rng), n(rng) * 1e-7};
    ComplexPolynomial p(c);
    auto back = io::polynomial_from_json(json::parse(io::polynomial_to_json(p).dump()));
    ASSERT_EQ(back.coefficients().size(), p.coefficients().size());
    for (std::size_t k = 0; k < c.size(); ++k) EXPECT_EQ(back.coefficients()[k], p.coefficients()[k]);
  }
}

TEST(Report, ErrorReportShape) {
  auto j = io::error_report_json(Error(ErrorCode::InteriorZero, "f vanishes"));
  EXPECT_EQ(j["status"], "error");
  EXPECT_EQ(j["error"], "InteriorZero");
  EXPECT_EQ(j["schema"], io::kSchemaVersion);
}

TEST(Report, ApproximationReportIsDeterministic) {
  CompactRegion K({JordanComponent::disc(0, 0.0, 1.0)}, {}, {});
  PipelineOptions opt;
  opt.degree_max = 16;
  auto a = io::report_to_json(nonvanishing_approx(TargetFunction::exponential(), K, 1e-3, opt)).dump(2);
  auto b = io::report_to_json(nonvanishing_approx(TargetFunction::exponential(), K, 1e-3, opt)).dump(2);
  EXPECT_EQ(a, b);
  auto j = json::parse(a);
  EXPECT_EQ(j["status"], "ok");
  EXPECT_LT(j["sup_error"].get<double>(), 1e-3);
  auto p = io::polynomial_from_json(j["polynomial"]);
  EXPECT_LT(std::abs(p(0.5) - std::exp(0.5)), 1e-3);
  EXPECT_EQ(j["stage_ledger"].size(), 3u);
}

TEST(Report, NoInteriorWritesNullDelta) {
  CompactRegion K({}, {{-1.0, 1.0}}, {});
  auto j = io::report_to_json(nonvanishing_approx(TargetFunction::exponential(), K, 1e-2));
  EXPECT_TRUE(j["delta_used"].is_null());
}
