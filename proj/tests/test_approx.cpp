#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "nonvanish/approx.hpp"

using namespace nonvanish;

namespace {

CompactRegion unit_disc() { return CompactRegion({JordanComponent::disc(0, 0.0, 1.0)}, {}, {}); }

CompactRegion tangent_discs() {
  return CompactRegion({JordanComponent::disc(0, -1.0, 1.0), JordanComponent::disc(1, 1.0, 1.0)}, {}, {});
}

TargetFunction poly(std::vector<complex> c) { return TargetFunction::polynomial(ComplexPolynomial(std::move(c))); }

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::InvalidArgument;
}

// Independent verification grid on the closed unit disc: 8192 boundary points
// and a 64 x 64 polar-free Cartesian grid restricted to the disc.
std::vector<complex> oracle_disc_samples(complex c = 0.0, double r = 1.0) {
  std::vector<complex> s;
  for (int k = 0; k < 8192; ++k) s.push_back(c + std::polar(r, 2.0 * std::numbers::pi * (k + 0.5) / 8192));
  for (int i = 0; i < 64; ++i)
    for (int j = 0; j < 64; ++j) {
      complex z{-1.0 + (i + 0.5) / 32.0, -1.0 + (j + 0.5) / 32.0};
      if (std::abs(z) <= 1.0) s.push_back(c + r * z);
    }
  return s;
}

void expect_certified(const ApproximationReport& r, const CompactRegion& K) {
  EXPECT_LT(r.sup_error, r.epsilon);
  EXPECT_GT(r.min_modulus, 0.0);
  for (auto z : r.roots) EXPECT_EQ(contains(K, z, 0.0), Membership::outside);
  double total = 0.0;
  for (const auto& e : r.stage_ledger) {
    EXPECT_LE(e.error, r.epsilon / 3.0 + 1e-12) << e.stage;
    total += e.error;
  }
  EXPECT_LE(r.sup_error, total + 1e-12);
}

}  // namespace

// --- least squares ----------------------------------------------------------

TEST(LeastSquares, ReproducesCubic) {
  std::vector<complex> c{{0.5, -1}, {2, 0.25}, {-0.75, 0}, {0.1, 0.3}};
  auto p = polynomial_least_squares(poly(c), CompactRegion({JordanComponent::disc(0, {0.2, 0.1}, 0.7)}, {}, {}), 3, 64);
  ASSERT_EQ(p.degree(), 3);
  for (int k = 0; k <= 3; ++k) EXPECT_LT(std::abs(p.coefficient(k) - c[static_cast<std::size_t>(k)]), 1e-10);
}

TEST(LeastSquares, ExpWithinTwiceTaylorTail) {
  double tail = std::numbers::e;
  double fact = 1.0;
  for (int k = 0; k <= 8; ++k) {
    if (k > 0) fact *= k;
    tail -= 1.0 / fact;
  }
  auto p = polynomial_least_squares(TargetFunction::exponential(), unit_disc(), 8, 512);
  double err = 0.0;
  for (int k = 0; k < 4096; ++k) {
    complex z = std::polar(1.0, 2.0 * std::numbers::pi * (k + 0.25) / 4096);
    err = std::max(err, std::abs(p(z) - std::exp(z)));
  }
  EXPECT_LE(err, 2.0 * tail);
}

TEST(LeastSquares, AbsoluteValueOnSegment) {
  TargetFunction f([](complex z) { return complex(std::abs(z.real())); }, TargetKind::custom, "abs");
  CompactRegion K({}, {{-1.0, 1.0}}, {});
  auto p = polynomial_least_squares(f, K, 10, 1024);
  double err = 0.0;
  for (int k = 0; k <= 10000; ++k) {
    double x = -1.0 + 2.0 * k / 10000.0;
    err = std::max(err, std::abs(p(x) - std::abs(x)));
  }
  EXPECT_LE(err, 0.05);
}

TEST(LeastSquares, Preconditions) {
  EXPECT_EQ(code_of([] { polynomial_least_squares(TargetFunction::exponential(), unit_disc(), 65, 1024); }),
            ErrorCode::DegreeCapExceeded);
  EXPECT_EQ(code_of([] { polynomial_least_squares(TargetFunction::exponential(), unit_disc(), 10, 39); }),
            ErrorCode::InvalidArgument);
}

// --- dilation ---------------------------------------------------------------

TEST(ChooseXi, ConstantAcceptsHalf) {
  auto comp = JordanComponent::disc(0, 0.0, 1.0);
  auto choice = choose_xi(TargetFunction::constant({2, 1}), disc_to_domain(comp), comp, 1e-6);
  EXPECT_EQ(choice.xi, 0.5);
  EXPECT_EQ(choice.gap, 0.0);
}

TEST(ChooseXi, LinearGapEqualsXi) {
  auto comp = JordanComponent::disc(0, 0.0, 1.0);
  auto choice = choose_xi(poly({-1.0, 1.0}), disc_to_domain(comp), comp, 0.01);
  EXPECT_EQ(choice.xi, 1.0 / 128.0);
  EXPECT_NEAR(choice.gap, 1.0 / 128.0, 1e-15);
}

TEST(ChooseXi, ExpGapBoundedByLipschitz) {
  auto comp = JordanComponent::disc(0, 0.0, 1.0);
  auto choice = choose_xi(TargetFunction::exponential(), disc_to_domain(comp), comp, 1e-3);
  EXPECT_LE(choice.gap, 1e-3);
  EXPECT_GE(std::numbers::e * choice.xi, choice.gap);
}

TEST(ChooseXi, UnderflowOnDiscontinuousTarget) {
  auto comp = JordanComponent::disc(0, 0.0, 1.0);
  TargetFunction jump([](complex z) { return complex(std::abs(z) >= 1.0 ? 1.0 : 0.0); }, TargetKind::custom, "jump");
  EXPECT_EQ(code_of([&] { choose_xi(jump, disc_to_domain(comp), comp, 0.5); }), ErrorCode::XiUnderflow);
}

TEST(Dilate, Examples) {
  auto map = disc_to_domain(JordanComponent::disc(0, 0.0, 1.0));
  auto H = dilate(poly({-1.0, 1.0}), map, 0.1);
  for (complex z : {complex{1, 0}, complex{0, 1}, complex{0.3, -0.4}}) EXPECT_LT(std::abs(H(z) - (0.9 * z - 1.0)), 1e-15);
  double mn = INFINITY;
  for (auto z : oracle_disc_samples()) mn = std::min(mn, std::abs(H(z)));
  EXPECT_NEAR(mn, 0.1, 1e-6);
  EXPECT_EQ(dilate(TargetFunction::constant(3.0), map, 0.4)({0.2, 0.9}), complex(3.0));
  EXPECT_LT(std::abs(dilate(TargetFunction::exponential(), map, 0.5)(1.0) - std::exp(0.5)), 1e-15);
}

// --- extension --------------------------------------------------------------

TEST(TietzeExtend, Examples) {
  auto H = TargetFunction::exponential();
  auto K = unit_disc();
  auto E = tietze_extend(H, K);
  for (auto z : oracle_disc_samples()) EXPECT_EQ(E(z), H(z));

  CompactRegion K2({JordanComponent::disc(0, 0.0, 1.0)}, {{1.0, 2.0}}, {});
  auto E2 = tietze_extend(H, K2);
  EXPECT_LT(std::abs(E2(1.5) - H(1.0)), 1e-12);

  auto E3 = tietze_extend(TargetFunction::constant({0.5, 2}), K2);
  for (complex z : {complex{0, 0}, complex{1.7, 0}, complex{2, 0}}) EXPECT_EQ(E3(z), complex(0.5, 2));
}

// --- nudging ----------------------------------------------------------------

TEST(NudgeZeros, FilamentShift) {
  CompactRegion K({}, {{-1.0, 1.0}}, {});
  auto r = nudge_zeros(ComplexPolynomial({0.0, 1.0}), K, 1e-3, 2e-3);
  ASSERT_EQ(r.roots.size(), 1u);
  EXPECT_NEAR(std::abs(r.roots[0].imag()), 1e-3, 1e-15);
  EXPECT_NEAR(r.gap, 1e-3, 1e-15);
  EXPECT_EQ(r.moved_roots, 1);
}

TEST(NudgeZeros, OutsideRootsUntouched) {
  ComplexPolynomial P({-5.0, 1.0});
  auto r = nudge_zeros(P, unit_disc(), 1e-3, 1e-3);
  EXPECT_EQ(r.polynomial, P);
  EXPECT_EQ(r.moved_roots, 0);
}

TEST(NudgeZeros, BoundaryRootsMoveRadially) {
  ComplexPolynomial P({-1.0, 0.0, 1.0});
  const double delta = 1e-3;
  auto r = nudge_zeros(P, unit_disc(), delta, 1.0);
  ASSERT_EQ(r.roots.size(), 2u);
  for (auto z : r.roots) EXPECT_NEAR(std::abs(z), 1.0 + delta, 1e-12);
  // p - P = 1 - (1 + delta)^2 identically.
  double expected = (1.0 + delta) * (1.0 + delta) - 1.0;
  EXPECT_NEAR(r.gap, expected, 1e-12);
  for (auto z : oracle_disc_samples()) EXPECT_NEAR(std::abs(r.polynomial(z) - P(z)), expected, 1e-12);
}

TEST(NudgeZeros, HalvesUntilBudget) {
  ComplexPolynomial P({-1.0, 0.0, 1.0});
  auto r = nudge_zeros(P, unit_disc(), 0.1, 1e-3);
  EXPECT_LE(r.gap, 1e-3);
  EXPECT_LT(r.final_step, 0.1);
}

TEST(NudgeZeros, InteriorZeroRejected) {
  EXPECT_EQ(code_of([] { nudge_zeros(ComplexPolynomial({0.0, 1.0}), unit_disc(), 1e-3, 1e-3); }),
            ErrorCode::InteriorZero);
}

// --- pipelines --------------------------------------------------------------

TEST(ApproxJordan, ConstantIsExact) {
  auto r = approx_jordan(TargetFunction::constant(1.0), unit_disc(), 1e-3);
  EXPECT_EQ(r.degree, 0);
  EXPECT_EQ(r.sup_error, 0.0);
  EXPECT_EQ(r.min_modulus, 1.0);
}

TEST(ApproxJordan, BoundaryZeroTarget) {
  auto K = unit_disc();
  auto f = poly({-1.0, 1.0});
  auto r = approx_jordan(f, K, 0.05);
  expect_certified(r, K);
  double sup = 0.0, mn = INFINITY;
  for (auto z : oracle_disc_samples()) {
    sup = std::max(sup, std::abs(r.polynomial(z) - f(z)));
    mn = std::min(mn, std::abs(r.polynomial(z)));
  }
  EXPECT_LT(sup, 0.05);
  EXPECT_GT(mn, 0.0);
}

TEST(ApproxJordan, Exponential) {
  auto K = unit_disc();
  auto r = approx_jordan(TargetFunction::exponential(), K, 1e-4);
  expect_certified(r, K);
  EXPECT_GE(r.min_modulus, std::exp(-1.0) - 1e-4);
  double sup = 0.0;
  for (auto z : oracle_disc_samples()) sup = std::max(sup, std::abs(r.polynomial(z) - std::exp(z)));
  EXPECT_LT(sup, 1e-4);
}

TEST(ApproxJordan, StarlikeDomain) {
  CompactRegion K({JordanComponent::starlike(0, {0.2, 0.0}, {1.0, 0.0, 0.2}, {})}, {}, {});
  auto f = poly({{2.0, 0.5}, 1.0});
  auto r = approx_jordan(f, K, 1e-2);
  expect_certified(r, K);
}

TEST(ApproxJordan, RequiresSingleComponent) {
  EXPECT_EQ(code_of([] { approx_jordan(TargetFunction::constant(1.0), tangent_discs(), 0.1); }),
            ErrorCode::InvalidArgument);
}

TEST(GlueComponents, TangentDiscs) {
  auto K = tangent_discs();
  auto trees = build_component_tree(K, default_contact_tolerance(K));
  auto f = poly({2.0, 1.0});
  const double eps = 0.05;
  auto [H, st] = glue_components(f, K, trees[0], eps);
  ASSERT_EQ(st.approximants.size(), 2u);
  complex zc = st.tree.contact_points.at(1);
  complex from_parent = st.rescale.at(0) * st.approximants[0](zc);
  complex from_child = st.rescale.at(1) * st.approximants[1](zc);
  EXPECT_LE(std::abs(from_parent - from_child), 1e-9);
  EXPECT_LE(st.continuity_residual, 1e-9);
  for (const auto& [id, s] : st.rescale) {
    EXPECT_GE(std::abs(s), 1.0 - eps / (3.0 * st.C)) << id;
    EXPECT_LE(std::abs(s), 1.0 + eps / (3.0 * st.C)) << id;
  }
  double sup = 0.0;
  for (auto z : oracle_disc_samples(-1.0)) sup = std::max(sup, std::abs(H(z) - f(z)));
  for (auto z : oracle_disc_samples(1.0)) sup = std::max(sup, std::abs(H(z) - f(z)));
  EXPECT_LE(sup, eps / 3.0);
  EXPECT_NEAR(st.C, 4.0, 1e-9);
  EXPECT_NEAR(st.delta_contact, 2.0, 1e-5);
}

// Near a contact point the two glued pieces differ by at most their
// Lipschitz constant times the distance, on top of the exact match at z_n.
TEST(GlueComponents, ContinuityNearContact) {
  auto K = tangent_discs();
  auto trees = build_component_tree(K, default_contact_tolerance(K));
  auto [H, st] = glue_components(poly({2.0, 1.0}), K, trees[0], 0.05);
  complex zc = st.tree.contact_points.at(1);
  const double lipschitz = 2.0;
  for (int k = 0; k < 32; ++k) {
    complex z = zc + std::polar(1e-6, 2.0 * std::numbers::pi * k / 32);
    complex a = st.rescale.at(0) * st.approximants[0](z), b = st.rescale.at(1) * st.approximants[1](z);
    EXPECT_LE(std::abs(a - b), 1e-9 + lipschitz * 1e-6);
  }
}

TEST(GlueComponents, ChainOfConstants) {
  CompactRegion K({JordanComponent::disc(0, 0.0, 1.0), JordanComponent::disc(1, 2.0, 1.0),
                   JordanComponent::disc(2, 4.0, 1.0)},
                  {}, {});
  auto trees = build_component_tree(K, default_contact_tolerance(K));
  auto [H, st] = glue_components(TargetFunction::constant(1.0), K, trees[0], 0.01);
  for (const auto& [id, s] : st.rescale) EXPECT_EQ(s, complex(1.0)) << id;
  EXPECT_EQ(H(3.0), complex(1.0));
}

TEST(GlueComponents, ContactZero) {
  auto K = tangent_discs();
  auto trees = build_component_tree(K, default_contact_tolerance(K));
  EXPECT_EQ(code_of([&] { glue_components(poly({0.0, 1.0}), K, trees[0], 0.05); }), ErrorCode::ContactZero);
}

TEST(NonvanishingApprox, SegmentIdentity) {
  CompactRegion K({}, {{-1.0, 1.0}}, {});
  auto f = poly({0.0, 1.0});
  auto r = nonvanishing_approx(f, K, 0.01);
  expect_certified(r, K);
  for (int k = 0; k <= 10000; ++k) {
    double x = -1.0 + 2.0 * k / 10000.0;
    EXPECT_LT(std::abs(r.polynomial(x) - x), 0.01);
    EXPECT_GT(std::abs(r.polynomial(x)), 0.0);
  }
}

TEST(NonvanishingApprox, TangentDiscs) {
  auto K = tangent_discs();
  auto r = nonvanishing_approx(poly({2.0, 1.0}), K, 0.05);
  expect_certified(r, K);
  ASSERT_EQ(r.glue.size(), 1u);
  EXPECT_LE(r.glue[0].continuity_residual, 1e-9);
}

TEST(NonvanishingApprox, DiscWithFilamentAndPoint) {
  CompactRegion K({JordanComponent::disc(0, 0.0, 1.0)}, {{1.0, 2.0}}, {{0.0, 2.0}});
  auto f = poly({3.0, 1.0});
  auto r = nonvanishing_approx(f, K, 0.05);
  expect_certified(r, K);
}

TEST(NonvanishingApprox, Rejections) {
  EXPECT_EQ(code_of([] { nonvanishing_approx(poly({0.0, 1.0}), unit_disc(), 0.05); }), ErrorCode::InteriorZero);
  const double h = std::sqrt(3.0);
  CompactRegion triple({JordanComponent::disc(0, {-1.0, 0.0}, 1.0), JordanComponent::disc(1, {1.0, 0.0}, 1.0),
                        JordanComponent::disc(2, {0.0, h}, 1.0)},
                       {}, {});
  EXPECT_EQ(code_of([&] { nonvanishing_approx(TargetFunction::constant(1.0), triple, 0.05); }), ErrorCode::CycleDetected);
  CompactRegion frame({}, {{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}, {-1, -1}}}, {});
  EXPECT_EQ(code_of([&] { nonvanishing_approx(TargetFunction::constant(1.0), frame, 0.05); }),
            ErrorCode::ComplementNotConnected);
  auto rational = TargetFunction::rational(ComplexPolynomial({1.0}), ComplexPolynomial({-0.5, 1.0}));
  EXPECT_EQ(code_of([&] { nonvanishing_approx(rational, unit_disc(), 0.05); }), ErrorCode::PoleInRegion);
  EXPECT_EQ(code_of([] { nonvanishing_approx(TargetFunction::constant(1.0), unit_disc(), 0.0); }),
            ErrorCode::InvalidArgument);
}

TEST(NonvanishingApprox, RationalWithPoleOutside) {
  auto K = unit_disc();
  auto f = TargetFunction::rational(ComplexPolynomial({1.0}), ComplexPolynomial({-3.0, 1.0}));
  auto r = nonvanishing_approx(f, K, 1e-3);
  expect_certified(r, K);
}

// --- properties -------------------------------------------------------------

TEST(Property, IdempotentNudgeOnZeroFreeFit) {
  auto K = unit_disc();
  auto P = polynomial_least_squares(TargetFunction::exponential(), K, 6, 256);
  auto r = nudge_zeros(P, K, 1e-3, 1e-3);
  EXPECT_EQ(r.polynomial, P);
  EXPECT_EQ(r.moved_roots, 0);
}

TEST(Property, DeterministicReports) {
  auto K = tangent_discs();
  auto f = poly({2.0, 1.0});
  auto a = nonvanishing_approx(f, K, 0.05), b = nonvanishing_approx(f, K, 0.05);
  EXPECT_EQ(a.polynomial, b.polynomial);
  EXPECT_EQ(a.sup_error, b.sup_error);
  EXPECT_EQ(a.region_hash, b.region_hash);
}

namespace {

// Approximating g(w) = f(alpha w + beta) on (K - beta)/alpha and composing the
// result with (z - beta)/alpha reproduces the report for f on K.
void check_scaling(const TargetFunction& f, const CompactRegion& K, const CompactRegion& K_scaled, complex alpha,
                   complex beta, double eps) {
  TargetFunction g([f, alpha, beta](complex w) { return f(alpha * w + beta); }, TargetKind::custom, "scaled");
  auto r = nonvanishing_approx(f, K, eps);
  auto rs = nonvanishing_approx(g, K_scaled, eps);
  auto back = rs.polynomial.compose_affine(1.0 / alpha, -beta / alpha);
  ASSERT_EQ(back.degree(), r.polynomial.degree());
  double scale = 0.0;
  for (auto c : r.polynomial.coefficients()) scale = std::max(scale, std::abs(c));
  for (int k = 0; k <= back.degree(); ++k)
    EXPECT_LE(std::abs(back.coefficient(k) - r.polynomial.coefficient(k)), 1e-8 * scale) << k;
  EXPECT_NEAR(rs.sup_error, r.sup_error, 1e-8 * (1.0 + r.sup_error));
}

}  // namespace

TEST(Property, ScalingEquivarianceDisc) {
  const complex alpha = 2.0, beta{0.5, -0.2};
  const complex c{0.3, 0.1};
  const double rad = 0.8;
  CompactRegion K({JordanComponent::disc(0, c, rad)}, {}, {});
  CompactRegion Ks({JordanComponent::disc(0, (c - beta) / alpha, rad / std::abs(alpha))}, {}, {});
  check_scaling(TargetFunction::exponential(), K, Ks, alpha, beta, 1e-3);
}

TEST(Property, ScalingEquivarianceFilament) {
  const complex alpha{0.6, 0.8}, beta{1.0, 1.0};
  std::vector<complex> seg{-1.0, {0.5, 0.5}, 1.0};
  std::vector<complex> seg_s;
  for (auto z : seg) seg_s.push_back((z - beta) / alpha);
  CompactRegion K({}, {seg}, {});
  CompactRegion Ks({}, {seg_s}, {});
  // The target vanishes at the kink, so the nudge stage is exercised too.
  check_scaling(poly({{-0.5, -0.5}, 1.0}), K, Ks, alpha, beta, 1e-2);
}

TEST(Property, ScalingEquivarianceRotatedDisc) {
  const complex alpha{0.6, 0.8}, beta{0.5, -0.2};
  const complex c{0.3, 0.1};
  CompactRegion K({JordanComponent::disc(0, c, 0.8)}, {}, {});
  CompactRegion Ks({JordanComponent::disc(0, (c - beta) / alpha, 0.8)}, {}, {});
  check_scaling(TargetFunction::exponential(), K, Ks, alpha, beta, 1e-3);
}
