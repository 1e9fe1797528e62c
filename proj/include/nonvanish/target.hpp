#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "nonvanish/polynomial.hpp"
#include "nonvanish/zeta.hpp"

namespace nonvanish {

enum class TargetKind { constant, polynomial, exp, rational, zeta_shift, composite, custom };

inline const char* to_string(TargetKind k) {
  switch (k) {
    case TargetKind::constant: return "const";
    case TargetKind::polynomial: return "poly";
    case TargetKind::exp: return "exp";
    case TargetKind::rational: return "rational";
    case TargetKind::zeta_shift: return "zeta_shift";
    case TargetKind::composite: return "compose";
    case TargetKind::custom: return "custom";
  }
  return "?";
}

/// The function f being approximated: a black-box evaluator with a catalog tag.
///
/// Rational targets carry their poles so pipelines can reject regions that
/// contain them; composites inherit the poles of the inner/outer parts only
/// when those are known in the z-plane (inner poles).
class TargetFunction {
 public:
  using Evaluator = std::function<complex(complex)>;

  TargetFunction(Evaluator eval, TargetKind kind, std::string description = {})
      : eval_(std::move(eval)), kind_(kind), description_(std::move(description)) {}

  complex operator()(complex z) const { return eval_(z); }
  TargetKind kind() const { return kind_; }
  const std::string& description() const { return description_; }
  const std::vector<complex>& declared_poles() const { return poles_; }
  bool declared_zero_free_interior() const { return zero_free_flag_; }
  const Evaluator& evaluator() const { return eval_; }

  TargetFunction& with_poles(std::vector<complex> poles) {
    poles_ = std::move(poles);
    return *this;
  }
  TargetFunction& with_zero_free_flag(bool flag) {
    zero_free_flag_ = flag;
    return *this;
  }

  static TargetFunction constant(complex c) {
    return {[c](complex) { return c; }, TargetKind::constant, "const"};
  }
  static TargetFunction polynomial(ComplexPolynomial p) {
    return {[p = std::move(p)](complex z) { return p(z); }, TargetKind::polynomial, "poly"};
  }
  static TargetFunction exponential() {
    return {[](complex z) { return std::exp(z); }, TargetKind::exp, "exp"};
  }
  /// num/den; the zeros of den are recorded as declared poles.
  static TargetFunction rational(ComplexPolynomial num, ComplexPolynomial den) {
    if (den.is_zero()) throw Error(ErrorCode::InvalidArgument, "rational target with zero denominator");
    std::vector<complex> poles;
    if (den.degree() >= 1) poles = find_roots(den).roots;
    TargetFunction f{[num = std::move(num), den = std::move(den)](complex z) { return num(z) / den(z); },
                     TargetKind::rational, "rational"};
    f.poles_ = std::move(poles);
    return f;
  }
  /// z -> zeta(z + i t).
  static TargetFunction zeta_shift(double t, ZetaEvaluator ev = {}) {
    return {[t, ev](complex z) { return ev(z + complex{0.0, t}); }, TargetKind::zeta_shift,
            "zeta_shift(" + std::to_string(t) + ")"};
  }
  /// z -> outer(inner(z)).
  static TargetFunction compose(const TargetFunction& outer, const TargetFunction& inner) {
    TargetFunction f{[o = outer.eval_, i = inner.eval_](complex z) { return o(i(z)); }, TargetKind::composite,
                     "compose"};
    f.poles_ = inner.poles_;
    return f;
  }

 private:
  Evaluator eval_;
  TargetKind kind_;
  std::string description_;
  std::vector<complex> poles_;
  bool zero_free_flag_ = true;
};

}  // namespace nonvanish
