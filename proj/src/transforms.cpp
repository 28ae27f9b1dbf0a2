#include "dixt/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace dixt {
namespace {

// Working type of every transform integral. The inversion formulas multiply
// the integral by sinh(pi n), up to 2e13 at n = 10.
using X = long double;
using XTol = BasicTolerance<X>;
using XHint = DecayHint<X>;
using XResult = BasicQuadratureResult<X>;
using Hint = XHint::Kind;

constexpr X kPi = std::numbers::pi_v<X>;
const X kJkRate = 2 * std::numbers::sqrt2_v<X>;

void check_kind(TransformKind kind) {
  switch (kind) {
    case TransformKind::ReI:
    case TransformKind::ReJK:
    case TransformKind::ImJK:
      return;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown transform kind");
}

void check_x(double x) {
  if (!(x > 0) || !std::isfinite(x)) {
    throw Error(ErrorCode::InvalidArgument, "x must be finite and > 0");
  }
}

XTol widen(const Tolerance& t) {
  return {X(t.abs_tol), X(t.rel_tol), t.max_evals};
}

XTol clamp(X abs_tol, X rel_tol, std::int64_t max_evals) {
  return {std::max(abs_tol, XTol::floor()), std::max(rel_tol, XTol::floor()),
          max_evals};
}

// Inner integrals of a nested quadrature get a fixed fraction of the outer
// tolerance.
constexpr X kInnerShare = 64;

XTol inner_tolerance(const XTol& outer) {
  return clamp(outer.abs_tol / kInnerShare, outer.rel_tol / kInnerShare,
               outer.max_evals);
}

QuadratureResult narrow(const XResult& r) {
  QuadratureResult out;
  out.value = static_cast<double>(r.value);
  out.error_estimate = static_cast<double>(r.error_estimate);
  out.evaluations = r.evaluations;
  out.converged = r.converged;
  out.hint_violation = r.hint_violation;
  return out;
}

void validate_psi(const TrigPolynomial& psi) {
  for (double c : psi.sin_coeffs) {
    if (!std::isfinite(c)) throw Error(ErrorCode::InvalidArgument, "psi coefficient not finite");
  }
  for (double c : psi.cos_coeffs) {
    if (!std::isfinite(c)) throw Error(ErrorCode::InvalidArgument, "psi coefficient not finite");
  }
}

XResult psi_value(const PsiGenerated& spec, X x, const XTol& tol) {
  const TrigPolynomial& psi = spec.psi;
  if (psi.sin_coeffs.empty() && psi.cos_coeffs.empty()) return {};
  const X x2 = x * x;
  switch (spec.kind) {
    case TransformKind::ReI: {
      auto f = [&](X u) {
        const X c = std::cosh(u / 2);
        return exp_scaled_e1(x * c * c) * psi(u) * std::sinh(u);
      };
      return integrate_finite<X>(f, -kPi, kPi, tol);
    }
    case TransformKind::ReJK: {
      auto f = [&](X u) {
        const X c = std::cosh(u);
        return x * psi(u) * std::sinh(u) / (x2 + c * c);
      };
      return integrate_finite<X>(f, -kPi, kPi, tol);
    }
    case TransformKind::ImJK: {
      auto f = [&](X u) {
        const X c = std::cosh(u);
        return psi(u) * std::sinh(2 * u) / (x2 + c * c);
      };
      return integrate_finite<X>(f, -kPi, kPi, tol);
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown transform kind");
}

X synthesize_x(TransformKind kind, const CoefficientSequence& a, X x) {
  X sum = 0;
  for (int n = a.start; n <= a.max_index(); ++n) {
    const X an = a.at(n);
    if (an != 0) sum += an * forward_kernel<X>(kind, n, x);
  }
  return sum;
}

XHint forward_envelope(TransformKind kind) {
  if (kind == TransformKind::ReI) return XHint::algebraic(X(0.5));
  return XHint::exp_sqrt(kJkRate);
}

XHint inverse_envelope(TransformKind kind) {
  if (kind == TransformKind::ImJK) return XHint::algebraic(X(2));
  return XHint::algebraic(X(1));
}

// Large-x envelope of the continuous side.
XHint function_envelope(const FunctionSpec& f) {
  if (const auto* p = std::get_if<PsiGenerated>(&f)) {
    return XHint::algebraic(p->kind == TransformKind::ImJK ? X(2) : X(1));
  }
  if (const auto* c = std::get_if<Callable>(&f)) {
    const auto& d = c->decay;
    if (!(d.parameter > 0) || !std::isfinite(d.parameter) || !(d.knee > 0) ||
        !std::isfinite(d.knee)) {
      throw Error(ErrorCode::InvalidArgument, "decay hint parameters must be positive");
    }
    return {static_cast<Hint>(d.kind), X(d.parameter), X(d.knee)};
  }
  return forward_envelope(std::get<Synthesized>(f).kind);
}

// Envelope of a product. Exponential types dominate algebraic ones.
XHint combine(const XHint& k, const XHint& f) {
  const bool k_alg = k.kind == Hint::Algebraic;
  const bool f_alg = f.kind == Hint::Algebraic;
  if (k_alg && f_alg) {
    return XHint::algebraic(k.parameter + f.parameter, std::max({X(1), k.knee, f.knee}));
  }
  if (k_alg) return f;
  if (f_alg) return k;
  if (k.kind == f.kind) return {k.kind, k.parameter + f.parameter, 1};
  return k.kind == Hint::Exponential ? k : f;
}

void require_integrable(const XHint& h) {
  if (h.kind == Hint::Algebraic && !(h.parameter > 1)) {
    std::ostringstream os;
    os << "integrand decays like x^-" << static_cast<double>(h.parameter)
       << ", which is not integrable on (0, inf)";
    throw Error(ErrorCode::InsufficientDecay, os.str());
  }
}

// Point evaluator of the continuous side in extended precision.
template <typename Body>
XResult with_function(const FunctionSpec& f, const XTol& inner, Body&& body) {
  if (const auto* p = std::get_if<PsiGenerated>(&f)) {
    check_kind(p->kind);
    validate_psi(p->psi);
    return body([&](X x) { return psi_value(*p, x, inner).value; });
  }
  if (const auto* c = std::get_if<Callable>(&f)) {
    if (!c->f) throw Error(ErrorCode::InvalidArgument, "callable is empty");
    return body([&](X x) { return X(c->f(static_cast<double>(x))); });
  }
  const auto& s = std::get<Synthesized>(f);
  check_kind(s.kind);
  s.sequence.validate(s.kind);
  return body([&](X x) { return synthesize_x(s.kind, s.sequence, x); });
}

}  // namespace

void CoefficientSequence::validate(TransformKind kind) const {
  check_kind(kind);
  if (values.empty()) {
    throw Error(ErrorCode::InvalidArgument, "coefficient sequence is empty");
  }
  if (start != 0 && start != 1) {
    throw Error(ErrorCode::InvalidArgument, "sequence start must be 0 or 1");
  }
  if (start < min_index(kind)) {
    throw Error(ErrorCode::InvalidArgument,
                "sequence start 0 is not admitted by kind " + std::string(to_string(kind)));
  }
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::InvalidArgument, "sequence value is not finite");
    }
  }
}

CoefficientSequence CoefficientSequence::unit(int m, int start) {
  if (m < start) throw Error(ErrorCode::InvalidArgument, "unit index below start");
  CoefficientSequence a{start, std::vector<double>(static_cast<std::size_t>(m - start + 1), 0.0)};
  a.values.back() = 1.0;
  return a;
}

double TrigPolynomial::lipschitz_bound() const {
  double c = 0;
  for (std::size_t m = 1; m < cos_coeffs.size(); ++m) c += double(m) * std::abs(cos_coeffs[m]);
  for (std::size_t m = 0; m < sin_coeffs.size(); ++m) c += double(m + 1) * std::abs(sin_coeffs[m]);
  return c;
}

Tolerance default_analysis_tolerance() { return {1e-12, 1e-10, 2'000'000}; }

// Each outer evaluation carries a nested kernel quadrature, hence the
// smaller budget.
Tolerance default_inversion_tolerance() { return {1e-5, 1e-5, 100'000}; }

double inversion_constant(TransformKind kind) {
  check_kind(kind);
  constexpr double pi2 = std::numbers::pi * std::numbers::pi;
  switch (kind) {
    case TransformKind::ReI: return 1 / pi2;
    case TransformKind::ReJK: return 8 / pi2;
    case TransformKind::ImJK: return 4 / pi2;
  }
  return 0;
}

double synthesize(TransformKind kind, const CoefficientSequence& a, double x) {
  a.validate(kind);
  check_x(x);
  return static_cast<double>(synthesize_x(kind, a, X(x)));
}

QuadratureResult analyze(TransformKind kind, const FunctionSpec& f, int n,
                         const Tolerance& tol) {
  check_kind(kind);
  tol.validate();
  detail::check_kernel_index(kind, n);
  const XHint hint = combine(forward_envelope(kind), function_envelope(f));
  require_integrable(hint);
  const XTol outer = widen(tol);
  return narrow(with_function(f, inner_tolerance(outer), [&](auto&& fx) {
    auto integrand = [&](X x) { return forward_kernel<X>(kind, n, x) * fx(x); };
    return integrate_semi_infinite<X>(integrand, hint, outer);
  }));
}

QuadratureResult invert_to_sequence(TransformKind kind, const FunctionSpec& f, int n,
                                    const Tolerance& tol) {
  check_kind(kind);
  tol.validate();
  if (n < 1) {
    throw Error(ErrorCode::IndexOutOfRange, "inversion index must be >= 1");
  }
  if (n > kInvertMax) {
    throw Error(ErrorCode::PrecisionLoss,
                "inversion index n=" + std::to_string(n) +
                    " exceeds N_INVERT_MAX; sinh(pi n) would amplify rounding beyond the tolerance");
  }
  const XHint hint = combine(inverse_envelope(kind), function_envelope(f));
  require_integrable(hint);
  const X amplification = X(inversion_constant(kind)) * std::sinh(kPi * n);
  // The head and tail pieces cancel to O(1) from values near e^{pi n / 2},
  // so the integral is driven by an absolute target only.
  const X target = X(std::max(tol.abs_tol, tol.rel_tol)) / amplification;
  const XTol outer = clamp(target, XTol::floor(), tol.max_evals);
  const XTol kernel_tol = inner_tolerance(outer);

  XResult r = with_function(f, inner_tolerance(outer), [&](auto&& fx) {
    auto integrand = [&](X x) {
      const X fv = fx(x);
      if (fv == 0) return X(0);
      return inverse_kernel<X>(kind, n, x, kernel_tol).value * fv;
    };
    return integrate_semi_infinite<X>(integrand, hint, outer);
  });
  r.value *= amplification;
  r.error_estimate *= amplification;
  if (r.error_estimate > X(tol.target(static_cast<double>(r.value)))) {
    std::ostringstream os;
    os.precision(3);
    os << "inversion at n=" << n << ": amplified error estimate "
       << static_cast<double>(r.error_estimate) << " exceeds the tolerance (sinh(pi n) = "
       << static_cast<double>(std::sinh(kPi * n)) << ")";
    throw Error(ErrorCode::PrecisionLoss, os.str());
  }
  r.converged = true;
  return narrow(r);
}

QuadratureResult invert_to_function(TransformKind kind, const CoefficientSequence& a,
                                    double x, const Tolerance& tol) {
  a.validate(kind);
  tol.validate();
  check_x(x);
  if (a.max_index() > kInvertMax) {
    throw Error(ErrorCode::PrecisionLoss,
                "sequence support exceeds N_INVERT_MAX for inversion to a function");
  }
  const X c = X(inversion_constant(kind));
  const XTol kernel_tol = clamp(XTol::floor() * 4, XTol::floor() * 4, tol.max_evals);
  X error = 0;
  std::int64_t evaluations = 0;
  auto term = [&](std::int64_t n) -> X {
    const X an = a.at(static_cast<int>(n));
    if (an == 0 || n == 0) return X(0);
    const auto k = inverse_kernel<X>(kind, static_cast<int>(n), X(x), kernel_tol);
    const X weight = c * std::sinh(kPi * X(n)) * an;
    error += std::abs(weight) * k.error_estimate;
    evaluations += k.evaluations;
    return weight * k.value;
  };
  XResult r = sum_series<X>(term, a.start,
                            FixedCount{static_cast<std::int64_t>(a.values.size())});
  r.error_estimate = error;
  r.evaluations = evaluations;
  if (r.error_estimate > X(tol.target(static_cast<double>(r.value)))) {
    throw Error(ErrorCode::PrecisionLoss,
                "amplified kernel error exceeds the tolerance in inversion to a function");
  }
  return narrow(r);
}

ConditionReport check_condition(TransformKind kind, const CoefficientSequence& a) {
  check_kind(kind);
  ConditionReport report;
  for (int n = a.start; n <= a.max_index(); ++n) {
    const double v = std::abs(a.at(n));
    report.l1_norm += v;
    if (n >= 1) {
      report.weighted_sum += v * std::exp(std::numbers::pi * n / 2) / std::sqrt(double(n));
    }
  }
  report.relevant = kind == TransformKind::ReI ? report.weighted_sum : report.l1_norm;
  report.holds = std::isfinite(report.weighted_sum) && std::isfinite(report.l1_norm);
  return report;
}

QuadratureResult psi_function_value(const PsiGenerated& spec, double x, const Tolerance& tol) {
  check_kind(spec.kind);
  validate_psi(spec.psi);
  tol.validate();
  check_x(x);
  return narrow(psi_value(spec, X(x), widen(tol)));
}

double evaluate(const FunctionSpec& f, double x) {
  check_x(x);
  if (const auto* p = std::get_if<PsiGenerated>(&f)) return psi_function_value(*p, x).value;
  if (const auto* c = std::get_if<Callable>(&f)) {
    if (!c->f) throw Error(ErrorCode::InvalidArgument, "callable is empty");
    return c->f(x);
  }
  const auto& s = std::get<Synthesized>(f);
  return synthesize(s.kind, s.sequence, x);
}

}  // namespace dixt
