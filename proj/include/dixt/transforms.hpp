#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "dixt/kernels.hpp"
#include "dixt/quad.hpp"

namespace dixt {

// Largest index the inversion operators accept: sinh(pi n) multiplies the
// quadrature error, and beyond n = 10 it swamps extended precision.
inline constexpr int kInvertMax = 10;

// a_start, a_{start+1}, ... with finite support.
struct CoefficientSequence {
  int start = 1;
  std::vector<double> values;

  int max_index() const { return start + static_cast<int>(values.size()) - 1; }
  double at(int n) const {
    const int i = n - start;
    return (i >= 0 && i < static_cast<int>(values.size())) ? values[i] : 0.0;
  }
  void validate(TransformKind kind) const;

  // a_m = 1, every other entry zero.
  static CoefficientSequence unit(int m, int start = 1);
};

// psi(u) = c_0 + sum_m c_m cos(mu) + sum_m b_m sin(mu).
struct TrigPolynomial {
  std::vector<double> sin_coeffs;  // b_1, ..., b_M
  std::vector<double> cos_coeffs;  // c_0, ..., c_M

  template <std::floating_point T>
  T operator()(T u) const {
    T v = 0;
    for (std::size_t m = 0; m < cos_coeffs.size(); ++m) {
      v += T(cos_coeffs[m]) * std::cos(T(m) * u);
    }
    for (std::size_t m = 0; m < sin_coeffs.size(); ++m) {
      v += T(sin_coeffs[m]) * std::sin(T(m + 1) * u);
    }
    return v;
  }

  // Lipschitz constant bound sum_m m (|b_m| + |c_m|).
  double lipschitz_bound() const;
};

// Function given through the representation integral of its kind:
//   ReI   f(x) = int_{-pi}^{pi} g(x cosh^2(u/2)) psi(u) sinh(u) du
//   ReJK  f(x) = x int_{-pi}^{pi} psi(u) sinh(u) / (x^2 + cosh^2 u) du
//   ImJK  f(x) = int_{-pi}^{pi} psi(u) sinh(2u) / (x^2 + cosh^2 u) du
struct PsiGenerated {
  TransformKind kind = TransformKind::ReI;
  TrigPolynomial psi;
};

// Arbitrary function with a declared envelope.
struct Callable {
  std::function<double(double)> f;
  DecayHint<double> decay;
};

// The synthesis of a sequence, evaluated in extended precision.
struct Synthesized {
  TransformKind kind = TransformKind::ReI;
  CoefficientSequence sequence;
};

using FunctionSpec = std::variant<PsiGenerated, Callable, Synthesized>;

struct ConditionReport {
  double weighted_sum = 0;  // sum |a_n| e^{pi n/2} / sqrt(n), n >= 1
  double l1_norm = 0;       // sum |a_n|
  double relevant = 0;      // the sum the kind's condition constrains
  bool holds = true;        // finite support: both sums are finite
};

Tolerance default_analysis_tolerance();
Tolerance default_inversion_tolerance();

double synthesize(TransformKind kind, const CoefficientSequence& a, double x);

QuadratureResult analyze(TransformKind kind, const FunctionSpec& f, int n,
                         const Tolerance& tol = default_analysis_tolerance());

QuadratureResult invert_to_sequence(TransformKind kind, const FunctionSpec& f, int n,
                                    const Tolerance& tol = default_inversion_tolerance());

QuadratureResult invert_to_function(TransformKind kind, const CoefficientSequence& a,
                                    double x,
                                    const Tolerance& tol = default_inversion_tolerance());

ConditionReport check_condition(TransformKind kind, const CoefficientSequence& a);

QuadratureResult psi_function_value(const PsiGenerated& spec, double x,
                                    const Tolerance& tol = default_analysis_tolerance());

// Point value of any FunctionSpec.
double evaluate(const FunctionSpec& f, double x);

// Constant in front of sinh(pi n) in the inversion formulas.
double inversion_constant(TransformKind kind);

}  // namespace dixt
