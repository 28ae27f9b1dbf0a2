#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/special_functions/bessel.hpp>

#include "doctest.h"
#include "dixt/transforms.hpp"
#include "oracles.hpp"

using dixt::CoefficientSequence;
using dixt::PsiGenerated;
using dixt::TransformKind;
using dixt::TrigPolynomial;
using std::numbers::pi;

namespace {

constexpr TransformKind kKinds[] = {TransformKind::ReI, TransformKind::ReJK, TransformKind::ImJK};

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

TrigPolynomial sines(std::vector<double> b) { return {std::move(b), {}}; }

template <typename F>
dixt::ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const dixt::Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return dixt::ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("synthesis of simple sequences") {
  const CoefficientSequence zero{1, {0.0, 0.0, 0.0}};
  for (auto kind : kKinds) {
    for (double x : {0.1, 1.0, 10.0}) CHECK(dixt::synthesize(kind, zero, x) == 0.0);
  }
  const double want = std::exp(-0.5) * oracle::i_imag(1.0, 0.5).real();
  CHECK(rel(dixt::synthesize(TransformKind::ReI, CoefficientSequence::unit(1), 1.0), want) < 1e-12);

  const double z = 2 * std::sqrt(2.0);
  const double jk = boost::math::cyl_bessel_j(0, z) * boost::math::cyl_bessel_k(0, z);
  CHECK(rel(dixt::synthesize(TransformKind::ReJK, CoefficientSequence::unit(0, 0), 1.0), jk) <
        1e-10);
}

TEST_CASE("synthesis is linear") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1, 1);
  for (auto kind : kKinds) {
    for (int trial = 0; trial < 10; ++trial) {
      CoefficientSequence a{1, {}}, b{1, {}}, c{1, {}};
      const double alpha = u(rng), beta = u(rng);
      for (int i = 0; i < 6; ++i) {
        a.values.push_back(u(rng));
        b.values.push_back(u(rng));
        c.values.push_back(alpha * a.values.back() + beta * b.values.back());
      }
      const double x = 0.2 + 5 * (u(rng) + 1);
      const double lhs = dixt::synthesize(kind, c, x);
      const double rhs = alpha * dixt::synthesize(kind, a, x) + beta * dixt::synthesize(kind, b, x);
      double scale = 0;
      for (int n = 1; n <= 6; ++n) {
        scale += (std::abs(alpha * a.at(n)) + std::abs(beta * b.at(n))) *
                 std::abs(dixt::forward_kernel(kind, n, x));
      }
      CHECK(std::abs(lhs - rhs) <= 1e-13 * scale);
    }
  }
}

TEST_CASE("sequence validation") {
  CHECK(code_of([] { CoefficientSequence{0, {1.0}}.validate(TransformKind::ReI); }) ==
        dixt::ErrorCode::InvalidArgument);
  CHECK(code_of([] { CoefficientSequence{0, {1.0}}.validate(TransformKind::ImJK); }) ==
        dixt::ErrorCode::InvalidArgument);
  CHECK_NOTHROW(CoefficientSequence({0, {1.0}}).validate(TransformKind::ReJK));
  CHECK(code_of([] { CoefficientSequence{1, {}}.validate(TransformKind::ReJK); }) ==
        dixt::ErrorCode::InvalidArgument);
  CHECK(code_of([] { CoefficientSequence{1, {NAN}}.validate(TransformKind::ReJK); }) ==
        dixt::ErrorCode::InvalidArgument);
  CHECK(code_of([] { CoefficientSequence{2, {1.0}}.validate(TransformKind::ReJK); }) ==
        dixt::ErrorCode::InvalidArgument);
}

TEST_CASE("ReI analysis of psi = sin u") {
  const PsiGenerated f{TransformKind::ReI, sines({1.0})};
  const auto a1 = dixt::analyze(TransformKind::ReI, f, 1);
  CHECK(a1.converged);
  CHECK_FALSE(a1.hint_violation);
  CHECK(rel(a1.value, 2 * pi * pi / std::sinh(pi)) < 1e-7);
  const auto a2 = dixt::analyze(TransformKind::ReI, f, 2);
  CHECK(std::abs(a2.value) < 1e-10);
}

TEST_CASE("ReI analysis of a two-term psi") {
  // a_n = (2 pi / sinh(pi n)) int psi sin(nu) du = 2 pi^2 b_n / sinh(pi n).
  const PsiGenerated f{TransformKind::ReI, sines({1.0, 0.0, 0.5})};
  CHECK(rel(dixt::analyze(TransformKind::ReI, f, 3).value, pi * pi / std::sinh(3 * pi)) < 1e-7);
}

TEST_CASE("cosine-only psi generates the zero function") {
  // psi(u) sinh u is odd, so the integral over [-pi, pi] vanishes.
  for (auto kind : kKinds) {
    const PsiGenerated f{kind, TrigPolynomial{{}, {0.0, 1.0}}};
    CHECK(std::abs(dixt::psi_function_value(f, 1.0).value) < 1e-14);
    for (int n = 1; n <= 4; ++n) {
      CHECK(std::abs(dixt::analyze(kind, f, n).value) < 1e-10);
    }
  }
}

TEST_CASE("psi function values") {
  const PsiGenerated zero{TransformKind::ReJK, TrigPolynomial{}};
  CHECK(dixt::psi_function_value(zero, 1.0).value == 0.0);

  using oracle::Big;
  const PsiGenerated jk{TransformKind::ReJK, sines({1.0})};
  const double want = static_cast<double>(oracle::finite(
      [](Big u) { return sin(u) * sinh(u) / (1 + cosh(u) * cosh(u)); }, -oracle::pi(),
      oracle::pi()));
  CHECK(std::abs(dixt::psi_function_value(jk, 1.0).value - want) < 1e-10);

  const PsiGenerated ri{TransformKind::ReI, sines({0.0, 1.0})};
  for (double x : {0.2, 3.0}) {
    const Big X(x);
    const double g = static_cast<double>(oracle::finite(
        [&](Big u) {
          const Big z = X * cosh(u / 2) * cosh(u / 2);
          return exp(z) * boost::math::expint(1, z) * sin(2 * u) * sinh(u);
        },
        -oracle::pi(), oracle::pi()));
    CHECK(std::abs(dixt::psi_function_value(ri, x).value - g) < 1e-10);
  }
}

TEST_CASE("condition report") {
  const auto e1 = CoefficientSequence::unit(1);
  CHECK(dixt::check_condition(TransformKind::ReI, e1).relevant ==
        doctest::Approx(std::exp(pi / 2)).epsilon(1e-14));
  CHECK(std::abs(std::exp(pi / 2) - 4.8105) < 1e-4);
  CHECK(dixt::check_condition(TransformKind::ReJK, e1).relevant == 1.0);
  const auto r = dixt::check_condition(TransformKind::ReJK, CoefficientSequence{1, {1, 0.5, 0.25}});
  CHECK(r.relevant == 1.75);
  CHECK(r.holds);
}

TEST_CASE("ReI round trip through the extended-precision synthesis") {
  const auto t0 = std::chrono::steady_clock::now();
  for (int m : {1, 3}) {
    const dixt::Synthesized f{TransformKind::ReI, CoefficientSequence::unit(m)};
    for (int n = 1; n <= 5; ++n) {
      const auto r = dixt::invert_to_sequence(TransformKind::ReI, f, n);
      CHECK(r.converged);
      CHECK(std::abs(r.value - (n == m ? 1.0 : 0.0)) < 1e-5);
    }
  }
  CHECK(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() < 30);
}

TEST_CASE("ReI round trip from a binary64 callable") {
  const auto e2 = CoefficientSequence::unit(2);
  const dixt::Callable f{[&](double x) { return dixt::synthesize(TransformKind::ReI, e2, x); },
                         dixt::DecayHint<double>::algebraic(1.5)};
  for (int n = 1; n <= 3; ++n) {
    const auto r = dixt::invert_to_sequence(TransformKind::ReI, f, n);
    CHECK(std::abs(r.value - (n == 2 ? 1.0 : 0.0)) < 1e-5);
  }
}

TEST_CASE("inverting the zero function") {
  const dixt::Callable zero{[](double) { return 0.0; }, dixt::DecayHint<double>::exponential(1)};
  for (auto kind : kKinds) {
    const auto r = dixt::invert_to_sequence(kind, zero, 3);
    CHECK(r.value == 0.0);
    CHECK(r.error_estimate == 0.0);
  }
}

TEST_CASE("inversion index guards") {
  const PsiGenerated f{TransformKind::ReI, sines({1.0})};
  CHECK(code_of([&] { dixt::invert_to_sequence(TransformKind::ReI, f, 12); }) ==
        dixt::ErrorCode::PrecisionLoss);
  CHECK(code_of([&] { dixt::invert_to_sequence(TransformKind::ReI, f, 0); }) ==
        dixt::ErrorCode::IndexOutOfRange);
  CHECK(code_of([&] {
          dixt::invert_to_function(TransformKind::ReI, CoefficientSequence::unit(11), 1.0);
        }) == dixt::ErrorCode::PrecisionLoss);
}

TEST_CASE("insufficient decay is rejected for ReI") {
  const dixt::Callable slow{[](double x) { return 1 / (1 + x); },
                            dixt::DecayHint<double>::algebraic(0.5)};
  CHECK(code_of([&] { dixt::analyze(TransformKind::ReI, slow, 1); }) ==
        dixt::ErrorCode::InsufficientDecay);
}

TEST_CASE("inversion to a function") {
  const CoefficientSequence zero{1, {0.0, 0.0}};
  for (auto kind : kKinds) CHECK(dixt::invert_to_function(kind, zero, 1.0).value == 0.0);

  // Single term: c sinh(pi n) times the inverse kernel.
  const auto e2 = CoefficientSequence::unit(2);
  for (auto kind : kKinds) {
    const double k = dixt::inverse_kernel(kind, 2, 0.7, dixt::default_kernel_tolerance<double>()).value;
    const double want = dixt::inversion_constant(kind) * std::sinh(2 * pi) * k;
    CHECK(rel(dixt::invert_to_function(kind, e2, 0.7).value, want) < 1e-8);
  }
}

TEST_CASE("ReI analysis then inversion reproduces psi functions") {
  const PsiGenerated f{TransformKind::ReI, sines({1.0})};
  CoefficientSequence a{1, {}};
  for (int n = 1; n <= 8; ++n) a.values.push_back(dixt::analyze(TransformKind::ReI, f, n).value);
  for (double x : {0.3, 1.0, 3.0}) {
    const double got = dixt::invert_to_function(TransformKind::ReI, a, x).value;
    CHECK(std::abs(got - dixt::psi_function_value(f, x).value) < 1e-4);
  }
}

TEST_CASE("inversion constants") {
  CHECK(dixt::inversion_constant(TransformKind::ReI) == doctest::Approx(1 / (pi * pi)));
  CHECK(dixt::inversion_constant(TransformKind::ReJK) == doctest::Approx(8 / (pi * pi)));
  CHECK(dixt::inversion_constant(TransformKind::ImJK) == doctest::Approx(4 / (pi * pi)));
}

TEST_CASE("evaluate dispatches on the function variant") {
  const auto seq = CoefficientSequence{1, {0.5, -1.0}};
  const dixt::FunctionSpec s = dixt::Synthesized{TransformKind::ImJK, seq};
  CHECK(rel(dixt::evaluate(s, 2.0), dixt::synthesize(TransformKind::ImJK, seq, 2.0)) < 1e-14);
  const dixt::FunctionSpec c = dixt::Callable{[](double x) { return x * x; }, {}};
  CHECK(dixt::evaluate(c, 3.0) == 9.0);
}

TEST_CASE("analysis is deterministic") {
  const PsiGenerated f{TransformKind::ImJK, sines({1.0, 0.25})};
  const auto a = dixt::analyze(TransformKind::ImJK, f, 2);
  const auto b = dixt::analyze(TransformKind::ImJK, f, 2);
  CHECK(a.value == b.value);
  CHECK(a.error_estimate == b.error_estimate);
  CHECK(a.evaluations == b.evaluations);
}
