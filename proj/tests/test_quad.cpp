#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "doctest.h"
#include "dixt/quad.hpp"
#include "dixt/specfun.hpp"

using dixt::DecayHint;
using dixt::Tolerance;
using std::numbers::pi;

namespace {

const Tolerance tight{1e-13, 1e-13, 2'000'000};

}  // namespace

TEST_CASE("finite integrals with closed forms") {
  auto r = dixt::integrate_finite<double>([](double u) { return std::sin(u); }, 0.0, pi, tight);
  CHECK(r.converged);
  CHECK(std::abs(r.value - 2.0) < 1e-12);

  const int n = 3;
  auto s = dixt::integrate_finite<double>(
      [&](double u) { return std::sinh(u) * std::sin(n * u); }, 0.0, pi, tight);
  // Antiderivative (cosh u sin nu - n sinh u cos nu) / (1 + n^2).
  const double want = n * (n % 2 ? 1.0 : -1.0) * std::sinh(pi) / (1 + n * n);
  CHECK(std::abs(s.value - want) < 1e-12);
  CHECK(std::abs(want - 3 * std::sinh(pi) / 10) < 1e-14);

  auto l = dixt::integrate_finite<double>([](double u) { return std::log(u); }, 0.0, 1.0,
                                          {1e-12, 1e-12, 2'000'000});
  CHECK(std::abs(l.value + 1.0) < 1e-10);
}

TEST_CASE("finite integration is deterministic") {
  auto f = [](double u) { return std::exp(std::cos(7 * u)) / (1 + u * u); };
  const auto a = dixt::integrate_finite<double>(f, -3.0, 5.0, tight);
  const auto b = dixt::integrate_finite<double>(f, -3.0, 5.0, tight);
  CHECK(a.value == b.value);
  CHECK(a.error_estimate == b.error_estimate);
  CHECK(a.evaluations == b.evaluations);
}

TEST_CASE("finite integration is additive within error estimates") {
  auto f = [](double u) { return std::sqrt(u) * std::cos(3 * u); };
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> mid(0.01, 3.99);
  const Tolerance tol{1e-12, 1e-12, 2'000'000};
  const auto whole = dixt::integrate_finite<double>(f, 0.0, 4.0, tol);
  for (int i = 0; i < 20; ++i) {
    const double c = mid(rng);
    const auto l = dixt::integrate_finite<double>(f, 0.0, c, tol);
    const auto r = dixt::integrate_finite<double>(f, c, 4.0, tol);
    const double slack = whole.error_estimate + l.error_estimate + r.error_estimate + 1e-15;
    CHECK(std::abs(l.value + r.value - whole.value) <= slack);
  }
}

TEST_CASE("finite integration errors") {
  CHECK_THROWS_AS(dixt::integrate_finite<double>([](double) { return 1.0; }, 1.0, 0.0, tight),
                  dixt::Error);
  try {
    dixt::integrate_finite<double>([](double u) { return u > 0.5 ? NAN : 1.0; }, 0.0, 1.0, tight);
    FAIL("expected an error");
  } catch (const dixt::Error& e) {
    CHECK(e.code() == dixt::ErrorCode::NonFiniteIntegrand);
  }
  const auto r = dixt::integrate_finite<double>(
      [](double u) { return std::sin(1 / u); }, 1e-6, 1.0, {1e-15, 1e-15, 300});
  CHECK_FALSE(r.converged);
  CHECK(r.evaluations <= 300 + 30);
}

TEST_CASE("semi-infinite integrals") {
  const auto e = dixt::integrate_semi_infinite<double>([](double t) { return std::exp(-t); },
                                                       DecayHint<double>::exponential(1), tight);
  CHECK(std::abs(e.value - 1.0) < 1e-12);
  CHECK_FALSE(e.hint_violation);

  const double u = 1;
  const auto y = dixt::integrate_semi_infinite<double>(
      [&](double t) { return std::exp(-t * (1 + std::cosh(u))); },
      DecayHint<double>::exponential(1 + std::cosh(u)), tight);
  CHECK(std::abs(y.value - 1 / (1 + std::cosh(u))) < 1e-12);

  const double rate = 2 * std::sqrt(2.0);
  const auto s = dixt::integrate_semi_infinite<double>(
      [&](double t) { return std::exp(-rate * std::sqrt(t)) / std::sqrt(t); },
      DecayHint<double>::exp_sqrt(rate), {1e-11, 1e-11, 2'000'000});
  CHECK(s.converged);
  CHECK_FALSE(s.hint_violation);
  CHECK(std::abs(s.value - 1 / std::sqrt(2.0)) < 1e-10);

  const auto a = dixt::integrate_semi_infinite<double>(
      [](double t) { return 1 / (1 + t * t); }, DecayHint<double>::algebraic(2), tight);
  CHECK(std::abs(a.value - pi / 2) < 1e-12);
}

TEST_CASE("reported error bounds the true error") {
  struct Case {
    std::function<double(double)> f;
    DecayHint<double> hint;
    double truth;
  };
  const Case cases[] = {
      {[](double t) { return std::exp(-2 * t) * t * t; }, DecayHint<double>::exponential(2), 0.25},
      {[](double t) { return std::exp(-t) * std::cos(t); }, DecayHint<double>::exponential(1), 0.5},
      {[](double t) { return 1 / ((1 + t) * (1 + t)); }, DecayHint<double>::algebraic(2), 1.0},
      {[](double t) { return std::exp(-std::sqrt(t)); }, DecayHint<double>::exp_sqrt(1), 2.0},
  };
  for (const auto& c : cases) {
    for (double tol : {1e-6, 1e-9, 1e-12}) {
      const auto r = dixt::integrate_semi_infinite<double>(c.f, c.hint, {tol, tol, 2'000'000});
      CHECK(r.converged);
      CHECK(std::abs(r.value - c.truth) <= 3 * r.error_estimate + 1e-15);
    }
  }
}

TEST_CASE("a visibly wrong decay hint is flagged") {
  // e^{-t/50} declared as e^{-5t}.
  const auto r = dixt::integrate_semi_infinite<double>(
      [](double t) { return std::exp(-t / 50); }, DecayHint<double>::exponential(5),
      {1e-10, 1e-10, 200'000});
  CHECK(r.hint_violation);
}

TEST_CASE("sine zero splitting") {
  // int_0^inf e^{-t} sin(3t) dt = 3/10.
  const auto r = dixt::integrate_sine_zero_split<double>([](double t) { return std::exp(-t); },
                                                         3.0, tight);
  CHECK(std::abs(r.value - 0.3) < 1e-12);
  CHECK_THROWS_AS(dixt::integrate_sine_zero_split<double>([](double) { return 1.0; }, 0.0, tight),
                  dixt::Error);
}

TEST_CASE("contour integrals") {
  using C = std::complex<double>;
  const double gamma = 0.3;
  // g(gamma + i t) = e^{-t^2}.
  const auto g = dixt::integrate_contour<double>(
      [&](C s) { return std::exp((s - gamma) * (s - gamma)); }, gamma, tight);
  CHECK(std::abs(g.value.real() - std::sqrt(pi) / (2 * pi)) < 1e-12);
  CHECK(std::abs(g.value.imag()) < 1e-12);

  // Conjugate-symmetric integrand: real output.
  const auto h = dixt::integrate_contour<double>(
      [&](C s) { return dixt::complex_gamma(s) * dixt::complex_gamma(C(1) - s); }, 0.5,
      {1e-10, 1e-10, 2'000'000});
  CHECK(std::abs(h.value.imag()) < 1e-12);
}

TEST_CASE("contour integrands that stop decaying are rejected") {
  using C = std::complex<double>;
  try {
    dixt::integrate_contour<double>([](C s) { return std::exp(std::abs(s.imag()) / 4) + C(0); },
                                    0.0, tight);
    FAIL("expected an error");
  } catch (const dixt::Error& e) {
    CHECK(e.code() == dixt::ErrorCode::NonDecay);
  }
}

TEST_CASE("series summation") {
  const auto g = dixt::sum_series<double>([](std::int64_t n) { return std::ldexp(1.0, -int(n)); },
                                          1,
                                          dixt::TailBound<double>{[](std::int64_t n) {
                                                                    return std::ldexp(1.0, -int(n));
                                                                  },
                                                                  1e-10});
  CHECK(std::abs(g.value - 1.0) < 1e-10);
  CHECK(g.converged);

  auto term = [](std::int64_t n) { return std::sin(double(n)) / (double(n) * double(n)); };
  const auto a = dixt::sum_series<double>(term, 1, dixt::FixedCount{100'000});
  const auto b = dixt::sum_series<double>(term, 1, dixt::FixedCount{1'000'000});
  CHECK(std::abs(a.value - b.value) < 1e-5);
  CHECK(a.error_estimate == doctest::Approx(std::abs(term(100'000))));

  const auto z = dixt::sum_series<double>([](std::int64_t) { return 0.0; }, 1,
                                          dixt::FixedCount{50});
  CHECK(z.value == 0.0);
  CHECK(z.error_estimate == 0.0);

  try {
    dixt::sum_series<double>([](std::int64_t n) { return n == 4 ? INFINITY : 1.0; }, 1,
                             dixt::FixedCount{10});
    FAIL("expected an error");
  } catch (const dixt::Error& e) {
    CHECK(e.code() == dixt::ErrorCode::NonFiniteTerm);
  }
}

TEST_CASE("tolerance validation") {
  CHECK_THROWS_AS((Tolerance{1e-17, 1e-10, 100}.validate()), dixt::Error);
  CHECK_THROWS_AS((Tolerance{1e-10, 1e-10, 0}.validate()), dixt::Error);
  CHECK_THROWS_AS((Tolerance{1e-10, 1e-10, 200'000'000}.validate()), dixt::Error);
  CHECK_NOTHROW((Tolerance{1e-15, 1e-15, 100'000'000}.validate()));
}
