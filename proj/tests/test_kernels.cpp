#include <cmath>
#include <numbers>

#include <boost/math/special_functions/bessel.hpp>

#include "doctest.h"
#include "dixt/identities.hpp"
#include "dixt/kernels.hpp"
#include "oracles.hpp"

using dixt::TransformKind;
using std::numbers::pi;

namespace {

constexpr TransformKind kKinds[] = {TransformKind::ReI, TransformKind::ReJK, TransformKind::ImJK};

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

double inverse(TransformKind kind, int n, double x) {
  const auto r = dixt::inverse_kernel(kind, n, x, dixt::default_kernel_tolerance<double>());
  REQUIRE(r.converged);
  return r.value;
}

// Phi_n in 50 digits, with Boost's E_1.
double phi_oracle(int n, double x) {
  using oracle::Big;
  const Big X(x);
  return static_cast<double>(oracle::finite(
      [&](Big u) {
        const Big c = cosh(u / 2);
        const Big z = X * c * c;
        return exp(z) * boost::math::expint(1, z) * sinh(u) * sin(n * u);
      },
      Big(0), oracle::pi()));
}

}  // namespace

TEST_CASE("order-zero ReI kernel is e^{-x/2} I_0(x/2)") {
  const double want = std::exp(-1.0) * boost::math::cyl_bessel_i(0, 1.0);
  CHECK(rel(dixt::forward_kernel(TransformKind::ReI, 0, 2.0), want) < 1e-12);
}

TEST_CASE("forward kernels against oracle Bessel values") {
  for (int n : {1, 3, 6}) {
    for (double x : {0.5, 2.0, 9.0}) {
      const double re_i = std::exp(-x / 2) * oracle::i_imag(n, x / 2).real();
      CHECK(rel(dixt::forward_kernel(TransformKind::ReI, n, x), re_i) < 1e-11);
      const double z = 2 * std::sqrt(2 * x);
      const auto j = oracle::j_imag(n, z);
      const double k = static_cast<double>(oracle::k_imag(n, z));
      CHECK(rel(dixt::forward_kernel(TransformKind::ReJK, n, x), j.real() * k / std::cosh(pi * n / 2)) <
            1e-10);
      CHECK(rel(dixt::forward_kernel(TransformKind::ImJK, n, x), j.imag() * k / std::sinh(pi * n / 2)) <
            1e-10);
    }
  }
}

TEST_CASE("order-zero ReJK kernel is J_0 K_0") {
  const double z = 2 * std::sqrt(2.0);
  const double want = boost::math::cyl_bessel_j(0, z) * boost::math::cyl_bessel_k(0, z);
  CHECK(rel(dixt::forward_kernel(TransformKind::ReJK, 0, 1.0), want) < 1e-12);
}

TEST_CASE("ReJK kernel agrees with its Mellin-Barnes integral") {
  dixt::IdentityParams p;
  p.tau = 2;
  p.x = 1;
  const auto report = dixt::verify(dixt::IdentityId::MB25, p);
  CHECK(report.converged);
  CHECK(std::abs(dixt::forward_kernel(TransformKind::ReJK, 2, 1.0) - report.rhs) < 1e-6);
}

TEST_CASE("kind and index mismatches") {
  try {
    dixt::forward_kernel(TransformKind::ImJK, 0, 1.0);
    FAIL("expected an error");
  } catch (const dixt::Error& e) {
    CHECK(e.code() == dixt::ErrorCode::IndexOutOfRange);
  }
  try {
    dixt::forward_kernel(TransformKind::ReI, 21, 1.0);
    FAIL("expected an error");
  } catch (const dixt::Error& e) {
    CHECK(e.code() == dixt::ErrorCode::OrderTooLarge);
  }
  CHECK_THROWS_AS(dixt::forward_kernel(TransformKind::ReJK, -1, 1.0), dixt::Error);
  CHECK_THROWS_AS(dixt::forward_kernel(TransformKind::ReJK, 1, -1.0), dixt::Error);
}

TEST_CASE("forward kernels at the largest order: finite or a typed accuracy loss") {
  for (double x : {0.01, 1.0, 50.0, 400.0}) {
    CHECK(std::isfinite(dixt::forward_kernel(TransformKind::ReI, 20, x)));
  }
  // Where J's integral form cancels beyond 1e-8 the kernel refuses.
  for (auto kind : {TransformKind::ReJK, TransformKind::ImJK}) {
    for (double x : {0.01, 1.0, 50.0, 400.0}) {
      try {
        const double v = dixt::forward_kernel(kind, 20, x);
        CHECK(std::isfinite(v));
      } catch (const dixt::Error& e) {
        CHECK(e.code() == dixt::ErrorCode::AccuracyLoss);
        CHECK(x > 17);
      }
    }
  }
}

TEST_CASE("inverse kernels vanish at n = 0") {
  for (auto kind : kKinds) {
    const auto r = dixt::inverse_kernel(kind, 0, 1.0, dixt::default_kernel_tolerance<double>());
    CHECK(r.value == 0.0);
    CHECK(r.error_estimate == 0.0);
  }
}

TEST_CASE("Phi_n against a 50-digit oracle") {
  for (int n : {1, 4}) {
    for (double x : {0.1, 1.0, 30.0}) {
      CHECK(std::abs(inverse(TransformKind::ReI, n, x) - phi_oracle(n, x)) < 1e-11);
    }
  }
}

TEST_CASE("x Psi_n(x) tends to the sine-sinh moment") {
  const double limit = 3 * std::sinh(pi) / 10;
  CHECK(rel(1e3 * inverse(TransformKind::ReJK, 3, 1e3), limit) < 1e-2);
  CHECK(rel(1e4 * inverse(TransformKind::ReJK, 3, 1e4), limit) < 1e-3);
}

TEST_CASE("inverse kernel bounds") {
  const double phi_bound = 4 * std::log(std::cosh(pi / 2));
  for (int n = 1; n <= 10; ++n) {
    for (double x : {0.05, 0.3, 1.0, 4.0, 20.0}) {
      CHECK(std::abs(inverse(TransformKind::ReJK, n, x)) <= x * (std::cosh(pi) - 1) / (x * x + 1));
      CHECK(std::abs(inverse(TransformKind::ImJK, n, x)) <=
            std::sinh(pi) * std::sinh(pi) / (x * x + 1));
    }
    for (double x : {10.0, 100.0, 1e3, 1e4}) {
      CHECK(x * std::abs(inverse(TransformKind::ReI, n, x)) <= phi_bound);
    }
  }
}

TEST_CASE("ReJK forward kernel decays like e^{-2 sqrt(2x)}") {
  // |Re J| is O(z^{-1/2}) and oscillates; K ~ e^{-z}; z = 2 sqrt(2x). Compare
  // the peaks of |kernel| over two windows in sqrt(x).
  auto peak = [](double s_lo, double s_hi) {
    double best = -INFINITY, at = s_lo;
    for (int i = 0; i <= 400; ++i) {
      const double s = s_lo + (s_hi - s_lo) * i / 400;
      const double v = std::log(std::abs(dixt::forward_kernel(TransformKind::ReJK, 2, s * s)));
      if (v > best) {
        best = v;
        at = s;
      }
    }
    return std::pair{at, best};
  };
  const auto [s1, l1] = peak(6, 8);
  const auto [s2, l2] = peak(14, 16);
  const double slope = (l2 - l1) / (s2 - s1);
  const double expected = -2 * std::sqrt(2.0);
  CHECK(std::abs(slope - expected) < 0.2 * std::abs(expected));
}
