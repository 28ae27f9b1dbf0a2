#pragma once

// Forward kernels of the three discrete index transforms and their inversion
// kernels.
//
//   ReI   e^{-x/2} Re I_{in}(x/2)                         inverse Phi_n
//   ReJK  Re J_{in}(2 sqrt(2x)) K_{in}(2 sqrt(2x)) / cosh(pi n/2)   Psi_n
//   ImJK  Im J_{in}(2 sqrt(2x)) K_{in}(2 sqrt(2x)) / sinh(pi n/2)   Omega_n
//
// Phi_n(x)   = int_0^pi g(x cosh^2(u/2)) sinh(u) sin(nu) du,  g(z) = e^z Gamma(0,z)
// Psi_n(x)   = x int_0^pi sinh(u) sin(nu) / (x^2 + cosh^2 u) du
// Omega_n(x) = int_0^pi sinh(2u) sin(nu) / (x^2 + cosh^2 u) du

#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

#include "dixt/error.hpp"
#include "dixt/quad.hpp"
#include "dixt/specfun.hpp"

namespace dixt {

enum class TransformKind { ReI = 0, ReJK = 1, ImJK = 2 };

std::string_view to_string(TransformKind kind) noexcept;

// Smallest index admitted by the kind's series (synthesis side).
constexpr int min_index(TransformKind kind) {
  return kind == TransformKind::ReJK ? 0 : 1;
}

template <std::floating_point T>
BasicTolerance<T> default_kernel_tolerance() {
  if constexpr (sizeof(T) > sizeof(double)) {
    return {T(4) * BasicTolerance<T>::floor(), T(4) * BasicTolerance<T>::floor(),
            2'000'000};
  } else {
    return {T(1e-12), T(1e-10), 2'000'000};
  }
}

namespace detail {

inline void check_kernel_index(TransformKind kind, int n) {
  if (n < 0 || (kind == TransformKind::ImJK && n == 0)) {
    throw Error(ErrorCode::IndexOutOfRange,
                "index n=" + std::to_string(n) + " is out of range for kind " +
                    std::string(to_string(kind)));
  }
  if (n > kTauMax) {
    throw Error(ErrorCode::OrderTooLarge,
                "index n=" + std::to_string(n) + " exceeds TAU_MAX");
  }
}

}  // namespace detail

namespace detail {

// Re J_{i tau}(z) K_{i tau}(z) / cosh(pi tau/2), or with imaginary = true
// Im J_{i tau}(z) K_{i tau}(z) / sinh(pi tau/2), at z = 2 sqrt(2x).
template <std::floating_point T>
T jk_product(T tau, T x, bool imaginary) {
  check_order(tau);
  check_argument(x);
  constexpr T pi = std::numbers::pi_v<T>;
  const T z = 2 * std::sqrt(2 * x);
  const KValue<T> k = bessel_k_imag(tau, z);
  if (k.underflow) return T(0);
  // Dividing inside the series keeps J within range of the final product.
  if (!imaginary) {
    const T scale = 1 / std::cosh(pi * tau / 2);
    return bessel_j_scaled(tau, z, scale).real() * k.value;
  }
  if (tau == 0) {
    throw Error(ErrorCode::IndexOutOfRange, "Im J K / sinh(pi tau/2) needs tau > 0");
  }
  const T scale = 1 / std::sinh(pi * tau / 2);
  return bessel_j_scaled(tau, z, scale).imag() * k.value;
}

}  // namespace detail

template <std::floating_point T>
T forward_kernel(TransformKind kind, int n, T x) {
  detail::check_kernel_index(kind, n);
  detail::check_argument(x);
  if (kind == TransformKind::ReI) {
    return bessel_i_imag_scaled(T(n), x / 2).real();
  }
  return detail::jk_product(T(n), x, kind == TransformKind::ImJK);
}

// Inversion kernel for index n at x. n = 0 is exactly zero for every kind.
template <std::floating_point T>
BasicQuadratureResult<T> inverse_kernel(TransformKind kind, int n, T x,
                                        const BasicTolerance<T>& tol) {
  if (n < 0) {
    throw Error(ErrorCode::IndexOutOfRange, "inverse kernel index must be >= 0");
  }
  if (n > kTauMax) {
    throw Error(ErrorCode::OrderTooLarge, "inverse kernel index exceeds TAU_MAX");
  }
  detail::check_argument(x);
  tol.validate();
  if (n == 0) return {};
  constexpr T pi = std::numbers::pi_v<T>;
  const T nn = T(n);
  switch (kind) {
    case TransformKind::ReI: {
      auto f = [&](T u) {
        const T c = std::cosh(u / 2);
        return exp_scaled_e1(x * c * c) * std::sinh(u) * std::sin(nn * u);
      };
      return integrate_finite<T>(f, T(0), pi, tol);
    }
    case TransformKind::ReJK: {
      const T x2 = x * x;
      auto f = [&](T u) {
        const T c = std::cosh(u);
        return x * std::sinh(u) * std::sin(nn * u) / (x2 + c * c);
      };
      return integrate_finite<T>(f, T(0), pi, tol);
    }
    case TransformKind::ImJK: {
      const T x2 = x * x;
      auto f = [&](T u) {
        const T c = std::cosh(u);
        return std::sinh(2 * u) * std::sin(nn * u) / (x2 + c * c);
      };
      return integrate_finite<T>(f, T(0), pi, tol);
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown transform kind");
}

}  // namespace dixt
