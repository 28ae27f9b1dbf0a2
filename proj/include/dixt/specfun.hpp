#pragma once

// Special functions behind every kernel: complex gamma, Bessel functions of
// purely imaginary order i*tau for real positive argument, and the scaled
// exponential integral g(z) = e^z * Gamma(0, z).
//
// Evaluation paths:
//   I_{i tau}(x)  ascending series (x <= X_MAX); exponentially scaled variant
//                 switches to the large-argument expansion when it converges.
//   J_{i tau}(x)  alternating ascending series while its cancellation is
//                 benign, otherwise the Schlaefli-type integral.
//   K_{i tau}(x)  -pi Im I_{i tau}(x) / sinh(pi tau) for small x, Steed's
//                 continued fraction (real arithmetic, mu^2 = -tau^2) for
//                 x >= max(2, tau/2); K_0 has its own series for x < 2.

#include <cmath>
#include <complex>
#include <concepts>
#include <limits>
#include <numbers>
#include <string>

#include "dixt/error.hpp"
#include "dixt/quad.hpp"

namespace dixt {

inline constexpr double kTauMax = 20.0;
inline constexpr double kXMax = 700.0;

template <std::floating_point T>
using Complex = std::complex<T>;

template <std::floating_point T>
struct KValue {
  T value = 0;
  bool underflow = false;
};

namespace detail {

template <typename T>
constexpr T series_eps() {
  return std::numeric_limits<T>::epsilon() / 16;
}

template <typename T>
void check_order(T tau) {
  if (!std::isfinite(tau) || tau < 0) {
    throw Error(ErrorCode::InvalidArgument, "order tau must be finite and >= 0");
  }
  if (tau > T(kTauMax)) {
    throw Error(ErrorCode::OrderTooLarge,
                "order tau=" + std::to_string(double(tau)) + " exceeds TAU_MAX");
  }
}

template <typename T>
void check_argument(T x) {
  if (!(x > 0) || !std::isfinite(x)) {
    throw Error(ErrorCode::InvalidArgument, "argument must be finite and > 0");
  }
}

// Stirling series for log Gamma(w), Re w large.
template <typename T>
Complex<T> stirling_log_gamma(Complex<T> w) {
  static constexpr T bernoulli[] = {
      T(1.0L / 6),        T(-1.0L / 30),      T(1.0L / 42),
      T(-1.0L / 30),      T(5.0L / 66),       T(-691.0L / 2730),
      T(7.0L / 6),        T(-3617.0L / 510),  T(43867.0L / 798),
      T(-174611.0L / 330), T(854513.0L / 138)};
  const T half_log_2pi = T(0.918938533204672741780329736405617639861L);
  Complex<T> result = (w - T(0.5)) * std::log(w) - w + half_log_2pi;
  const Complex<T> inv = T(1) / w;
  const Complex<T> inv2 = inv * inv;
  Complex<T> power = inv;
  for (int k = 1; k <= 11; ++k) {
    result += power * (bernoulli[k - 1] / T((2 * k) * (2 * k - 1)));
    power *= inv2;
  }
  return result;
}

}  // namespace detail

// log Gamma(z) on some branch; only exp() of it is meaningful.
template <std::floating_point T>
Complex<T> complex_log_gamma(Complex<T> z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw Error(ErrorCode::InvalidArgument, "gamma argument not finite");
  }
  if (z.imag() == 0 && z.real() <= 0 && z.real() == std::floor(z.real())) {
    throw Error(ErrorCode::Pole, "gamma has a pole at a nonpositive integer");
  }
  constexpr T pi = std::numbers::pi_v<T>;
  if (z.real() < T(0.5)) {
    const Complex<T> s = std::sin(pi * z);
    return std::log(pi) - std::log(s) - complex_log_gamma(T(1) - z);
  }
  // Shift so Re w >= 20; Stirling with 11 terms is then below long double
  // epsilon.
  Complex<T> w = z;
  Complex<T> product(1, 0);
  Complex<T> log_shift(0, 0);
  while (w.real() < 20) {
    product *= w;
    w += T(1);
    if (std::abs(product) > T(1e200)) {
      log_shift += std::log(product);
      product = Complex<T>(1, 0);
    }
  }
  log_shift += std::log(product);
  return detail::stirling_log_gamma(w) - log_shift;
}

// The logarithm is formed in extended precision: its magnitude (tens for
// |Im z| ~ 40) would otherwise cost two digits in the exponentiated result.
template <std::floating_point T>
Complex<T> complex_gamma(Complex<T> z) {
  using W = long double;
  const Complex<W> lg = complex_log_gamma(Complex<W>(z.real(), z.imag()));
  if (lg.real() > std::log(W(std::numeric_limits<T>::max()))) {
    throw Error(ErrorCode::Overflow, "|Gamma(z)| exceeds the floating-point range");
  }
  const Complex<W> g = std::exp(lg);
  return {T(g.real()), T(g.imag())};
}

namespace detail {

template <typename T>
struct SeriesSum {
  Complex<T> value;
  T abs_sum = 0;  // sum of term magnitudes, for cancellation estimates
};

// sum_k sign^k (x/2)^{2k + i tau} / (k! Gamma(k + 1 + i tau)) * scale.
// sign = +1 gives I_{i tau}, sign = -1 gives J_{i tau}. tau may be negative
// here (conjugate-order checks).
template <typename T>
SeriesSum<T> ascending_series(T tau, T x, T sign, T scale = 1) {
  const T half = x / 2;
  const T q = sign * half * half;
  Complex<T> term;
  if (tau == 0) {
    term = Complex<T>(scale, 0);
  } else {
    using W = long double;
    const Complex<W> lg = complex_log_gamma(Complex<W>(1, tau));
    const Complex<W> lead =
        std::exp(Complex<W>(-lg.real(), W(tau) * std::log(W(half)) - lg.imag()));
    term = Complex<T>(T(lead.real()), T(lead.imag())) * scale;
  }
  SeriesSum<T> out{term, std::abs(term)};
  T largest = std::abs(term);
  constexpr T eps = series_eps<T>();
  for (int k = 1; k < 100000; ++k) {
    const Complex<T> denom(T(k) * T(k), T(k) * tau);
    if (tau == 0) {
      term = Complex<T>(term.real() * (q / (T(k) * T(k))), 0);
    } else {
      term *= q / denom;
    }
    out.value += term;
    const T mag = std::abs(term);
    out.abs_sum += mag;
    largest = std::max(largest, std::abs(out.value));
    const T ratio = std::abs(q) / std::abs(denom);
    if (ratio < 1 && mag <= eps * largest) return out;
  }
  throw Error(ErrorCode::AccuracyLoss, "ascending Bessel series did not converge");
}

// e^{-z} Re I_{i tau}(z) from the large-argument expansion. Every term is
// positive for imaginary order. Returns NaN when the expansion cannot reach
// working precision before its terms start growing.
template <typename T>
T scaled_re_i_asymptotic(T tau, T z) {
  constexpr T eps = series_eps<T>();
  const T four_tau2 = 4 * tau * tau;
  T term = 1;
  T sum = 1;
  for (int k = 1; k < 2000; ++k) {
    const T odd = T(2 * k - 1);
    const T ratio = (four_tau2 + odd * odd) / (8 * T(k) * z);
    if (ratio >= 1) return std::numeric_limits<T>::quiet_NaN();
    term *= ratio;
    sum += term;
    if (term <= eps * sum) {
      return sum / std::sqrt(2 * std::numbers::pi_v<T> * z);
    }
  }
  return std::numeric_limits<T>::quiet_NaN();
}

// Steed's continued fraction for K_mu with mu = i tau, returning e^x K.
// Converges for x >= max(2, tau/2); NaN signals non-convergence.
template <typename T>
T scaled_k_continued_fraction(T tau, T x) {
  constexpr T eps = std::numeric_limits<T>::epsilon();
  const T xmu2 = -tau * tau;
  T b = 2 * (1 + x);
  T d = 1 / b;
  T h = d;
  T delh = d;
  T q1 = 0;
  T q2 = 1;
  const T a1 = T(0.25) - xmu2;
  T q = a1;
  T c = a1;
  T a = -a1;
  T s = 1 + q * delh;
  for (int i = 1; i < 200000; ++i) {
    a -= 2 * i;
    c = -a * c / (i + T(1));
    const T qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2;
    d = 1 / (b + a * d);
    delh = (b * d - 1) * delh;
    h += delh;
    const T dels = q * delh;
    s += dels;
    if (!std::isfinite(s)) break;
    if (std::abs(dels / s) < eps) {
      return std::sqrt(std::numbers::pi_v<T> / (2 * x)) / s;
    }
  }
  return std::numeric_limits<T>::quiet_NaN();
}

template <typename T>
bool k_continued_fraction_region(T tau, T x) {
  return x >= 2 && x >= tau / 2;
}

// K_0(x) for 0 < x < 2 from the logarithmic ascending series.
template <typename T>
T k0_series(T x) {
  constexpr T eps = series_eps<T>();
  const T q = x * x / 4;
  const T lead = std::log(x / 2) + std::numbers::egamma_v<T>;
  T term = 1;  // (x^2/4)^k / (k!)^2
  T i0 = 1;
  T harmonic = 0;
  T tail = 0;
  for (int k = 1; k < 1000; ++k) {
    term *= q / (T(k) * T(k));
    harmonic += T(1) / T(k);
    i0 += term;
    tail += term * harmonic;
    if (term * harmonic <= eps * std::abs(tail)) break;
  }
  return -lead * i0 + tail;
}

// J_{i tau}(x) = (1/pi) int_0^pi cos(x sin t - i tau t) dt
//               - (sin(i tau pi)/pi) int_0^inf e^{-x sinh t - i tau t} dt,
// split into real and imaginary parts.
template <typename T>
Complex<T> j_integral(T tau, T x, T scale) {
  constexpr T pi = std::numbers::pi_v<T>;
  BasicTolerance<T> tol{std::numeric_limits<T>::epsilon() * 16,
                        std::numeric_limits<T>::epsilon() * 16, 4'000'000};
  auto re_part = [&](T t) { return std::cos(x * std::sin(t)) * std::cosh(tau * t) * scale; };
  auto im_part = [&](T t) { return std::sin(x * std::sin(t)) * std::sinh(tau * t) * scale; };
  const T re1 = integrate_finite<T>(re_part, T(0), pi, tol).value / pi;
  const T im1 = integrate_finite<T>(im_part, T(0), pi, tol).value / pi;
  T re2 = 0, im2 = 0;
  if (tau != 0) {
    const T pref = std::sinh(pi * tau) / pi * scale;
    // e^{-x sinh t} is negligible once x sinh t exceeds ~ 50 + log(pref).
    const T cutoff = std::asinh((T(60) + std::log1p(pref)) / x);
    auto s_part = [&](T t) { return std::exp(-x * std::sinh(t)) * std::sin(tau * t); };
    auto c_part = [&](T t) { return std::exp(-x * std::sinh(t)) * std::cos(tau * t); };
    re2 = pref * integrate_finite<T>(s_part, T(0), cutoff, tol).value;
    im2 = pref * integrate_finite<T>(c_part, T(0), cutoff, tol).value;
  }
  return {re1 - re2, im1 - im2};
}

inline constexpr double kJSeriesMax = 17.0;

// J_{i tau}(x) * scale; the fused scale lets callers divide by cosh(pi tau/2)
// before summation.
template <typename T>
Complex<T> bessel_j_scaled(T tau, T x, T scale) {
  const T envelope = std::sqrt(2 / (std::numbers::pi_v<T> * x)) *
                     std::cosh(std::numbers::pi_v<T> * tau / 2) * std::abs(scale);
  constexpr T eps = std::numeric_limits<T>::epsilon();
  if (x <= T(kJSeriesMax)) {
    const SeriesSum<T> s = ascending_series(tau, x, T(-1), scale);
    const T reference = std::max(std::abs(s.value), std::min(envelope, s.abs_sum));
    if (eps * s.abs_sum <= T(1e-10) * reference) return s.value;
  }
  const Complex<T> v = j_integral(tau, x, scale);
  // The integral form cancels terms of size ~ cosh(pi tau).
  const T loss = eps * std::cosh(std::numbers::pi_v<T> * tau) * std::abs(scale) /
                 std::max(std::abs(v), envelope / 4);
  if (loss > T(1e-8)) {
    throw Error(ErrorCode::AccuracyLoss,
                "J of imaginary order: cancellation exceeds 1e-8 relative");
  }
  return v;
}

}  // namespace detail

// I_{i tau}(x), 0 < x <= X_MAX.
template <std::floating_point T>
Complex<T> bessel_i_imag(T tau, T x) {
  detail::check_order(tau);
  detail::check_argument(x);
  if (x > T(kXMax)) {
    throw Error(ErrorCode::Overflow, "I_{i tau}(x) overflows for x > X_MAX");
  }
  Complex<T> value = detail::ascending_series(tau, x, T(1)).value;
  // Im I_{i tau}(x) = -sinh(pi tau) K_{i tau}(x) / pi exactly; where the
  // continued fraction applies it avoids the series' cancellation in Im.
  if (tau != 0 && detail::k_continued_fraction_region(tau, x)) {
    const T ks = detail::scaled_k_continued_fraction(tau, x);
    if (std::isfinite(ks)) {
      constexpr T pi = std::numbers::pi_v<T>;
      value.imag(-std::sinh(pi * tau) / pi * ks * std::exp(-x));
    }
  }
  return value;
}

// e^{-x} I_{i tau}(x) for any x > 0.
template <std::floating_point T>
Complex<T> bessel_i_imag_scaled(T tau, T x) {
  detail::check_order(tau);
  detail::check_argument(x);
  constexpr T pi = std::numbers::pi_v<T>;
  // The expansion omits a term of relative size e^{pi tau - 2x}.
  if (x > 25 && 2 * x - pi * tau > 44) {
    const T re = detail::scaled_re_i_asymptotic(tau, x);
    if (std::isfinite(re)) {
      T im = 0;
      if (tau != 0) {
        const T ks = detail::scaled_k_continued_fraction(tau, x);
        im = -std::sinh(pi * tau) / pi * std::exp(-2 * x) * ks;
      }
      return {re, im};
    }
  }
  if (x > T(kXMax) / 2) {
    throw Error(ErrorCode::AccuracyLoss,
                "scaled I: neither the series nor the expansion is usable");
  }
  Complex<T> value = detail::ascending_series(tau, x, T(1)).value * std::exp(-x);
  if (tau != 0 && detail::k_continued_fraction_region(tau, x)) {
    const T ks = detail::scaled_k_continued_fraction(tau, x);
    if (std::isfinite(ks)) {
      value.imag(-std::sinh(pi * tau) / pi * ks * std::exp(-2 * x));
    }
  }
  return value;
}

template <std::floating_point T>
Complex<T> bessel_j_imag(T tau, T x) {
  detail::check_order(tau);
  detail::check_argument(x);
  return detail::bessel_j_scaled(tau, x, T(1));
}

// K_{i tau}(x), real. Underflow yields 0 with the flag set.
template <std::floating_point T>
KValue<T> bessel_k_imag(T tau, T x) {
  detail::check_order(tau);
  detail::check_argument(x);
  constexpr T pi = std::numbers::pi_v<T>;
  if (detail::k_continued_fraction_region(tau, x)) {
    const T scaled = detail::scaled_k_continued_fraction(tau, x);
    if (std::isfinite(scaled)) {
      const T v = scaled * std::exp(-x);
      if (v == 0 || std::abs(v) < std::numeric_limits<T>::min()) return {T(0), true};
      return {v, false};
    }
    if (x > T(kXMax)) {
      throw Error(ErrorCode::AccuracyLoss, "K continued fraction did not converge");
    }
  }
  if (tau == 0) return {detail::k0_series(x), false};
  const auto s = detail::ascending_series(tau, x, T(1));
  return {-pi * s.value.imag() / std::sinh(pi * tau), false};
}

// g(z) = e^z Gamma(0, z) = e^z E_1(z), z > 0.
template <std::floating_point T>
T exp_scaled_e1(T z) {
  if (!(z > 0) || !std::isfinite(z)) {
    throw Error(ErrorCode::InvalidArgument, "exp_scaled_e1 requires z > 0");
  }
  constexpr T eps = std::numeric_limits<T>::epsilon();
  if (z <= 1) {
    // E_1(z) = -gamma - ln z - sum_{k>=1} (-z)^k / (k k!)
    T term = 1;
    T sum = 0;
    for (int k = 1; k < 200; ++k) {
      term *= -z / T(k);
      const T add = term / T(k);
      sum += add;
      if (std::abs(add) <= eps * std::abs(sum) / 4) break;
    }
    const T e1 = -std::numbers::egamma_v<T> - std::log(z) - sum;
    return std::exp(z) * e1;
  }
  // Modified Lentz on 1/(z+1- 1/(z+3- 4/(z+5- ...))).
  constexpr T tiny = std::numeric_limits<T>::min() * 1e10;
  T b = z + 1;
  T c = 1 / tiny;
  T d = 1 / b;
  T h = d;
  for (int i = 1; i < 100000; ++i) {
    const T an = -T(i) * T(i);
    b += 2;
    d = 1 / (an * d + b);
    c = b + an / c;
    const T del = c * d;
    h *= del;
    if (std::abs(del - 1) <= eps) return h;
  }
  throw Error(ErrorCode::AccuracyLoss, "exp_scaled_e1 continued fraction did not converge");
}

}  // namespace dixt
