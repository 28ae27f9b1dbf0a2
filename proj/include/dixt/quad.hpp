#pragma once

// Deterministic one-dimensional quadrature and series summation.
//
// Everything here is templated on the working floating type T so the same
// rules serve the binary64 public surface and the extended-precision
// inversion path. Value types may be real (T) or std::complex<T>.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>
#include <type_traits>
#include <variant>
#include <vector>

#include "dixt/error.hpp"

namespace dixt {

template <std::floating_point T>
struct BasicTolerance {
  T abs_tol = T(1e-12);
  T rel_tol = T(1e-10);
  std::int64_t max_evals = 2'000'000;

  // Smallest tolerance a caller may request for this working precision.
  static constexpr T floor() {
    return std::numeric_limits<T>::epsilon() * T(4.5);
  }

  void validate() const {
    if (!(abs_tol >= floor()) || !(rel_tol >= floor()) ||
        !std::isfinite(abs_tol) || !std::isfinite(rel_tol)) {
      throw Error(ErrorCode::InvalidArgument,
                  "tolerance below the working-precision floor or not finite");
    }
    if (max_evals <= 0 || max_evals > 100'000'000) {
      throw Error(ErrorCode::InvalidArgument,
                  "max_evals must lie in [1, 1e8]");
    }
  }

  T target(T magnitude) const {
    return std::max(abs_tol, rel_tol * std::abs(magnitude));
  }

  BasicTolerance scaled(T factor) const {
    return {std::max(abs_tol * factor, floor()),
            std::max(rel_tol * factor, floor()), max_evals};
  }
};

// Public binary64 tolerance; its floor (about 1e-15) matches the documented
// limit for user-supplied tolerances.
using Tolerance = BasicTolerance<double>;

template <std::floating_point T, typename V = T>
struct BasicQuadratureResult {
  V value{};
  T error_estimate = 0;
  std::int64_t evaluations = 0;
  bool converged = true;
  // Set when a semi-infinite integrand visibly violates its declared decay.
  bool hint_violation = false;
};

using QuadratureResult = BasicQuadratureResult<double>;

template <std::floating_point T>
struct DecayHint {
  enum class Kind { Exponential, ExpSqrt, Algebraic };
  Kind kind = Kind::Exponential;
  // Rate for Exponential (e^{-r x}) and ExpSqrt (e^{-r sqrt x}); power p for
  // Algebraic (x^{-p}, p > 1).
  T parameter = 1;
  // Start of the tail region for Algebraic hints.
  T knee = 1;

  static DecayHint exponential(T rate) { return {Kind::Exponential, rate, 1}; }
  static DecayHint exp_sqrt(T rate) { return {Kind::ExpSqrt, rate, 1}; }
  static DecayHint algebraic(T power, T knee = 1) {
    return {Kind::Algebraic, power, knee};
  }
};

namespace detail {

template <typename V>
auto magnitude(const V& v) {
  return std::abs(v);
}

template <typename T>
bool all_finite(T v) {
  return std::isfinite(v);
}
template <typename T>
bool all_finite(const std::complex<T>& v) {
  return std::isfinite(v.real()) && std::isfinite(v.imag());
}

// Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
template <typename T>
struct Gk15 {
  static constexpr std::array<T, 8> xgk{
      T(0.991455371120812639206854697526329L),
      T(0.949107912342758524526189684047851L),
      T(0.864864423359769072789712788640926L),
      T(0.741531185599394439863864773280788L),
      T(0.586087235467691130294144845693013L),
      T(0.405845151377397166906606412076961L),
      T(0.207784955007898467600689403773245L),
      T(0)};
  static constexpr std::array<T, 8> wgk{
      T(0.022935322010529224963732008058970L),
      T(0.063092092629978553290700663189204L),
      T(0.104790010322250183839876322541518L),
      T(0.140653259715525918745189590510238L),
      T(0.169004726639267902826583426598550L),
      T(0.190350578064785409913256402421014L),
      T(0.204432940075298892414161999234649L),
      T(0.209482141084727828012999174891714L)};
  static constexpr std::array<T, 4> wg{
      T(0.129484966168869693270611432679082L),
      T(0.279705391489276667901467771423780L),
      T(0.381830050505118944950369775488975L),
      T(0.417959183673469387755102040816327L)};
};

template <typename T, typename V>
struct Panel {
  T a, b;
  V value;
  T error;
  T abs_value;
  bool at_floor;  // error estimate is the roundoff floor; bisection cannot help
};

template <typename T, typename V, typename F>
Panel<T, V> gk15(F& f, T a, T b) {
  using R = Gk15<T>;
  const T centr = (a + b) / 2;
  const T hlgth = (b - a) / 2;
  const T dhlgth = std::abs(hlgth);

  auto eval = [&](T x) -> V {
    V y = f(x);
    if (!all_finite(y)) {
      std::ostringstream os;
      os.precision(17);
      os << "integrand is not finite at x=" << x;
      throw Error(ErrorCode::NonFiniteIntegrand, os.str());
    }
    return y;
  };

  std::array<V, 7> fv1{}, fv2{};
  const V fc = eval(centr);
  V resg = fc * R::wg[3];
  V resk = fc * R::wgk[7];
  T resabs = std::abs(fc) * R::wgk[7];
  for (int j = 0; j < 3; ++j) {
    const int jtw = 2 * j + 1;
    const T absc = hlgth * R::xgk[jtw];
    const V f1 = eval(centr - absc);
    const V f2 = eval(centr + absc);
    fv1[jtw] = f1;
    fv2[jtw] = f2;
    resg += (f1 + f2) * R::wg[j];
    resk += (f1 + f2) * R::wgk[jtw];
    resabs += R::wgk[jtw] * (std::abs(f1) + std::abs(f2));
  }
  for (int j = 0; j < 4; ++j) {
    const int jtwm1 = 2 * j;
    const T absc = hlgth * R::xgk[jtwm1];
    const V f1 = eval(centr - absc);
    const V f2 = eval(centr + absc);
    fv1[jtwm1] = f1;
    fv2[jtwm1] = f2;
    resk += (f1 + f2) * R::wgk[jtwm1];
    resabs += R::wgk[jtwm1] * (std::abs(f1) + std::abs(f2));
  }
  const V reskh = resk * T(0.5);
  T resasc = R::wgk[7] * std::abs(fc - reskh);
  for (int j = 0; j < 7; ++j) {
    resasc += R::wgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
  }
  const V result = resk * hlgth;
  resabs *= dhlgth;
  resasc *= dhlgth;
  T abserr = std::abs((resk - resg) * hlgth);
  if (resasc != 0 && abserr != 0) {
    abserr = resasc * std::min(T(1), std::pow(T(200) * abserr / resasc, T(1.5)));
  }
  constexpr T epmach = std::numeric_limits<T>::epsilon();
  constexpr T uflow = std::numeric_limits<T>::min();
  bool at_floor = false;
  if (resabs > uflow / (T(50) * epmach)) {
    const T floor = epmach * T(50) * resabs;
    at_floor = floor >= abserr;
    abserr = std::max(floor, abserr);
  }
  return {a, b, result, abserr, resabs, at_floor};
}

}  // namespace detail

// Adaptive Gauss-Kronrod 7/15 quadrature on a finite interval. The rule
// never samples the endpoints, so integrable endpoint singularities are
// admissible. Panels with the largest error estimate are bisected first;
// ties break on the left endpoint so runs are bit-reproducible. Panels whose
// estimate is already at the roundoff floor are not split further.
template <std::floating_point T, typename V = T, typename F>
BasicQuadratureResult<T, V> integrate_finite(F&& f, T a, T b,
                                             const BasicTolerance<T>& tol) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw Error(ErrorCode::InvalidArgument,
                "integrate_finite requires finite a < b");
  }
  using P = detail::Panel<T, V>;
  auto worse = [](const P& l, const P& r) {
    if (l.error != r.error) return l.error < r.error;
    return l.a > r.a;
  };
  std::priority_queue<P, std::vector<P>, decltype(worse)> heap(worse);
  std::vector<P> frozen;

  BasicQuadratureResult<T, V> out;
  P first = detail::gk15<T, V>(f, a, b);
  out.evaluations = 15;
  V total = first.value;
  T total_err = first.error;
  heap.push(first);

  constexpr T eps = std::numeric_limits<T>::epsilon();
  const T min_width = (b - a) * eps * eps;
  while (true) {
    if (total_err <= tol.target(detail::magnitude(total))) break;
    if (heap.empty()) break;
    if (out.evaluations + 30 > tol.max_evals) break;
    P worst = heap.top();
    heap.pop();
    const T mid = worst.a + (worst.b - worst.a) / 2;
    const T scale = std::max(std::abs(worst.a), std::abs(worst.b));
    if (worst.at_floor || !(mid > worst.a && mid < worst.b) ||
        (worst.b - worst.a) <= std::max(T(64) * eps * scale, min_width)) {
      frozen.push_back(worst);
      continue;
    }
    P left = detail::gk15<T, V>(f, worst.a, mid);
    P right = detail::gk15<T, V>(f, mid, worst.b);
    out.evaluations += 30;
    total += (left.value + right.value) - worst.value;
    total_err += (left.error + right.error) - worst.error;
    heap.push(left);
    heap.push(right);
  }

  // Re-sum in interval order to remove running-sum drift.
  std::vector<P> panels = std::move(frozen);
  while (!heap.empty()) {
    panels.push_back(heap.top());
    heap.pop();
  }
  std::sort(panels.begin(), panels.end(),
            [](const P& l, const P& r) { return l.a < r.a; });
  V sum{};
  T err = 0;
  for (const P& p : panels) {
    sum += p.value;
    err += p.error;
  }
  out.value = sum;
  out.error_estimate = err;
  out.converged = err <= tol.target(detail::magnitude(sum));
  return out;
}

namespace detail {

template <std::floating_point T, typename F>
BasicQuadratureResult<T> semi_infinite_pass(F& f, const DecayHint<T>& decay,
                                            const BasicTolerance<T>& tol) {
  using Kind = typename DecayHint<T>::Kind;
  if (!(decay.parameter > 0) || !std::isfinite(decay.parameter)) {
    throw Error(ErrorCode::InvalidArgument, "decay parameter must be positive");
  }
  const BasicTolerance<T> half{tol.abs_tol / 2, tol.rel_tol / 2, tol.max_evals};

  BasicQuadratureResult<T> out;
  if (decay.kind == Kind::Algebraic) {
    const T p = decay.parameter;
    const T knee = decay.knee;
    if (!(p > 1)) {
      throw Error(ErrorCode::InsufficientDecay,
                  "algebraic decay must have power > 1 to be integrable");
    }
    auto head = integrate_finite<T>(f, T(0), knee, half);
    auto mapped = [&](T s) -> T {
      const T x = knee / (s * s);
      // Beyond 1e300 the remaining tail is far below any admissible tolerance.
      if (!std::isfinite(x) || x > T(1e300)) return T(0);
      return f(x) * (2 * knee / (s * s * s));
    };
    BasicTolerance<T> tail_tol = half;
    tail_tol.max_evals = std::max<std::int64_t>(tol.max_evals - head.evaluations, 30);
    auto tail = integrate_finite<T>(mapped, T(0), T(1), tail_tol);

    // The mapped integrand should behave like s^{2p-3}; growth beyond that
    // as s -> 0 means the declared power is too optimistic.
    const T s1 = T(1e-3), s2 = T(1e-6);
    const T r1 = std::abs(mapped(s1)) * std::pow(s1, 3 - 2 * p);
    const T r2 = std::abs(mapped(s2)) * std::pow(s2, 3 - 2 * p);
    out.hint_violation = r2 > T(10) * r1 + std::numeric_limits<T>::min();

    out.value = head.value + tail.value;
    out.error_estimate = head.error_estimate + tail.error_estimate;
    out.evaluations = head.evaluations + tail.evaluations + 2;
    out.converged = head.converged && tail.converged &&
                    out.error_estimate <= tol.target(out.value);
    return out;
  }

  const T rate = decay.parameter;
  const bool sqrt_env = decay.kind == Kind::ExpSqrt;
  auto log_env = [&](T x) { return sqrt_env ? -rate * std::sqrt(x) : -rate * x; };
  auto tail_env = [&](T x) {
    if (sqrt_env) {
      return (2 / rate) * (std::sqrt(x) + 1 / rate) * std::exp(-rate * std::sqrt(x));
    }
    return std::exp(-rate * x) / rate;
  };
  // Largest |f| / envelope over 8 samples of [lo, lo + 8 step).
  auto amplitude = [&](T lo, T step) {
    T amp = 0;
    for (int j = 0; j < 8; ++j) {
      const T s = lo + T(j) * step;
      const T v = std::abs(f(s));
      if (v > 0) amp = std::max(amp, std::exp(std::log(v) - log_env(s)));
    }
    out.evaluations += 8;
    return amp;
  };
  // Tail beyond X with the amplitude sampled on [X, 1.5 X].
  auto tail_bound = [&](T x) { return amplitude(x, x / 16) * tail_env(x); };
  // Tail beyond X as predicted from [X/2, X], which is already integrated.
  auto predicted_tail = [&](T x) { return amplitude(x / 2, x / 16) * tail_env(x); };

  T x_hi = sqrt_env ? std::max(T(1), (10 / rate) * (10 / rate))
                    : std::max(T(1), 10 / rate);
  auto head = integrate_finite<T>(f, T(0), x_hi, half);
  out.value = head.value;
  out.error_estimate = head.error_estimate;
  out.evaluations += head.evaluations;
  out.converged = head.converged;
  for (int doubling = 0;; ++doubling) {
    const T bound = tail_bound(x_hi);
    if (bound <= half.target(out.value)) {
      out.error_estimate += bound;
      break;
    }
    if (doubling >= 60 || out.evaluations >= tol.max_evals) {
      out.error_estimate += bound;
      out.converged = false;
      break;
    }
    BasicTolerance<T> panel_tol = half;
    panel_tol.max_evals = std::max<std::int64_t>(tol.max_evals - out.evaluations, 30);
    auto panel = integrate_finite<T>(f, x_hi, 2 * x_hi, panel_tol);
    if (std::abs(panel.value) > T(10) * predicted_tail(x_hi) + tol.abs_tol) {
      out.hint_violation = true;
    }
    out.value += panel.value;
    out.error_estimate += panel.error_estimate;
    out.evaluations += panel.evaluations;
    out.converged = out.converged && panel.converged;
    x_hi *= 2;
  }
  out.converged = out.converged && out.error_estimate <= tol.target(out.value);
  return out;
}

template <std::floating_point T, typename F>
BasicQuadratureResult<T> sine_zero_split_pass(F& f, T omega, const BasicTolerance<T>& tol,
                                              int max_panels) {
  const T step = std::numbers::pi_v<T> / omega;
  auto g = [&](T t) { return f(t) * std::sin(omega * t); };
  BasicQuadratureResult<T> out;
  BasicTolerance<T> panel_tol{tol.abs_tol / 8, tol.rel_tol / 4, tol.max_evals};
  int small = 0;
  T last = 0;
  for (int k = 0; k < max_panels; ++k) {
    auto panel = integrate_finite<T>(g, k * step, (k + 1) * step, panel_tol);
    out.value += panel.value;
    out.error_estimate += panel.error_estimate;
    out.evaluations += panel.evaluations;
    out.converged = out.converged && panel.converged;
    last = std::abs(panel.value);
    small = last < tol.target(out.value) / 4 ? small + 1 : 0;
    if (small >= 2) {
      out.error_estimate += last;
      out.converged = out.converged && out.error_estimate <= tol.target(out.value);
      return out;
    }
    if (out.evaluations >= tol.max_evals) break;
  }
  out.error_estimate += last;
  out.converged = false;
  return out;
}

template <std::floating_point T, typename G>
BasicQuadratureResult<T, std::complex<T>> contour_pass(G& g, T gamma,
                                                       const BasicTolerance<T>& tol, T t0) {
  using C = std::complex<T>;
  auto on_line = [&](T t) -> C { return g(C(gamma, t)); };
  BasicTolerance<T> piece{tol.abs_tol / 8, tol.rel_tol / 4, tol.max_evals};
  auto central = integrate_finite<T, C>(on_line, -t0, t0, piece);
  BasicQuadratureResult<T, C> out;
  C sum = central.value;
  out.error_estimate = central.error_estimate;
  out.evaluations = central.evaluations;
  out.converged = central.converged;

  T prev = std::numeric_limits<T>::infinity();
  int growth = 0;
  T t = t0;
  for (int shell = 0;; ++shell) {
    auto right = integrate_finite<T, C>(on_line, t, 2 * t, piece);
    auto left = integrate_finite<T, C>(on_line, -2 * t, -t, piece);
    const C contribution = right.value + left.value;
    sum += contribution;
    out.error_estimate += right.error_estimate + left.error_estimate;
    out.evaluations += right.evaluations + left.evaluations;
    out.converged = out.converged && right.converged && left.converged;
    const T size = std::abs(contribution);
    if (size < tol.abs_tol / 4) {
      out.error_estimate += size;
      break;
    }
    growth = size >= prev ? growth + 1 : 0;
    if (growth >= 2) {
      throw Error(ErrorCode::NonDecay,
                  "contour shell contributions stopped shrinking");
    }
    if (shell >= 24 || out.evaluations >= tol.max_evals) {
      out.error_estimate += size;
      out.converged = false;
      break;
    }
    prev = size;
    t *= 2;
  }
  const T inv2pi = 1 / (2 * std::numbers::pi_v<T>);
  out.value = sum * inv2pi;
  out.error_estimate *= inv2pi;
  out.converged = out.converged && out.error_estimate <= tol.target(std::abs(out.value));
  return out;
}

// A sum of pieces can cancel far below the size of each piece, so a relative
// tolerance met piecewise may miss the total. When that happens the pieces
// are recomputed against the absolute target implied by the first estimate.
template <std::floating_point T, typename Result, typename Run>
Result with_cancellation_retry(Run&& run, const BasicTolerance<T>& tol) {
  Result out = run(tol);
  for (int retry = 0; retry < 2 && !out.converged; ++retry) {
    const T target = tol.target(magnitude(out.value));
    const BasicTolerance<T> abs_only{std::max(target, BasicTolerance<T>::floor()),
                                     BasicTolerance<T>::floor(), tol.max_evals};
    if (!(abs_only.abs_tol < tol.abs_tol) && !(tol.rel_tol > abs_only.rel_tol)) break;
    Result again = run(abs_only);
    again.evaluations += out.evaluations;
    again.converged = again.converged &&
                      again.error_estimate <= tol.target(magnitude(again.value));
    again.hint_violation = again.hint_violation || out.hint_violation;
    out = again;
  }
  return out;
}

}  // namespace detail

// Integral over (0, inf) with the tail handled according to the declared
// decay envelope.
//
// Exponential / ExpSqrt: integrate (0, X], doubling X until the analytic tail
// of the envelope (amplitude sampled just beyond X) drops below half the
// target. Algebraic(p): integrate (0, knee] directly and map the tail with
// x = knee / s^2, which turns x^{-p} (times a power series in 1/x) into a
// bounded integrand on (0, 1] for p >= 3/2.
template <std::floating_point T, typename F>
BasicQuadratureResult<T> integrate_semi_infinite(F&& f, const DecayHint<T>& decay,
                                                 const BasicTolerance<T>& tol) {
  return detail::with_cancellation_retry<T, BasicQuadratureResult<T>>(
      [&](const BasicTolerance<T>& t) { return detail::semi_infinite_pass<T>(f, decay, t); },
      tol);
}

// Integral of f(t) sin(omega t) over (0, inf), split at the zeros t = k pi /
// omega. Panel contributions alternate in sign once the envelope is monotone,
// so the stopping rule is two consecutive panels below a quarter of the
// target, and the reported tail is the size of the last panel.
template <std::floating_point T, typename F>
BasicQuadratureResult<T> integrate_sine_zero_split(F&& f, T omega,
                                                   const BasicTolerance<T>& tol,
                                                   int max_panels = 20000) {
  if (!(omega > 0)) {
    throw Error(ErrorCode::InvalidArgument, "omega must be positive");
  }
  return detail::with_cancellation_retry<T, BasicQuadratureResult<T>>(
      [&](const BasicTolerance<T>& t) {
        return detail::sine_zero_split_pass<T>(f, omega, t, max_panels);
      },
      tol);
}

// (1/2pi) * integral over t of g(gamma + i t), i.e. the Mellin-Barnes value
// (1/2pi i) * integral over the vertical line Re s = gamma of g(s) ds.
// The line is covered by a central window [-T0, T0] and dyadic shells
// [T, 2T] on each side until a shell contributes below a quarter of abs_tol.
template <std::floating_point T, typename G>
BasicQuadratureResult<T, std::complex<T>> integrate_contour(G&& g, T gamma,
                                                            const BasicTolerance<T>& tol,
                                                            T t0 = 8) {
  using Result = BasicQuadratureResult<T, std::complex<T>>;
  return detail::with_cancellation_retry<T, Result>(
      [&](const BasicTolerance<T>& t) { return detail::contour_pass<T>(g, gamma, t, t0); },
      tol);
}

struct FixedCount {
  std::int64_t count = 0;
};

template <std::floating_point T>
struct TailBound {
  std::function<T(std::int64_t)> bound;  // bound on the tail after index n
  T tol = T(1e-12);
  std::int64_t max_terms = 10'000'000;
};

template <std::floating_point T>
using TruncationPolicy = std::variant<FixedCount, TailBound<T>>;

// Left-to-right partial sum of term(start), term(start+1), ...
template <std::floating_point T, typename Term>
BasicQuadratureResult<T> sum_series(Term&& term, std::int64_t start,
                                    const TruncationPolicy<T>& policy) {
  BasicQuadratureResult<T> out;
  auto take = [&](std::int64_t n) {
    const T v = term(n);
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::NonFiniteTerm,
                  "series term is not finite at index " + std::to_string(n));
    }
    out.value += v;
    ++out.evaluations;
    return v;
  };
  if (const auto* fixed = std::get_if<FixedCount>(&policy)) {
    if (fixed->count < 0) {
      throw Error(ErrorCode::InvalidArgument, "term count must be nonnegative");
    }
    T last = 0;
    for (std::int64_t n = start; n < start + fixed->count; ++n) last = take(n);
    out.error_estimate = std::abs(last);
    return out;
  }
  const auto& tb = std::get<TailBound<T>>(policy);
  for (std::int64_t n = start; n < start + tb.max_terms; ++n) {
    take(n);
    const T rest = std::abs(tb.bound(n));
    if (rest <= tb.tol) {
      out.error_estimate = rest;
      return out;
    }
  }
  out.error_estimate = std::abs(tb.bound(start + tb.max_terms - 1));
  out.converged = false;
  return out;
}

}  // namespace dixt
