#include "dixt/identities.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <complex>
#include <numbers>
#include <thread>

#include "dixt/kernels.hpp"
#include "dixt/specfun.hpp"

namespace dixt {
namespace {

// Quadrature sides run in extended precision: the Re I integrands reach
// 1/|Gamma(1 + i tau)| ~ 4e4 while the integrals can be ~1e-7.
using R = long double;
using RTol = BasicTolerance<R>;
using RHint = DecayHint<R>;
using C = std::complex<R>;
constexpr double kPi = std::numbers::pi;
constexpr R kPiR = std::numbers::pi_v<R>;
const R kJkRate = 2 * std::numbers::sqrt2_v<R>;

struct Sides {
  R lhs = 0;
  R rhs = 0;
  bool converged = true;
  R imag = 0;
};

RTol widen(const Tolerance& t) { return {R(t.abs_tol), R(t.rel_tol), t.max_evals}; }

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, what);
}

void check_n(int n) { require(n >= 1 && n <= 8, "n must lie in [1, 8]"); }
void check_tau(double tau) { require(tau > 0 && tau <= 8, "tau must lie in (0, 8]"); }
void check_u(double u) {
  require(std::abs(u) >= 0.25 && std::abs(u) <= 3, "|u| must lie in [0.25, 3]");
}
void check_x(double x) { require(x >= 0.25 && x <= 8, "x must lie in [0.25, 8]"); }
void check_t(double t) { require(t >= 0.25 && t <= 8, "t must lie in [0.25, 8]"); }

C lg(C z) { return complex_log_gamma(z); }

Sides i19(const IdentityParams& p, const Tolerance& tol_in) {
  check_tau(p.tau);
  check_x(p.x);
  const R tau = p.tau, x = p.x;
  Sides s;
  s.lhs = bessel_k_imag(tau, x / 2).value;
  auto f = [&](R t) { return bessel_i_imag_scaled(tau, t / 2).real() / (x + t); };
  auto r = integrate_semi_infinite<R>(f, RHint::algebraic(R(1.5)), widen(tol_in));
  s.rhs = std::exp(-x / 2) * r.value;
  s.converged = r.converged;
  return s;
}

Sides i20(const IdentityParams& p, const Tolerance& tol_in) {
  check_n(p.n);
  check_u(p.u);
  const R n = p.n, u = p.u, ch = std::cosh(u);
  auto f = [&](R x) { return std::exp(-x * ch) * bessel_k_imag(n, x).value; };
  auto r = integrate_semi_infinite<R>(f, RHint::exponential(1 + ch), widen(tol_in));
  Sides s;
  s.lhs = r.value;
  s.converged = r.converged;
  s.rhs = kPiR * std::sin(n * u) / (std::sinh(u) * std::sinh(kPiR * n));
  return s;
}

Sides i22(const IdentityParams& p, const Tolerance& tol_in) {
  check_t(p.t);
  check_u(p.u);
  const R t = p.t, u = p.u, rate = 1 + std::cosh(u);
  auto f = [&](R x) { return std::exp(-x * rate) / (2 * x + t); };
  auto r = integrate_semi_infinite<R>(f, RHint::exponential(rate), widen(tol_in));
  const R c = std::cosh(u / 2);
  Sides s;
  s.lhs = r.value;
  s.converged = r.converged;
  s.rhs = exp_scaled_e1(t * c * c) / 2;
  return s;
}

Sides i23(const IdentityParams& p, const Tolerance& tol_in) {
  check_n(p.n);
  check_u(p.u);
  const R n = p.n, u = p.u;
  const R c2 = std::cosh(u / 2) * std::cosh(u / 2);
  auto f = [&](R t) { return exp_scaled_e1(t * c2) * bessel_i_imag_scaled(n, t / 2).real(); };
  auto r = integrate_semi_infinite<R>(f, RHint::algebraic(R(1.5)), widen(tol_in));
  Sides s;
  s.lhs = r.value;
  s.converged = r.converged;
  s.rhs = 2 * kPiR * std::sin(n * u) / (std::sinh(u) * std::sinh(kPiR * n));
  return s;
}

Sides i27(const IdentityParams& p, const Tolerance& tol_in) {
  check_tau(p.tau);
  check_x(p.x);
  const R tau = p.tau, x = p.x;
  auto f = [&](R t) { return detail::jk_product(tau, t, false); };
  auto r = integrate_sine_zero_split<R>(f, x, widen(tol_in));
  Sides s;
  s.lhs = r.value;
  s.converged = r.converged;
  s.rhs = bessel_k_imag(tau, x).value / 4;
  return s;
}

Sides i28(const IdentityParams& p, const Tolerance& tol_in) {
  check_n(p.n);
  check_u(p.u);
  const R n = p.n, u = p.u, c = std::cosh(u);
  const R unscale = std::cosh(kPiR * n / 2);
  auto f = [&](R t) { return unscale * t / (t * t + c * c) * detail::jk_product(n, t, false); };
  auto r = integrate_semi_infinite<R>(f, RHint::exp_sqrt(kJkRate), widen(tol_in));
  Sides s;
  s.lhs = r.value;
  s.converged = r.converged;
  s.rhs = kPiR * std::sin(n * u) / (8 * std::sinh(u) * std::sinh(kPiR * n / 2));
  return s;
}

Sides i29(const IdentityParams& p, const Tolerance& tol_in) {
  check_n(p.n);
  check_u(p.u);
  const R n = p.n, u = p.u, c = std::cosh(u);
  const R unscale = std::sinh(kPiR * n / 2);
  auto f = [&](R t) { return unscale / (t * t + c * c) * detail::jk_product(n, t, true); };
  auto r = integrate_semi_infinite<R>(f, RHint::exp_sqrt(kJkRate), widen(tol_in));
  Sides s;
  s.lhs = r.value;
  s.converged = r.converged;
  s.rhs = kPiR * std::sin(n * u) / (4 * std::sinh(2 * u) * std::cosh(kPiR * n / 2));
  return s;
}

// sin((2N+1)w/2) / sin(w/2), with its limit 2N+1 near multiples of 2 pi.
double dirichlet(int N, double w) {
  if (std::abs(std::remainder(w, 2 * kPi)) < 1e-8) return 2.0 * N + 1;
  return std::sin((2.0 * N + 1) * w / 2) / std::sin(w / 2);
}

Sides d29(const IdentityParams& p) {
  require(p.N >= 0 && p.N <= 1'000'000, "N must lie in [0, 1e6]");
  require(std::isfinite(p.t) && std::isfinite(p.u), "t and u must be finite");
  auto term = [&](std::int64_t n) { return std::sin(n * p.t) * std::sin(n * p.u); };
  Sides s;
  s.lhs = sum_series<double>(term, 0, FixedCount{p.N + 1}).value;
  s.rhs = (dirichlet(p.N, p.u - p.t) - dirichlet(p.N, p.u + p.t)) / 4;
  return s;
}

Sides mb18(const IdentityParams& p, const Tolerance& tol_in) {
  check_tau(p.tau);
  check_x(p.x);
  const R gamma = p.gamma == 0 ? 0.25 : p.gamma;
  require(gamma > 0 && gamma < R(0.5), "MB18 needs 0 < gamma < 1/2");
  const R tau = p.tau, x = p.x, lx = std::log(x);
  const C it(0, tau);
  const C half(0.5), one(1);
  auto g = [&](C s) {
    return std::exp(lg(half - s) + lg(s + it) + lg(s - it) - lg(s) - lg(one - s) - s * lx);
  };
  auto r = integrate_contour<R>(g, gamma, widen(tol_in));
  Sides s;
  s.lhs = std::sqrt(kPiR) / std::cosh(kPiR * tau) * bessel_i_imag_scaled(tau, x / 2).real();
  s.rhs = r.value.real();
  s.imag = r.value.imag();
  s.converged = r.converged;
  return s;
}

Sides mb_jk(const IdentityParams& p, const Tolerance& tol_in, bool imaginary) {
  check_tau(p.tau);
  check_x(p.x);
  const R gamma = p.gamma == 0 ? 0.5 : p.gamma;
  require(gamma > 0 && gamma < 1, "MB25/MB26 need 0 < gamma < 1");
  const R tau = p.tau, x = p.x, lx = std::log(x);
  const C it(0, tau);
  const C one(1), two(2);
  auto g = [&](C s) {
    const C common = lg((s + it) / two) + lg((s - it) / two) - s * lx;
    if (imaginary) return std::exp(common + lg(s / two) - lg((one - s) / two));
    return std::exp(common + lg((one + s) / two) - lg(one - s / two));
  };
  auto r = integrate_contour<R>(g, gamma, widen(tol_in));
  const R norm = (imaginary ? -1 : 1) / (8 * std::sqrt(kPiR));
  Sides s;
  s.lhs = detail::jk_product(tau, x, imaginary);
  s.rhs = norm * r.value.real();
  s.imag = norm * r.value.imag();
  s.converged = r.converged;
  return s;
}

void check_sweep_point(const IdentityParams& p) {
  require(p.tau > 0 && p.tau <= kTauMax, "tau must lie in (0, TAU_MAX]");
  require(p.x > 0 && p.x <= kXMax, "x must lie in (0, X_MAX]");
}

Sides ineq16(const IdentityParams& p) {
  check_sweep_point(p);
  Sides s;
  s.lhs = std::abs(bessel_i_imag(p.tau, p.x));
  s.rhs = bessel_i_imag(0.0, p.x).real() *
          std::sqrt(std::sinh(kPi * p.tau) / (kPi * p.tau));
  return s;
}

double ineq17_ratio(double tau, double x) {
  return std::abs(bessel_k_imag(tau, x).value) * std::pow(x, 0.25) *
         std::sqrt(std::sinh(kPi * tau));
}

Sides ineq17(const IdentityParams& p) {
  check_sweep_point(p);
  const double a = p.constant > 0 ? p.constant : fit_ineq17().constant;
  Sides s;
  s.lhs = std::abs(bessel_k_imag(p.tau, p.x).value);
  s.rhs = a * std::pow(p.x, -0.25) / std::sqrt(std::sinh(kPi * p.tau));
  return s;
}

bool is_inequality(IdentityId id) {
  return id == IdentityId::INEQ16 || id == IdentityId::INEQ17;
}

std::vector<double> linspace(double lo, double hi, int points) {
  std::vector<double> v;
  for (int i = 0; i < points; ++i) v.push_back(lo + (hi - lo) * i / (points - 1));
  return v;
}

std::vector<int> index_grid(int lo, int hi, int points) {
  std::vector<int> v;
  for (double d : linspace(lo, hi, points)) {
    const int n = static_cast<int>(std::lround(d));
    if (v.empty() || v.back() != n) v.push_back(n);
  }
  return v;
}

// Sweep grid of the inequality families: tau = i/2, x = j for i, j in 1..20.
constexpr int kSweep = 20;

}  // namespace

std::string_view to_string(IdentityId id) noexcept {
  switch (id) {
    case IdentityId::I19: return "I19";
    case IdentityId::I20: return "I20";
    case IdentityId::I22: return "I22";
    case IdentityId::I23: return "I23";
    case IdentityId::I27: return "I27";
    case IdentityId::I28: return "I28";
    case IdentityId::I29: return "I29";
    case IdentityId::D29: return "D29";
    case IdentityId::MB18: return "MB18";
    case IdentityId::MB25: return "MB25";
    case IdentityId::MB26: return "MB26";
    case IdentityId::INEQ16: return "INEQ16";
    case IdentityId::INEQ17: return "INEQ17";
  }
  return "unknown";
}

std::optional<IdentityId> parse_identity(std::string_view name) {
  for (IdentityId id : all_identities()) {
    const std::string_view tag = to_string(id);
    if (tag.size() != name.size()) continue;
    bool same = true;
    for (std::size_t i = 0; i < tag.size(); ++i) {
      const char c = name[i];
      const char lower = (c >= 'A' && c <= 'Z') ? char(c - 'A' + 'a') : c;
      const char tl = (tag[i] >= 'A' && tag[i] <= 'Z') ? char(tag[i] - 'A' + 'a') : tag[i];
      if (lower != tl) {
        same = false;
        break;
      }
    }
    if (same) return id;
  }
  return std::nullopt;
}

std::vector<IdentityId> all_identities() {
  std::vector<IdentityId> ids;
  for (int i = 0; i < kIdentityCount; ++i) ids.push_back(static_cast<IdentityId>(i));
  return ids;
}

std::vector<std::pair<std::string, double>> describe(IdentityId id, const IdentityParams& p) {
  switch (id) {
    case IdentityId::I19:
    case IdentityId::I27:
    case IdentityId::INEQ16:
      return {{"tau", p.tau}, {"x", p.x}};
    case IdentityId::INEQ17:
      return {{"tau", p.tau}, {"x", p.x}, {"A", p.constant}};
    case IdentityId::I20:
    case IdentityId::I23:
    case IdentityId::I28:
    case IdentityId::I29:
      return {{"n", double(p.n)}, {"u", p.u}};
    case IdentityId::I22:
      return {{"t", p.t}, {"u", p.u}};
    case IdentityId::D29:
      return {{"N", double(p.N)}, {"t", p.t}, {"u", p.u}};
    case IdentityId::MB18:
      return {{"tau", p.tau}, {"x", p.x}, {"gamma", p.gamma == 0 ? 0.25 : p.gamma}};
    case IdentityId::MB25:
    case IdentityId::MB26:
      return {{"tau", p.tau}, {"x", p.x}, {"gamma", p.gamma == 0 ? 0.5 : p.gamma}};
  }
  return {};
}

double pass_tolerance(IdentityId id) {
  switch (id) {
    case IdentityId::I20:
    case IdentityId::I22:
    case IdentityId::D29:
    case IdentityId::INEQ16:
    case IdentityId::INEQ17:
      return 1e-9;
    case IdentityId::I27:
    case IdentityId::I28:
    case IdentityId::I29:
      return 1e-6;
    case IdentityId::I19:
    case IdentityId::I23:
    case IdentityId::MB18:
    case IdentityId::MB25:
    case IdentityId::MB26:
      return 1e-5;
  }
  return 0;
}

Tolerance default_identity_tolerance(IdentityId id) {
  const double q = pass_tolerance(id) / 100;
  return {q, q, 2'000'000};
}

Ineq17Fit fit_ineq17() {
  static const Ineq17Fit fit = [] {
    constexpr double margin = 1.1;
    double half[2] = {0, 0};
    for (int i = 1; i <= kSweep; ++i) {
      for (int j = 1; j <= kSweep; ++j) {
        double& m = half[(i + j) % 2];
        m = std::max(m, ineq17_ratio(0.5 * i, double(j)));
      }
    }
    Ineq17Fit f;
    f.fit_max = half[0];
    f.check_max = half[1];
    f.constant = margin * half[0];
    f.swapped_constant = margin * half[1];
    f.stable = f.check_max <= f.constant && f.fit_max <= f.swapped_constant;
    return f;
  }();
  return fit;
}

IdentityReport verify(IdentityId id, const IdentityParams& params) {
  return verify(id, params, default_identity_tolerance(id));
}

IdentityReport verify(IdentityId id, const IdentityParams& params, const Tolerance& tol) {
  tol.validate();
  IdentityReport rep;
  rep.id = id;
  rep.params = params;
  rep.tolerance_used = pass_tolerance(id);
  if (id == IdentityId::INEQ17 && !(rep.params.constant > 0)) {
    rep.params.constant = fit_ineq17().constant;
  }
  Sides s;
  try {
    switch (id) {
      case IdentityId::I19: s = i19(params, tol); break;
      case IdentityId::I20: s = i20(params, tol); break;
      case IdentityId::I22: s = i22(params, tol); break;
      case IdentityId::I23: s = i23(params, tol); break;
      case IdentityId::I27: s = i27(params, tol); break;
      case IdentityId::I28: s = i28(params, tol); break;
      case IdentityId::I29: s = i29(params, tol); break;
      case IdentityId::D29: s = d29(params); break;
      case IdentityId::MB18: s = mb18(params, tol); break;
      case IdentityId::MB25: s = mb_jk(params, tol, false); break;
      case IdentityId::MB26: s = mb_jk(params, tol, true); break;
      case IdentityId::INEQ16: s = ineq16(params); break;
      case IdentityId::INEQ17: s = ineq17(rep.params); break;
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidArgument) throw;
    rep.converged = false;
    rep.pass = false;
    rep.message = std::string(to_string(e.code())) + ": " + e.what();
    rep.lhs = rep.rhs = std::numeric_limits<double>::quiet_NaN();
    rep.abs_residual = rep.rel_residual = std::numeric_limits<double>::infinity();
    return rep;
  }
  rep.lhs = static_cast<double>(s.lhs);
  rep.rhs = static_cast<double>(s.rhs);
  rep.converged = s.converged;
  const R gap = s.lhs - s.rhs;
  const double diff = static_cast<double>(is_inequality(id) ? std::max(R(0), gap) : std::abs(gap));
  rep.abs_residual = diff;
  const double scale = rep.rhs != 0 ? std::abs(rep.rhs) : std::abs(rep.lhs);
  rep.rel_residual = diff == 0 ? 0 : (scale > 0 ? diff / scale : std::numeric_limits<double>::infinity());
  rep.pass = s.converged && (rep.abs_residual <= rep.tolerance_used ||
                             rep.rel_residual <= rep.tolerance_used);
  if (!s.converged) rep.message = "quadrature did not reach its tolerance";
  rep.imag_part = static_cast<double>(s.imag);
  if (std::abs(rep.imag_part) > 1e-10) {
    if (!rep.message.empty()) rep.message += "; ";
    rep.message += "contour imaginary part " + std::to_string(rep.imag_part);
  }
  return rep;
}

std::vector<IdentityParams> default_grid(IdentityId id, int points) {
  require(points >= 3 && points <= 50, "points per axis must lie in [3, 50]");
  std::vector<IdentityParams> grid;
  const auto taus = linspace(0.5, 8, points);
  const auto xs = linspace(0.25, 8, points);
  const auto us = linspace(0.25, 3, points);
  const auto ns = index_grid(1, 8, points);
  switch (id) {
    case IdentityId::I19:
    case IdentityId::I27:
    case IdentityId::MB18:
    case IdentityId::MB25:
    case IdentityId::MB26:
      for (double tau : taus)
        for (double x : xs) grid.push_back({.tau = tau, .x = x});
      break;
    case IdentityId::I20:
    case IdentityId::I23:
    case IdentityId::I28:
    case IdentityId::I29:
      for (int n : ns)
        for (double u : us) grid.push_back({.n = n, .u = u});
      break;
    case IdentityId::I22:
      for (double t : linspace(0.25, 8, points))
        for (double u : us) grid.push_back({.u = u, .t = t});
      break;
    case IdentityId::D29: {
      std::vector<int> Ns;
      for (double e : linspace(0, std::log(20.0), points)) {
        const int N = static_cast<int>(std::lround(std::exp(e)));
        if (Ns.empty() || Ns.back() != N) Ns.push_back(N);
      }
      for (int N : Ns)
        for (double t : us)
          for (double u : us) grid.push_back({.u = u, .t = t, .N = N});
      break;
    }
    case IdentityId::INEQ16:
    case IdentityId::INEQ17:
      for (int i = 1; i <= kSweep; ++i)
        for (int j = 1; j <= kSweep; ++j) grid.push_back({.tau = 0.5 * i, .x = double(j)});
      break;
  }
  return grid;
}

SuiteResult run_suite(const std::vector<IdentityId>& filter, const SuiteOptions& options) {
  require(options.workers >= 1 && options.workers <= 256, "workers must lie in [1, 256]");
  require(options.budget_seconds > 0, "budget must be positive");
  const std::vector<IdentityId> ids = filter.empty() ? all_identities() : filter;
  std::vector<std::pair<IdentityId, IdentityParams>> tasks;
  for (IdentityId id : ids) {
    for (const auto& p : default_grid(id, options.points)) tasks.emplace_back(id, p);
  }

  std::vector<std::optional<IdentityReport>> slots(tasks.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> over{false};
  const auto start = std::chrono::steady_clock::now();
  auto work = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
      if (elapsed.count() > options.budget_seconds) {
        over = true;
        return;
      }
      slots[i] = verify(tasks[i].first, tasks[i].second);
    }
  };
  if (options.workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < options.workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  SuiteResult result;
  result.budget_exceeded = over;
  for (auto& slot : slots) {
    if (!slot) continue;
    (slot->pass ? result.passed : result.failed) += 1;
    result.reports.push_back(std::move(*slot));
  }
  return result;
}

}  // namespace dixt
