#pragma once

// Closed-form integral identities of imaginary-order Bessel functions, each
// checked by evaluating its two sides along separate numerical paths.
//
//   I19    K_{i tau}(x/2) = e^{-x/2} int_0^inf e^{-t/2} (x+t)^{-1} Re I_{i tau}(t/2) dt
//   I20    int_0^inf e^{-x cosh u} K_{in}(x) dx = pi sin(nu) / (sinh u sinh(pi n))
//   I22    int_0^inf e^{-x(1+cosh u)} / (2x+t) dx = g(t cosh^2(u/2)) / 2
//   I23    int_0^inf g(t cosh^2(u/2)) e^{-t/2} Re I_{in}(t/2) dt
//            = 2 pi sin(nu) / (sinh u sinh(pi n))
//   I27    (1/cosh(pi tau/2)) int_0^inf sin(xt) Re J_{i tau}(w) K_{i tau}(w) dt = K_{i tau}(x)/4
//   I28    int_0^inf t/(t^2+cosh^2 u) Re J_{in}(w) K_{in}(w) dt
//            = pi sin(nu) / (8 sinh u sinh(pi n/2))
//   I29    int_0^inf 1/(t^2+cosh^2 u) Im J_{in}(w) K_{in}(w) dt
//            = pi sin(nu) / (4 sinh(2u) cosh(pi n/2))
//   D29    sum_{n=0}^N sin(nt) sin(nu) = (D_N(u-t) - D_N(u+t)) / 4,
//            D_N(w) = sin((2N+1)w/2) / sin(w/2)
//   MB18   (sqrt(pi)/cosh(pi tau)) e^{-x/2} Re I_{i tau}(x/2)
//            = (1/2 pi i) int_(gamma) G(1/2-s) G(s+i tau) G(s-i tau) / (G(s) G(1-s)) x^{-s} ds
//   MB25   Re J K / cosh(pi tau/2)
//            = (1/(16 pi^{3/2} i)) int_(gamma) G((1+s)/2) G((s+i tau)/2) G((s-i tau)/2) / G(1-s/2) x^{-s} ds
//   MB26   Im J K / sinh(pi tau/2)
//            = -(1/(16 pi^{3/2} i)) int_(gamma) G(s/2) G((s+i tau)/2) G((s-i tau)/2) / G((1-s)/2) x^{-s} ds
//   INEQ16 |I_{i tau}(x)| <= I_0(x) sqrt(sinh(pi tau)/(pi tau))
//   INEQ17 |K_{i tau}(x)| <= A x^{-1/4} / sqrt(sinh(pi tau)), A fitted
//
// with g(z) = e^z Gamma(0, z), w = 2 sqrt(2t) in I27-I29 and w = 2 sqrt(2x)
// in MB25/MB26.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dixt/quad.hpp"

namespace dixt {

enum class IdentityId {
  I19,
  I20,
  I22,
  I23,
  I27,
  I28,
  I29,
  D29,
  MB18,
  MB25,
  MB26,
  INEQ16,
  INEQ17,
};

inline constexpr int kIdentityCount = 13;

std::string_view to_string(IdentityId id) noexcept;
std::optional<IdentityId> parse_identity(std::string_view name);
std::vector<IdentityId> all_identities();

// Unused fields are ignored by the identity at hand.
struct IdentityParams {
  int n = 0;
  double tau = 0;
  double u = 0;
  double x = 0;
  double t = 0;
  int N = 0;
  double gamma = 0;     // contour abscissa for MB*; 0 selects the default
  double constant = 0;  // A for INEQ17; 0 selects the grid fit
};

// Names and values of the fields that identity actually uses, in a fixed order.
std::vector<std::pair<std::string, double>> describe(IdentityId id, const IdentityParams& p);

struct IdentityReport {
  IdentityId id = IdentityId::D29;
  IdentityParams params;
  double lhs = 0;
  double rhs = 0;
  double abs_residual = 0;
  double rel_residual = 0;
  bool pass = false;
  double tolerance_used = 0;
  bool converged = true;
  double imag_part = 0;  // imaginary part of a contour side (MB*)
  std::string message;   // empty unless something went wrong
};

// Pass threshold of each identity family.
double pass_tolerance(IdentityId id);

// Quadrature tolerance used when the caller does not supply one.
Tolerance default_identity_tolerance(IdentityId id);

// Inequalities report lhs = the bounded quantity and rhs = the bound; the
// residual is the amount of violation, max(0, lhs - rhs).
IdentityReport verify(IdentityId id, const IdentityParams& params);
IdentityReport verify(IdentityId id, const IdentityParams& params, const Tolerance& tol);

struct Ineq17Fit {
  double constant = 0;       // A from the fit half, with margin
  double fit_max = 0;        // largest ratio on the fit half
  double check_max = 0;      // largest ratio on the other half
  double swapped_constant = 0;  // A when the halves trade roles
  bool stable = false;       // the two constants agree within the margin
};

// Fit of A over the 20 x 20 sweep grid; the fit half is the checkerboard
// with i + j even.
Ineq17Fit fit_ineq17();

struct SuiteOptions {
  int points = 3;                // points per parameter axis, at least 3
  double budget_seconds = 300;   // abort with partial results past this
  int workers = 1;
};

struct SuiteResult {
  std::vector<IdentityReport> reports;
  bool budget_exceeded = false;
  int passed = 0;
  int failed = 0;
};

// Parameter grid of one family for a given number of points per axis.
std::vector<IdentityParams> default_grid(IdentityId id, int points);

// Reports come back in filter order, then grid order. An empty filter runs
// every family.
SuiteResult run_suite(const std::vector<IdentityId>& filter, const SuiteOptions& options = {});

}  // namespace dixt
