#ifndef DIXT_DIXT_H
#define DIXT_DIXT_H

/*
 * C interface to the dixt library: special functions of imaginary order,
 * the three discrete index transforms with their inversions, and the
 * identity verification suite.
 *
 * Every fallible call returns a dixt_status. On failure the message of the
 * most recent error on the calling thread is available from
 * dixt_last_error() until the next failing call on that thread.
 *
 * Handles (dixt_sequence, dixt_function, dixt_report_list) are opaque,
 * immutable after creation and safe to share between threads. Each
 * *_create / *_run call that succeeds hands ownership to the caller, who
 * releases it with the matching *_destroy. Destroy functions accept NULL.
 *
 * Tolerance arguments may be NULL to select the documented defaults.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(DIXT_BUILDING_LIBRARY)
#    define DIXT_API __declspec(dllexport)
#  else
#    define DIXT_API __declspec(dllimport)
#  endif
#elif defined(__GNUC__)
#  define DIXT_API __attribute__((visibility("default")))
#else
#  define DIXT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dixt_status {
  DIXT_OK = 0,
  DIXT_ERR_INVALID_ARGUMENT = 1,
  DIXT_ERR_POLE = 2,
  DIXT_ERR_OVERFLOW = 3,
  DIXT_ERR_ORDER_TOO_LARGE = 4,
  DIXT_ERR_ACCURACY_LOSS = 5,
  DIXT_ERR_BUDGET_EXHAUSTED = 6,
  DIXT_ERR_NON_FINITE_INTEGRAND = 7,
  DIXT_ERR_INDEX_OUT_OF_RANGE = 8,
  DIXT_ERR_INSUFFICIENT_DECAY = 9,
  DIXT_ERR_PRECISION_LOSS = 10,
  DIXT_ERR_NON_DECAY = 11,
  DIXT_ERR_NON_FINITE_TERM = 12,
  DIXT_ERR_OUT_OF_MEMORY = 13,
  DIXT_ERR_INTERNAL = 99
} dixt_status;

typedef enum dixt_kind {
  DIXT_KIND_RE_I = 0,  /* e^{-x/2} Re I_{in}(x/2) */
  DIXT_KIND_RE_JK = 1, /* Re J_{in} K_{in} / cosh(pi n/2) at 2 sqrt(2x) */
  DIXT_KIND_IM_JK = 2  /* Im J_{in} K_{in} / sinh(pi n/2) at 2 sqrt(2x) */
} dixt_kind;

typedef enum dixt_decay {
  DIXT_DECAY_EXPONENTIAL = 0, /* e^{-r x} */
  DIXT_DECAY_EXP_SQRT = 1,    /* e^{-r sqrt x} */
  DIXT_DECAY_ALGEBRAIC = 2    /* x^{-p} beyond a knee */
} dixt_decay;

typedef struct dixt_tolerance {
  double abs_tol;
  double rel_tol;
  int64_t max_evals;
} dixt_tolerance;

typedef struct dixt_quad_result {
  double value;
  double error_estimate;
  int64_t evaluations;
  int converged;
  int hint_violation;
} dixt_quad_result;

typedef struct dixt_condition_report {
  double weighted_sum; /* sum |a_n| e^{pi n/2} / sqrt(n) */
  double l1_norm;      /* sum |a_n| */
  double relevant;     /* the sum constrained for the given kind */
  int holds;
} dixt_condition_report;

/* Unused fields are ignored by the identity at hand; zero gamma or constant
 * selects the default. */
typedef struct dixt_identity_params {
  int n;
  double tau;
  double u;
  double x;
  double t;
  int N;
  double gamma;
  double constant;
} dixt_identity_params;

typedef struct dixt_identity_report {
  int id;
  dixt_identity_params params;
  double lhs;
  double rhs;
  double abs_residual;
  double rel_residual;
  int pass;
  double tolerance_used;
  int converged;
  double imag_part;
} dixt_identity_report;

typedef struct dixt_ineq17_fit {
  double constant;
  double fit_max;
  double check_max;
  double swapped_constant;
  int stable;
} dixt_ineq17_fit;

typedef struct dixt_sequence dixt_sequence;
typedef struct dixt_function dixt_function;
typedef struct dixt_report_list dixt_report_list;

typedef double (*dixt_callback)(double x, void* user_data);

/* ---- errors and metadata ---------------------------------------------- */

DIXT_API const char* dixt_last_error(void);
DIXT_API const char* dixt_status_name(dixt_status status);
DIXT_API const char* dixt_version(void);

DIXT_API dixt_status dixt_kind_parse(const char* name, dixt_kind* out);
DIXT_API const char* dixt_kind_name(dixt_kind kind);

DIXT_API void dixt_default_analysis_tolerance(dixt_tolerance* out);
DIXT_API void dixt_default_inversion_tolerance(dixt_tolerance* out);
DIXT_API void dixt_default_kernel_tolerance(dixt_tolerance* out);
DIXT_API int dixt_invert_max(void);

/* ---- special functions ------------------------------------------------- */

DIXT_API dixt_status dixt_complex_gamma(double re, double im, double* out_re, double* out_im);
DIXT_API dixt_status dixt_bessel_i_imag(double tau, double x, double* out_re, double* out_im);
DIXT_API dixt_status dixt_bessel_j_imag(double tau, double x, double* out_re, double* out_im);
/* *underflow is set when the value flushed to zero; it may be NULL. */
DIXT_API dixt_status dixt_bessel_k_imag(double tau, double x, double* out, int* underflow);
DIXT_API dixt_status dixt_exp_scaled_e1(double z, double* out);

/* ---- kernels ------------------------------------------------------------ */

DIXT_API dixt_status dixt_forward_kernel(dixt_kind kind, int n, double x, double* out);
DIXT_API dixt_status dixt_inverse_kernel(dixt_kind kind, int n, double x,
                                         const dixt_tolerance* tol, dixt_quad_result* out);

/* ---- sequences ---------------------------------------------------------- */

DIXT_API dixt_status dixt_sequence_create(int start, const double* values, size_t count,
                                          dixt_sequence** out);
DIXT_API void dixt_sequence_destroy(dixt_sequence* seq);
DIXT_API int dixt_sequence_start(const dixt_sequence* seq);
DIXT_API int dixt_sequence_max_index(const dixt_sequence* seq);
/* Zero outside the stored range. */
DIXT_API double dixt_sequence_at(const dixt_sequence* seq, int n);
DIXT_API dixt_status dixt_check_condition(dixt_kind kind, const dixt_sequence* seq,
                                          dixt_condition_report* out);

/* ---- functions ---------------------------------------------------------- */

/* psi(u) = c_0 + sum_m c_m cos(mu) + sum_m b_m sin(mu); sin_coeffs holds
 * b_1..b_M and cos_coeffs holds c_0..c_M. */
DIXT_API dixt_status dixt_function_psi(dixt_kind kind, const double* sin_coeffs, size_t sin_count,
                                       const double* cos_coeffs, size_t cos_count,
                                       dixt_function** out);
DIXT_API dixt_status dixt_function_synthesized(dixt_kind kind, const dixt_sequence* seq,
                                               dixt_function** out);
/* The callback must stay valid, and be safe to call concurrently, for the
 * lifetime of the handle. knee is only read for algebraic decay. */
DIXT_API dixt_status dixt_function_callable(dixt_callback f, void* user_data, dixt_decay decay,
                                            double parameter, double knee, dixt_function** out);
DIXT_API void dixt_function_destroy(dixt_function* fn);
DIXT_API dixt_status dixt_function_evaluate(const dixt_function* fn, double x, double* out);
/* Representation integral of a psi function; other variants are rejected. */
DIXT_API dixt_status dixt_psi_function_value(const dixt_function* fn, double x,
                                             const dixt_tolerance* tol, dixt_quad_result* out);

/* ---- transforms --------------------------------------------------------- */

DIXT_API dixt_status dixt_inversion_constant(dixt_kind kind, double* out);
DIXT_API dixt_status dixt_synthesize(dixt_kind kind, const dixt_sequence* seq, double x,
                                     double* out);
DIXT_API dixt_status dixt_analyze(dixt_kind kind, const dixt_function* fn, int n,
                                  const dixt_tolerance* tol, dixt_quad_result* out);
DIXT_API dixt_status dixt_invert_to_sequence(dixt_kind kind, const dixt_function* fn, int n,
                                             const dixt_tolerance* tol, dixt_quad_result* out);
DIXT_API dixt_status dixt_invert_to_function(dixt_kind kind, const dixt_sequence* seq, double x,
                                             const dixt_tolerance* tol, dixt_quad_result* out);

/* ---- identities --------------------------------------------------------- */

DIXT_API int dixt_identity_count(void);
DIXT_API const char* dixt_identity_name(int id);
/* Case-insensitive. */
DIXT_API dixt_status dixt_identity_parse(const char* name, int* out);
DIXT_API dixt_status dixt_identity_pass_tolerance(int id, double* out);

DIXT_API dixt_status dixt_verify(int id, const dixt_identity_params* params,
                                 const dixt_tolerance* tol, dixt_report_list** out);
/* ids may be NULL with count 0 to run every family. points >= 3. */
DIXT_API dixt_status dixt_run_suite(const int* ids, size_t count, int points,
                                    double budget_seconds, int workers,
                                    dixt_report_list** out);
DIXT_API void dixt_report_list_destroy(dixt_report_list* list);
DIXT_API size_t dixt_report_list_size(const dixt_report_list* list);
DIXT_API int dixt_report_list_budget_exceeded(const dixt_report_list* list);
DIXT_API dixt_status dixt_report_list_get(const dixt_report_list* list, size_t i,
                                          dixt_identity_report* out);
/* Empty string unless the evaluation went wrong; owned by the list. */
DIXT_API const char* dixt_report_list_message(const dixt_report_list* list, size_t i);
/* Parameters the identity actually uses, in a fixed order. */
DIXT_API size_t dixt_report_list_param_count(const dixt_report_list* list, size_t i);
DIXT_API dixt_status dixt_report_list_param(const dixt_report_list* list, size_t i, size_t j,
                                            const char** name, double* value);

DIXT_API dixt_status dixt_fit_ineq17(dixt_ineq17_fit* out);

#ifdef __cplusplus
}
#endif

#endif /* DIXT_DIXT_H */
