#include "dixt/dixt.h"

#include <cmath>
#include <complex>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "dixt/identities.hpp"
#include "dixt/kernels.hpp"
#include "dixt/specfun.hpp"
#include "dixt/transforms.hpp"

struct dixt_sequence {
  dixt::CoefficientSequence seq;
};

struct dixt_function {
  dixt::FunctionSpec spec;
};

struct dixt_report_list {
  std::vector<dixt::IdentityReport> reports;
  std::vector<std::vector<std::pair<std::string, double>>> params;
  bool budget_exceeded = false;
};

namespace {

thread_local std::string last_error;

dixt_status fail(dixt_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

template <typename Body>
dixt_status guarded(Body&& body) {
  try {
    body();
    return DIXT_OK;
  } catch (const dixt::Error& e) {
    return fail(static_cast<dixt_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(DIXT_ERR_OUT_OF_MEMORY, "out of memory");
  } catch (const std::exception& e) {
    return fail(DIXT_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(DIXT_ERR_INTERNAL, "unknown exception");
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw dixt::Error(dixt::ErrorCode::InvalidArgument, what);
}

dixt::TransformKind to_kind(dixt_kind kind) {
  require(kind == DIXT_KIND_RE_I || kind == DIXT_KIND_RE_JK || kind == DIXT_KIND_IM_JK,
          "unknown transform kind");
  return static_cast<dixt::TransformKind>(kind);
}

dixt::Tolerance to_tol(const dixt_tolerance* tol, const dixt::Tolerance& fallback) {
  if (tol == nullptr) return fallback;
  return {tol->abs_tol, tol->rel_tol, tol->max_evals};
}

void store(const dixt::QuadratureResult& r, dixt_quad_result* out) {
  *out = {r.value, r.error_estimate, r.evaluations, r.converged ? 1 : 0,
          r.hint_violation ? 1 : 0};
}

void store(const dixt::Tolerance& t, dixt_tolerance* out) {
  if (out != nullptr) *out = {t.abs_tol, t.rel_tol, t.max_evals};
}

dixt::IdentityId to_identity(int id) {
  require(id >= 0 && id < dixt::kIdentityCount, "unknown identity id");
  return static_cast<dixt::IdentityId>(id);
}

dixt::IdentityParams to_params(const dixt_identity_params& p) {
  return {p.n, p.tau, p.u, p.x, p.t, p.N, p.gamma, p.constant};
}

dixt_identity_params from_params(const dixt::IdentityParams& p) {
  return {p.n, p.tau, p.u, p.x, p.t, p.N, p.gamma, p.constant};
}

dixt_report_list* make_list(std::vector<dixt::IdentityReport> reports, bool exceeded) {
  auto* list = new dixt_report_list;
  list->params.reserve(reports.size());
  for (const auto& r : reports) list->params.push_back(dixt::describe(r.id, r.params));
  list->reports = std::move(reports);
  list->budget_exceeded = exceeded;
  return list;
}

}  // namespace

extern "C" {

const char* dixt_last_error(void) { return last_error.c_str(); }

const char* dixt_status_name(dixt_status status) {
  switch (status) {
    case DIXT_OK: return "ok";
    case DIXT_ERR_OUT_OF_MEMORY: return "out-of-memory";
    case DIXT_ERR_INTERNAL: return "internal";
    default: break;
  }
  const int code = static_cast<int>(status);
  if (code >= 1 && code <= 12) return dixt::to_string(static_cast<dixt::ErrorCode>(code));
  return "unknown";
}

const char* dixt_version(void) { return "1.0.0"; }

dixt_status dixt_kind_parse(const char* name, dixt_kind* out) {
  return guarded([&] {
    require(name != nullptr && out != nullptr, "null argument");
    const std::string s(name);
    for (int k = 0; k < 3; ++k) {
      if (s == dixt::to_string(static_cast<dixt::TransformKind>(k))) {
        *out = static_cast<dixt_kind>(k);
        return;
      }
    }
    throw dixt::Error(dixt::ErrorCode::InvalidArgument,
                      "unknown kind '" + s + "' (expected re-i, re-jk or im-jk)");
  });
}

const char* dixt_kind_name(dixt_kind kind) {
  switch (kind) {
    case DIXT_KIND_RE_I: return "re-i";
    case DIXT_KIND_RE_JK: return "re-jk";
    case DIXT_KIND_IM_JK: return "im-jk";
  }
  return "unknown";
}

void dixt_default_analysis_tolerance(dixt_tolerance* out) {
  store(dixt::default_analysis_tolerance(), out);
}

void dixt_default_inversion_tolerance(dixt_tolerance* out) {
  store(dixt::default_inversion_tolerance(), out);
}

void dixt_default_kernel_tolerance(dixt_tolerance* out) {
  store(dixt::default_kernel_tolerance<double>(), out);
}

int dixt_invert_max(void) { return dixt::kInvertMax; }

dixt_status dixt_complex_gamma(double re, double im, double* out_re, double* out_im) {
  return guarded([&] {
    require(out_re != nullptr && out_im != nullptr, "null output");
    const auto g = dixt::complex_gamma(std::complex<double>(re, im));
    *out_re = g.real();
    *out_im = g.imag();
  });
}

dixt_status dixt_bessel_i_imag(double tau, double x, double* out_re, double* out_im) {
  return guarded([&] {
    require(out_re != nullptr && out_im != nullptr, "null output");
    const auto v = dixt::bessel_i_imag(tau, x);
    *out_re = v.real();
    *out_im = v.imag();
  });
}

dixt_status dixt_bessel_j_imag(double tau, double x, double* out_re, double* out_im) {
  return guarded([&] {
    require(out_re != nullptr && out_im != nullptr, "null output");
    const auto v = dixt::bessel_j_imag(tau, x);
    *out_re = v.real();
    *out_im = v.imag();
  });
}

dixt_status dixt_bessel_k_imag(double tau, double x, double* out, int* underflow) {
  return guarded([&] {
    require(out != nullptr, "null output");
    const auto k = dixt::bessel_k_imag(tau, x);
    *out = k.value;
    if (underflow != nullptr) *underflow = k.underflow ? 1 : 0;
  });
}

dixt_status dixt_exp_scaled_e1(double z, double* out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    *out = dixt::exp_scaled_e1(z);
  });
}

dixt_status dixt_forward_kernel(dixt_kind kind, int n, double x, double* out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    *out = dixt::forward_kernel(to_kind(kind), n, x);
  });
}

dixt_status dixt_inverse_kernel(dixt_kind kind, int n, double x, const dixt_tolerance* tol,
                                dixt_quad_result* out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    const auto t = to_tol(tol, dixt::default_kernel_tolerance<double>());
    store(dixt::inverse_kernel(to_kind(kind), n, x, t), out);
  });
}

dixt_status dixt_sequence_create(int start, const double* values, size_t count,
                                 dixt_sequence** out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    require(values != nullptr || count == 0, "null values");
    require(count > 0, "a sequence needs at least one value");
    require(start == 0 || start == 1, "sequence start must be 0 or 1");
    auto* s = new dixt_sequence;
    s->seq.start = start;
    s->seq.values.assign(values, values + count);
    for (double v : s->seq.values) {
      if (!std::isfinite(v)) {
        delete s;
        throw dixt::Error(dixt::ErrorCode::InvalidArgument, "sequence values must be finite");
      }
    }
    *out = s;
  });
}

void dixt_sequence_destroy(dixt_sequence* seq) { delete seq; }

int dixt_sequence_start(const dixt_sequence* seq) { return seq ? seq->seq.start : 0; }

int dixt_sequence_max_index(const dixt_sequence* seq) {
  return seq ? seq->seq.max_index() : -1;
}

double dixt_sequence_at(const dixt_sequence* seq, int n) { return seq ? seq->seq.at(n) : 0.0; }

dixt_status dixt_check_condition(dixt_kind kind, const dixt_sequence* seq,
                                 dixt_condition_report* out) {
  return guarded([&] {
    require(seq != nullptr && out != nullptr, "null argument");
    const auto r = dixt::check_condition(to_kind(kind), seq->seq);
    *out = {r.weighted_sum, r.l1_norm, r.relevant, r.holds ? 1 : 0};
  });
}

dixt_status dixt_function_psi(dixt_kind kind, const double* sin_coeffs, size_t sin_count,
                              const double* cos_coeffs, size_t cos_count, dixt_function** out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    require(sin_coeffs != nullptr || sin_count == 0, "null sine coefficients");
    require(cos_coeffs != nullptr || cos_count == 0, "null cosine coefficients");
    dixt::PsiGenerated p;
    p.kind = to_kind(kind);
    if (sin_count > 0) p.psi.sin_coeffs.assign(sin_coeffs, sin_coeffs + sin_count);
    if (cos_count > 0) p.psi.cos_coeffs.assign(cos_coeffs, cos_coeffs + cos_count);
    for (double v : p.psi.sin_coeffs) require(std::isfinite(v), "psi coefficients must be finite");
    for (double v : p.psi.cos_coeffs) require(std::isfinite(v), "psi coefficients must be finite");
    *out = new dixt_function{p};
  });
}

dixt_status dixt_function_synthesized(dixt_kind kind, const dixt_sequence* seq,
                                      dixt_function** out) {
  return guarded([&] {
    require(seq != nullptr && out != nullptr, "null argument");
    const auto k = to_kind(kind);
    seq->seq.validate(k);
    *out = new dixt_function{dixt::Synthesized{k, seq->seq}};
  });
}

dixt_status dixt_function_callable(dixt_callback f, void* user_data, dixt_decay decay,
                                   double parameter, double knee, dixt_function** out) {
  return guarded([&] {
    require(f != nullptr && out != nullptr, "null argument");
    require(std::isfinite(parameter) && parameter > 0, "decay parameter must be positive");
    dixt::DecayHint<double> hint;
    switch (decay) {
      case DIXT_DECAY_EXPONENTIAL: hint = dixt::DecayHint<double>::exponential(parameter); break;
      case DIXT_DECAY_EXP_SQRT: hint = dixt::DecayHint<double>::exp_sqrt(parameter); break;
      case DIXT_DECAY_ALGEBRAIC:
        require(std::isfinite(knee) && knee > 0, "algebraic knee must be positive");
        hint = dixt::DecayHint<double>::algebraic(parameter, knee);
        break;
      default: require(false, "unknown decay kind");
    }
    dixt::Callable c{[f, user_data](double x) { return f(x, user_data); }, hint};
    *out = new dixt_function{std::move(c)};
  });
}

void dixt_function_destroy(dixt_function* fn) { delete fn; }

dixt_status dixt_function_evaluate(const dixt_function* fn, double x, double* out) {
  return guarded([&] {
    require(fn != nullptr && out != nullptr, "null argument");
    *out = dixt::evaluate(fn->spec, x);
  });
}

dixt_status dixt_psi_function_value(const dixt_function* fn, double x, const dixt_tolerance* tol,
                                    dixt_quad_result* out) {
  return guarded([&] {
    require(fn != nullptr && out != nullptr, "null argument");
    const auto* p = std::get_if<dixt::PsiGenerated>(&fn->spec);
    require(p != nullptr, "function is not psi-generated");
    store(dixt::psi_function_value(*p, x, to_tol(tol, dixt::default_analysis_tolerance())), out);
  });
}

dixt_status dixt_inversion_constant(dixt_kind kind, double* out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    *out = dixt::inversion_constant(to_kind(kind));
  });
}

dixt_status dixt_synthesize(dixt_kind kind, const dixt_sequence* seq, double x, double* out) {
  return guarded([&] {
    require(seq != nullptr && out != nullptr, "null argument");
    *out = dixt::synthesize(to_kind(kind), seq->seq, x);
  });
}

dixt_status dixt_analyze(dixt_kind kind, const dixt_function* fn, int n,
                         const dixt_tolerance* tol, dixt_quad_result* out) {
  return guarded([&] {
    require(fn != nullptr && out != nullptr, "null argument");
    const auto t = to_tol(tol, dixt::default_analysis_tolerance());
    store(dixt::analyze(to_kind(kind), fn->spec, n, t), out);
  });
}

dixt_status dixt_invert_to_sequence(dixt_kind kind, const dixt_function* fn, int n,
                                    const dixt_tolerance* tol, dixt_quad_result* out) {
  return guarded([&] {
    require(fn != nullptr && out != nullptr, "null argument");
    const auto t = to_tol(tol, dixt::default_inversion_tolerance());
    store(dixt::invert_to_sequence(to_kind(kind), fn->spec, n, t), out);
  });
}

dixt_status dixt_invert_to_function(dixt_kind kind, const dixt_sequence* seq, double x,
                                    const dixt_tolerance* tol, dixt_quad_result* out) {
  return guarded([&] {
    require(seq != nullptr && out != nullptr, "null argument");
    const auto t = to_tol(tol, dixt::default_inversion_tolerance());
    store(dixt::invert_to_function(to_kind(kind), seq->seq, x, t), out);
  });
}

int dixt_identity_count(void) { return dixt::kIdentityCount; }

const char* dixt_identity_name(int id) {
  if (id < 0 || id >= dixt::kIdentityCount) return "unknown";
  // to_string returns views of string literals.
  return dixt::to_string(static_cast<dixt::IdentityId>(id)).data();
}

dixt_status dixt_identity_parse(const char* name, int* out) {
  return guarded([&] {
    require(name != nullptr && out != nullptr, "null argument");
    const auto id = dixt::parse_identity(name);
    if (!id) {
      throw dixt::Error(dixt::ErrorCode::InvalidArgument,
                        std::string("unknown identity '") + name + "'");
    }
    *out = static_cast<int>(*id);
  });
}

dixt_status dixt_identity_pass_tolerance(int id, double* out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    *out = dixt::pass_tolerance(to_identity(id));
  });
}

dixt_status dixt_verify(int id, const dixt_identity_params* params, const dixt_tolerance* tol,
                        dixt_report_list** out) {
  return guarded([&] {
    require(params != nullptr && out != nullptr, "null argument");
    const auto which = to_identity(id);
    const auto p = to_params(*params);
    auto report = tol ? dixt::verify(which, p, to_tol(tol, {})) : dixt::verify(which, p);
    *out = make_list({std::move(report)}, false);
  });
}

dixt_status dixt_run_suite(const int* ids, size_t count, int points, double budget_seconds,
                           int workers, dixt_report_list** out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    require(ids != nullptr || count == 0, "null id list");
    std::vector<dixt::IdentityId> filter;
    for (size_t i = 0; i < count; ++i) filter.push_back(to_identity(ids[i]));
    dixt::SuiteOptions options;
    options.points = points;
    options.budget_seconds = budget_seconds;
    options.workers = workers;
    auto result = dixt::run_suite(filter, options);
    *out = make_list(std::move(result.reports), result.budget_exceeded);
  });
}

void dixt_report_list_destroy(dixt_report_list* list) { delete list; }

size_t dixt_report_list_size(const dixt_report_list* list) {
  return list ? list->reports.size() : 0;
}

int dixt_report_list_budget_exceeded(const dixt_report_list* list) {
  return list && list->budget_exceeded ? 1 : 0;
}

dixt_status dixt_report_list_get(const dixt_report_list* list, size_t i,
                                 dixt_identity_report* out) {
  return guarded([&] {
    require(list != nullptr && out != nullptr, "null argument");
    if (i >= list->reports.size()) {
      throw dixt::Error(dixt::ErrorCode::IndexOutOfRange, "report index out of range");
    }
    const auto& r = list->reports[i];
    *out = {static_cast<int>(r.id), from_params(r.params), r.lhs, r.rhs,
            r.abs_residual, r.rel_residual, r.pass ? 1 : 0, r.tolerance_used,
            r.converged ? 1 : 0, r.imag_part};
  });
}

const char* dixt_report_list_message(const dixt_report_list* list, size_t i) {
  if (list == nullptr || i >= list->reports.size()) return "";
  return list->reports[i].message.c_str();
}

size_t dixt_report_list_param_count(const dixt_report_list* list, size_t i) {
  if (list == nullptr || i >= list->params.size()) return 0;
  return list->params[i].size();
}

dixt_status dixt_report_list_param(const dixt_report_list* list, size_t i, size_t j,
                                   const char** name, double* value) {
  return guarded([&] {
    require(list != nullptr && name != nullptr && value != nullptr, "null argument");
    if (i >= list->params.size() || j >= list->params[i].size()) {
      throw dixt::Error(dixt::ErrorCode::IndexOutOfRange, "parameter index out of range");
    }
    *name = list->params[i][j].first.c_str();
    *value = list->params[i][j].second;
  });
}

dixt_status dixt_fit_ineq17(dixt_ineq17_fit* out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    const auto f = dixt::fit_ineq17();
    *out = {f.constant, f.fit_max, f.check_max, f.swapped_constant, f.stable ? 1 : 0};
  });
}

}  // extern "C"
