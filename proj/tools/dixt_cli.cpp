// dixt command-line tool. Talks to the library only through dixt.h.
//
// Subcommands and their CSV/JSON columns:
//   kernel       n, x, value, error_estimate, converged, status
//   synth        x, value, status
//   coeffs       n, value, error_estimate, evaluations, converged, status
//   invert-seq   n, value, error_estimate, amplification, evaluations, converged, status
//   invert-func  x, value, error_estimate, converged, status
//   roundtrip    n, a_in, a_recovered, abs_err, quad_err_estimate, amplification, pass, status
//   verify       id, params, lhs, rhs, abs_residual, rel_residual, tolerance_used,
//                pass, converged, imag_part, message
//
// Exit status: 0 all computations converged (and passed, for roundtrip and
// verify); 1 numeric failure or failed check; 2 usage error; 3 output error.

#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "dixt/dixt.h"
#include "json.hpp"

namespace {

constexpr int kExitNumeric = 1;
constexpr int kExitUsage = 2;
constexpr int kExitOutput = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---- table model ---------------------------------------------------------

using Params = std::vector<std::pair<std::string, double>>;
using Cell = std::variant<long long, double, bool, std::string, Params>;
using Row = std::vector<Cell>;

struct Table {
  std::string command;
  std::string kind;  // empty when the command has no kind
  std::vector<std::string> columns;
  std::vector<Row> rows;
  int failures = 0;
  std::optional<bool> budget_exceeded;
};

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string json_string(const std::string& s) { return nlohmann::json(s).dump(); }

std::string json_number(double v) { return std::isfinite(v) ? format_double(v) : "null"; }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_cell(const Cell& c) {
  struct V {
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(const std::string& v) const { return csv_field(v); }
    std::string operator()(const Params& p) const {
      std::string s;
      for (const auto& [k, v] : p) {
        if (!s.empty()) s += ';';
        s += k + "=" + format_double(v);
      }
      return csv_field(s);
    }
  };
  return std::visit(V{}, c);
}

std::string json_cell(const Cell& c) {
  struct V {
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(double v) const { return json_number(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(const std::string& v) const { return json_string(v); }
    std::string operator()(const Params& p) const {
      std::string s = "{";
      for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) s += ", ";
        s += json_string(p[i].first) + ": " + json_number(p[i].second);
      }
      return s + "}";
    }
  };
  return std::visit(V{}, c);
}

std::string render_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (i) out += ',';
    out += t.columns[i];
  }
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += csv_cell(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string render_json(const Table& t) {
  std::string out = "{\n  \"command\": " + json_string(t.command) + ",\n";
  if (!t.kind.empty()) out += "  \"kind\": " + json_string(t.kind) + ",\n";
  out += "  \"columns\": [";
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (i) out += ", ";
    out += json_string(t.columns[i]);
  }
  out += "],\n  \"rows\": [";
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    out += r ? ",\n    {" : "\n    {";
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
      if (i) out += ", ";
      out += json_string(t.columns[i]) + ": " + json_cell(t.rows[r][i]);
    }
    out += "}";
  }
  out += t.rows.empty() ? "],\n" : "\n  ],\n";
  out += "  \"summary\": {\"rows\": " + std::to_string(t.rows.size()) +
         ", \"failures\": " + std::to_string(t.failures);
  if (t.budget_exceeded) {
    out += std::string(", \"budget_exceeded\": ") + (*t.budget_exceeded ? "true" : "false");
  }
  out += "}\n}\n";
  return out;
}

// ---- input parsing -------------------------------------------------------

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, const std::string& what) {
  const std::string s = trim(text);
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw UsageError("invalid number '" + s + "' in " + what);
  }
  if (used != s.size() || !std::isfinite(v)) {
    throw UsageError("invalid number '" + s + "' in " + what);
  }
  return v;
}

int parse_int(const std::string& text, const std::string& what) {
  const std::string s = trim(text);
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(s, &used);
  } catch (const std::exception&) {
    throw UsageError("invalid integer '" + s + "' in " + what);
  }
  if (used != s.size() || v < -1000000 || v > 1000000) {
    throw UsageError("invalid integer '" + s + "' in " + what);
  }
  return static_cast<int>(v);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

std::vector<double> make_grid(const std::string& spec, const std::string& spacing) {
  const auto parts = split(spec, ':');
  if (parts.size() != 3) throw UsageError("grid must be x_min:x_max:points");
  const double a = parse_double(parts[0], "grid");
  const double b = parse_double(parts[1], "grid");
  const int p = parse_int(parts[2], "grid");
  if (!(a > 0)) throw UsageError("grid x_min must be positive");
  if (b < a) throw UsageError("grid x_max must not be below x_min");
  if (p < 1 || p > 1000000) throw UsageError("grid points must lie in [1, 1000000]");
  std::vector<double> xs(p);
  for (int i = 0; i < p; ++i) {
    const double s = p == 1 ? 0.0 : double(i) / double(p - 1);
    xs[i] = spacing == "log" ? a * std::pow(b / a, s) : a + (b - a) * s;
  }
  if (p > 1) xs.back() = b;
  return xs;
}

std::pair<int, int> parse_range(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() == 1) {
    const int n = parse_int(parts[0], "index range");
    return {n, n};
  }
  if (parts.size() != 2) throw UsageError("index range must be n or n_min:n_max");
  const int lo = parse_int(parts[0], "index range");
  const int hi = parse_int(parts[1], "index range");
  if (hi < lo) throw UsageError("index range is empty");
  return {lo, hi};
}

struct SeqData {
  int start = 1;
  std::vector<double> values;
};

SeqData parse_inline_sequence(const std::string& text, int start) {
  SeqData d;
  d.start = start;
  for (const auto& part : split(text, ',')) d.values.push_back(parse_double(part, "sequence"));
  return d;
}

SeqData read_sequence_file(const std::string& path, int start) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read sequence file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  SeqData d;
  d.start = start;
  if (trim(text).rfind('{', 0) == 0) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
      d.start = j.at("start").get<int>();
      d.values = j.at("values").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
      throw UsageError("bad sequence JSON in '" + path + "': " + e.what());
    }
    return d;
  }
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    const std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    d.values.push_back(parse_double(s, "sequence file"));
  }
  return d;
}

struct PsiData {
  std::vector<double> sin_coeffs;
  std::vector<double> cos_coeffs;
};

// Terms sin:m:c and cos:m:c joined by '+'. A '+' inside a number such as
// 1e+3 is not a separator.
PsiData parse_psi(const std::string& text) {
  std::vector<std::string> terms;
  std::size_t begin = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '+') {
      const std::string rest = trim(text.substr(i + 1));
      if (rest.rfind("sin:", 0) == 0 || rest.rfind("cos:", 0) == 0) {
        terms.push_back(text.substr(begin, i - begin));
        begin = i + 1;
      }
    }
  }
  terms.push_back(text.substr(begin));
  PsiData psi;
  for (const auto& raw : terms) {
    const auto parts = split(trim(raw), ':');
    if (parts.size() != 3 || (parts[0] != "sin" && parts[0] != "cos")) {
      throw UsageError("bad psi term '" + trim(raw) + "' (expected sin:m:c or cos:m:c)");
    }
    const int m = parse_int(parts[1], "psi");
    const double c = parse_double(parts[2], "psi");
    if (parts[0] == "sin") {
      if (m < 1) throw UsageError("sine terms need m >= 1");
      if (psi.sin_coeffs.size() < std::size_t(m)) psi.sin_coeffs.resize(m, 0.0);
      psi.sin_coeffs[m - 1] += c;
    } else {
      if (m < 0) throw UsageError("cosine terms need m >= 0");
      if (psi.cos_coeffs.size() < std::size_t(m) + 1) psi.cos_coeffs.resize(m + 1, 0.0);
      psi.cos_coeffs[m] += c;
    }
  }
  return psi;
}

// ---- C API wrappers --------------------------------------------------------

struct SeqDeleter {
  void operator()(dixt_sequence* s) const { dixt_sequence_destroy(s); }
};
struct FnDeleter {
  void operator()(dixt_function* f) const { dixt_function_destroy(f); }
};
struct ListDeleter {
  void operator()(dixt_report_list* l) const { dixt_report_list_destroy(l); }
};
using SeqPtr = std::unique_ptr<dixt_sequence, SeqDeleter>;
using FnPtr = std::unique_ptr<dixt_function, FnDeleter>;
using ListPtr = std::unique_ptr<dixt_report_list, ListDeleter>;

void check_setup(dixt_status s) {
  if (s != DIXT_OK) throw UsageError(dixt_last_error());
}

SeqPtr make_sequence(const SeqData& d) {
  dixt_sequence* s = nullptr;
  check_setup(dixt_sequence_create(d.start, d.values.data(), d.values.size(), &s));
  return SeqPtr(s);
}

double builtin_exp(double x, void*) { return std::exp(-x); }
double builtin_lorentz(double x, void*) { return 1.0 / (1.0 + x * x); }
double builtin_zero(double, void*) { return 0.0; }

std::string status_text(dixt_status s) {
  if (s == DIXT_OK) return "ok";
  return std::string(dixt_status_name(s)) + ": " + dixt_last_error();
}

// ---- configuration -------------------------------------------------------

struct Config {
  std::string kind_name;
  std::string format;
  std::string output;
  std::optional<double> abs_tol;
  std::optional<double> rel_tol;
  std::optional<long long> max_evals;
  std::string grid = "1:10:10";
  std::string spacing = "linear";
  std::string n_range;
  int n = 1;
  bool inverse = false;
  std::string seq;
  std::string seq_file;
  int start = 1;
  std::string psi;
  std::string builtin;
  int n_max = 0;
  double pass_tol = 1e-5;
  std::vector<std::string> ids;
  int points = 3;
  double budget = 300;
};

dixt_kind kind_of(const Config& c) {
  dixt_kind k{};
  check_setup(dixt_kind_parse(c.kind_name.c_str(), &k));
  return k;
}

dixt_tolerance tolerance_of(const Config& c, void (*defaults)(dixt_tolerance*)) {
  dixt_tolerance t{};
  defaults(&t);
  if (c.abs_tol) t.abs_tol = *c.abs_tol;
  if (c.rel_tol) t.rel_tol = *c.rel_tol;
  if (c.max_evals) t.max_evals = *c.max_evals;
  if (!(t.abs_tol >= 1e-15) || !(t.rel_tol >= 1e-15) || !std::isfinite(t.abs_tol) ||
      !std::isfinite(t.rel_tol)) {
    throw UsageError("tolerances must be finite and at least 1e-15");
  }
  if (t.max_evals < 1 || t.max_evals > 100000000) {
    throw UsageError("max-evals must lie in [1, 1e8]");
  }
  return t;
}

bool have_sequence(const Config& c) { return !c.seq.empty() || !c.seq_file.empty(); }

SeqData sequence_of(const Config& c) {
  if (!c.seq.empty() && !c.seq_file.empty()) throw UsageError("give --seq or --seq-file, not both");
  if (!c.seq.empty()) return parse_inline_sequence(c.seq, c.start);
  if (!c.seq_file.empty()) return read_sequence_file(c.seq_file, c.start);
  throw UsageError("a sequence is required (--seq or --seq-file)");
}

FnPtr function_of(const Config& c, dixt_kind kind) {
  const int sources = int(!c.psi.empty()) + int(!c.builtin.empty()) + int(have_sequence(c));
  if (sources != 1) throw UsageError("give exactly one of --psi, --builtin, --seq/--seq-file");
  dixt_function* f = nullptr;
  if (!c.psi.empty()) {
    const auto p = parse_psi(c.psi);
    check_setup(dixt_function_psi(kind, p.sin_coeffs.data(), p.sin_coeffs.size(),
                                  p.cos_coeffs.data(), p.cos_coeffs.size(), &f));
  } else if (!c.builtin.empty()) {
    if (c.builtin == "exp") {
      check_setup(dixt_function_callable(builtin_exp, nullptr, DIXT_DECAY_EXPONENTIAL, 1, 1, &f));
    } else if (c.builtin == "lorentz") {
      check_setup(dixt_function_callable(builtin_lorentz, nullptr, DIXT_DECAY_ALGEBRAIC, 2, 1, &f));
    } else if (c.builtin == "zero") {
      check_setup(dixt_function_callable(builtin_zero, nullptr, DIXT_DECAY_EXPONENTIAL, 1, 1, &f));
    } else {
      throw UsageError("unknown builtin '" + c.builtin + "' (exp, lorentz, zero)");
    }
  } else {
    const auto seq = make_sequence(sequence_of(c));
    check_setup(dixt_function_synthesized(kind, seq.get(), &f));
  }
  return FnPtr(f);
}

int worker_count() {
  const char* env = std::getenv("DIXT_WORKERS");
  if (env == nullptr || *env == '\0') return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1) throw UsageError("DIXT_WORKERS must be a positive integer");
  return static_cast<int>(std::min<long>(v, 256));
}

// Evaluates rows [0, count) on the worker pool; rows land in index order.
std::vector<Row> compute_rows(std::size_t count, const std::function<Row(std::size_t)>& make) {
  std::vector<Row> rows(count);
  const int workers = static_cast<int>(std::min<std::size_t>(worker_count(), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) rows[i] = make(i);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) rows[i] = make(i);
    });
  }
  for (auto& t : pool) t.join();
  return rows;
}

int count_failures(const std::vector<Row>& rows, std::size_t status_col) {
  int failures = 0;
  for (const auto& r : rows) {
    if (std::get<std::string>(r[status_col]) != "ok") ++failures;
  }
  return failures;
}

// ---- subcommands -----------------------------------------------------------

Table run_kernel(const Config& c) {
  const dixt_kind kind = kind_of(c);
  const auto xs = make_grid(c.grid, c.spacing);
  const auto [lo, hi] = c.n_range.empty() ? std::pair{c.n, c.n} : parse_range(c.n_range);
  const dixt_tolerance tol = tolerance_of(c, dixt_default_kernel_tolerance);
  Table t{c.inverse ? "kernel-inverse" : "kernel", dixt_kind_name(kind),
          {"n", "x", "value", "error_estimate", "converged", "status"}, {}, 0, {}};
  const std::size_t per_n = xs.size();
  const std::size_t count = per_n * std::size_t(hi - lo + 1);
  t.rows = compute_rows(count, [&](std::size_t i) {
    const int n = lo + int(i / per_n);
    const double x = xs[i % per_n];
    if (c.inverse) {
      dixt_quad_result r{};
      const dixt_status s = dixt_inverse_kernel(kind, n, x, &tol, &r);
      if (s != DIXT_OK) r = {std::nan(""), std::nan(""), 0, 0, 0};
      const bool ok = s == DIXT_OK && r.converged;
      return Row{(long long)n, x, r.value, r.error_estimate, r.converged != 0,
                 s == DIXT_OK ? (ok ? "ok" : "not-converged") : status_text(s)};
    }
    double v = 0;
    const dixt_status s = dixt_forward_kernel(kind, n, x, &v);
    if (s != DIXT_OK) v = std::nan("");
    return Row{(long long)n, x, v, 0.0, s == DIXT_OK, status_text(s)};
  });
  t.failures = count_failures(t.rows, 5);
  return t;
}

Table run_synth(const Config& c) {
  const dixt_kind kind = kind_of(c);
  const auto seq = make_sequence(sequence_of(c));
  const auto xs = make_grid(c.grid, c.spacing);
  Table t{"synth", dixt_kind_name(kind), {"x", "value", "status"}, {}, 0, {}};
  t.rows = compute_rows(xs.size(), [&](std::size_t i) {
    double v = 0;
    const dixt_status s = dixt_synthesize(kind, seq.get(), xs[i], &v);
    if (s != DIXT_OK) v = std::nan("");
    return Row{xs[i], v, status_text(s)};
  });
  t.failures = count_failures(t.rows, 2);
  return t;
}

Table run_coeffs(const Config& c, bool invert) {
  const dixt_kind kind = kind_of(c);
  const auto fn = function_of(c, kind);
  const auto [lo, hi] = parse_range(c.n_range.empty() ? "1:8" : c.n_range);
  const dixt_tolerance tol = tolerance_of(
      c, invert ? dixt_default_inversion_tolerance : dixt_default_analysis_tolerance);
  Table t;
  t.command = invert ? "invert-seq" : "coeffs";
  t.kind = dixt_kind_name(kind);
  t.columns = invert ? std::vector<std::string>{"n", "value", "error_estimate", "amplification",
                                                "evaluations", "converged", "status"}
                     : std::vector<std::string>{"n", "value", "error_estimate", "evaluations",
                                                "converged", "status"};
  t.rows = compute_rows(std::size_t(hi - lo + 1), [&](std::size_t i) {
    const int n = lo + int(i);
    dixt_quad_result r{};
    const dixt_status s = invert ? dixt_invert_to_sequence(kind, fn.get(), n, &tol, &r)
                                 : dixt_analyze(kind, fn.get(), n, &tol, &r);
    if (s != DIXT_OK) r = {std::nan(""), std::nan(""), 0, 0, 0};
    const std::string status =
        s != DIXT_OK ? status_text(s) : (r.converged ? "ok" : "not-converged");
    if (invert) {
      return Row{(long long)n, r.value, r.error_estimate, std::sinh(std::numbers::pi * n),
                 (long long)r.evaluations, r.converged != 0, status};
    }
    return Row{(long long)n, r.value, r.error_estimate, (long long)r.evaluations,
               r.converged != 0, status};
  });
  t.failures = count_failures(t.rows, t.columns.size() - 1);
  return t;
}

Table run_invert_func(const Config& c) {
  const dixt_kind kind = kind_of(c);
  const auto seq = make_sequence(sequence_of(c));
  const auto xs = make_grid(c.grid, c.spacing);
  const dixt_tolerance tol = tolerance_of(c, dixt_default_inversion_tolerance);
  Table t{"invert-func", dixt_kind_name(kind),
          {"x", "value", "error_estimate", "converged", "status"}, {}, 0, {}};
  t.rows = compute_rows(xs.size(), [&](std::size_t i) {
    dixt_quad_result r{};
    const dixt_status s = dixt_invert_to_function(kind, seq.get(), xs[i], &tol, &r);
    if (s != DIXT_OK) r = {std::nan(""), std::nan(""), 0, 0, 0};
    return Row{xs[i], r.value, r.error_estimate, r.converged != 0,
               s != DIXT_OK ? status_text(s) : (r.converged ? "ok" : "not-converged")};
  });
  t.failures = count_failures(t.rows, 4);
  return t;
}

Table run_roundtrip(const Config& c) {
  const dixt_kind kind = kind_of(c);
  const SeqData data = sequence_of(c);
  const auto seq = make_sequence(data);
  dixt_function* raw = nullptr;
  check_setup(dixt_function_synthesized(kind, seq.get(), &raw));
  const FnPtr fn(raw);
  const int n_max = c.n_max > 0 ? c.n_max : dixt_sequence_max_index(seq.get());
  if (n_max < 1) throw UsageError("--n-max must be at least 1");
  const dixt_tolerance tol = tolerance_of(c, dixt_default_inversion_tolerance);
  Table t{"roundtrip", dixt_kind_name(kind),
          {"n", "a_in", "a_recovered", "abs_err", "quad_err_estimate", "amplification", "pass",
           "status"},
          {}, 0, {}};
  t.rows = compute_rows(std::size_t(n_max), [&](std::size_t i) {
    const int n = int(i) + 1;
    const double a = dixt_sequence_at(seq.get(), n);
    dixt_quad_result r{};
    const dixt_status s = dixt_invert_to_sequence(kind, fn.get(), n, &tol, &r);
    if (s != DIXT_OK) r = {std::nan(""), std::nan(""), 0, 0, 0};
    const double err = std::abs(r.value - a);
    const bool pass = s == DIXT_OK && r.converged && err < c.pass_tol;
    const std::string status =
        s != DIXT_OK ? status_text(s) : (!r.converged ? "not-converged" : pass ? "ok" : "mismatch");
    return Row{(long long)n, a, r.value, err, r.error_estimate, std::sinh(std::numbers::pi * n), pass, status};
  });
  t.failures = count_failures(t.rows, 7);
  return t;
}

Table run_verify(const Config& c) {
  std::vector<int> ids;
  for (const auto& group : c.ids) {
    for (const auto& name : split(group, ',')) {
      const std::string s = trim(name);
      if (s.empty()) continue;
      int id = 0;
      check_setup(dixt_identity_parse(s.c_str(), &id));
      ids.push_back(id);
    }
  }
  if (c.points < 3) throw UsageError("--points must be at least 3");
  if (!(c.budget > 0)) throw UsageError("--budget must be positive");
  dixt_report_list* raw = nullptr;
  const dixt_status s =
      dixt_run_suite(ids.data(), ids.size(), c.points, c.budget, worker_count(), &raw);
  if (s != DIXT_OK) throw UsageError(dixt_last_error());
  const ListPtr list(raw);
  Table t{"verify", "",
          {"id", "params", "lhs", "rhs", "abs_residual", "rel_residual", "tolerance_used", "pass",
           "converged", "imag_part", "message"},
          {}, 0, dixt_report_list_budget_exceeded(list.get()) != 0};
  const std::size_t size = dixt_report_list_size(list.get());
  for (std::size_t i = 0; i < size; ++i) {
    dixt_identity_report r{};
    dixt_report_list_get(list.get(), i, &r);
    Params params;
    for (std::size_t j = 0; j < dixt_report_list_param_count(list.get(), i); ++j) {
      const char* name = nullptr;
      double value = 0;
      dixt_report_list_param(list.get(), i, j, &name, &value);
      params.emplace_back(name, value);
    }
    if (!r.pass) ++t.failures;
    t.rows.push_back(Row{std::string(dixt_identity_name(r.id)), params, r.lhs, r.rhs,
                         r.abs_residual, r.rel_residual, r.tolerance_used, r.pass != 0,
                         r.converged != 0, r.imag_part,
                         std::string(dixt_report_list_message(list.get(), i))});
  }
  if (*t.budget_exceeded) ++t.failures;
  return t;
}

void emit(const Table& t, const Config& c) {
  const std::string text = c.format == "json" ? render_json(t) : render_csv(t);
  if (c.output.empty() || c.output == "-") {
    std::cout << text << std::flush;
    if (!std::cout) throw std::ios_base::failure("cannot write to standard output");
    return;
  }
  std::ofstream out(c.output, std::ios::binary | std::ios::trunc);
  if (!out) throw std::ios_base::failure("cannot open '" + c.output + "' for writing");
  out << text;
  out.close();
  if (!out) throw std::ios_base::failure("write to '" + c.output + "' failed");
}

void add_common(CLI::App* sub, Config& c, bool with_kind, const std::string& default_format) {
  if (with_kind) {
    sub->add_option("--kind", c.kind_name, "Transform kind")
        ->required()
        ->check(CLI::IsMember({"re-i", "re-jk", "im-jk"}));
  }
  sub->add_option("--format", c.format, "Output format (default " + default_format + ")")
      ->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("-o,--output", c.output, "Output file (default standard output)");
  sub->add_option("--abs-tol", c.abs_tol, "Absolute quadrature tolerance");
  sub->add_option("--rel-tol", c.rel_tol, "Relative quadrature tolerance");
  sub->add_option("--max-evals", c.max_evals, "Integrand evaluation budget");
}

void add_grid(CLI::App* sub, Config& c) {
  sub->add_option("--grid", c.grid, "x_min:x_max:points")->capture_default_str();
  sub->add_option("--spacing", c.spacing, "Grid spacing")
      ->check(CLI::IsMember({"linear", "log"}))
      ->capture_default_str();
}

void add_sequence(CLI::App* sub, Config& c) {
  sub->add_option("--seq", c.seq, "Inline comma-separated coefficients");
  sub->add_option("--seq-file", c.seq_file,
                  "File with one value per line, or JSON {\"start\": k, \"values\": [...]}");
  sub->add_option("--start", c.start, "Index of the first inline or line-file value")
      ->check(CLI::Range(0, 1))
      ->capture_default_str();
}

void add_function(CLI::App* sub, Config& c) {
  sub->add_option("--psi", c.psi, "Trig polynomial, e.g. sin:1:1+sin:3:0.5");
  sub->add_option("--builtin", c.builtin, "Named function: exp, lorentz, zero");
  add_sequence(sub, c);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete index transforms with imaginary-order Bessel kernels"};
  app.require_subcommand(1);
  Config c;

  auto* kernel = app.add_subcommand("kernel", "Tabulate a forward or inverse kernel");
  add_common(kernel, c, true, "csv");
  add_grid(kernel, c);
  kernel->add_option("--n", c.n, "Kernel index")->capture_default_str();
  kernel->add_option("--n-range", c.n_range, "Index range n_min:n_max (overrides --n)");
  kernel->add_flag("--inverse", c.inverse, "Inverse kernel instead of the forward one");

  auto* synth = app.add_subcommand("synth", "Synthesize a function from a sequence");
  add_common(synth, c, true, "csv");
  add_grid(synth, c);
  add_sequence(synth, c);

  auto* coeffs = app.add_subcommand("coeffs", "Analysis coefficients of a function");
  add_common(coeffs, c, true, "csv");
  add_function(coeffs, c);
  coeffs->add_option("--n-range", c.n_range, "Index range n_min:n_max (default 1:8)");

  auto* inv_seq = app.add_subcommand("invert-seq", "Recover a sequence from a function");
  add_common(inv_seq, c, true, "csv");
  add_function(inv_seq, c);
  inv_seq->add_option("--n-range", c.n_range, "Index range n_min:n_max (default 1:8)");

  auto* inv_fn = app.add_subcommand("invert-func", "Recover a function from a sequence");
  add_common(inv_fn, c, true, "csv");
  add_grid(inv_fn, c);
  add_sequence(inv_fn, c);

  auto* roundtrip = app.add_subcommand("roundtrip", "Synthesize then invert a sequence");
  add_common(roundtrip, c, true, "csv");
  add_sequence(roundtrip, c);
  roundtrip->add_option("--n-max", c.n_max, "Largest recovered index (default: sequence end)");
  roundtrip->add_option("--pass-tol", c.pass_tol, "Absolute pass threshold")
      ->capture_default_str();

  auto* verify = app.add_subcommand("verify", "Run the identity suite");
  add_common(verify, c, false, "json");
  verify->add_option("--ids", c.ids, "Identity ids, comma separated (default all)");
  verify->add_option("--points", c.points, "Grid points per parameter axis")
      ->capture_default_str();
  verify->add_option("--budget", c.budget, "Runtime budget in seconds")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    Table t;
    if (*kernel) t = run_kernel(c);
    else if (*synth) t = run_synth(c);
    else if (*coeffs) t = run_coeffs(c, false);
    else if (*inv_seq) t = run_coeffs(c, true);
    else if (*inv_fn) t = run_invert_func(c);
    else if (*roundtrip) t = run_roundtrip(c);
    else t = run_verify(c);
    if (c.format.empty()) c.format = *verify ? "json" : "csv";
    emit(t, c);
    if (t.failures > 0) {
      std::cerr << "dixt: " << t.failures << " row(s) failed\n";
      return kExitNumeric;
    }
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "dixt: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "dixt: " << e.what() << '\n';
    return kExitOutput;
  }
}
