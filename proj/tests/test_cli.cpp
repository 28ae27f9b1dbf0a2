#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run cli(const std::string& args) {
  const std::string cmd = std::string(DIXT_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
  const int w = pclose(p);
  r.status = WIFEXITED(w) ? WEXITSTATUS(w) : -1;
  return r;
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "dixt_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("roundtrip recovers a unit sequence") {
  const auto r = cli("roundtrip --kind re-i --seq 0,1,0 --n-max 5");
  CHECK(r.status == 0);
  const auto rows = csv(r.out);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0] == std::vector<std::string>{"n", "a_in", "a_recovered", "abs_err",
                                            "quad_err_estimate", "amplification", "pass",
                                            "status"});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const int n = std::stoi(rows[i][0]);
    const double rec = std::stod(rows[i][2]);
    CHECK(std::abs(rec - (n == 2 ? 1.0 : 0.0)) < 1e-5);
    CHECK(std::abs(std::stod(rows[i][5]) - std::sinh(std::numbers::pi * n)) <=
          1e-15 * std::sinh(std::numbers::pi * n));
    CHECK(rows[i][6] == "true");
  }
}

TEST_CASE("verify d29 emits a passing JSON report") {
  const auto r = cli("verify --ids d29 --format json");
  CHECK(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["command"] == "verify");
  REQUIRE(j["columns"].is_array());
  CHECK(j["columns"][0] == "id");
  REQUIRE(j["rows"].size() >= 3);
  for (const auto& row : j["rows"]) {
    CHECK(row["id"] == "D29");
    CHECK(row["pass"] == true);
    CHECK(row["abs_residual"].get<double>() < 1e-12);
  }
  CHECK(j["summary"]["failures"] == 0);
  CHECK(j["summary"]["rows"] == j["rows"].size());
}

TEST_CASE("inverse kernel at n = 0 is exactly zero") {
  const auto r = cli("kernel --kind re-jk --inverse --n 0 --grid 1:10:5");
  CHECK(r.status == 0);
  const auto rows = csv(r.out);
  REQUIRE(rows.size() == 6);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][2] == "0");
}

TEST_CASE("usage errors exit with status 2") {
  CHECK(cli("kernel --kind nope --n 1 --grid 1:2:2").status == 2);
  CHECK(cli("kernel --kind re-i --n 1 --grid 0:2:2").status == 2);
  CHECK(cli("synth --kind re-i --seq 1,x --grid 1:2:2").status == 2);
  CHECK(cli("coeffs --kind re-i --psi sin:1").status == 2);
  CHECK(cli("frobnicate").status == 2);
}

TEST_CASE("an unwritable output path exits with status 3") {
  CHECK(cli("kernel --kind re-i --n 1 --grid 1:2:2 -o /nonexistent/dir/out.csv").status == 3);
}

TEST_CASE("numeric failures are itemized with status 1") {
  const auto r = cli("invert-seq --kind re-i --psi sin:1:1 --n-range 10:12");
  CHECK(r.status == 1);
  const auto rows = csv(r.out);
  REQUIRE(rows.size() == 4);
  CHECK(rows[1].back() == "ok");
  CHECK(rows[2].back().starts_with("precision-loss"));
  CHECK(rows[3].back().starts_with("precision-loss"));
}

TEST_CASE("floats round-trip through 17 significant digits") {
  const auto r = cli("synth --kind re-i --seq 1 --grid 1:1:1");
  const auto rows = csv(r.out);
  REQUIRE(rows.size() == 2);
  const double v = std::stod(rows[1][1]);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  CHECK(rows[1][1] == buf);
}

TEST_CASE("sequence files in both formats agree with inline input") {
  const auto lines = scratch("seq.txt");
  std::ofstream(lines) << "0.5\n-1\n0.25\n";
  const auto js = scratch("seq.json");
  std::ofstream(js) << R"({"start": 1, "values": [0.5, -1, 0.25]})";
  const auto a = cli("synth --kind im-jk --seq 0.5,-1,0.25 --grid 0.5:4:4");
  const auto b = cli("synth --kind im-jk --seq-file " + lines.string() + " --grid 0.5:4:4");
  const auto c = cli("synth --kind im-jk --seq-file " + js.string() + " --grid 0.5:4:4");
  CHECK(a.status == 0);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
}

TEST_CASE("identical runs write identical files") {
  const auto f1 = scratch("run1.json");
  const auto f2 = scratch("run2.json");
  const std::string args = "coeffs --kind re-i --psi sin:1:1+sin:3:0.5 --n-range 1:4 --format json";
  REQUIRE(cli(args + " -o " + f1.string()).status == 0);
  REQUIRE(cli(args + " -o " + f2.string()).status == 0);
  CHECK(slurp(f1) == slurp(f2));
  CHECK_FALSE(slurp(f1).empty());
}

TEST_CASE("worker count does not change the output") {
  const std::string args = "kernel --kind im-jk --n 3 --grid 0.1:20:40 --spacing log";
  const auto one = cli(args);
  setenv("DIXT_WORKERS", "4", 1);
  const auto four = cli(args);
  unsetenv("DIXT_WORKERS");
  CHECK(one.status == 0);
  CHECK(one.out == four.out);
}

TEST_CASE("every CSV starts with its header") {
  const std::pair<const char*, const char*> cases[] = {
      {"kernel --kind re-i --n 1 --grid 1:2:2", "n,x,value,error_estimate,converged,status"},
      {"synth --kind re-i --seq 1 --grid 1:2:2", "x,value,status"},
      {"coeffs --kind re-i --builtin exp --n-range 1:1",
       "n,value,error_estimate,evaluations,converged,status"},
      {"invert-func --kind re-i --seq 1 --grid 1:2:2", "x,value,error_estimate,converged,status"},
  };
  for (const auto& [args, header] : cases) {
    const auto r = cli(args);
    CHECK(r.out.substr(0, r.out.find('\n')) == header);
  }
}
