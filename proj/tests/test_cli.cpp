#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "fracvar/csv.hpp"
#include "fracvar/grid.hpp"
#include "fracvar/special_functions.hpp"

namespace fs = std::filesystem;

#ifndef FRACVAR_BIN
#define FRACVAR_BIN "fracvar"
#endif
#ifndef FRACVAR_PROBLEMS_DIR
#define FRACVAR_PROBLEMS_DIR "problems"
#endif

namespace {

struct RunOutcome {
  int exit_code = -1;
  std::string stdout_text;
};

fs::path work_dir() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / "fracvar_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

RunOutcome run_cli(const std::string& args) {
  const fs::path out = work_dir() / "stdout.txt";
  const std::string cmd = std::string(FRACVAR_BIN) + " " + args + " > " +
                          out.string() + " 2> " + work_dir().string() +
                          "/stderr.txt";
  const int status = std::system(cmd.c_str());
  RunOutcome outcome;
  outcome.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out);
  std::ostringstream buf;
  buf << in.rdbuf();
  outcome.stdout_text = buf.str();
  return outcome;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string problems_dir() { return FRACVAR_PROBLEMS_DIR; }

double extract(const std::string& text, const std::string& key) {
  const auto at = text.find(key);
  REQUIRE(at != std::string::npos);
  return std::strtod(text.c_str() + at + key.size(), nullptr);
}

}  // namespace

TEST_CASE("op Dcleft matches the power rule end to end") {
  const fs::path out = work_dir() / "dcleft.csv";
  const RunOutcome r = run_cli(
      "op --op Dcleft --order 0.5 --fn \"x^2\" --interval 0 1 --nodes 257 "
      "--out " + out.string());
  CHECK(r.exit_code == 0);
  const fracvar::CsvTable table = fracvar::read_csv(out);
  REQUIRE(table.columns.size() == 3);
  REQUIRE(table.rows() == 257);
  double sup = 0.0;
  for (std::size_t i = 8; i + 8 < table.rows(); ++i) {
    const double x = table.columns[0][i];
    const double want = 2.0 * std::pow(x, 1.5) / fracvar::gamma(2.5);
    sup = std::max(sup, std::abs(table.columns[2][i] - want));
  }
  CHECK(sup <= 1e-3);
  CHECK(fs::exists(out.string() + ".manifest.json"));
}

TEST_CASE("op Ileft of a constant follows the kernel power") {
  const fs::path out = work_dir() / "ileft.csv";
  const RunOutcome r = run_cli(
      "op --op Ileft --order 0.5 --fn \"1\" --interval 0 1 --nodes 65 --out " +
      out.string());
  CHECK(r.exit_code == 0);
  const fracvar::CsvTable table = fracvar::read_csv(out);
  for (std::size_t i = 0; i < table.rows(); ++i) {
    const double x = table.columns[0][i];
    const double want = std::pow(x, 0.5) / fracvar::gamma(1.5);
    CHECK(std::abs(table.columns[2][i] - want) <= 1e-8);
  }
}

TEST_CASE("op rejects malformed expressions with exit 2") {
  const RunOutcome r = run_cli(
      "op --op Dcleft --order 0.5 --fn \"x^^2\" --interval 0 1 --out " +
      (work_dir() / "bad.csv").string());
  CHECK(r.exit_code == 2);
}

TEST_CASE("op identical invocations are bit-identical") {
  const fs::path out1 = work_dir() / "det1.csv";
  const fs::path out2 = work_dir() / "det2.csv";
  const std::string flags =
      "op --op Drlright --order 0.35 --fn \"sin(x) + x^2\" --interval 0 1 "
      "--nodes 129 --out ";
  CHECK(run_cli(flags + out1.string()).exit_code == 0);
  CHECK(run_cli(flags + out2.string()).exit_code == 0);
  const std::string b1 = slurp(out1);
  CHECK(!b1.empty());
  CHECK(b1 == slurp(out2));
  // Manifests agree on the output digest (timing may differ).
  const std::string m1 = slurp(out1.string() + ".manifest.json");
  const std::string m2 = slurp(out2.string() + ".manifest.json");
  const auto digest_of = [](const std::string& m) {
    const auto at = m.find("output_digest");
    return m.substr(at, m.find(',', at) - at);
  };
  CHECK(digest_of(m1) == digest_of(m2));
}

TEST_CASE("thread cap does not change the bytes produced") {
  const fs::path serial = work_dir() / "threads1.csv";
  const fs::path parallel = work_dir() / "threads4.csv";
  const std::string flags =
      " op --op Dcleft --order 0.5 --fn \"exp(x) * sin(3 * x)\" "
      "--interval 0 1 --nodes 1025 --out ";
  const auto run_env = [&](const std::string& env, const fs::path& out) {
    const std::string cmd = env + " " + FRACVAR_BIN + flags + out.string() +
                            " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  };
  CHECK(run_env("env -u FRACVAR_THREADS", serial) == 0);
  CHECK(run_env("env FRACVAR_THREADS=4", parallel) == 0);
  const std::string a = slurp(serial);
  CHECK(!a.empty());
  CHECK(a == slurp(parallel));
}

TEST_CASE("op consumes CSV input") {
  const fs::path data = work_dir() / "input.csv";
  {
    const fracvar::Grid grid(0.0, 1.0, 65);
    std::vector<double> xs(grid.size()), fs_(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      xs[i] = grid.node(i);
      fs_[i] = xs[i] * xs[i];
    }
    fracvar::write_csv(data, {"x", "f"}, {xs, fs_});
  }
  const fs::path out = work_dir() / "from_csv.csv";
  const RunOutcome r = run_cli("op --op Dcleft --order 0.5 --csv " +
                               data.string() + " --out " + out.string());
  CHECK(r.exit_code == 0);
  const fracvar::CsvTable table = fracvar::read_csv(out);
  REQUIRE(table.rows() == 65);
  const double x = table.columns[0][32];
  const double want = 2.0 * std::pow(x, 1.5) / fracvar::gamma(2.5);
  CHECK(std::abs(table.columns[2][32] - want) <= 5e-3);
}

TEST_CASE("verify-ibp passes for the boundary-vanishing pair") {
  const RunOutcome r = run_cli(
      "verify-ibp --order 0.4 --f \"x * (1 - x)\" --g \"1 + x^2\" "
      "--interval 0 1 --tol 1e-8");
  CHECK(r.exit_code == 0);
  CHECK(r.stdout_text.find("PASS") != std::string::npos);
}

TEST_CASE("verify-ibp passes for a pair with boundary terms") {
  const RunOutcome r = run_cli(
      "verify-ibp --order 0.5 --f \"x^3\" --g \"1\" --interval 0 1 --tol 1e-8");
  CHECK(r.exit_code == 0);
}

TEST_CASE("verify-ibp reports honest failure at unreachable tolerance") {
  const RunOutcome r = run_cli(
      "verify-ibp --order 0.5 --f \"x^3\" --g \"1 + x\" --interval 0 1 "
      "--tol 1e-30");
  CHECK(r.exit_code == 1);
  CHECK(r.stdout_text.find("FAIL") != std::string::npos);
}

TEST_CASE("check certifies the bundled example at its known multiplier") {
  const fs::path candidate = work_dir() / "ybar513.csv";
  {
    const fracvar::Grid grid(0.0, 1.0, 513);
    std::vector<double> xs(grid.size()), ys(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      xs[i] = grid.node(i);
      ys[i] = fracvar::mittag_leffler(0.5, std::sqrt(xs[i]));
    }
    fracvar::write_csv(candidate, {"x", "y"}, {xs, ys});
  }
  const std::string problem = problems_dir() + "/example_s4.prob";
  {
    const RunOutcome r = run_cli("check --problem " + problem +
                                 " --candidate " + candidate.string() +
                                 " --lambda -2");
    CHECK(r.exit_code == 0);
    CHECK(r.stdout_text.find("PASS") != std::string::npos);
  }
  {
    const RunOutcome r = run_cli("check --problem " + problem +
                                 " --candidate " + candidate.string() +
                                 " --lambda 0");
    CHECK(r.exit_code == 1);
    CHECK(r.stdout_text.find("FAIL") != std::string::npos);
  }
  {
    // Missing multiplier for a constrained problem is a usage error.
    const RunOutcome r = run_cli("check --problem " + problem +
                                 " --candidate " + candidate.string());
    CHECK(r.exit_code == 2);
  }
}

TEST_CASE("check rejects candidates on the wrong grid") {
  const fs::path candidate = work_dir() / "short.csv";
  {
    // Ends at 0.5 instead of 1.
    const fracvar::Grid grid(0.0, 0.5, 65);
    std::vector<double> xs(grid.size()), ys(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      xs[i] = grid.node(i);
      ys[i] = 1.0;
    }
    fracvar::write_csv(candidate, {"x", "y"}, {xs, ys});
  }
  const RunOutcome r =
      run_cli("check --problem " + problems_dir() + "/example_s4.prob" +
              " --candidate " + candidate.string() + " --lambda -2");
  CHECK(r.exit_code == 2);
}

TEST_CASE("solve reproduces the bundled example from the command line") {
  const fs::path out = work_dir() / "solution.csv";
  const RunOutcome r =
      run_cli("solve --problem " + problems_dir() + "/example_s4.prob" +
              " --nodes 257 --out " + out.string());
  CHECK(r.exit_code == 0);
  CHECK(r.stdout_text.find("converged:  yes") != std::string::npos);
  const double lambda = extract(r.stdout_text, "lambda:");
  CHECK(lambda >= -2.25);
  CHECK(lambda <= -1.75);

  const fracvar::CsvTable table = fracvar::read_csv(out);
  REQUIRE(table.columns.size() == 4);
  REQUIRE(table.rows() == 257);
  double dev = 0.0;
  for (std::size_t i = 0; i < table.rows(); ++i) {
    const double want =
        fracvar::mittag_leffler(0.5, std::sqrt(table.columns[0][i]));
    dev = std::max(dev, std::abs(table.columns[1][i] - want));
  }
  CHECK(dev <= 5e-2);
  CHECK(fs::exists(out.string() + ".manifest.json"));
}

TEST_CASE("solve handles the free-endpoint sample problem") {
  const RunOutcome r = run_cli("solve --problem " + problems_dir() +
                               "/free_endpoint.prob --nodes 65");
  CHECK(r.exit_code == 0);
  CHECK(r.stdout_text.find("transversality") != std::string::npos);
}

TEST_CASE("check evaluates transversality for free-endpoint problems") {
  const fs::path candidate = work_dir() / "const65.csv";
  {
    const fracvar::Grid grid(0.0, 1.0, 65);
    std::vector<double> xs(grid.size()), ys(grid.size(), 1.0);
    for (std::size_t i = 0; i < grid.size(); ++i) xs[i] = grid.node(i);
    fracvar::write_csv(candidate, {"x", "y"}, {xs, ys});
  }
  const RunOutcome r =
      run_cli("check --problem " + problems_dir() + "/free_endpoint.prob" +
              " --candidate " + candidate.string());
  CHECK(r.exit_code == 0);
  CHECK(r.stdout_text.find("transversality") != std::string::npos);
  CHECK(r.stdout_text.find("PASS") != std::string::npos);
}

TEST_CASE("solve surfaces bracketing failures as numerical errors") {
  const fs::path problem = work_dir() / "bad_bracket.prob";
  {
    std::ofstream out(problem);
    out << R"json({
      "interval": {"a": 0, "b": 1},
      "orders": {"alpha": 0.5, "beta": 0.5},
      "lagrangian": "v^2",
      "boundary": {"mode": "fixed", "ya": 1, "yb": "ml(0.5, 1)"},
      "constraint": {"g": "coeff:ybar * v", "l": "auto:ybar"},
      "coefficients": [{"name": "ybar", "kind": "ml_alpha_power", "alpha": 0.5}],
      "solver": {"lambda_range": [5, 10]}
    })json";
  }
  const RunOutcome r =
      run_cli("solve --problem " + problem.string() + " --nodes 65");
  CHECK(r.exit_code == 3);
}

TEST_CASE("solve reports non-convergence with exit 1") {
  const fs::path problem = work_dir() / "starved.prob";
  {
    std::ofstream out(problem);
    out << R"json({
      "interval": {"a": 0, "b": 1},
      "orders": {"alpha": 0.999, "beta": 0.999},
      "lagrangian": "v^2",
      "boundary": {"mode": "fixed", "ya": 0, "yb": 1},
      "solver": {"max_iters": 1, "grad_tol": 1e-16, "objective_rel_tol": 1e-30}
    })json";
  }
  const RunOutcome r =
      run_cli("solve --problem " + problem.string() + " --nodes 65");
  CHECK(r.exit_code == 1);
  CHECK(r.stdout_text.find("converged:  no") != std::string::npos);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run_cli("op --op Dcnope --order 0.5 --fn x --interval 0 1 --out " +
                (work_dir() / "x.csv").string())
            .exit_code == 2);
  CHECK(run_cli("nonsense").exit_code == 2);
  CHECK(run_cli("solve --problem " + (work_dir() / "missing.prob").string())
            .exit_code == 2);
}
