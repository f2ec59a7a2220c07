#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "fracvar/errors.hpp"
#include "fracvar/problem_io.hpp"
#include "fracvar/quadrature.hpp"
#include "fracvar/special_functions.hpp"

using namespace fracvar;

#ifndef FRACVAR_PROBLEMS_DIR
#define FRACVAR_PROBLEMS_DIR "problems"
#endif

TEST_CASE("the bundled constrained example loads faithfully") {
  const LoadedProblem loaded = load_problem_file(
      std::filesystem::path(FRACVAR_PROBLEMS_DIR) / "example_s4.prob");
  const VariationalProblem& p = loaded.problem;
  CHECK(p.a == 0.0);
  CHECK(p.b == 1.0);
  CHECK(p.alpha.value() == 0.5);
  CHECK(p.beta.value() == 0.5);
  CHECK_FALSE(p.maximize);

  const auto* fixed = std::get_if<FixedBoundary>(&p.boundary);
  REQUIRE(fixed != nullptr);
  CHECK(fixed->ya == 1.0);
  CHECK(fixed->yb == doctest::Approx(mittag_leffler(0.5, 1.0)).epsilon(1e-14));

  REQUIRE(p.constraint.has_value());
  // l = int ybar^2; frozen reference from series + quadrature.
  CHECK(p.constraint->target ==
        doctest::Approx(9.4744430325285879).epsilon(1e-9));

  REQUIRE(loaded.coefficients != nullptr);
  CHECK(loaded.coefficients->contains("ybar"));
  CHECK(loaded.coefficients->eval("ybar", 1.0) ==
        doctest::Approx(mittag_leffler(0.5, 1.0)).epsilon(1e-14));

  CHECK(p.lagrangian.value().to_string() == "v^2");
  CHECK(p.constraint->g.value().uses_variable(Var::V));
}

TEST_CASE("minimal problem text applies defaults") {
  const LoadedProblem loaded = load_problem_text(R"({
    "interval": {"a": 0, "b": 2},
    "orders": {"alpha": 0.4},
    "lagrangian": "v^2 + y^2",
    "boundary": {"mode": "fixed", "ya": 0, "yb": 1}
  })");
  CHECK(loaded.problem.beta.value() == 0.4);  // beta defaults to alpha
  CHECK_FALSE(loaded.problem.constraint.has_value());
  CHECK(loaded.options.max_iters == SolverOptions{}.max_iters);
  CHECK(loaded.options.residual_tol == SolverOptions{}.residual_tol);
}

TEST_CASE("undeclared coefficients are named in the error") {
  try {
    load_problem_text(R"({
      "interval": {"a": 0, "b": 1},
      "orders": {"alpha": 0.5},
      "lagrangian": "coeff:zbar * v",
      "boundary": {"mode": "fixed", "ya": 0, "yb": 1}
    })");
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(std::string(e.what()).find("zbar") != std::string::npos);
  }
}

TEST_CASE("schema violations are specific") {
  const char* missing_boundary = R"({
    "interval": {"a": 0, "b": 1},
    "orders": {"alpha": 0.5},
    "lagrangian": "v^2"
  })";
  CHECK_THROWS_AS(load_problem_text(missing_boundary), SchemaError);

  const char* bad_mode = R"({
    "interval": {"a": 0, "b": 1},
    "orders": {"alpha": 0.5},
    "lagrangian": "v^2",
    "boundary": {"mode": "sideways", "ya": 0}
  })";
  CHECK_THROWS_AS(load_problem_text(bad_mode), SchemaError);

  const char* bad_order = R"({
    "interval": {"a": 0, "b": 1},
    "orders": {"alpha": 1.5},
    "lagrangian": "v^2",
    "boundary": {"mode": "fixed", "ya": 0, "yb": 1}
  })";
  CHECK_THROWS_AS(load_problem_text(bad_order), SchemaError);

  const char* typo_field = R"({
    "interval": {"a": 0, "b": 1},
    "orders": {"alpha": 0.5},
    "lagrangent": "v^2",
    "boundary": {"mode": "fixed", "ya": 0, "yb": 1}
  })";
  CHECK_THROWS_AS(load_problem_text(typo_field), SchemaError);

  const char* parse_error_inside = R"({
    "interval": {"a": 0, "b": 1},
    "orders": {"alpha": 0.5},
    "lagrangian": "v^^2",
    "boundary": {"mode": "fixed", "ya": 0, "yb": 1}
  })";
  CHECK_THROWS_AS(load_problem_text(parse_error_inside), SchemaError);
}

TEST_CASE("tabulated coefficients load from CSV and inline samples") {
  const auto dir = std::filesystem::temp_directory_path() / "fracvar_io_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream csv(dir / "data.csv");
    csv << "x,value\n0,1\n0.5,2\n1,1.5\n";
  }
  const LoadedProblem loaded = load_problem_text(R"({
    "interval": {"a": 0, "b": 1},
    "orders": {"alpha": 0.5},
    "lagrangian": "(v - coeff:data)^2 + coeff:inline",
    "boundary": {"mode": "fixed", "ya": 0, "yb": 1},
    "coefficients": [
      {"name": "data", "kind": "tabulated", "csv": "data.csv"},
      {"name": "inline", "kind": "tabulated", "samples": [[0, 3], [1, 5]]}
    ]
  })", dir);
  CHECK(loaded.coefficients->eval("data", 0.25) == doctest::Approx(1.5));
  CHECK(loaded.coefficients->eval("data", 0.75) == doctest::Approx(1.75));
  CHECK(loaded.coefficients->eval("inline", 0.5) == doctest::Approx(4.0));
  CHECK_THROWS_AS(loaded.coefficients->eval("data", 2.0), EvaluationError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("non-increasing tabulated abscissae are rejected") {
  CHECK_THROWS_AS(load_problem_text(R"({
    "interval": {"a": 0, "b": 1},
    "orders": {"alpha": 0.5},
    "lagrangian": "coeff:d",
    "boundary": {"mode": "fixed", "ya": 0, "yb": 1},
    "coefficients": [{"name": "d", "kind": "tabulated",
                      "samples": [[0, 1], [0, 2], [1, 3]]}]
  })"), SchemaError);
}

TEST_CASE("free boundary modes round-trip through the loader") {
  {
    const LoadedProblem loaded = load_problem_text(R"({
      "interval": {"a": 0, "b": 1},
      "orders": {"alpha": 0.9},
      "lagrangian": "1 + v^2",
      "boundary": {"mode": "free_right_point", "ya": 0, "t_range": [0.2, 1]}
    })");
    const auto* frp = std::get_if<FreeRightPoint>(&loaded.problem.boundary);
    REQUIRE(frp != nullptr);
    CHECK(frp->t_lo == 0.2);
    CHECK(frp->t_hi == 1.0);
  }
  {
    const LoadedProblem loaded = load_problem_text(R"({
      "interval": {"a": 0, "b": 1},
      "orders": {"alpha": 0.9},
      "lagrangian": "v^2",
      "boundary": {"mode": "curve", "ya": 1, "psi": "1 + 0 * x"}
    })");
    const auto* curve = std::get_if<CurveBoundary>(&loaded.problem.boundary);
    REQUIRE(curve != nullptr);
    CHECK(curve->t_lo > 0.0);
    CHECK(curve->t_hi == 1.0);
  }
  CHECK_THROWS_AS(load_problem_text(R"({
    "interval": {"a": 0, "b": 1},
    "orders": {"alpha": 0.9},
    "lagrangian": "v^2",
    "boundary": {"mode": "free_right_point", "ya": 0}
  })"), SchemaError);
}

TEST_CASE("solver overrides apply and reject unknown keys") {
  const LoadedProblem loaded = load_problem_text(R"({
    "interval": {"a": 0, "b": 1},
    "orders": {"alpha": 0.5},
    "lagrangian": "v^2",
    "boundary": {"mode": "fixed", "ya": 0, "yb": 1},
    "solver": {"max_iters": 500, "lambda_range": [-5, 5], "residual_tol": 0.4}
  })");
  CHECK(loaded.options.max_iters == 500);
  CHECK(loaded.options.lambda_lo == -5.0);
  CHECK(loaded.options.lambda_hi == 5.0);
  CHECK(loaded.options.residual_tol == 0.4);

  CHECK_THROWS_AS(load_problem_text(R"({
    "interval": {"a": 0, "b": 1},
    "orders": {"alpha": 0.5},
    "lagrangian": "v^2",
    "boundary": {"mode": "fixed", "ya": 0, "yb": 1},
    "solver": {"max_iterations": 500}
  })"), SchemaError);
}

TEST_CASE("auto constraint target matches direct quadrature") {
  const LoadedProblem loaded = load_problem_text(R"({
    "interval": {"a": 0, "b": 1},
    "orders": {"alpha": 0.5},
    "lagrangian": "v^2",
    "boundary": {"mode": "fixed", "ya": 0, "yb": 1},
    "constraint": {"g": "coeff:c * v", "l": "auto:c"},
    "coefficients": [{"name": "c", "kind": "tabulated",
                      "samples": [[0, 1], [1, 1]]}]
  })");
  // c identically 1, so l = 1.
  CHECK(loaded.problem.constraint->target == doctest::Approx(1.0).epsilon(1e-10));
}
