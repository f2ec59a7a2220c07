// fracvar: run fractional operators on functions, verify the integration by
// parts identities, check candidate extremals, and solve variational
// problems from problem files.
//
// Exit codes: 0 success, 1 certified failure (a residual or condition is
// above tolerance), 2 usage or input errors, 3 numerical errors.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fracvar/csv.hpp"
#include "fracvar/errors.hpp"
#include "fracvar/fractional_operators.hpp"
#include "fracvar/problem_io.hpp"
#include "fracvar/solver.hpp"
#include "fracvar/version.hpp"
#include "run_manifest.hpp"

namespace {

using namespace fracvar;
using fracvar::cli::RunManifest;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

Expression parse_x_expression(const std::string& src, const char* flag) {
  Expression e = Expression::parse(src);  // ParseError maps to exit 2
  if (e.uses_variable(Var::Y) || e.uses_variable(Var::V) ||
      e.uses_variable(Var::W)) {
    throw UsageError(std::string(flag) + " must be an expression in x only");
  }
  if (!e.coefficient_names().empty()) {
    throw UsageError(std::string(flag) + " must not reference coefficients");
  }
  return e;
}

RealFunction callable_of(const Expression& e) {
  return [e](double x) {
    EvalContext ctx;
    ctx.x = x;
    return e.eval(ctx);
  };
}

// Candidate / input CSVs must carry a uniform, increasing x column.
GridFunction grid_function_from_csv(const CsvTable& table,
                                    const std::string& origin) {
  if (table.columns.size() < 2) {
    throw UsageError(origin + ": need two columns (x, value)");
  }
  const auto& xs = table.columns[0];
  const auto& vs = table.columns[1];
  if (xs.size() < 3) {
    throw UsageError(origin + ": need at least 3 rows, got " +
                     std::to_string(xs.size()));
  }
  const double h = (xs.back() - xs.front()) / double(xs.size() - 1);
  if (!(h > 0.0)) throw UsageError(origin + ": x must increase");
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    if (std::abs(xs[i + 1] - xs[i] - h) > 1e-6 * std::max(1.0, std::abs(h))) {
      throw UsageError(origin + ": x column is not a uniform grid");
    }
  }
  return GridFunction(Grid(xs.front(), xs.back(), xs.size()), vs);
}

// --- op ---------------------------------------------------------------------

struct OpArgs {
  std::string op;
  double order = 0.5;
  std::vector<double> interval;
  std::size_t nodes = 257;
  std::string fn;
  std::string csv;
  std::string out;
};

int run_op(const OpArgs& args) {
  const double t0 = now_ms();
  const bool is_integral = args.op == "Ileft" || args.op == "Iright";
  if (!is_integral && !(args.order > 0.0 && args.order < 1.0)) {
    throw UsageError("--order must lie in (0,1) for derivative operators");
  }
  if (is_integral && !(args.order > 0.0)) {
    throw UsageError("--order must be positive");
  }

  RunManifest manifest;
  manifest.command = "op";
  manifest.version = kVersion;
  manifest.add_option("op", args.op);
  manifest.add_option("order", std::to_string(args.order));
  manifest.add_option("nodes", std::to_string(args.nodes));

  std::optional<GridFunction> samples;
  RealFunction callable;
  if (!args.csv.empty()) {
    const CsvTable table = read_csv(args.csv);
    samples = grid_function_from_csv(table, args.csv);
    auto interp = std::make_shared<TabulatedCoefficient>(
        TabulatedCoefficient::from_grid_function(*samples));
    callable = [interp](double x) { return interp->eval(x); };
    manifest.add_input(args.csv, fracvar::cli::digest_file(args.csv));
  } else {
    if (args.interval.size() != 2 || !(args.interval[0] < args.interval[1])) {
      throw UsageError("--interval needs two values a < b");
    }
    if (args.nodes < 3) throw UsageError("--nodes must be at least 3");
    const Expression e = parse_x_expression(args.fn, "--fn");
    callable = callable_of(e);
    samples = GridFunction::sample(
        Grid(args.interval[0], args.interval[1], args.nodes), callable);
    manifest.add_option("fn", args.fn);
    manifest.add_option("interval", std::to_string(args.interval[0]) + " " +
                                        std::to_string(args.interval[1]));
    manifest.add_input("fn", fracvar::cli::fnv1a_hex(args.fn));
  }

  const Grid& grid = samples->grid();
  const FracOrder order(args.order);
  std::vector<double> result(grid.size());
  if (args.op == "Ileft") {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      result[i] = rl_integral_left(callable, order, grid.a(), grid.node(i));
    }
  } else if (args.op == "Iright") {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      result[i] = rl_integral_right(callable, order, grid.node(i), grid.b());
    }
  } else {
    GridFunction out = args.op == "Dcleft" ? caputo_left(*samples, order)
                       : args.op == "Dcright" ? caputo_right(*samples, order)
                       : args.op == "Drlleft" ? rl_derivative_left(*samples, order)
                       : rl_derivative_right(*samples, order);
    result.assign(out.values().begin(), out.values().end());
  }

  std::vector<double> xs(grid.size()), fs(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    xs[i] = grid.node(i);
    fs[i] = (*samples)[i];
  }
  const std::string body = format_csv({"x", "f", "result"}, {xs, fs, result});
  write_csv(args.out, {"x", "f", "result"}, {xs, fs, result});
  manifest.output_digest = fracvar::cli::fnv1a_hex(body);
  manifest.wall_ms = now_ms() - t0;
  manifest.write_next_to(args.out);
  std::printf("wrote %s (%zu nodes)\n", args.out.c_str(), grid.size());
  return kExitOk;
}

// --- verify-ibp -------------------------------------------------------------

struct IbpArgs {
  double order = 0.5;
  std::string f_src;
  std::string g_src;
  std::vector<double> interval{0.0, 1.0};
  double tol = 1e-8;
};

int run_verify_ibp(const IbpArgs& args) {
  if (!(args.order > 0.0 && args.order < 1.0)) {
    throw UsageError("--order must lie in (0,1)");
  }
  if (args.interval.size() != 2 || !(args.interval[0] < args.interval[1])) {
    throw UsageError("--interval needs two values a < b");
  }
  if (!(args.tol > 0.0)) throw UsageError("--tol must be positive");
  const Expression fe = parse_x_expression(args.f_src, "--f");
  const Expression ge = parse_x_expression(args.g_src, "--g");
  const IbpReport report =
      verify_ibp(callable_of(fe), callable_of(ge), FracOrder(args.order),
                 args.interval[0], args.interval[1], args.tol);
  const double threshold = 10.0 * args.tol;
  std::printf("left-Caputo identity residual:  %.3e\n",
              report.left_identity_residual);
  std::printf("right-Caputo identity residual: %.3e\n",
              report.right_identity_residual);
  std::printf("threshold (10 * tol):           %.3e\n", threshold);
  const bool ok = report.within(threshold);
  std::printf("%s\n", ok ? "PASS" : "FAIL");
  return ok ? kExitOk : kExitFailed;
}

// --- check ------------------------------------------------------------------

struct CheckArgs {
  std::string problem;
  std::string candidate;
  std::optional<double> lambda;
};

int run_check(const CheckArgs& args) {
  const LoadedProblem loaded = load_problem_file(args.problem);
  const VariationalProblem& p = loaded.problem;
  const SolverOptions& opts = loaded.options;

  const CsvTable table = read_csv(args.candidate);
  const GridFunction y = grid_function_from_csv(table, args.candidate);
  const Grid& grid = y.grid();

  const double span = p.b - p.a;
  const double slack = 1e-6 * span;
  if (std::abs(grid.a() - p.a) > slack) {
    throw UsageError("candidate grid starts at " + std::to_string(grid.a()) +
                     ", problem interval starts at " + std::to_string(p.a));
  }
  const double T = grid.b();
  const bool ends_at_b = std::abs(T - p.b) <= slack;
  if (std::holds_alternative<FixedBoundary>(p.boundary) ||
      std::holds_alternative<FreeRightValue>(p.boundary)) {
    if (!ends_at_b) {
      throw UsageError("candidate grid must end at b = " + std::to_string(p.b));
    }
  } else if (const auto* frp = std::get_if<FreeRightPoint>(&p.boundary)) {
    if (T < frp->t_lo - slack || T > frp->t_hi + slack) {
      throw UsageError("candidate terminal point outside the problem t_range");
    }
  } else if (const auto* cb = std::get_if<CurveBoundary>(&p.boundary)) {
    if (T < cb->t_lo - slack || T > cb->t_hi + slack) {
      throw UsageError("candidate terminal point outside the problem t_range");
    }
  }

  bool pass = true;
  if (p.constraint) {
    if (!args.lambda) {
      throw UsageError("--lambda is required for constrained problems");
    }
    const ELReport r = iso_el_residual(p.lagrangian, *p.constraint,
                                       *args.lambda, y, p.alpha, p.beta);
    const double defect =
        eval_functional(p.constraint->g, y, p.alpha, p.beta) -
        p.constraint->target;
    std::printf("augmented EL residual: sup=%.6g l2=%.6g (excluding %zu "
                "nodes per side)\n",
                r.sup_norm, r.l2_norm, r.excluded_each_side);
    std::printf("constraint defect:     %.6g (informational)\n", defect);
    pass = r.sup_norm <= opts.residual_tol;
  } else {
    const ELReport r = el_residual(p.lagrangian, y, p.alpha, p.beta);
    std::printf("EL residual: sup=%.6g l2=%.6g (excluding %zu nodes per "
                "side)\n",
                r.sup_norm, r.l2_norm, r.excluded_each_side);
    pass = r.sup_norm <= opts.residual_tol;
  }

  if (!std::holds_alternative<FixedBoundary>(p.boundary)) {
    TransversalityMode mode = FixedTFreeY{};
    if (std::holds_alternative<FreeRightPoint>(p.boundary)) {
      mode = FreeBoth{};
    } else if (const auto* cb = std::get_if<CurveBoundary>(&p.boundary)) {
      const CoeffLookup lookup = loaded.coefficients->lookup();
      const Expression psi = cb->psi;
      RealFunction psi_fn = [psi, lookup](double x) {
        EvalContext ctx;
        ctx.x = x;
        ctx.coeffs = &lookup;
        return psi.eval(ctx);
      };
      RealFunction dpsi_fn = [psi_fn, &p](double x) {
        return derivative_on_interval(psi_fn, x, p.a, p.b);
      };
      mode = OnCurve{psi_fn, dpsi_fn};
    }
    const TransversalityReport tr =
        transversality_check(p.lagrangian, y, p.alpha, T, mode);
    if (tr.lagrangian_term) {
      std::printf("transversality |L(T)|:        %.6g\n", *tr.lagrangian_term);
    }
    if (tr.integral_term) {
      std::printf("transversality integral term: %.6g\n", *tr.integral_term);
    }
    if (tr.combined_term) {
      std::printf("transversality combined term: %.6g\n", *tr.combined_term);
    }
    pass = pass && tr.max_magnitude() <= opts.residual_tol;
  }

  std::printf("tolerance: %.6g\n", opts.residual_tol);
  std::printf("%s\n", pass ? "PASS" : "FAIL");
  return pass ? kExitOk : kExitFailed;
}

// --- solve ------------------------------------------------------------------

struct SolveArgs {
  std::string problem;
  std::size_t nodes = 257;
  std::string out;
};

int run_solve(const SolveArgs& args) {
  const double t0 = now_ms();
  if (args.nodes < 17) throw UsageError("--nodes must be at least 17");
  const LoadedProblem loaded = load_problem_file(args.problem);
  const SolveResult result = solve(loaded.problem, args.nodes, loaded.options);

  std::printf("converged:  %s\n", result.converged ? "yes" : "no");
  std::printf("objective:  %.10g%s\n", result.objective,
              result.maximized ? " (maximized)" : "");
  std::printf("iterations: %zu\n", result.iterations);
  if (result.lambda) std::printf("lambda:     %.10g\n", *result.lambda);
  if (result.terminal) std::printf("T:          %.10g\n", *result.terminal);
  if (result.constraint_defect) {
    std::printf("defect:     %.6g\n", *result.constraint_defect);
  }
  std::printf("residual:   sup=%.6g l2=%.6g\n", result.el_report.sup_norm,
              result.el_report.l2_norm);
  if (result.trans_report) {
    std::printf("transversality max magnitude: %.6g\n",
                result.trans_report->max_magnitude());
  }

  if (!args.out.empty()) {
    const Grid& grid = result.y.grid();
    const GridFunction v = caputo_left(result.y, loaded.problem.alpha);
    std::vector<double> xs(grid.size()), ys(grid.size()), vs(grid.size()),
        rs(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      xs[i] = grid.node(i);
      ys[i] = result.y[i];
      vs[i] = v[i];
      rs[i] = result.el_report.residual[i];
    }
    const std::vector<std::string> header{"x", "y", "v", "residual"};
    write_csv(args.out, header, {xs, ys, vs, rs});

    RunManifest manifest;
    manifest.command = "solve";
    manifest.version = kVersion;
    manifest.add_option("problem", args.problem);
    manifest.add_option("nodes", std::to_string(args.nodes));
    manifest.add_input(args.problem, fracvar::cli::digest_file(args.problem));
    manifest.output_digest =
        fracvar::cli::fnv1a_hex(format_csv(header, {xs, ys, vs, rs}));
    manifest.wall_ms = now_ms() - t0;
    manifest.write_next_to(args.out);
  }
  return result.converged ? kExitOk : kExitFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fracvar: Caputo/Riemann-Liouville operators and direct "
               "solvers for fractional variational problems"};
  app.require_subcommand(1);

  OpArgs op_args;
  CLI::App* op = app.add_subcommand(
      "op", "Apply a fractional operator to a function, write CSV");
  op->add_option("--op", op_args.op, "Operator")
      ->required()
      ->check(CLI::IsMember(
          {"Ileft", "Iright", "Dcleft", "Dcright", "Drlleft", "Drlright"}));
  op->add_option("--order", op_args.order, "Fractional order")->required();
  op->add_option("--interval", op_args.interval, "Interval a b")->expected(2);
  op->add_option("--nodes", op_args.nodes, "Grid nodes (default 257)");
  auto* fn_opt = op->add_option("--fn", op_args.fn, "Expression in x");
  auto* csv_opt =
      op->add_option("--csv", op_args.csv, "CSV with columns x, f(x)");
  fn_opt->excludes(csv_opt);
  csv_opt->excludes(fn_opt);
  op->add_option("--out", op_args.out, "Output CSV path")->required();

  IbpArgs ibp_args;
  CLI::App* ibp = app.add_subcommand(
      "verify-ibp", "Check both Caputo integration-by-parts identities");
  ibp->add_option("--order", ibp_args.order, "Order in (0,1)")->required();
  ibp->add_option("--f", ibp_args.f_src, "f expression in x")->required();
  ibp->add_option("--g", ibp_args.g_src, "g expression in x")->required();
  ibp->add_option("--interval", ibp_args.interval, "Interval a b")->expected(2);
  ibp->add_option("--tol", ibp_args.tol, "Quadrature tolerance (default 1e-8)");

  CheckArgs check_args;
  double lambda_value = 0.0;
  CLI::App* check = app.add_subcommand(
      "check", "Certify a candidate trajectory against a problem file");
  check->add_option("--problem", check_args.problem, "Problem file")->required();
  check->add_option("--candidate", check_args.candidate,
                    "CSV with columns x, y")->required();
  auto* lambda_opt =
      check->add_option("--lambda", lambda_value, "Multiplier for constrained "
                                                  "problems");

  SolveArgs solve_args;
  CLI::App* solve_cmd =
      app.add_subcommand("solve", "Solve a problem file by direct minimization");
  solve_cmd->add_option("--problem", solve_args.problem, "Problem file")
      ->required();
  solve_cmd->add_option("--nodes", solve_args.nodes, "Grid nodes (default 257)");
  solve_cmd->add_option("--out", solve_args.out, "Solution CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }

  try {
    if (op->parsed()) {
      if (op_args.fn.empty() && op_args.csv.empty()) {
        throw UsageError("one of --fn or --csv is required");
      }
      return run_op(op_args);
    }
    if (ibp->parsed()) return run_verify_ibp(ibp_args);
    if (check->parsed()) {
      if (lambda_opt->count() > 0) check_args.lambda = lambda_value;
      return run_check(check_args);
    }
    return run_solve(solve_args);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const SchemaError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const ArgumentError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const Error& e) {
    // Domain, order, accuracy, bracketing, numerical: runtime failures.
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return kExitNumeric;
  }
}
