#pragma once

#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "fracvar/variational.hpp"

namespace fracvar {

struct SolverOptions {
  // Quasi-Newton loop.
  std::size_t max_iters = 2000;
  double grad_tol = 1e-8;            // sup-norm of the free gradient
  double objective_rel_tol = 1e-12;  // relative decrease stop
  double armijo_c = 1e-4;
  double backtrack = 0.5;
  std::size_t lbfgs_history = 10;

  // Certificates.
  double residual_tol = 0.25;   // EL sup-norm a solution must satisfy
  double constraint_tol = 1e-5; // |I(y) - l|; floor set by the inner solve
  double abnormal_tol = 1e-6;   // EL residual of g counting as "extremal of I"

  // Multiplier search.
  double lambda_lo = -100.0;
  double lambda_hi = 100.0;
  std::size_t lambda_scan_points = 32;
  std::size_t lambda_max_iters = 60;

  // Terminal-point search.
  double terminal_tol = 1e-3;

  bool record_trace = false;  // keep per-iteration objective values
};

struct FixedBoundary {
  double ya = 0.0;
  double yb = 0.0;
};
struct FreeRightValue {
  double ya = 0.0;
};
struct FreeRightPoint {
  double ya = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
};
struct CurveBoundary {
  double ya = 0.0;
  Expression psi;
  double t_lo = 0.0;
  double t_hi = 0.0;
};
using BoundarySpec =
    std::variant<FixedBoundary, FreeRightValue, FreeRightPoint, CurveBoundary>;

struct VariationalProblem {
  Lagrangian lagrangian;
  FracOrder alpha;
  FracOrder beta;
  double a = 0.0;
  double b = 1.0;
  BoundarySpec boundary;
  std::optional<IsoConstraint> constraint;
  bool maximize = false;
};

struct SolveResult {
  GridFunction y;
  ELReport el_report;
  double objective = 0.0;  // value of the original functional at y
  std::size_t iterations = 0;
  bool converged = false;
  bool maximized = false;

  std::optional<double> lambda;      // isoperimetric multiplier
  std::optional<double> lambda0;     // abnormal companion (1 in normal runs)
  std::optional<double> terminal;    // chosen T for free_right_point/curve
  std::optional<TransversalityReport> trans_report;
  std::optional<double> constraint_defect;
  std::optional<double> constraint_gradient_sup;
  std::vector<double> objective_trace;  // filled when options.record_trace
};

/// Finite-dimensional Ritz objective: trapezoid discretization of the
/// functional over the values at all grid nodes, with the exact gradient
/// assembled through the adjoints of the L1 convolutions. One instance is
/// meant for single-threaded use.
class DiscreteObjective {
 public:
  DiscreteObjective(Lagrangian L, const Grid& grid, FracOrder alpha,
                    FracOrder beta);

  double value(std::span<const double> y) const;
  std::vector<double> gradient(std::span<const double> y) const;

  const Grid& grid() const { return grid_; }

 private:
  Lagrangian lagrangian_;
  Grid grid_;
  FracOrder alpha_, beta_;
  std::vector<std::pair<std::string, GridFunction>> coefficient_columns_;
};

/// Fixed-boundary extremization by direct minimization over the interior
/// node values. Non-convergence yields converged = false rather than an
/// exception; NaN during the line search throws NumericalError.
SolveResult solve_fixed(const VariationalProblem& problem, std::size_t n_nodes,
                        const SolverOptions& options = {});

/// Isoperimetric solve: bracket scan plus secant iteration on the
/// constraint defect of the inner fixed-boundary solve for L + lambda g.
/// Throws BracketingError when no sign change exists in the lambda range.
SolveResult solve_isoperimetric(const VariationalProblem& problem,
                                std::size_t n_nodes,
                                const SolverOptions& options = {});

struct AbnormalDiagnosis {
  bool abnormal = false;
  /// (lambda0, lambda) = (0, 1) certificate when abnormal.
  std::optional<std::pair<double, double>> multipliers;
  double constraint_residual_sup = 0.0;
};

/// Checks whether the candidate trajectory is an extremal of the
/// constraint functional itself (the case the normal multiplier rule
/// excludes).
AbnormalDiagnosis detect_abnormal(const VariationalProblem& problem,
                                  std::size_t n_nodes,
                                  const SolverOptions& options = {});

/// Free-boundary solves: free right value at fixed T, golden-section over
/// T with re-gridding for a free right point, and a right endpoint sliding
/// on a curve psi. The Lagrangian must not reference w.
SolveResult solve_free(const VariationalProblem& problem, std::size_t n_nodes,
                       const SolverOptions& options = {});

/// Dispatches on boundary mode and constraint presence.
SolveResult solve(const VariationalProblem& problem, std::size_t n_nodes,
                  const SolverOptions& options = {});

}  // namespace fracvar
