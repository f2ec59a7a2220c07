#include "fracvar/solver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <string>

#include "fracvar/errors.hpp"
#include "fracvar/special_functions.hpp"

namespace fracvar {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> trapezoid_weights(const Grid& grid) {
  std::vector<double> w(grid.size(), grid.spacing());
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

// L1 forward convolution coefficients b_k = (k+1)^(1-a) - k^(1-a).
std::vector<double> l1_coefficients(std::size_t n, double a) {
  std::vector<double> b(n);
  for (std::size_t k = 0; k < n; ++k) {
    b[k] = std::pow(static_cast<double>(k + 1), 1.0 - a) -
           std::pow(static_cast<double>(k), 1.0 - a);
  }
  return b;
}

// v_i = c sum_k b_k (y_{i-k} - y_{i-k-1}); v_0 = 0.
void l1_left_forward(std::span<const double> y, const std::vector<double>& b,
                     double c, std::vector<double>& out) {
  const std::size_t n = y.size();
  out.assign(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < i; ++k) {
      acc += b[k] * (y[i - k] - y[i - k - 1]);
    }
    out[i] = c * acc;
  }
}

// Exact adjoint of l1_left_forward: accumulates into grad.
void l1_left_adjoint(std::span<const double> u, const std::vector<double>& b,
                     double c, std::vector<double>& grad) {
  const std::size_t n = u.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double ui = c * u[i];
    if (ui == 0.0) continue;
    for (std::size_t k = 0; k < i; ++k) {
      grad[i - k] += b[k] * ui;
      grad[i - k - 1] -= b[k] * ui;
    }
  }
}

struct EvalPlan {
  const Lagrangian* lagrangian = nullptr;
  const std::vector<std::pair<std::string, GridFunction>>* columns = nullptr;
  const Grid* grid = nullptr;
  bool uses_v = false;
  bool uses_w = false;
};

// Evaluates an expression at node i against precomputed columns.
double eval_at_node(const EvalPlan& plan, const Expression& e, std::size_t i,
                    double yi, double vi, double wi) {
  CoeffLookup lookup = [&](std::string_view name, double) -> double {
    for (const auto& [n, column] : *plan.columns) {
      if (n == name) return column[i];
    }
    throw EvaluationError("undeclared coefficient '" + std::string(name) + "'");
  };
  EvalContext ctx;
  ctx.x = plan.grid->node(i);
  ctx.y = yi;
  ctx.v = vi;
  ctx.w = wi;
  ctx.coeffs = &lookup;
  try {
    return e.eval(ctx);
  } catch (const EvaluationError& err) {
    if (err.node()) throw;
    throw EvaluationError(err.what(), i);
  }
}

}  // namespace

DiscreteObjective::DiscreteObjective(Lagrangian L, const Grid& grid,
                                     FracOrder alpha, FracOrder beta)
    : lagrangian_(std::move(L)), grid_(grid), alpha_(alpha), beta_(beta) {
  std::set<std::string> names;
  for (const Expression* e :
       {&lagrangian_.value(), &lagrangian_.partial_y(),
        &lagrangian_.partial_v(), &lagrangian_.partial_w()}) {
    const auto more = e->coefficient_names();
    names.insert(more.begin(), more.end());
  }
  for (const auto& name : names) {
    const auto& coeffs = lagrangian_.coefficients();
    if (coeffs == nullptr) {
      throw EvaluationError("coefficient '" + name + "' is not bound");
    }
    coefficient_columns_.emplace_back(name, coeffs->sample(name, grid_));
  }
}

double DiscreteObjective::value(std::span<const double> y) const {
  const std::size_t n = grid_.size();
  if (y.size() != n) throw ArgumentError("objective: wrong vector length");
  const double h = grid_.spacing();

  EvalPlan plan{&lagrangian_, &coefficient_columns_, &grid_,
                lagrangian_.uses(Var::V), lagrangian_.uses(Var::W)};

  std::vector<double> v(n, 0.0), w(n, 0.0);
  if (plan.uses_v) {
    const auto b = l1_coefficients(n, alpha_.value());
    l1_left_forward(y, b, std::pow(h, -alpha_.value()) / gamma(2.0 - alpha_.value()), v);
  }
  if (plan.uses_w) {
    const auto b = l1_coefficients(n, beta_.value());
    std::vector<double> yr(y.rbegin(), y.rend());
    std::vector<double> wr;
    l1_left_forward(yr, b, std::pow(h, -beta_.value()) / gamma(2.0 - beta_.value()), wr);
    w.assign(wr.rbegin(), wr.rend());
  }

  const auto tau = trapezoid_weights(grid_);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += tau[i] * eval_at_node(plan, lagrangian_.value(), i, y[i], v[i], w[i]);
  }
  return acc;
}

std::vector<double> DiscreteObjective::gradient(std::span<const double> y) const {
  const std::size_t n = grid_.size();
  if (y.size() != n) throw ArgumentError("objective: wrong vector length");
  const double h = grid_.spacing();

  EvalPlan plan{&lagrangian_, &coefficient_columns_, &grid_,
                lagrangian_.uses(Var::V), lagrangian_.uses(Var::W)};

  std::vector<double> v(n, 0.0), w(n, 0.0);
  std::vector<double> b_alpha, b_beta;
  double c_alpha = 0.0, c_beta = 0.0;
  if (plan.uses_v) {
    b_alpha = l1_coefficients(n, alpha_.value());
    c_alpha = std::pow(h, -alpha_.value()) / gamma(2.0 - alpha_.value());
    l1_left_forward(y, b_alpha, c_alpha, v);
  }
  if (plan.uses_w) {
    b_beta = l1_coefficients(n, beta_.value());
    c_beta = std::pow(h, -beta_.value()) / gamma(2.0 - beta_.value());
    std::vector<double> yr(y.rbegin(), y.rend());
    std::vector<double> wr;
    l1_left_forward(yr, b_beta, c_beta, wr);
    w.assign(wr.rbegin(), wr.rend());
  }

  const auto tau = trapezoid_weights(grid_);
  std::vector<double> grad(n, 0.0);

  if (!lagrangian_.partial_y().is_zero()) {
    for (std::size_t i = 0; i < n; ++i) {
      grad[i] += tau[i] * eval_at_node(plan, lagrangian_.partial_y(), i, y[i],
                                       v[i], w[i]);
    }
  }
  if (plan.uses_v && !lagrangian_.partial_v().is_zero()) {
    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) {
      u[i] = tau[i] * eval_at_node(plan, lagrangian_.partial_v(), i, y[i],
                                   v[i], w[i]);
    }
    l1_left_adjoint(u, b_alpha, c_alpha, grad);
  }
  if (plan.uses_w && !lagrangian_.partial_w().is_zero()) {
    std::vector<double> z(n);
    for (std::size_t i = 0; i < n; ++i) {
      z[i] = tau[i] * eval_at_node(plan, lagrangian_.partial_w(), i, y[i],
                                   v[i], w[i]);
    }
    // Adjoint of reverse-conjugated convolution: reverse, adjoint, reverse.
    std::vector<double> zr(z.rbegin(), z.rend());
    std::vector<double> gr(n, 0.0);
    l1_left_adjoint(zr, b_beta, c_beta, gr);
    for (std::size_t i = 0; i < n; ++i) grad[i] += gr[n - 1 - i];
  }
  return grad;
}

// ---------------------------------------------------------------------------
// L-BFGS over a subset of node values.
// ---------------------------------------------------------------------------

namespace {

struct MinimizeOutcome {
  std::vector<double> y;
  double objective = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> trace;
};

double sup_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Guarded objective: evaluation failures during trial steps behave like
// +infinity so the line search backs off; NaN is reported distinctly.
double guarded_value(const DiscreteObjective& obj,
                     const std::vector<double>& y, bool& was_nan) {
  was_nan = false;
  double f;
  try {
    f = obj.value(y);
  } catch (const EvaluationError&) {
    return kInf;
  }
  if (std::isnan(f)) {
    was_nan = true;
    return kInf;
  }
  return f;
}

MinimizeOutcome minimize(const DiscreteObjective& obj, std::vector<double> y,
                         const std::vector<std::size_t>& free_idx,
                         const SolverOptions& opts) {
  const std::size_t m = free_idx.size();
  MinimizeOutcome out;

  auto select = [&](const std::vector<double>& full) {
    std::vector<double> r(m);
    for (std::size_t j = 0; j < m; ++j) r[j] = full[free_idx[j]];
    return r;
  };

  double f = obj.value(y);  // initial point must evaluate cleanly
  std::vector<double> g = select(obj.gradient(y));
  if (opts.record_trace) out.trace.push_back(f);

  std::deque<std::pair<std::vector<double>, std::vector<double>>> history;
  std::vector<double> rho;

  std::vector<double> y_trial(y);
  std::size_t iter = 0;
  bool converged = sup_norm(g) <= opts.grad_tol;

  while (!converged && iter < opts.max_iters) {
    // Two-loop recursion for d = -H g.
    std::vector<double> d(g);
    {
      std::vector<double> alpha_coefs(history.size());
      for (std::size_t k = history.size(); k-- > 0;) {
        const auto& [s, yk] = history[k];
        double sd = 0.0;
        for (std::size_t j = 0; j < m; ++j) sd += s[j] * d[j];
        alpha_coefs[k] = rho[k] * sd;
        for (std::size_t j = 0; j < m; ++j) d[j] -= alpha_coefs[k] * yk[j];
      }
      if (!history.empty()) {
        const auto& [s, yk] = history.back();
        double sy = 0.0, yy = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
          sy += s[j] * yk[j];
          yy += yk[j] * yk[j];
        }
        const double scale = sy / yy;
        for (std::size_t j = 0; j < m; ++j) d[j] *= scale;
      }
      for (std::size_t k = 0; k < history.size(); ++k) {
        const auto& [s, yk] = history[k];
        double yd = 0.0;
        for (std::size_t j = 0; j < m; ++j) yd += yk[j] * d[j];
        const double beta = rho[k] * yd;
        for (std::size_t j = 0; j < m; ++j) d[j] += (alpha_coefs[k] - beta) * s[j];
      }
      for (std::size_t j = 0; j < m; ++j) d[j] = -d[j];
    }

    double gd = 0.0;
    for (std::size_t j = 0; j < m; ++j) gd += g[j] * d[j];
    if (!(gd < 0.0)) {
      // Not a descent direction; drop the memory and take steepest descent.
      history.clear();
      rho.clear();
      for (std::size_t j = 0; j < m; ++j) d[j] = -g[j];
      gd = 0.0;
      for (std::size_t j = 0; j < m; ++j) gd += g[j] * d[j];
      if (gd == 0.0) break;  // zero gradient
    }

    double step = history.empty() ? 1.0 / std::max(1.0, sup_norm(g)) : 1.0;
    double f_trial = kInf;
    bool nan_last = false;
    bool accepted = false;
    while (step >= 1e-18) {
      for (std::size_t j = 0; j < m; ++j) {
        y_trial[free_idx[j]] = y[free_idx[j]] + step * d[j];
      }
      f_trial = guarded_value(obj, y_trial, nan_last);
      if (f_trial <= f + opts.armijo_c * step * gd) {
        accepted = true;
        break;
      }
      step *= opts.backtrack;
    }
    if (!accepted) {
      if (nan_last) {
        throw NumericalError("line search produced NaN objective values");
      }
      break;  // stalled; report best point found
    }

    std::vector<double> g_new = select(obj.gradient(y_trial));
    std::vector<double> s(m), yk(m);
    for (std::size_t j = 0; j < m; ++j) {
      s[j] = y_trial[free_idx[j]] - y[free_idx[j]];
      yk[j] = g_new[j] - g[j];
    }
    double sy = 0.0, ss = 0.0, yy = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      sy += s[j] * yk[j];
      ss += s[j] * s[j];
      yy += yk[j] * yk[j];
    }
    if (sy > 1e-12 * std::sqrt(ss * yy)) {
      history.emplace_back(std::move(s), std::move(yk));
      rho.push_back(1.0 / sy);
      if (history.size() > opts.lbfgs_history) {
        history.pop_front();
        rho.erase(rho.begin());
      }
    }

    const double decrease = f - f_trial;
    y = y_trial;
    f = f_trial;
    g = std::move(g_new);
    ++iter;
    if (opts.record_trace) out.trace.push_back(f);

    if (sup_norm(g) <= opts.grad_tol) {
      converged = true;
    } else if (decrease >= 0.0 &&
               decrease <= opts.objective_rel_tol * std::max(1.0, std::abs(f))) {
      converged = true;
    }
  }

  out.y = std::move(y);
  out.objective = f;
  out.iterations = iter;
  out.converged = converged;
  return out;
}

// ---------------------------------------------------------------------------
// Shared solve plumbing.
// ---------------------------------------------------------------------------

// Inner fixed-boundary minimization of an already-augmented Lagrangian on
// an explicit grid; endpoints pinned, warm start optional.
MinimizeOutcome minimize_pinned(const Lagrangian& L, const Grid& grid,
                                FracOrder alpha, FracOrder beta, double ya,
                                double yb, const SolverOptions& opts,
                                const std::vector<double>* warm,
                                bool free_right_value = false) {
  const std::size_t n = grid.size();
  std::vector<double> y0(n);
  if (warm != nullptr && warm->size() == n) {
    y0 = *warm;
    y0[0] = ya;
    if (!free_right_value) y0[n - 1] = yb;
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(n - 1);
      y0[i] = free_right_value ? ya : ya + (yb - ya) * t;
    }
  }
  std::vector<std::size_t> free_idx;
  for (std::size_t i = 1; i + 1 < n; ++i) free_idx.push_back(i);
  if (free_right_value) free_idx.push_back(n - 1);

  const DiscreteObjective objective(L, grid, alpha, beta);
  return minimize(objective, std::move(y0), free_idx, opts);
}

Lagrangian effective_lagrangian(const VariationalProblem& problem,
                                std::optional<double> lambda) {
  Lagrangian L = problem.lagrangian;
  if (lambda && problem.constraint) {
    L = Lagrangian::linear_combination(1.0, L, *lambda, problem.constraint->g);
  }
  if (problem.maximize) {
    L = Lagrangian::linear_combination(-1.0, L, 0.0, L);
  }
  return L;
}

SolveResult finish_result(const VariationalProblem& problem,
                          std::optional<double> lambda,
                          const Grid& grid, MinimizeOutcome&& outcome,
                          const SolverOptions& opts) {
  GridFunction y(grid, std::move(outcome.y));
  // Certificate: residual of the paper-convention integrand L + lambda g.
  ELReport report =
      (lambda && problem.constraint)
          ? iso_el_residual(problem.lagrangian, *problem.constraint, *lambda,
                            y, problem.alpha, problem.beta)
          : el_residual(problem.lagrangian, y, problem.alpha, problem.beta);
  const double j_value =
      eval_functional(problem.lagrangian, y, problem.alpha, problem.beta);

  SolveResult result{std::move(y), std::move(report)};
  result.objective = j_value;
  result.iterations = outcome.iterations;
  result.converged =
      outcome.converged && result.el_report.sup_norm <= opts.residual_tol;
  result.maximized = problem.maximize;
  result.objective_trace = std::move(outcome.trace);
  return result;
}

const FixedBoundary& require_fixed_boundary(const VariationalProblem& p,
                                            const char* who) {
  const auto* fixed = std::get_if<FixedBoundary>(&p.boundary);
  if (fixed == nullptr) {
    throw ArgumentError(std::string(who) + " requires a fixed boundary");
  }
  return *fixed;
}

void require_nodes(std::size_t n_nodes) {
  if (n_nodes < 17) {
    throw ArgumentError("solvers need at least 17 nodes, got " +
                        std::to_string(n_nodes));
  }
}

}  // namespace

SolveResult solve_fixed(const VariationalProblem& problem, std::size_t n_nodes,
                        const SolverOptions& options) {
  require_nodes(n_nodes);
  const FixedBoundary& boundary = require_fixed_boundary(problem, "solve_fixed");
  if (problem.constraint) {
    throw ArgumentError("solve_fixed does not handle constraints; use "
                        "solve_isoperimetric");
  }
  const Grid grid(problem.a, problem.b, n_nodes);
  MinimizeOutcome outcome =
      minimize_pinned(effective_lagrangian(problem, std::nullopt), grid,
                      problem.alpha, problem.beta, boundary.ya, boundary.yb,
                      options, nullptr);
  return finish_result(problem, std::nullopt, grid, std::move(outcome), options);
}

SolveResult solve_isoperimetric(const VariationalProblem& problem,
                                std::size_t n_nodes,
                                const SolverOptions& options) {
  require_nodes(n_nodes);
  if (!problem.constraint) {
    throw ArgumentError("solve_isoperimetric requires a constraint");
  }
  const FixedBoundary& boundary =
      require_fixed_boundary(problem, "solve_isoperimetric");
  const IsoConstraint& constraint = *problem.constraint;
  const Grid grid(problem.a, problem.b, n_nodes);

  std::vector<double> warm;
  std::size_t total_iterations = 0;
  auto inner = [&](double lambda) {
    MinimizeOutcome outcome = minimize_pinned(
        effective_lagrangian(problem, lambda), grid, problem.alpha,
        problem.beta, boundary.ya, boundary.yb, options,
        warm.empty() ? nullptr : &warm);
    warm = outcome.y;
    total_iterations += outcome.iterations;
    return outcome;
  };
  auto defect_of = [&](const MinimizeOutcome& outcome) {
    const GridFunction y(grid, outcome.y);
    return eval_functional(constraint.g, y, problem.alpha, problem.beta) -
           constraint.target;
  };

  // Bracket scan.
  const std::size_t scan = std::max<std::size_t>(2, options.lambda_scan_points);
  double lo = options.lambda_lo, hi = options.lambda_hi;
  double lo_defect = 0.0, hi_defect = 0.0;
  bool have_bracket = false;
  double prev_lambda = 0.0, prev_defect = 0.0;
  MinimizeOutcome outcome;
  double lambda = 0.0, defect = 0.0;
  for (std::size_t j = 0; j < scan; ++j) {
    lambda = options.lambda_lo +
             (options.lambda_hi - options.lambda_lo) *
                 static_cast<double>(j) / static_cast<double>(scan - 1);
    outcome = inner(lambda);
    defect = defect_of(outcome);
    if (std::abs(defect) <= options.constraint_tol) {
      have_bracket = true;
      lo = hi = lambda;
      break;
    }
    if (j > 0 && std::signbit(defect) != std::signbit(prev_defect)) {
      lo = prev_lambda;
      lo_defect = prev_defect;
      hi = lambda;
      hi_defect = defect;
      have_bracket = true;
      break;
    }
    prev_lambda = lambda;
    prev_defect = defect;
  }
  if (!have_bracket) {
    throw BracketingError(
        "constraint defect keeps the same sign across lambda in [" +
        std::to_string(options.lambda_lo) + ", " +
        std::to_string(options.lambda_hi) + "]; last defect " +
        std::to_string(defect));
  }

  // Secant with bisection fallback inside the bracket.
  std::size_t refine = 0;
  while (std::abs(defect) > options.constraint_tol &&
         refine < options.lambda_max_iters && lo < hi) {
    double candidate = hi - hi_defect * (hi - lo) / (hi_defect - lo_defect);
    if (!(candidate > lo && candidate < hi)) candidate = 0.5 * (lo + hi);
    lambda = candidate;
    outcome = inner(lambda);
    defect = defect_of(outcome);
    if (std::signbit(defect) == std::signbit(lo_defect)) {
      lo = lambda;
      lo_defect = defect;
    } else {
      hi = lambda;
      hi_defect = defect;
    }
    ++refine;
  }

  SolveResult result =
      finish_result(problem, lambda, grid, std::move(outcome), options);
  result.lambda = lambda;
  result.lambda0 = 1.0;
  result.iterations = total_iterations;
  result.constraint_defect = defect;
  result.converged =
      result.converged && std::abs(defect) <= options.constraint_tol;

  // Normality diagnostic: the discrete constraint gradient must not vanish.
  {
    const DiscreteObjective ig(constraint.g, grid, problem.alpha, problem.beta);
    const auto g = ig.gradient(result.y.values());
    double sup = 0.0;
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
      sup = std::max(sup, std::abs(g[i]));
    }
    result.constraint_gradient_sup = sup;
  }
  return result;
}

AbnormalDiagnosis detect_abnormal(const VariationalProblem& problem,
                                  std::size_t n_nodes,
                                  const SolverOptions& options) {
  if (!problem.constraint) {
    throw ArgumentError("detect_abnormal requires a constraint");
  }
  // Candidate trajectory: the constrained solution when reachable, else
  // the unconstrained extremal.
  std::optional<GridFunction> candidate;
  try {
    candidate = solve_isoperimetric(problem, n_nodes, options).y;
  } catch (const BracketingError&) {
    VariationalProblem unconstrained = problem;
    unconstrained.constraint.reset();
    candidate = solve_fixed(unconstrained, n_nodes, options).y;
  }

  const ELReport report = el_residual(problem.constraint->g, *candidate,
                                      problem.alpha, problem.beta);
  AbnormalDiagnosis diagnosis;
  diagnosis.constraint_residual_sup = report.sup_norm;
  diagnosis.abnormal = report.sup_norm <= options.abnormal_tol;
  if (diagnosis.abnormal) diagnosis.multipliers = {0.0, 1.0};
  return diagnosis;
}

namespace {

struct TerminalTrial {
  double T = 0.0;
  MinimizeOutcome outcome;
  double objective = kInf;
};

// Golden-section over T with deterministic tie-breaking: lowest objective
// wins, equal objectives prefer the smaller T.
class TerminalSearch {
 public:
  TerminalSearch(double lo, double hi, double tol) : lo_(lo), hi_(hi), tol_(tol) {}

  template <typename Eval>
  TerminalTrial run(Eval&& eval) {
    record(lo_, eval(lo_));
    record(hi_, eval(hi_));
    const double phi = 0.6180339887498949;
    double c = hi_ - phi * (hi_ - lo_);
    double d = lo_ + phi * (hi_ - lo_);
    double fc = value_at(c, eval);
    double fd = value_at(d, eval);
    while (hi_ - lo_ > tol_) {
      if (fc <= fd) {
        hi_ = d;
        d = c;
        fd = fc;
        c = hi_ - phi * (hi_ - lo_);
        fc = value_at(c, eval);
      } else {
        lo_ = c;
        c = d;
        fc = fd;
        d = lo_ + phi * (hi_ - lo_);
        fd = value_at(d, eval);
      }
    }
    return std::move(best_);
  }

 private:
  template <typename Eval>
  double value_at(double T, Eval&& eval) {
    return record(T, eval(T));
  }

  double record(double T, MinimizeOutcome&& outcome) {
    const double f = outcome.objective;
    if (f < best_.objective ||
        (f == best_.objective && T < best_.T)) {
      best_ = TerminalTrial{T, std::move(outcome), f};
    }
    return f;
  }

  double lo_, hi_, tol_;
  TerminalTrial best_;
};

}  // namespace

SolveResult solve_free(const VariationalProblem& problem, std::size_t n_nodes,
                       const SolverOptions& options) {
  require_nodes(n_nodes);
  if (problem.constraint) {
    throw ArgumentError("free-boundary solves do not support constraints");
  }
  if (problem.lagrangian.uses(Var::W)) {
    throw ArgumentError(
        "free-boundary problems use Lagrangians in (x, y, v) only");
  }

  if (const auto* frv = std::get_if<FreeRightValue>(&problem.boundary)) {
    const Grid grid(problem.a, problem.b, n_nodes);
    MinimizeOutcome outcome = minimize_pinned(
        effective_lagrangian(problem, std::nullopt), grid, problem.alpha,
        problem.beta, frv->ya, 0.0, options, nullptr, /*free_right_value=*/true);
    SolveResult result = finish_result(problem, std::nullopt, grid,
                                       std::move(outcome), options);
    result.trans_report = transversality_check(
        problem.lagrangian, result.y, problem.alpha, grid.b(), FixedTFreeY{});
    return result;
  }

  if (const auto* frp = std::get_if<FreeRightPoint>(&problem.boundary)) {
    if (!(frp->t_lo <= frp->t_hi)) {
      throw ArgumentError("empty terminal range");
    }
    if (!(frp->t_lo > problem.a) || frp->t_hi > problem.b + 1e-12) {
      throw ArgumentError("terminal range must lie inside (a, b]");
    }
    const Lagrangian L_eff = effective_lagrangian(problem, std::nullopt);
    TerminalSearch search(frp->t_lo, frp->t_hi, options.terminal_tol);
    std::size_t total_iterations = 0;
    TerminalTrial best = search.run([&](double T) {
      const Grid grid(problem.a, T, n_nodes);
      MinimizeOutcome o =
          minimize_pinned(L_eff, grid, problem.alpha, problem.beta, frp->ya,
                          0.0, options, nullptr, /*free_right_value=*/true);
      total_iterations += o.iterations;
      return o;
    });
    const Grid grid(problem.a, best.T, n_nodes);
    SolveResult result = finish_result(problem, std::nullopt, grid,
                                       std::move(best.outcome), options);
    result.iterations = total_iterations;
    result.terminal = best.T;
    result.trans_report = transversality_check(
        problem.lagrangian, result.y, problem.alpha, best.T, FreeBoth{});
    return result;
  }

  const auto& curve = std::get<CurveBoundary>(problem.boundary);
  if (!(curve.t_lo <= curve.t_hi)) {
    throw ArgumentError("empty terminal range");
  }
  if (!(curve.t_lo > problem.a) || curve.t_hi > problem.b + 1e-12) {
    throw ArgumentError("terminal range must lie inside (a, b]");
  }
  if (curve.psi.uses_variable(Var::Y) || curve.psi.uses_variable(Var::V) ||
      curve.psi.uses_variable(Var::W)) {
    throw ArgumentError("the boundary curve must be a function of x only");
  }
  const CoeffLookup lookup = problem.lagrangian.coefficients()
                                 ? problem.lagrangian.coefficients()->lookup()
                                 : CoeffLookup();
  const auto psi_fn = [&](double x) {
    EvalContext ctx;
    ctx.x = x;
    ctx.coeffs = &lookup;
    return curve.psi.eval(ctx);
  };
  const Lagrangian L_eff = effective_lagrangian(problem, std::nullopt);
  TerminalSearch search(curve.t_lo, curve.t_hi, options.terminal_tol);
  std::size_t total_iterations = 0;
  TerminalTrial best = search.run([&](double T) {
    const Grid grid(problem.a, T, n_nodes);
    MinimizeOutcome o = minimize_pinned(L_eff, grid, problem.alpha,
                                        problem.beta, curve.ya, psi_fn(T),
                                        options, nullptr);
    total_iterations += o.iterations;
    return o;
  });
  const Grid grid(problem.a, best.T, n_nodes);
  SolveResult result = finish_result(problem, std::nullopt, grid,
                                     std::move(best.outcome), options);
  result.iterations = total_iterations;
  result.terminal = best.T;
  const auto dpsi_fn = [&, psi_fn](double x) {
    return derivative_on_interval(psi_fn, x, problem.a, problem.b);
  };
  result.trans_report =
      transversality_check(problem.lagrangian, result.y, problem.alpha,
                           best.T, OnCurve{psi_fn, dpsi_fn});
  return result;
}

SolveResult solve(const VariationalProblem& problem, std::size_t n_nodes,
                  const SolverOptions& options) {
  if (problem.constraint) return solve_isoperimetric(problem, n_nodes, options);
  if (std::holds_alternative<FixedBoundary>(problem.boundary)) {
    return solve_fixed(problem, n_nodes, options);
  }
  return solve_free(problem, n_nodes, options);
}

}  // namespace fracvar
