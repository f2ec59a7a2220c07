#include "fracvar/variational.hpp"

#include <cmath>
#include <utility>
#include <vector>

#include "fracvar/errors.hpp"

namespace fracvar {

Lagrangian::Lagrangian(Expression value, Expression py, Expression pv,
                       Expression pw,
                       std::shared_ptr<const CoefficientSet> coefficients)
    : value_(std::move(value)),
      partial_y_(std::move(py)),
      partial_v_(std::move(pv)),
      partial_w_(std::move(pw)),
      coefficients_(std::move(coefficients)) {}

Lagrangian Lagrangian::from_expression(
    Expression value, std::shared_ptr<const CoefficientSet> coefficients) {
  Expression py = value.differentiate(Var::Y);
  Expression pv = value.differentiate(Var::V);
  Expression pw = value.differentiate(Var::W);
  return Lagrangian(std::move(value), std::move(py), std::move(pv),
                    std::move(pw), std::move(coefficients));
}

namespace {

std::shared_ptr<const CoefficientSet> merge_coefficients(
    const std::shared_ptr<const CoefficientSet>& a,
    const std::shared_ptr<const CoefficientSet>& b) {
  if (a == b || b == nullptr) return a;
  if (a == nullptr) return b;
  auto merged = std::make_shared<CoefficientSet>();
  for (const auto& name : a->names()) merged->add(name, a->get(name));
  for (const auto& name : b->names()) {
    const auto coeff = b->get(name);
    if (a->contains(name)) {
      if (a->get(name) != coeff) {
        throw SchemaError("conflicting definitions of coefficient '" + name +
                          "'");
      }
      continue;
    }
    merged->add(name, coeff);
  }
  return merged;
}

}  // namespace

Lagrangian Lagrangian::linear_combination(double c1, const Lagrangian& a,
                                          double c2, const Lagrangian& b) {
  return Lagrangian(
      a.value_.scaled(c1).plus(b.value_.scaled(c2)),
      a.partial_y_.scaled(c1).plus(b.partial_y_.scaled(c2)),
      a.partial_v_.scaled(c1).plus(b.partial_v_.scaled(c2)),
      a.partial_w_.scaled(c1).plus(b.partial_w_.scaled(c2)),
      merge_coefficients(a.coefficients_, b.coefficients_));
}

bool Lagrangian::uses(Var v) const {
  return value_.uses_variable(v) || partial_y_.uses_variable(v) ||
         partial_v_.uses_variable(v) || partial_w_.uses_variable(v);
}

double TransversalityReport::max_magnitude() const {
  double m = 0.0;
  if (lagrangian_term) m = std::max(m, *lagrangian_term);
  if (integral_term) m = std::max(m, *integral_term);
  if (combined_term) m = std::max(m, *combined_term);
  return m;
}

namespace {

// Per-grid evaluation plan: Caputo columns for v/w (only when referenced)
// plus sampled columns for every coefficient the expressions mention.
class NodeEvaluator {
 public:
  NodeEvaluator(const Lagrangian& L, const GridFunction& y, FracOrder alpha,
                FracOrder beta)
      : grid_(y.grid()), y_(y) {
    if (L.uses(Var::V)) v_ = caputo_left(y, alpha);
    if (L.uses(Var::W)) w_ = caputo_right(y, beta);

    std::set<std::string> names;
    for (const Expression* e :
         {&L.value(), &L.partial_y(), &L.partial_v(), &L.partial_w()}) {
      const auto more = e->coefficient_names();
      names.insert(more.begin(), more.end());
    }
    const auto& coeffs = L.coefficients();
    for (const auto& name : names) {
      if (coeffs == nullptr) {
        throw EvaluationError("coefficient '" + name + "' is not bound");
      }
      columns_.emplace_back(name, coeffs->sample(name, grid_));
    }
    lookup_ = [this](std::string_view name, double) {
      for (const auto& [n, column] : columns_) {
        if (n == name) return column[node_];
      }
      throw EvaluationError("undeclared coefficient '" + std::string(name) +
                            "'");
    };
  }

  double eval(const Expression& e, std::size_t i) {
    node_ = i;
    EvalContext ctx;
    ctx.x = grid_.node(i);
    ctx.y = y_[i];
    ctx.v = v_ ? (*v_)[i] : 0.0;
    ctx.w = w_ ? (*w_)[i] : 0.0;
    ctx.coeffs = &lookup_;
    try {
      return e.eval(ctx);
    } catch (const EvaluationError& err) {
      if (err.node()) throw;
      throw EvaluationError(err.what(), i);
    }
  }

  GridFunction column(const Expression& e) {
    std::vector<double> values(grid_.size());
    for (std::size_t i = 0; i < grid_.size(); ++i) values[i] = eval(e, i);
    return GridFunction(grid_, std::move(values));
  }

  const Grid& grid() const { return grid_; }
  double v_at(std::size_t i) const { return v_ ? (*v_)[i] : 0.0; }

 private:
  Grid grid_;
  const GridFunction& y_;
  std::optional<GridFunction> v_;
  std::optional<GridFunction> w_;
  std::vector<std::pair<std::string, GridFunction>> columns_;
  CoeffLookup lookup_;
  std::size_t node_ = 0;
};

double trapezoid(const GridFunction& f) {
  const std::size_t n = f.size();
  double acc = 0.5 * (f[0] + f[n - 1]);
  for (std::size_t i = 1; i + 1 < n; ++i) acc += f[i];
  return acc * f.grid().spacing();
}

ELReport make_report(GridFunction residual) {
  const std::size_t n = residual.size();
  const std::size_t skip = boundary_exclusion(n);
  double sup = 0.0;
  double sq = 0.0;
  for (std::size_t i = skip; i + skip < n; ++i) {
    const double r = residual[i];
    sup = std::max(sup, std::abs(r));
    sq += r * r;
  }
  ELReport report{std::move(residual), sup,
                  std::sqrt(sq * residual.grid().spacing()), skip};
  return report;
}

}  // namespace

double eval_functional(const Lagrangian& L, const GridFunction& y,
                       FracOrder alpha, FracOrder beta) {
  NodeEvaluator eval(L, y, alpha, beta);
  return trapezoid(eval.column(L.value()));
}

ELReport el_residual(const Lagrangian& L, const GridFunction& y,
                     FracOrder alpha, FracOrder beta) {
  NodeEvaluator eval(L, y, alpha, beta);
  const Grid& grid = y.grid();

  std::vector<double> residual(grid.size(), 0.0);
  if (!L.partial_y().is_zero()) {
    const GridFunction d2 = eval.column(L.partial_y());
    for (std::size_t i = 0; i < grid.size(); ++i) residual[i] += d2[i];
  }
  if (!L.partial_v().is_zero()) {
    const GridFunction p = eval.column(L.partial_v());
    const GridFunction dp = rl_derivative_right(p, alpha);
    for (std::size_t i = 0; i < grid.size(); ++i) residual[i] += dp[i];
  }
  if (!L.partial_w().is_zero()) {
    const GridFunction q = eval.column(L.partial_w());
    const GridFunction dq = rl_derivative_left(q, beta);
    for (std::size_t i = 0; i < grid.size(); ++i) residual[i] += dq[i];
  }
  return make_report(GridFunction(grid, std::move(residual)));
}

ELReport iso_el_residual(const Lagrangian& L, const IsoConstraint& c,
                         double lambda, const GridFunction& y, FracOrder alpha,
                         FracOrder beta) {
  const Lagrangian F = Lagrangian::linear_combination(1.0, L, lambda, c.g);
  return el_residual(F, y, alpha, beta);
}

ELReport abnormal_el_residual(const Lagrangian& L, const IsoConstraint& c,
                              double lambda0, double lambda,
                              const GridFunction& y, FracOrder alpha,
                              FracOrder beta) {
  if (lambda0 == 0.0 && lambda == 0.0) {
    throw ArgumentError("multipliers (lambda0, lambda) must not both vanish");
  }
  const Lagrangian K = Lagrangian::linear_combination(lambda0, L, lambda, c.g);
  return el_residual(K, y, alpha, beta);
}

TransversalityReport transversality_check(const Lagrangian& L,
                                          const GridFunction& y,
                                          FracOrder alpha, double T,
                                          const TransversalityMode& mode) {
  if (L.uses(Var::W)) {
    throw ArgumentError(
        "transversality conditions apply to Lagrangians in (x, y, v) only");
  }
  const Grid& grid = y.grid();
  const double slack = 1e-9 * (grid.b() - grid.a());
  if (T < grid.a() - slack || T > grid.b() + slack) {
    throw DomainError("terminal point T outside the grid range");
  }
  if (std::abs(T - grid.b()) > slack) {
    throw DomainError("grid must end at the terminal point T");
  }

  NodeEvaluator eval(L, y, alpha, alpha);
  const std::size_t n = grid.size();
  const double h = grid.spacing();

  // I^(1-alpha) of partial_v L, read one node before T: the pointwise
  // right integral vanishes identically at T, so the limit from the left
  // is the meaningful quantity; one step of the kernel already carries the
  // full h^(1-alpha) mass.
  const GridFunction p = eval.column(L.partial_v());
  const GridFunction ip = rl_integral_right(p, FracOrder(1.0 - alpha.value()));
  const double integral_term = ip[n - 2];

  const double lagrangian_at_T = eval.eval(L.value(), n - 1);
  const double dy_at_T = (3.0 * y[n - 1] - 4.0 * y[n - 2] + y[n - 3]) / (2.0 * h);

  TransversalityReport report;
  if (std::holds_alternative<FreeBoth>(mode)) {
    report.lagrangian_term = std::abs(lagrangian_at_T);
    report.integral_term = std::abs(integral_term);
  } else if (std::holds_alternative<FixedTFreeY>(mode)) {
    report.integral_term = std::abs(integral_term);
  } else if (std::holds_alternative<FreeTFixedY>(mode)) {
    report.combined_term =
        std::abs(lagrangian_at_T - dy_at_T * integral_term);
  } else {
    const auto& curve = std::get<OnCurve>(mode);
    const double dpsi = curve.dpsi(T);
    report.combined_term =
        std::abs((dpsi - dy_at_T) * integral_term + lagrangian_at_T);
  }
  return report;
}

}  // namespace fracvar
