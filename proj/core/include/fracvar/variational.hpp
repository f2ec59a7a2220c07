#pragma once

#include <memory>
#include <optional>
#include <variant>

#include "fracvar/coefficients.hpp"
#include "fracvar/expression.hpp"
#include "fracvar/fractional_operators.hpp"
#include "fracvar/grid.hpp"

namespace fracvar {

/// Integrand L(x, y, v, w) bundled with its exact partials in y, v, w and
/// the coefficient bindings its expressions reference. v and w stand for
/// the left and right Caputo derivatives of the trajectory.
class Lagrangian {
 public:
  static Lagrangian from_expression(
      Expression value,
      std::shared_ptr<const CoefficientSet> coefficients = nullptr);

  /// c1 * a + c2 * b with exact zero/one pruning, so that degenerate
  /// combinations collapse to the original trees (and therefore to
  /// bit-identical results downstream).
  static Lagrangian linear_combination(double c1, const Lagrangian& a,
                                       double c2, const Lagrangian& b);

  const Expression& value() const { return value_; }
  const Expression& partial_y() const { return partial_y_; }
  const Expression& partial_v() const { return partial_v_; }
  const Expression& partial_w() const { return partial_w_; }
  const std::shared_ptr<const CoefficientSet>& coefficients() const {
    return coefficients_;
  }

  bool uses(Var v) const;

 private:
  Lagrangian(Expression value, Expression py, Expression pv, Expression pw,
             std::shared_ptr<const CoefficientSet> coefficients);

  Expression value_, partial_y_, partial_v_, partial_w_;
  std::shared_ptr<const CoefficientSet> coefficients_;
};

/// Integral constraint: int g(x, y, v, w) dx = target.
struct IsoConstraint {
  Lagrangian g;
  double target = 0.0;
};

/// Strong-form Euler-Lagrange residual on a grid. Norms cover only the
/// trusted interior; a boundary layer is excluded at each end because the
/// one-sided RL derivatives may blow up there.
struct ELReport {
  GridFunction residual;
  double sup_norm = 0.0;
  double l2_norm = 0.0;
  std::size_t excluded_each_side = 0;
};

struct FreeBoth {};
struct FixedTFreeY {};
struct FreeTFixedY {};
struct OnCurve {
  RealFunction psi;
  RealFunction dpsi;
};
using TransversalityMode =
    std::variant<FreeBoth, FixedTFreeY, FreeTFixedY, OnCurve>;

/// Natural-boundary-condition magnitudes at the terminal point. Which
/// fields are set depends on the mode.
struct TransversalityReport {
  std::optional<double> lagrangian_term;  // |L at T|
  std::optional<double> integral_term;    // |I^(1-alpha) of partial_v at T|
  std::optional<double> combined_term;    // mode-specific combination

  double max_magnitude() const;
};

/// Trapezoid value of int L(x, y, caputo_left y, caputo_right y) dx.
/// Evaluation failures carry the node index.
double eval_functional(const Lagrangian& L, const GridFunction& y,
                       FracOrder alpha, FracOrder beta);

/// Residual of  partial_y L + D_right^alpha[partial_v L] +
/// D_left^beta[partial_w L]  at the grid nodes.
ELReport el_residual(const Lagrangian& L, const GridFunction& y,
                     FracOrder alpha, FracOrder beta);

/// el_residual of the augmented integrand L + lambda * g.
ELReport iso_el_residual(const Lagrangian& L, const IsoConstraint& c,
                         double lambda, const GridFunction& y, FracOrder alpha,
                         FracOrder beta);

/// el_residual of lambda0 * L + lambda * g; the multipliers must not both
/// vanish.
ELReport abnormal_el_residual(const Lagrangian& L, const IsoConstraint& c,
                              double lambda0, double lambda,
                              const GridFunction& y, FracOrder alpha,
                              FracOrder beta);

/// Evaluates the natural boundary conditions at T for a Lagrangian in
/// (x, y, v) only; y must be sampled on a grid ending at T.
TransversalityReport transversality_check(const Lagrangian& L,
                                          const GridFunction& y,
                                          FracOrder alpha, double T,
                                          const TransversalityMode& mode);

}  // namespace fracvar
