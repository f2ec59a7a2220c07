#pragma once

#include <functional>

#include "fracvar/grid.hpp"

namespace fracvar {

using RealFunction = std::function<double(double)>;

/// Fractional order. Positive always; operators that require (0, 1)
/// validate on entry.
class FracOrder {
 public:
  explicit FracOrder(double value);
  double value() const { return value_; }

 private:
  double value_;
};

/// 4th-order five-point numerical derivative of f at t, with the stencil
/// shifted to stay inside [lo, hi].
double derivative_on_interval(const RealFunction& f, double t, double lo,
                              double hi);

// ---------------------------------------------------------------------------
// Pointwise operators on callables (singularity-absorbing quadrature).
// ---------------------------------------------------------------------------

/// Left Riemann-Liouville integral (1/Gamma(a)) int_a^x (x-t)^(a-1) f(t) dt.
double rl_integral_left(const RealFunction& f, FracOrder alpha, double a,
                        double x, double tol = 1e-10);

/// Right Riemann-Liouville integral (1/Gamma(a)) int_x^b (t-x)^(a-1) f(t) dt.
double rl_integral_right(const RealFunction& f, FracOrder alpha, double x,
                         double b, double tol = 1e-10);

/// Left Caputo derivative of order in (0,1) at a point: the order-(1-alpha)
/// left integral of f'. f must be C^1 on [a, x]; f' is taken numerically.
double caputo_left_point(const RealFunction& f, FracOrder alpha, double a,
                         double x, double tol = 1e-10);

/// Right Caputo derivative of order in (0,1) at a point.
double caputo_right_point(const RealFunction& f, FracOrder beta, double x,
                          double b, double tol = 1e-10);

// ---------------------------------------------------------------------------
// Grid operators (product-integration schemes on uniform grids).
// ---------------------------------------------------------------------------

/// Product-trapezoidal left RL integral of order mu > 0 at every node.
GridFunction rl_integral_left(const GridFunction& f, FracOrder mu);

/// Product-trapezoidal right RL integral at every node.
GridFunction rl_integral_right(const GridFunction& f, FracOrder mu);

/// L1-scheme left Caputo derivative, order in (0,1). Node 0 is 0 exactly.
GridFunction caputo_left(const GridFunction& f, FracOrder alpha);

/// Right Caputo derivative: the L1 scheme applied to the reflected samples,
/// reflected back. Last node is 0 exactly.
GridFunction caputo_right(const GridFunction& f, FracOrder beta);

/// Left RL derivative of order in (0,1): product-trapezoidal order-(1-beta)
/// integral followed by central differencing (one-sided second order at the
/// two boundary nodes, whose values may be endpoint-singular and are
/// excluded from residual norms downstream).
GridFunction rl_derivative_left(const GridFunction& f, FracOrder beta);

/// Right RL derivative: minus the derivative of the right integral.
GridFunction rl_derivative_right(const GridFunction& f, FracOrder alpha);

// ---------------------------------------------------------------------------
// Integration by parts check (order in (0,1)).
// ---------------------------------------------------------------------------

/// Residual magnitudes of the two Caputo integration-by-parts identities:
///   int g * caputo_left(f)  = int f * rl_der_right(g)  + [I_right^(1-a) g * f]
///   int g * caputo_right(f) = int f * rl_der_left(g)   - [I_left^(1-a) g * f]
/// where the bracket is evaluated between a and b.
struct IbpReport {
  double left_identity_residual = 0.0;
  double right_identity_residual = 0.0;

  bool within(double tol) const {
    return left_identity_residual <= tol && right_identity_residual <= tol;
  }
};

IbpReport verify_ibp(const RealFunction& f, const RealFunction& g,
                     FracOrder alpha, double a, double b, double quad_tol);

}  // namespace fracvar
