#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace fracvar {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached rule with n points; nodes are found by Newton iteration on the
/// Legendre polynomial, accurate to machine precision.
const GaussRule& gauss_legendre(std::size_t n);

/// Single-panel Gauss-Legendre estimate of the integral of f over [lo, hi].
double gauss_panel(const std::function<double(double)>& f, double lo,
                   double hi, const GaussRule& rule);

/// Adaptive bisection with 32-point Gauss-Legendre panels. The local
/// acceptance test compares one panel against its two halves; abs_tol is
/// distributed over panels proportionally to width. Throws AccuracyError
/// when the recursion depth limit is reached before the tolerance.
double adaptive_integrate(const std::function<double(double)>& f, double lo,
                          double hi, double abs_tol, int max_depth = 48);

/// Tanh-sinh (double-exponential) quadrature with step halving until two
/// successive levels agree within abs_tol. Integrable endpoint
/// singularities are fine; f is never evaluated exactly at lo or hi.
/// Throws AccuracyError when the level cap is reached first.
double de_integrate(const std::function<double(double)>& f, double lo,
                    double hi, double abs_tol, int max_level = 12);

}  // namespace fracvar
