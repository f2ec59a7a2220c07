#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fracvar/expression.hpp"
#include "fracvar/grid.hpp"

namespace fracvar {

/// Named function of x that Lagrangian expressions reference as
/// "coeff:<name>": known data entering the integrand alongside the unknown
/// trajectory.
class Coefficient {
 public:
  virtual ~Coefficient() = default;
  virtual double eval(double x) const = 0;
};

/// c(x) = E_alpha(x^alpha) for x >= 0.
class MlAlphaPowerCoefficient : public Coefficient {
 public:
  explicit MlAlphaPowerCoefficient(double alpha);
  double eval(double x) const override;
  double alpha() const { return alpha_; }

 private:
  double alpha_;
};

/// Piecewise-linear interpolant of (x, value) samples with strictly
/// increasing x. Evaluation outside the sampled range errors.
class TabulatedCoefficient : public Coefficient {
 public:
  explicit TabulatedCoefficient(std::vector<std::pair<double, double>> samples);
  static TabulatedCoefficient from_grid_function(const GridFunction& f);
  double eval(double x) const override;

 private:
  std::vector<std::pair<double, double>> samples_;
};

/// Immutable registry of named coefficients shared by the Lagrangians of
/// one problem.
class CoefficientSet {
 public:
  void add(std::string name, std::shared_ptr<const Coefficient> coefficient);
  bool contains(std::string_view name) const;
  double eval(std::string_view name, double x) const;
  std::shared_ptr<const Coefficient> get(std::string_view name) const;
  std::vector<std::string> names() const;

  /// Lookup closure for Expression evaluation contexts.
  CoeffLookup lookup() const;

  /// Samples one coefficient at the nodes of a grid.
  GridFunction sample(std::string_view name, const Grid& grid) const;

 private:
  std::map<std::string, std::shared_ptr<const Coefficient>, std::less<>> map_;
};

}  // namespace fracvar
