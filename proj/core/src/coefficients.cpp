#include "fracvar/coefficients.hpp"

#include <algorithm>
#include <cmath>

#include "fracvar/errors.hpp"
#include "fracvar/special_functions.hpp"

namespace fracvar {

MlAlphaPowerCoefficient::MlAlphaPowerCoefficient(double alpha) : alpha_(alpha) {
  MLOrder check(alpha);  // validates positivity
}

double MlAlphaPowerCoefficient::eval(double x) const {
  if (x < 0.0) {
    throw EvaluationError("ml_alpha_power coefficient requires x >= 0, got " +
                          std::to_string(x));
  }
  return mittag_leffler(alpha_, std::pow(x, alpha_));
}

TabulatedCoefficient::TabulatedCoefficient(
    std::vector<std::pair<double, double>> samples)
    : samples_(std::move(samples)) {
  if (samples_.size() < 2) {
    throw DomainError("tabulated coefficient needs at least 2 samples");
  }
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (!std::isfinite(samples_[i].first) || !std::isfinite(samples_[i].second)) {
      throw DomainError("tabulated coefficient sample " + std::to_string(i) +
                        " is not finite");
    }
    if (i > 0 && !(samples_[i - 1].first < samples_[i].first)) {
      throw DomainError("tabulated coefficient abscissae must be strictly "
                        "increasing (sample " + std::to_string(i) + ")");
    }
  }
}

TabulatedCoefficient TabulatedCoefficient::from_grid_function(
    const GridFunction& f) {
  std::vector<std::pair<double, double>> samples(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    samples[i] = {f.grid().node(i), f[i]};
  }
  return TabulatedCoefficient(std::move(samples));
}

double TabulatedCoefficient::eval(double x) const {
  const double lo = samples_.front().first;
  const double hi = samples_.back().first;
  // Tolerate endpoint round-off from grid arithmetic.
  const double slack = 1e-9 * (hi - lo);
  if (x < lo - slack || x > hi + slack) {
    throw EvaluationError("tabulated coefficient evaluated at x=" +
                          std::to_string(x) + " outside [" +
                          std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  const double xc = std::clamp(x, lo, hi);
  const auto it = std::upper_bound(
      samples_.begin(), samples_.end(), xc,
      [](double value, const auto& s) { return value < s.first; });
  const std::size_t hi_idx = std::min(
      samples_.size() - 1,
      static_cast<std::size_t>(std::max<std::ptrdiff_t>(1, it - samples_.begin())));
  const auto& [x0, y0] = samples_[hi_idx - 1];
  const auto& [x1, y1] = samples_[hi_idx];
  const double t = (xc - x0) / (x1 - x0);
  return y0 + t * (y1 - y0);
}

void CoefficientSet::add(std::string name,
                         std::shared_ptr<const Coefficient> coefficient) {
  if (coefficient == nullptr) {
    throw ArgumentError("null coefficient for '" + name + "'");
  }
  const auto [it, inserted] = map_.emplace(std::move(name), std::move(coefficient));
  if (!inserted) {
    throw SchemaError("duplicate coefficient '" + it->first + "'");
  }
}

bool CoefficientSet::contains(std::string_view name) const {
  return map_.find(name) != map_.end();
}

double CoefficientSet::eval(std::string_view name, double x) const {
  const auto it = map_.find(name);
  if (it == map_.end()) {
    throw EvaluationError("undeclared coefficient '" + std::string(name) + "'");
  }
  return it->second->eval(x);
}

std::shared_ptr<const Coefficient> CoefficientSet::get(
    std::string_view name) const {
  const auto it = map_.find(name);
  return it == map_.end() ? nullptr : it->second;
}

std::vector<std::string> CoefficientSet::names() const {
  std::vector<std::string> out;
  out.reserve(map_.size());
  for (const auto& [name, _] : map_) out.push_back(name);
  return out;
}

CoeffLookup CoefficientSet::lookup() const {
  return [this](std::string_view name, double x) { return eval(name, x); };
}

GridFunction CoefficientSet::sample(std::string_view name,
                                    const Grid& grid) const {
  const auto it = map_.find(name);
  if (it == map_.end()) {
    throw EvaluationError("undeclared coefficient '" + std::string(name) + "'");
  }
  const Coefficient& c = *it->second;
  return GridFunction::sample(grid, [&](double x) { return c.eval(x); });
}

}  // namespace fracvar
