#include "fracvar/grid.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "fracvar/errors.hpp"

namespace fracvar {

Grid::Grid(double a, double b, std::size_t n_nodes) : a_(a), b_(b), n_(n_nodes) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
    throw DomainError("grid requires finite endpoints with a < b");
  }
  if (n_nodes < 3) {
    throw DomainError("grid requires at least 3 nodes, got " +
                      std::to_string(n_nodes));
  }
  h_ = (b - a) / static_cast<double>(n_nodes - 1);
}

GridFunction::GridFunction(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw DomainError("grid function has " + std::to_string(values_.size()) +
                      " values for a grid of " + std::to_string(grid_.size()) +
                      " nodes");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw DomainError("grid function value at node " + std::to_string(i) +
                        " is not finite");
    }
  }
}

GridFunction GridFunction::sample(const Grid& grid,
                                  const std::function<double(double)>& f) {
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = f(grid.node(i));
  return GridFunction(grid, std::move(values));
}

GridFunction GridFunction::zeros(const Grid& grid) {
  return GridFunction(grid, std::vector<double>(grid.size(), 0.0));
}

GridFunction GridFunction::reversed() const {
  std::vector<double> values(values_.rbegin(), values_.rend());
  return GridFunction(grid_, std::move(values));
}

std::size_t boundary_exclusion(std::size_t n_nodes) {
  const auto frac = static_cast<std::size_t>(
      std::ceil(0.02 * static_cast<double>(n_nodes)));
  return frac < 2 ? 2 : frac;
}

}  // namespace fracvar
