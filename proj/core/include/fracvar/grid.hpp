#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace fracvar {

/// Uniform partition of [a, b] with n >= 3 nodes. Node i sits at a + i*h
/// with h = (b - a)/(n - 1); both are kept exactly as computed.
class Grid {
 public:
  Grid(double a, double b, std::size_t n_nodes);

  double a() const { return a_; }
  double b() const { return b_; }
  std::size_t size() const { return n_; }
  double spacing() const { return h_; }
  double node(std::size_t i) const { return a_ + static_cast<double>(i) * h_; }

  bool operator==(const Grid& other) const = default;

 private:
  double a_;
  double b_;
  std::size_t n_;
  double h_;
};

/// Real-valued function sampled at the nodes of a Grid. Immutable after
/// construction; every value must be finite.
class GridFunction {
 public:
  GridFunction(Grid grid, std::vector<double> values);

  static GridFunction sample(const Grid& grid,
                             const std::function<double(double)>& f);
  static GridFunction zeros(const Grid& grid);

  const Grid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

  /// Samples reversed in place-order: result_i = f_{n-1-i} on the same grid.
  GridFunction reversed() const;

  bool operator==(const GridFunction& other) const = default;

 private:
  Grid grid_;
  std::vector<double> values_;
};

/// Number of nodes dropped at each end of a grid when computing norms of
/// quantities whose one-sided derivatives are endpoint-singular.
std::size_t boundary_exclusion(std::size_t n_nodes);

}  // namespace fracvar
