#pragma once

// Discrete differential operators and the closed-form subproblem solvers of
// the ADMM splitting: isotropic shrinkage, simplex projection, weighted
// median and the screened Poisson solve (grad^T grad + I) u = rhs.

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "fuzzyseg/grid.hpp"

namespace fuzzyseg {

/// Forward differences on a grid.
///
/// periodic:  gx(i,j) = u(i, j+1 mod W) - u(i,j), gy likewise with rows.
/// symmetric: the difference across the last column/row is zero (Neumann).
class Gradient2D {
 public:
  Gradient2D(Grid grid, BoundaryRule boundary = BoundaryRule::periodic)
      : grid_(grid), boundary_(boundary) {}

  const Grid& grid() const { return grid_; }
  BoundaryRule boundary() const { return boundary_; }

  void apply(std::span<const double> u, std::span<double> gx,
             std::span<double> gy) const;

  /// Exact adjoint: out = grad^T (px, py).
  void adjoint(std::span<const double> px, std::span<const double> py,
               std::span<double> out) const;

 private:
  Grid grid_;
  BoundaryRule boundary_;
};

struct GradientPair {
  std::vector<double> x;
  std::vector<double> y;
};

GradientPair grad(Grid grid, std::span<const double> u,
                  BoundaryRule boundary = BoundaryRule::periodic);
std::vector<double> div_adjoint(Grid grid, std::span<const double> px,
                                std::span<const double> py,
                                BoundaryRule boundary = BoundaryRule::periodic);

using Vec2 = std::array<double, 2>;

/// v / |v| * max(|v| - tau, 0); the zero vector maps to zero.
Vec2 shrink(Vec2 v, double tau);

/// Euclidean projection onto {w : w_i >= 0, sum w_i = 1}.
/// `out` may alias `in`.
void project_simplex(std::span<const double> in, std::span<double> out);
std::vector<double> project_simplex(std::span<const double> in);

struct WeightedMedian {
  double low;     // I_[j*]
  double high;    // I_[j_* + 1]
  double chosen;  // the smallest minimizer, i.e. `low`
};

class DegenerateWeights : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Minimizer set of sum_j |values_j - c| * weights_j. Values are sorted
/// stably (ties keep input order). Throws DegenerateWeights when the total
/// weight is not positive, InvalidArgument on empty or mismatched input.
WeightedMedian weighted_median(std::span<const double> values,
                               std::span<const double> weights);

/// Values pre-sorted once so repeated weighted medians with changing weights
/// only need a cumulative scan.
class SortedSamples {
 public:
  SortedSamples() = default;
  explicit SortedSamples(std::span<const double> values);

  std::size_t size() const { return order_.size(); }

  /// Same contract as weighted_median(values, weights).
  WeightedMedian median(std::span<const double> weights) const;

 private:
  std::vector<std::size_t> order_;
  std::vector<double> sorted_;
};

/// Solves (grad^T grad + I) u = rhs exactly by diagonalizing the Laplacian:
/// 2-D DFT for the periodic rule, 2-D DCT-II for the symmetric rule.
class ScreenedPoissonSolver {
 public:
  explicit ScreenedPoissonSolver(Grid grid,
                                 BoundaryRule boundary = BoundaryRule::periodic);
  ~ScreenedPoissonSolver();
  ScreenedPoissonSolver(ScreenedPoissonSolver&&) noexcept;
  ScreenedPoissonSolver& operator=(ScreenedPoissonSolver&&) noexcept;
  ScreenedPoissonSolver(const ScreenedPoissonSolver&) = delete;
  ScreenedPoissonSolver& operator=(const ScreenedPoissonSolver&) = delete;

  const Grid& grid() const;

  /// `out` may alias `rhs`.
  void solve(std::span<const double> rhs, std::span<double> out);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::vector<double> solve_screened_poisson(
    Grid grid, std::span<const double> rhs,
    BoundaryRule boundary = BoundaryRule::periodic);

}  // namespace fuzzyseg
