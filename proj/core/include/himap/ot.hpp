#pragma once

// Small-scale optimal-transport references used to check the quantile-map
// geometry: exact W2 between equal-size uniform clouds (linear assignment),
// exact 1D W2 from sorted samples, and entropic (Sinkhorn) transport cost.

#include <cstddef>
#include <vector>

#include "himap/point_cloud.hpp"

namespace himap {

inline constexpr std::size_t kMaxAssignmentSize = 4096;

/// Dense rows x cols matrix of squared Euclidean distances.
struct CostMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  double operator()(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
};

CostMatrix squared_distances(const PointCloud& a, const PointCloud& b);

struct Assignment {
  std::vector<std::size_t> row_to_col;
  double total_cost = 0.0;
};

/// Minimum-cost perfect matching on a square cost matrix. Jonker-Volgenant
/// shortest augmenting paths after column reduction and reduction transfer.
Assignment solve_assignment(const CostMatrix& cost);

/// sqrt(n^-1 min_perm sum |a_i - b_perm(i)|^2). Throws DomainError on size or
/// dimension mismatch, ResourceError for n > kMaxAssignmentSize.
double w2_exact_assignment(const PointCloud& a, const PointCloud& b);

/// sqrt(n^-1 sum (a_(i) - b_(i))^2) over order statistics. Throws
/// DomainError unless both clouds are one-dimensional with equal size.
double w2_exact_1d(const PointCloud& a, const PointCloud& b);

struct SinkhornOptions {
  /// Entropic parameter; <= 0 selects 0.01 * mean squared distance.
  double epsilon = 0.0;
  int max_iterations = 500;
  /// L1 violation of the row marginal at which iteration stops.
  double tolerance = 1e-7;
};

struct SinkhornResult {
  double cost = 0.0;  // <plan, squared distances>
  double epsilon = 0.0;
  double marginal_violation = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Log-domain Sinkhorn between uniform clouds (sizes may differ). Never
/// throws on non-convergence: `converged` and `marginal_violation` report it.
/// Throws DomainError on dimension mismatch.
SinkhornResult sinkhorn_cost(const PointCloud& a, const PointCloud& b,
                             const SinkhornOptions& options = {});

/// Convenience overload with an explicit epsilon.
SinkhornResult sinkhorn_cost(const PointCloud& a, const PointCloud& b, double epsilon);

}  // namespace himap
