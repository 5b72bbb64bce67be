#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "himap/point_cloud.hpp"
#include "himap/quantile_map.hpp"

namespace himap {

/// Real weights lambda_1..lambda_q, entries may be negative, total > 0.
class AffineWeights {
 public:
  /// Throws WeightError if empty, non-finite, or the total is not positive
  /// (no minimizer exists when the weights sum to zero or less).
  explicit AffineWeights(std::vector<double> lambdas);

  static AffineWeights uniform(std::size_t q);

  std::size_t size() const noexcept { return lambdas_.size(); }
  std::span<const double> lambdas() const noexcept { return lambdas_; }
  double operator[](std::size_t i) const { return lambdas_[i]; }
  double total() const noexcept { return total_; }

 private:
  std::vector<double> lambdas_;
  double total_ = 0.0;
};

/// Closed-form barycenter quantile grid: row g is
/// total^-1 * sum_i lambda_i * map_i(t_g). G = 0 selects 2^(max L_i).
/// Throws DomainError on dimension or count mismatch.
QuantileGrid barycenter_map(std::span<const QuantileMap> maps, const AffineWeights& weights,
                            std::size_t resolution = 0);

/// Same combination applied to grids already sampled on a common resolution.
QuantileGrid barycenter_grids(std::span<const QuantileGrid> grids, const AffineWeights& weights);

/// Pushforward of the barycenter quantile grid: its rows as a point cloud.
PointCloud barycenter_cloud(std::span<const QuantileMap> maps, const AffineWeights& weights,
                            std::size_t resolution = 0);

}  // namespace himap
