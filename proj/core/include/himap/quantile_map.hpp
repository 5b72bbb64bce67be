#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "himap/mass_tree.hpp"
#include "himap/point_cloud.hpp"

namespace himap {

/// Empirical quantile map t -> R^d of a fitted tree: at each t, the most
/// recent cut along every geometric coordinate on the t-path.
///
/// Coordinates never cut on the path report the midpoint of the root box on
/// that axis. An early-stopped single-sample leaf reports its sample's
/// coordinate for every split scheduled below it.
///
/// Maps are cheap to copy (the tree is shared) and safe for concurrent
/// evaluation. Small maps carry a dense table of the 2^L cell values.
class QuantileMap {
 public:
  QuantileMap() = default;
  explicit QuantileMap(std::shared_ptr<const HimapTree> tree);
  explicit QuantileMap(HimapTree tree);

  /// Fits a tree at `depth` (default_depth(n) when depth <= 0).
  static QuantileMap fit(const PointCloud& cloud, int depth = 0);

  int dim() const noexcept { return tree_ ? tree_->dim() : 0; }
  int depth() const noexcept { return tree_ ? tree_->depth() : 0; }
  const HimapTree& tree() const { return *tree_; }
  bool tabulated() const noexcept { return table_ != nullptr; }

  /// Throws DomainError for t outside [0, 1].
  std::vector<double> operator()(double t) const;
  void evaluate_into(double t, std::span<double> out) const;

  /// Value on depth-L cell `cell` (0 <= cell < 2^L).
  void cell_value(std::uint64_t cell, std::span<double> out) const;

 private:
  void traverse(const CellAddress& address, std::span<double> out) const;

  std::shared_ptr<const HimapTree> tree_;
  std::shared_ptr<const std::vector<double>> table_;
};

/// Values of a map (or of a combination of maps) at the cell midpoints
/// t_g = (g + 1/2) / G, g = 0..G-1. Row-major G x d.
struct QuantileGrid {
  std::size_t resolution = 0;
  std::size_t dim = 0;
  std::vector<double> values;

  double level(std::size_t g) const {
    return (static_cast<double>(g) + 0.5) / static_cast<double>(resolution);
  }
  std::span<const double> row(std::size_t g) const { return {values.data() + g * dim, dim}; }
  std::span<double> row(std::size_t g) { return {values.data() + g * dim, dim}; }

  friend bool operator==(const QuantileGrid&, const QuantileGrid&) = default;
};

std::vector<double> evaluate(const QuantileMap& map, double t);

/// Throws ConfigError if G == 0.
QuantileGrid sample_grid(const QuantileMap& map, std::size_t resolution);

/// The G-point cloud {Q(t_g)}; with G = 2^L the canonical discrete
/// representative of the fitted measure.
PointCloud pushforward(const QuantileMap& map, std::size_t resolution);

PointCloud grid_cloud(const QuantileGrid& grid);

/// 2^max(L_a, L_b): the coarsest grid on which both maps are integrated exactly.
std::size_t common_resolution(const QuantileMap& a, const QuantileMap& b);

/// (G^-1 sum_g |a(t_g) - b(t_g)|^r)^(1/r). G = 0 selects common_resolution.
/// Throws DomainError on dimension mismatch or r < 1.
double himap_distance(const QuantileMap& a, const QuantileMap& b, double r = 2.0,
                      std::size_t resolution = 0);

/// Same discrepancy between two already-sampled grids of equal shape.
double grid_distance(const QuantileGrid& a, const QuantileGrid& b, double r = 2.0);

}  // namespace himap
