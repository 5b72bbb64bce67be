#include "himap/barycenter.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "himap/error.hpp"
#include "himap/parallel.hpp"

namespace himap {

AffineWeights::AffineWeights(std::vector<double> lambdas) : lambdas_(std::move(lambdas)) {
  if (lambdas_.empty()) throw WeightError("at least one weight is required");
  for (double w : lambdas_) {
    if (!std::isfinite(w)) throw WeightError("weights must be finite");
    total_ += w;
  }
  if (!(total_ > 0.0)) {
    throw WeightError("weights sum to " + std::to_string(total_) +
                      "; the barycenter requires a positive total");
  }
}

AffineWeights AffineWeights::uniform(std::size_t q) {
  return AffineWeights(std::vector<double>(q, 1.0 / static_cast<double>(q)));
}

QuantileGrid barycenter_map(std::span<const QuantileMap> maps, const AffineWeights& weights,
                            std::size_t resolution) {
  if (maps.size() != weights.size()) {
    throw DomainError("got " + std::to_string(maps.size()) + " maps but " +
                      std::to_string(weights.size()) + " weights");
  }
  const int d = maps.front().dim();
  int max_depth = 0;
  for (const auto& m : maps) {
    if (m.dim() != d) throw DomainError("all maps must share one dimension");
    max_depth = std::max(max_depth, m.depth());
  }
  if (resolution == 0) resolution = std::size_t{1} << max_depth;

  QuantileGrid out;
  out.resolution = resolution;
  out.dim = static_cast<std::size_t>(d);
  out.values.assign(resolution * out.dim, 0.0);
  const double total = weights.total();
  parallel_for(resolution, [&](std::size_t lo, std::size_t hi) {
    std::vector<double> value(out.dim);
    for (std::size_t g = lo; g < hi; ++g) {
      auto row = out.row(g);
      const double t = out.level(g);
      for (std::size_t i = 0; i < maps.size(); ++i) {
        maps[i].evaluate_into(t, value);
        for (std::size_t j = 0; j < out.dim; ++j) row[j] += weights[i] * value[j];
      }
      for (auto& v : row) v /= total;
    }
  }, 512);
  return out;
}

QuantileGrid barycenter_grids(std::span<const QuantileGrid> grids, const AffineWeights& weights) {
  if (grids.size() != weights.size()) throw DomainError("grid count and weight count differ");
  QuantileGrid out;
  out.resolution = grids.front().resolution;
  out.dim = grids.front().dim;
  for (const auto& g : grids) {
    if (g.dim != out.dim) throw DomainError("all grids must share one dimension");
    if (g.resolution != out.resolution) throw DomainError("all grids must share one resolution");
  }
  out.values.assign(out.resolution * out.dim, 0.0);
  for (std::size_t i = 0; i < grids.size(); ++i) {
    for (std::size_t k = 0; k < out.values.size(); ++k) out.values[k] += weights[i] * grids[i].values[k];
  }
  for (auto& v : out.values) v /= weights.total();
  return out;
}

PointCloud barycenter_cloud(std::span<const QuantileMap> maps, const AffineWeights& weights,
                            std::size_t resolution) {
  return grid_cloud(barycenter_map(maps, weights, resolution));
}

}  // namespace himap
