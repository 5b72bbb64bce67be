#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "himap/point_cloud.hpp"
#include "himap/rng.hpp"

namespace himap {

enum class RingVariant { left, right };

struct RingParams {
  double radius = 4.0;
  double spread = 0.35;  // per-axis standard deviation of each cluster
};

/// left: 10 clusters of 110 on a ring; right: 10 ring clusters plus one
/// central cluster, 100 points each.
PointCloud gen_ring_clusters(RingVariant variant, std::uint64_t seed, const RingParams& params = {});

struct EllipseParams {
  double center_range = 1.0;                       // centers uniform in [-c, c]^2
  double outer_min = 2.0, outer_max = 3.0;         // outer semi-axes
  double inner_ratio_min = 0.35, inner_ratio_max = 0.6;
};

/// `count` clouds of `n` points on an outer and an inner ellipse sharing a
/// random center, each with its own semi-axes and rotation.
std::vector<PointCloud> gen_nested_ellipses(std::size_t count, std::size_t n, std::uint64_t seed,
                                            const EllipseParams& params = {});

/// `bivariate`: mean (0.4x+0.3)(1,1), fixed rotation, eigenvalues around
/// (1+x/2, 1-x/2)/100. The four scalability rows use alpha(x), beta(x) with
/// noisy mean and eigenvalues; p = 5 uses a seeded random rotation.
enum class RegressionSetting { bivariate, p2_global, p2_local, p5_global, p5_local };

std::string to_string(RegressionSetting setting);
/// Throws ConfigError for unknown names.
RegressionSetting parse_regression_setting(std::string_view name);
std::size_t response_dim(RegressionSetting setting);

/// N(mean, F F^T) with F stored row-major, d x d.
struct GaussianLaw {
  std::vector<double> mean;
  std::vector<double> factor;

  std::size_t dim() const noexcept { return mean.size(); }
  PointCloud sample(std::size_t n, Philox& rng) const;
};

/// Rotation V (row-major p x p) used by the setting.
std::vector<double> setting_rotation(RegressionSetting setting, std::uint64_t seed);

/// The law at x with mean and eigenvalues set to their conditional means.
GaussianLaw mean_law(RegressionSetting setting, double x, std::span<const double> rotation);

struct GeneratedRegression {
  RegressionSetting setting = RegressionSetting::bivariate;
  std::vector<double> x;             // observed covariates
  std::vector<GaussianLaw> laws;     // realized random law per observed x
  std::vector<PointCloud> clouds;    // n draws from each law
  std::vector<double> heldout_x;     // evaluation covariates
  std::vector<double> rotation;
};

/// bivariate: m equispaced covariates on [0,1]; those at even 0-based index
/// are observed, the rest held out. Other settings: m observed X ~ U[-1/2,1/2]
/// and 50 equispaced held-out points. Draw k of response i depends only on
/// (seed, i, k), so smaller n gives a prefix of a larger n.
GeneratedRegression gen_regression(RegressionSetting setting, std::size_t m, std::size_t n,
                                   std::uint64_t seed);

/// Stratified representative of a law: pushforward, at `resolution` levels,
/// of the quantile map fitted to `draws` samples.
PointCloud truth_cloud(const GaussianLaw& law, std::size_t draws, std::size_t resolution,
                       std::uint64_t seed, std::uint64_t stream);

struct IndicatorGroups {
  std::vector<std::string> keys;       // first-appearance order
  std::vector<PointCloud> clouds;
  std::vector<std::string> columns;
  bool standardized = false;
  std::vector<double> center;          // per column, when standardized
  std::vector<double> scale;
};

/// Groups rows by `key_column` and keeps `columns` (empty: all others).
/// Throws DataError on a missing column, empty or non-numeric cell, or no rows.
IndicatorGroups load_indicator_csv(const std::filesystem::path& path, const std::string& key_column,
                                   const std::vector<std::string>& columns = {}, bool standardize = false);
IndicatorGroups load_indicator_csv(std::istream& in, const std::string& key_column,
                                   const std::vector<std::string>& columns = {}, bool standardize = false);

}  // namespace himap
