#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "himap/barycenter.hpp"
#include "himap/point_cloud.hpp"
#include "himap/quantile_map.hpp"

namespace himap {

/// Predictor/response pairs. `x` is m x p, row-major; response i is the
/// quantile map fitted from its own internal sample.
struct RegressionDataset {
  std::size_t p = 1;
  std::vector<double> x;
  std::vector<QuantileMap> responses;

  /// Fits one map per cloud (depth 0 = default per cloud). Throws DataError
  /// unless m >= 2, x has m*p entries, and all clouds share a dimension.
  static RegressionDataset fit(std::size_t p, std::vector<double> x,
                               std::span<const PointCloud> clouds, int depth = 0);

  /// Throws DataError if the invariants above do not hold.
  void validate() const;

  std::size_t size() const noexcept { return responses.size(); }
  int dim() const { return responses.front().dim(); }
  std::span<const double> predictor(std::size_t i) const { return {x.data() + i * p, p}; }

  /// Copy with pair i removed.
  RegressionDataset without(std::size_t i) const;
};

/// Sample mean and population covariance (divisor m) of the predictors.
class GlobalWeightModel {
 public:
  /// Throws LinAlgError when the covariance condition number exceeds 1e12.
  GlobalWeightModel(std::size_t p, std::span<const double> x);

  std::size_t p() const noexcept { return p_; }
  std::size_t m() const noexcept { return m_; }
  const std::vector<double>& mean() const noexcept { return mean_; }
  const std::vector<double>& covariance() const noexcept { return cov_; }
  const std::vector<double>& precision() const noexcept { return inv_; }
  double condition_number() const noexcept { return cond_; }

 private:
  std::size_t p_;
  std::size_t m_;
  std::vector<double> x_;
  std::vector<double> mean_;
  std::vector<double> cov_;
  std::vector<double> inv_;
  double cond_ = 1.0;

  friend AffineWeights global_weights(const GlobalWeightModel&, std::span<const double>);
};

/// lambda_i = m^-1 (1 + (X_i - mu)^T Sigma^-1 (x - mu)).
AffineWeights global_weights(const GlobalWeightModel& model, std::span<const double> query);

enum class Kernel { epanechnikov };

/// K on [-1, 1], integrating to one.
double kernel_value(Kernel kernel, double u);

/// Local linear weights for a scalar predictor.
class LocalWeightModel {
 public:
  /// Throws ConfigError unless h > 0 and finite.
  LocalWeightModel(std::vector<double> x, double bandwidth, Kernel kernel = Kernel::epanechnikov);

  double bandwidth() const noexcept { return h_; }
  Kernel kernel() const noexcept { return kernel_; }
  std::span<const double> predictors() const noexcept { return x_; }

 private:
  std::vector<double> x_;
  double h_;
  Kernel kernel_;

  friend AffineWeights local_weights(const LocalWeightModel&, double);
};

/// lambda_i proportional to K_h(X_i - x)[mu2 - mu1 (X_i - x)] / sigma0^2,
/// renormalized to sum to one. Throws BandwidthError when the window is empty
/// or degenerate.
AffineWeights local_weights(const LocalWeightModel& model, double query);

/// Barycenter of the responses. Throws WeightError unless the weights sum to
/// one within 1e-9.
QuantileGrid predict(const RegressionDataset& data, const AffineWeights& weights,
                     std::size_t resolution = 0);

struct MiseOptions {
  double epsilon = 0.0;  // <= 0: scale-relative default per pair
  int max_iterations = 500;
  double tolerance = 1e-7;
};

struct MiseResult {
  double mise = 0.0;
  std::vector<double> costs;  // Sinkhorn cost at each covariate
  bool all_converged = true;
};

/// Trapezoidal average over `xs` of the Sinkhorn cost between each predicted
/// grid's cloud and the matching truth cloud. Throws DomainError on length
/// mismatch or empty input.
MiseResult evaluate_mise(std::span<const QuantileGrid> predicted, std::span<const PointCloud> truth,
                         std::span<const double> xs, const MiseOptions& options = {});

enum class Scheme { global, local };

struct LooOptions {
  Scheme scheme = Scheme::global;
  double bandwidth = 0.0;  // local scheme only
  std::size_t resolution = 0;
};

struct LooResult {
  /// Squared HiMAP distance between the held-out response and its prediction.
  std::vector<double> errors;
  double mean_error = 0.0;
};

/// Refit on m-1 pairs for each i and score the prediction at X_i. Throws
/// DataError for m < 3; weight errors propagate.
LooResult leave_one_out(const RegressionDataset& data, const LooOptions& options);

/// Logarithmic grid of candidate bandwidths spanning the predictor range.
std::vector<double> bandwidth_grid(std::span<const double> x, std::size_t count = 16);

struct BandwidthChoice {
  double bandwidth = 0.0;
  std::vector<double> candidates;
  std::vector<double> scores;  // NaN where the candidate was infeasible
};

/// Leave-one-out selection over `candidates` (empty: bandwidth_grid). Throws
/// BandwidthError when no candidate is feasible.
BandwidthChoice select_bandwidth(const RegressionDataset& data, std::vector<double> candidates = {},
                                 std::size_t resolution = 0);

}  // namespace himap
