#include "himap/frechet.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "himap/error.hpp"
#include "himap/ot.hpp"
#include "himap/parallel.hpp"

namespace himap {
namespace {

constexpr double kMaxCondition = 1e12;
constexpr double kWeightSumTolerance = 1e-9;

}  // namespace

RegressionDataset RegressionDataset::fit(std::size_t p, std::vector<double> x,
                                         std::span<const PointCloud> clouds, int depth) {
  if (clouds.size() < 2) throw DataError("regression needs at least two responses");
  for (const auto& c : clouds) {
    if (c.dim() != clouds.front().dim()) throw DataError("all responses must share one dimension");
  }
  std::vector<std::shared_ptr<const HimapTree>> trees(clouds.size());
  parallel_for(clouds.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const int l = depth > 0 ? depth : default_depth(clouds[i].size());
      trees[i] = std::make_shared<const HimapTree>(build_tree(clouds[i], l));
    }
  }, 1);
  RegressionDataset data;
  data.p = p;
  data.x = std::move(x);
  data.responses.reserve(trees.size());
  for (auto& t : trees) data.responses.emplace_back(std::move(t));
  data.validate();
  return data;
}

void RegressionDataset::validate() const {
  if (p == 0) throw DataError("predictor dimension must be >= 1");
  if (responses.size() < 2) throw DataError("regression needs at least two responses");
  if (x.size() != responses.size() * p) {
    throw DataError("predictor matrix has " + std::to_string(x.size()) + " entries, expected " +
                    std::to_string(responses.size() * p));
  }
  for (double v : x) {
    if (!std::isfinite(v)) throw DataError("predictors must be finite");
  }
  for (const auto& r : responses) {
    if (r.dim() != responses.front().dim()) throw DataError("all responses must share one dimension");
  }
}

RegressionDataset RegressionDataset::without(std::size_t i) const {
  RegressionDataset out;
  out.p = p;
  out.x.reserve(x.size() - p);
  out.responses.reserve(responses.size() - 1);
  for (std::size_t k = 0; k < responses.size(); ++k) {
    if (k == i) continue;
    const auto row = predictor(k);
    out.x.insert(out.x.end(), row.begin(), row.end());
    out.responses.push_back(responses[k]);
  }
  return out;
}

GlobalWeightModel::GlobalWeightModel(std::size_t p, std::span<const double> x)
    : p_(p), m_(p == 0 ? 0 : x.size() / p), x_(x.begin(), x.end()) {
  if (p_ == 0 || x.size() % p_ != 0 || m_ < 2) {
    throw DataError("global weights need an m x p predictor matrix with m >= 2");
  }
  using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const Eigen::Map<const Matrix> xm(x_.data(), static_cast<Eigen::Index>(m_), static_cast<Eigen::Index>(p_));
  const Eigen::RowVectorXd mu = xm.colwise().mean();
  const Matrix centered = xm.rowwise() - mu;
  const Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(m_);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  cond_ = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  if (!(cond_ <= kMaxCondition)) {
    throw LinAlgError("predictor covariance is singular or ill-conditioned", cond_);
  }
  const Eigen::MatrixXd inv = cov.ldlt().solve(Eigen::MatrixXd::Identity(cov.rows(), cov.cols()));

  mean_.assign(mu.data(), mu.data() + p_);
  cov_.resize(p_ * p_);
  inv_.resize(p_ * p_);
  for (std::size_t r = 0; r < p_; ++r) {
    for (std::size_t c = 0; c < p_; ++c) {
      cov_[r * p_ + c] = cov(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      inv_[r * p_ + c] = inv(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }
}

AffineWeights global_weights(const GlobalWeightModel& model, std::span<const double> query) {
  const std::size_t p = model.p_;
  if (query.size() != p) throw DomainError("query has dimension " + std::to_string(query.size()));
  std::vector<double> v(p, 0.0);  // Sigma^-1 (x - mu)
  for (std::size_t r = 0; r < p; ++r) {
    for (std::size_t c = 0; c < p; ++c) v[r] += model.inv_[r * p + c] * (query[c] - model.mean_[c]);
  }
  std::vector<double> lambdas(model.m_);
  const double inv_m = 1.0 / static_cast<double>(model.m_);
  for (std::size_t i = 0; i < model.m_; ++i) {
    double q = 0.0;
    for (std::size_t c = 0; c < p; ++c) q += (model.x_[i * p + c] - model.mean_[c]) * v[c];
    lambdas[i] = inv_m * (1.0 + q);
  }
  return AffineWeights(std::move(lambdas));
}

double kernel_value(Kernel kernel, double u) {
  switch (kernel) {
    case Kernel::epanechnikov:
      return std::abs(u) <= 1.0 ? 0.75 * (1.0 - u * u) : 0.0;
  }
  return 0.0;
}

LocalWeightModel::LocalWeightModel(std::vector<double> x, double bandwidth, Kernel kernel)
    : x_(std::move(x)), h_(bandwidth), kernel_(kernel) {
  if (!(h_ > 0.0) || !std::isfinite(h_)) throw ConfigError("bandwidth must be positive and finite");
  if (x_.size() < 2) throw DataError("local weights need at least two predictors");
}

AffineWeights local_weights(const LocalWeightModel& model, double query) {
  const std::size_t m = model.x_.size();
  const double h = model.h_;
  std::vector<double> k(m);
  double mu0 = 0.0, mu1 = 0.0, mu2 = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double u = model.x_[i] - query;
    k[i] = kernel_value(model.kernel_, u / h) / h;
    mu0 += k[i];
    mu1 += k[i] * u;
    mu2 += k[i] * u * u;
  }
  const double inv_m = 1.0 / static_cast<double>(m);
  mu0 *= inv_m;
  mu1 *= inv_m;
  mu2 *= inv_m;
  if (!(mu0 > 0.0)) {
    throw BandwidthError("no predictor within bandwidth " + std::to_string(h) + " of x = " +
                         std::to_string(query));
  }
  const double sigma0 = mu0 * mu2 - mu1 * mu1;
  if (!(sigma0 > 1e-10 * mu0 * mu2) || !(mu2 > 0.0)) {
    throw BandwidthError("fewer than two distinct predictors within bandwidth " + std::to_string(h) +
                         " of x = " + std::to_string(query));
  }
  std::vector<double> lambdas(m);
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    lambdas[i] = inv_m * k[i] * (mu2 - mu1 * (model.x_[i] - query)) / sigma0;
    total += lambdas[i];
  }
  for (auto& w : lambdas) w /= total;
  return AffineWeights(std::move(lambdas));
}

QuantileGrid predict(const RegressionDataset& data, const AffineWeights& weights, std::size_t resolution) {
  if (std::abs(weights.total() - 1.0) > kWeightSumTolerance) {
    throw WeightError("regression weights sum to " + std::to_string(weights.total()) + ", expected 1");
  }
  return barycenter_map(data.responses, weights, resolution);
}

MiseResult evaluate_mise(std::span<const QuantileGrid> predicted, std::span<const PointCloud> truth,
                         std::span<const double> xs, const MiseOptions& options) {
  if (predicted.size() != truth.size() || predicted.size() != xs.size()) {
    throw DomainError("predicted, truth and covariate lists differ in length");
  }
  if (predicted.empty()) throw DomainError("no evaluation covariates");
  MiseResult out;
  out.costs.resize(xs.size());
  std::vector<char> converged(xs.size(), 1);
  SinkhornOptions so;
  so.epsilon = options.epsilon;
  so.max_iterations = options.max_iterations;
  so.tolerance = options.tolerance;
  parallel_for(xs.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t k = lo; k < hi; ++k) {
      const SinkhornResult r = sinkhorn_cost(grid_cloud(predicted[k]), truth[k], so);
      out.costs[k] = r.cost;
      converged[k] = r.converged ? 1 : 0;
    }
  }, 1);
  out.all_converged = std::all_of(converged.begin(), converged.end(), [](char c) { return c != 0; });

  if (xs.size() == 1) {
    out.mise = out.costs[0];
    return out;
  }
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  const double span = xs[order.back()] - xs[order.front()];
  if (!(span > 0.0)) {
    out.mise = std::accumulate(out.costs.begin(), out.costs.end(), 0.0) / static_cast<double>(xs.size());
    return out;
  }
  double area = 0.0;
  for (std::size_t k = 1; k < order.size(); ++k) {
    const double dx = xs[order[k]] - xs[order[k - 1]];
    area += 0.5 * dx * (out.costs[order[k]] + out.costs[order[k - 1]]);
  }
  out.mise = area / span;
  return out;
}

namespace {

AffineWeights weights_for(const RegressionDataset& data, Scheme scheme, double bandwidth,
                          std::span<const double> query) {
  if (scheme == Scheme::global) return global_weights(GlobalWeightModel(data.p, data.x), query);
  if (data.p != 1) throw ConfigError("local weights support a scalar predictor only");
  return local_weights(LocalWeightModel(data.x, bandwidth), query[0]);
}

}  // namespace

LooResult leave_one_out(const RegressionDataset& data, const LooOptions& options) {
  data.validate();
  const std::size_t m = data.size();
  if (m < 3) throw DataError("leave-one-out needs at least three pairs");
  std::size_t resolution = options.resolution;
  if (resolution == 0) {
    int depth = 0;
    for (const auto& r : data.responses) depth = std::max(depth, r.depth());
    resolution = std::size_t{1} << depth;
  }
  LooResult out;
  out.errors.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const RegressionDataset rest = data.without(i);
    const AffineWeights w = weights_for(rest, options.scheme, options.bandwidth, data.predictor(i));
    const QuantileGrid fitted = predict(rest, w, resolution);
    const double dist = grid_distance(fitted, sample_grid(data.responses[i], resolution), 2.0);
    out.errors[i] = dist * dist;
  }
  out.mean_error = std::accumulate(out.errors.begin(), out.errors.end(), 0.0) / static_cast<double>(m);
  return out;
}

std::vector<double> bandwidth_grid(std::span<const double> x, std::size_t count) {
  if (x.size() < 2) throw DataError("bandwidth grid needs at least two predictors");
  const auto [lo_it, hi_it] = std::minmax_element(x.begin(), x.end());
  const double range = *hi_it - *lo_it;
  if (!(range > 0.0)) throw BandwidthError("predictors are all equal");
  const double h_min = range / static_cast<double>(x.size());
  const double h_max = range;
  std::vector<double> out(std::max<std::size_t>(count, 2));
  const double step = std::log(h_max / h_min) / static_cast<double>(out.size() - 1);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = h_min * std::exp(step * static_cast<double>(k));
  return out;
}

BandwidthChoice select_bandwidth(const RegressionDataset& data, std::vector<double> candidates,
                                 std::size_t resolution) {
  if (data.p != 1) throw ConfigError("bandwidth selection supports a scalar predictor only");
  BandwidthChoice out;
  out.candidates = candidates.empty() ? bandwidth_grid(data.x) : std::move(candidates);
  out.scores.assign(out.candidates.size(), std::numeric_limits<double>::quiet_NaN());
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < out.candidates.size(); ++k) {
    LooOptions opts;
    opts.scheme = Scheme::local;
    opts.bandwidth = out.candidates[k];
    opts.resolution = resolution;
    try {
      out.scores[k] = leave_one_out(data, opts).mean_error;
    } catch (const BandwidthError&) {
      continue;
    }
    if (out.scores[k] < best) {
      best = out.scores[k];
      out.bandwidth = out.candidates[k];
    }
  }
  if (!std::isfinite(best)) throw BandwidthError("no candidate bandwidth is feasible for leave-one-out");
  return out;
}

}  // namespace himap
