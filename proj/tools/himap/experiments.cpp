#include "experiments.hpp"

#include <algorithm>
#include <cmath>

#include "himap/error.hpp"

namespace himap::cli {
namespace {

constexpr std::uint64_t kTruthStream = std::uint64_t{1} << 40;

}  // namespace

RegressionRun run_regression(const RegressionDataset& data, std::span<const double> queries,
                             const RegressionRunConfig& config, const std::optional<TruthSource>& truth) {
  const std::size_t p = data.p;
  if (queries.empty() || queries.size() % p != 0) {
    throw DomainError("evaluation covariates must have " + std::to_string(p) + " columns");
  }
  const std::size_t count = queries.size() / p;
  RegressionRun run;

  if (config.scheme == Scheme::local) {
    if (config.bandwidth) {
      run.bandwidth = *config.bandwidth;
    } else {
      run.bandwidth = timed(run.timings, "bandwidth_selection", [&] {
        return select_bandwidth(data, {}, config.resolution).bandwidth;
      });
    }
  }

  run.grids = timed(run.timings, "predict", [&] {
    std::vector<QuantileGrid> grids;
    grids.reserve(count);
    std::optional<GlobalWeightModel> global;
    std::optional<LocalWeightModel> local;
    if (config.scheme == Scheme::global) {
      global.emplace(p, data.x);
    } else {
      if (p != 1) throw ConfigError("local regression needs a scalar predictor");
      local.emplace(data.x, *run.bandwidth);
    }
    for (std::size_t k = 0; k < count; ++k) {
      const std::span<const double> q = queries.subspan(k * p, p);
      const AffineWeights w = global ? global_weights(*global, q) : local_weights(*local, q[0]);
      grids.push_back(predict(data, w, config.resolution));
    }
    return grids;
  });

  std::vector<PointCloud> truth_clouds;
  std::vector<double> xs;
  if (truth) {
    if (p != 1) throw ConfigError("generated truth is defined for a scalar predictor");
    xs.assign(queries.begin(), queries.end());
    truth_clouds = timed(run.timings, "truth", [&] {
      std::vector<PointCloud> out(count);
      for (std::size_t k = 0; k < count; ++k) {
        const GaussianLaw law = mean_law(truth->setting, xs[k], truth->rotation);
        out[k] = truth_cloud(law, config.truth_draws, config.resolution, truth->seed, kTruthStream + k);
      }
      return out;
    });
    MiseOptions opts;
    opts.epsilon = config.epsilon;
    const MiseResult mise = timed(run.timings, "mise", [&] {
      return evaluate_mise(run.grids, truth_clouds, xs, opts);
    });
    run.mise = mise.mise;
    double dev = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
      const auto law = mean_law(truth->setting, xs[k], truth->rotation);
      const auto mean = grid_cloud(run.grids[k]).mean();
      for (std::size_t j = 0; j < mean.size(); ++j) dev += std::abs(mean[j] - law.mean[j]);
    }
    run.mean_abs_deviation = dev / static_cast<double>(count * static_cast<std::size_t>(data.dim()));
    for (std::size_t k = 0; k < count; ++k) {
      run.per_x.push_back(json{{"x", xs[k]},
                               {"predicted_mean", grid_cloud(run.grids[k]).mean()},
                               {"true_mean", mean_law(truth->setting, xs[k], truth->rotation).mean},
                               {"sinkhorn_cost", mise.costs[k]}});
    }
    return run;
  }

  for (std::size_t k = 0; k < count; ++k) {
    const std::span<const double> q = queries.subspan(k * p, p);
    run.per_x.push_back(json{{"x", std::vector<double>(q.begin(), q.end())},
                             {"predicted_mean", grid_cloud(run.grids[k]).mean()}});
  }
  return run;
}

}  // namespace himap::cli
