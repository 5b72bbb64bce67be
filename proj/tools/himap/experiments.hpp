#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "himap/datagen.hpp"
#include "himap/frechet.hpp"
#include "report.hpp"

namespace himap::cli {

struct RegressionRunConfig {
  Scheme scheme = Scheme::global;
  std::optional<double> bandwidth;  // local scheme; empty selects by leave-one-out
  std::size_t resolution = 256;
  std::size_t truth_draws = std::size_t{1} << 16;
  double epsilon = 0.0;
};

/// Known generating law, enabling MISE and mean-tracking summaries.
struct TruthSource {
  RegressionSetting setting;
  std::vector<double> rotation;
  std::uint64_t seed;
};

struct RegressionRun {
  json per_x = json::array();
  std::optional<double> mise;
  std::optional<double> mean_abs_deviation;
  std::optional<double> bandwidth;
  std::vector<QuantileGrid> grids;
  json timings = json::object();
};

/// Predicts at each query (rows of `queries`, p columns) and, when `truth`
/// is given, scores the predictions against the generating law.
RegressionRun run_regression(const RegressionDataset& data, std::span<const double> queries,
                             const RegressionRunConfig& config, const std::optional<TruthSource>& truth);

}  // namespace himap::cli
