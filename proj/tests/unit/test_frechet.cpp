#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "himap/error.hpp"
#include "himap/frechet.hpp"
#include "support.hpp"

using namespace himap;
using testing_support::gaussian_cloud;

namespace {

double sum(const AffineWeights& w) {
  return std::accumulate(w.lambdas().begin(), w.lambdas().end(), 0.0);
}

PointCloud shifted(const PointCloud& c, double by) {
  std::vector<double> v(c.data().begin(), c.data().end());
  for (auto& e : v) e += by;
  return PointCloud(c.dim(), std::move(v));
}

RegressionDataset small_dataset(std::size_t m, std::uint64_t seed, int depth = 6) {
  std::vector<double> x;
  std::vector<PointCloud> clouds;
  for (std::size_t i = 0; i < m; ++i) {
    const double xi = static_cast<double>(i) / static_cast<double>(m - 1);
    x.push_back(xi);
    clouds.push_back(shifted(gaussian_cloud(128, 2, seed + i), 2.0 * xi));
  }
  return RegressionDataset::fit(1, x, clouds, depth);
}

}  // namespace

TEST(GlobalWeights, PopulationCovarianceExample) {
  const GlobalWeightModel model(1, std::vector<double>{-1.0, 1.0});
  EXPECT_EQ(model.covariance()[0], 1.0);
  const auto w = global_weights(model, std::vector<double>{2.0});
  EXPECT_DOUBLE_EQ(w[0], -0.5);
  EXPECT_DOUBLE_EQ(w[1], 1.5);
}

TEST(GlobalWeights, UniformAtTheMean) {
  const std::vector<double> x{0.1, 2.0, 0.4, -1.0, 0.9, 0.3, 1.5, 0.0};  // 4 x 2
  const GlobalWeightModel model(2, x);
  const auto w = global_weights(model, model.mean());
  for (double l : w.lambdas()) EXPECT_NEAR(l, 0.25, 1e-15);
}

TEST(GlobalWeights, SumToOneAndGoNegativeOutsideHull) {
  std::mt19937_64 gen(17);
  std::normal_distribution<double> z;
  std::vector<double> x(30 * 3);
  for (auto& v : x) v = z(gen);
  const GlobalWeightModel model(3, x);
  for (int k = 0; k < 1000; ++k) {
    std::vector<double> q{3 * z(gen), 3 * z(gen), 3 * z(gen)};
    EXPECT_NEAR(sum(global_weights(model, q)), 1.0, 1e-9);
  }
  const auto far = global_weights(model, std::vector<double>{10.0, -10.0, 10.0});
  EXPECT_LT(*std::min_element(far.lambdas().begin(), far.lambdas().end()), 0.0);
}

TEST(GlobalWeights, SingularCovarianceReportsCondition) {
  const std::vector<double> x{1, 2, 2, 4, 3, 6};  // collinear columns
  try {
    GlobalWeightModel model(2, x);
    FAIL() << "expected LinAlgError";
  } catch (const LinAlgError& e) {
    EXPECT_GT(e.condition_number(), 1e12);
  }
  EXPECT_THROW(GlobalWeightModel(1, std::vector<double>{3.0, 3.0}), LinAlgError);
}

TEST(GlobalWeights, PrecisionInvertsCovariance) {
  const std::vector<double> x{0, 1, 1, 0, 2, 2, -1, 3};
  const GlobalWeightModel model(2, x);
  const auto& c = model.covariance();
  const auto& p = model.precision();
  for (int r = 0; r < 2; ++r) {
    for (int col = 0; col < 2; ++col) {
      double v = 0.0;
      for (int k = 0; k < 2; ++k) v += c[r * 2 + k] * p[k * 2 + col];
      EXPECT_NEAR(v, r == col ? 1.0 : 0.0, 1e-12);
    }
  }
}

TEST(LocalWeights, SymmetricDesignGivesKernelWeights) {
  const std::vector<double> x{-2, -1, 0, 1, 2};
  const LocalWeightModel model(x, 2.5);
  const auto w = local_weights(model, 0.0);
  double norm = 0.0;
  for (double v : x) norm += kernel_value(Kernel::epanechnikov, v / 2.5);
  for (std::size_t i = 0; i < x.size(); ++i) {
    EXPECT_GE(w[i], 0.0);
    EXPECT_NEAR(w[i], kernel_value(Kernel::epanechnikov, x[i] / 2.5) / norm, 1e-14);
  }
}

TEST(LocalWeights, SumToOneForRandomQueries) {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> x(40);
  for (auto& v : x) v = u(gen);
  const LocalWeightModel model(x, 0.2);
  for (int k = 0; k < 1000; ++k) EXPECT_NEAR(sum(local_weights(model, u(gen))), 1.0, 1e-9);
}

TEST(LocalWeights, BoundaryQueryHasNegativeWeights) {
  std::vector<double> x;
  for (int i = 0; i <= 10; ++i) x.push_back(0.1 * i);
  const auto w = local_weights(LocalWeightModel(x, 0.35), 0.02);
  EXPECT_LT(*std::min_element(w.lambdas().begin(), w.lambdas().end()), 0.0);
}

TEST(LocalWeights, Errors) {
  const std::vector<double> x{0.0, 0.5, 1.0};
  EXPECT_THROW(LocalWeightModel(x, 0.0), ConfigError);
  EXPECT_THROW(local_weights(LocalWeightModel(x, 0.2), 5.0), BandwidthError);
  // One point in the window: no local slope.
  EXPECT_THROW(local_weights(LocalWeightModel(x, 0.2), 0.0), BandwidthError);
}

TEST(KernelValue, IntegratesToOne) {
  double s = 0.0;
  const int n = 200000;
  for (int k = 0; k < n; ++k) s += kernel_value(Kernel::epanechnikov, -1.0 + (k + 0.5) * 2.0 / n);
  EXPECT_NEAR(s * 2.0 / n, 1.0, 1e-9);
  EXPECT_EQ(kernel_value(Kernel::epanechnikov, 1.5), 0.0);
}

TEST(Predict, IdenticalResponsesAreReproduced) {
  const auto cloud = gaussian_cloud(200, 2, 3);
  std::vector<PointCloud> clouds(4, cloud);
  const auto data = RegressionDataset::fit(1, {0.0, 1.0, 2.0, 3.0}, clouds, 7);
  const auto grid = predict(data, global_weights(GlobalWeightModel(1, data.x), std::vector<double>{7.0}));
  const auto ref = sample_grid(data.responses[0], 128);
  for (std::size_t k = 0; k < grid.values.size(); ++k) EXPECT_NEAR(grid.values[k], ref.values[k], 1e-12);
}

TEST(Predict, EqualsBarycenterBitForBit) {
  const auto data = small_dataset(6, 1);
  const auto w = global_weights(GlobalWeightModel(1, data.x), std::vector<double>{1.3});
  EXPECT_EQ(predict(data, w, 256), barycenter_map(data.responses, w, 256));
}

TEST(Predict, TranslationEquivariance) {
  const auto base = small_dataset(5, 10);
  std::vector<PointCloud> clouds;
  std::vector<double> x;
  for (std::size_t i = 0; i < 5; ++i) {
    const double xi = static_cast<double>(i) / 4.0;
    x.push_back(xi);
    clouds.push_back(shifted(shifted(gaussian_cloud(128, 2, 10 + i), 2.0 * xi), -1.25));
  }
  const auto moved = RegressionDataset::fit(1, x, clouds, 6);
  const auto w = global_weights(GlobalWeightModel(1, x), std::vector<double>{1.7});
  const auto a = predict(base, w);
  const auto b = predict(moved, w);
  for (std::size_t k = 0; k < a.values.size(); ++k) EXPECT_NEAR(b.values[k], a.values[k] - 1.25, 1e-12);
}

TEST(Predict, RejectsNonAffineWeights) {
  const auto data = small_dataset(3, 1);
  EXPECT_THROW(predict(data, AffineWeights({1.0, 1.0, 1.0})), WeightError);
}

TEST(Dataset, Validation) {
  std::vector<PointCloud> one{gaussian_cloud(10, 2, 1)};
  EXPECT_THROW(RegressionDataset::fit(1, {0.0}, one), DataError);
  std::vector<PointCloud> mixed{gaussian_cloud(10, 2, 1), gaussian_cloud(10, 3, 2)};
  EXPECT_THROW(RegressionDataset::fit(1, {0.0, 1.0}, mixed), DataError);
  std::vector<PointCloud> two{gaussian_cloud(10, 2, 1), gaussian_cloud(10, 2, 2)};
  EXPECT_THROW(RegressionDataset::fit(1, {0.0}, two), DataError);
}

TEST(Mise, SinglePointAndSelfBaseline) {
  const auto map = QuantileMap::fit(gaussian_cloud(64, 2, 1), 6);
  const auto grid = sample_grid(map, 64);
  const std::vector<QuantileGrid> pred{grid};
  const std::vector<PointCloud> truth{grid_cloud(grid)};
  const auto r = evaluate_mise(pred, truth, std::vector<double>{0.3});
  EXPECT_EQ(r.mise, r.costs[0]);
  EXPECT_GE(r.mise, 0.0);
  EXPECT_THROW(evaluate_mise(pred, truth, std::vector<double>{0.1, 0.2}), DomainError);
}

TEST(Mise, TrapezoidalAverage) {
  const PointCloud origin(1, {0.0});
  const std::vector<QuantileGrid> pred{QuantileGrid{1, 1, {1.0}}, QuantileGrid{1, 1, {2.0}},
                                       QuantileGrid{1, 1, {3.0}}};
  const std::vector<PointCloud> truth(3, origin);
  // costs 1, 4, 9 at x = 0, 1, 3: (2.5 * 1 + 6.5 * 2) / 3
  const auto r = evaluate_mise(pred, truth, std::vector<double>{0.0, 1.0, 3.0});
  EXPECT_NEAR(r.mise, (2.5 + 13.0) / 3.0, 1e-12);
}

TEST(LeaveOneOut, RefitsEveryPoint) {
  const auto data = small_dataset(3, 5);
  const auto r = leave_one_out(data, LooOptions{Scheme::global, 0.0, 64});
  EXPECT_EQ(r.errors.size(), 3u);
  for (double e : r.errors) EXPECT_GE(e, 0.0);
  EXPECT_EQ(leave_one_out(data, LooOptions{Scheme::global, 0.0, 64}).errors, r.errors);
}

TEST(LeaveOneOut, IdenticalResponsesScoreZero) {
  std::vector<PointCloud> clouds(4, gaussian_cloud(64, 2, 9));
  const auto data = RegressionDataset::fit(1, {0.0, 0.3, 0.6, 1.0}, clouds, 6);
  const auto r = leave_one_out(data, LooOptions{Scheme::global, 0.0, 64});
  for (double e : r.errors) EXPECT_NEAR(e, 0.0, 1e-24);
  EXPECT_THROW(leave_one_out(data.without(0).without(0), LooOptions{}), DataError);
}

TEST(Bandwidth, SelectsFeasibleCandidate) {
  const auto data = small_dataset(12, 20);
  const auto choice = select_bandwidth(data, {}, 64);
  EXPECT_GT(choice.bandwidth, 0.0);
  EXPECT_EQ(choice.candidates.size(), choice.scores.size());
  EXPECT_THROW(select_bandwidth(data, {1e-6}, 64), BandwidthError);
}
