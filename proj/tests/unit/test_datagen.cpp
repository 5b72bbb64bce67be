#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "himap/datagen.hpp"
#include "himap/error.hpp"

using namespace himap;

TEST(RingClusters, Counts) {
  const auto left = gen_ring_clusters(RingVariant::left, 1);
  const auto right = gen_ring_clusters(RingVariant::right, 1);
  EXPECT_EQ(left.size(), 1100u);
  EXPECT_EQ(right.size(), 1100u);
  EXPECT_EQ(left.dim(), 2u);
}

TEST(RingClusters, RightVariantHasCentralCluster) {
  const RingParams params;
  const auto right = gen_ring_clusters(RingVariant::right, 3, params);
  // Ten ring clusters of 100 then one centered cluster of 100.
  std::size_t near_center = 0;
  for (std::size_t i = 1000; i < 1100; ++i) {
    if (std::hypot(right(i, 0), right(i, 1)) < params.radius / 2) ++near_center;
  }
  EXPECT_EQ(near_center, 100u);
  for (std::size_t c = 0; c < 10; ++c) {
    double mx = 0.0, my = 0.0;
    for (std::size_t k = 0; k < 100; ++k) {
      mx += right(c * 100 + k, 0) / 100.0;
      my += right(c * 100 + k, 1) / 100.0;
    }
    EXPECT_NEAR(std::hypot(mx, my), params.radius, 0.2);
  }
}

TEST(RingClusters, Deterministic) {
  EXPECT_EQ(gen_ring_clusters(RingVariant::left, 9), gen_ring_clusters(RingVariant::left, 9));
  EXPECT_NE(gen_ring_clusters(RingVariant::left, 9), gen_ring_clusters(RingVariant::left, 10));
}

TEST(NestedEllipses, CountsAndDeterminism) {
  const auto a = gen_nested_ellipses(30, 1000, 5);
  ASSERT_EQ(a.size(), 30u);
  for (const auto& c : a) EXPECT_EQ(c.size(), 1000u);
  EXPECT_EQ(a, gen_nested_ellipses(30, 1000, 5));
  EXPECT_THROW(gen_nested_ellipses(0, 10, 1), ConfigError);
}

TEST(Regression, BivariateDesign) {
  const auto g = gen_regression(RegressionSetting::bivariate, 101, 100, 1);
  ASSERT_EQ(g.x.size(), 51u);
  ASSERT_EQ(g.heldout_x.size(), 50u);
  EXPECT_EQ(g.x.front(), 0.0);
  EXPECT_EQ(g.x.back(), 1.0);
  EXPECT_NEAR(g.heldout_x.front(), 0.01, 1e-15);
  EXPECT_EQ(g.clouds.size(), 51u);
  EXPECT_EQ(g.clouds[0].size(), 100u);
}

TEST(Regression, BivariateMeanMatchesLaw) {
  const auto g = gen_regression(RegressionSetting::bivariate, 101, 20000, 3);
  const std::size_t mid = 25;  // x = 0.5
  ASSERT_NEAR(g.x[mid], 0.5, 1e-15);
  const auto mean = g.clouds[mid].mean();
  // Eigenvalues about 0.01 give per-coordinate sd about 0.1.
  const double band = 3.0 * 0.1 / std::sqrt(20000.0);
  EXPECT_NEAR(mean[0], 0.5, band);
  EXPECT_NEAR(mean[1], 0.5, band);
}

TEST(Regression, PrefixProperty) {
  const auto small = gen_regression(RegressionSetting::p2_global, 10, 50, 8);
  const auto large = gen_regression(RegressionSetting::p2_global, 10, 500, 8);
  EXPECT_EQ(small.x, large.x);
  for (std::size_t i = 0; i < 10; ++i) {
    for (std::size_t k = 0; k < 50 * 2; ++k) ASSERT_EQ(small.clouds[i].data()[k], large.clouds[i].data()[k]);
  }
}

TEST(Regression, ScalabilityDesigns) {
  for (auto s : {RegressionSetting::p2_global, RegressionSetting::p2_local, RegressionSetting::p5_global,
                 RegressionSetting::p5_local}) {
    const auto g = gen_regression(s, 50, 20, 2);
    EXPECT_EQ(g.x.size(), 50u);
    for (double x : g.x) {
      EXPECT_GE(x, -0.5);
      EXPECT_LE(x, 0.5);
    }
    EXPECT_EQ(g.clouds[0].dim(), response_dim(s));
    EXPECT_EQ(g.heldout_x.size(), 50u);
  }
}

TEST(Regression, GlobalP2MeanLawFollowsTable) {
  const auto v = setting_rotation(RegressionSetting::p2_global, 1);
  const auto law = mean_law(RegressionSetting::p2_global, 0.2, v);
  EXPECT_EQ(law.mean, (std::vector<double>{0.2, 0.2}));
  // Covariance V diag(1.2, 1.2) V^T = 1.2 I.
  const auto& f = law.factor;
  EXPECT_NEAR(f[0] * f[0] + f[1] * f[1], 1.2, 1e-12);
  EXPECT_NEAR(f[0] * f[2] + f[1] * f[3], 0.0, 1e-12);
}

TEST(Regression, RandomRotationIsOrthonormal) {
  const auto q = setting_rotation(RegressionSetting::p5_local, 4);
  for (int a = 0; a < 5; ++a) {
    for (int b = 0; b < 5; ++b) {
      double dot = 0.0;
      for (int r = 0; r < 5; ++r) dot += q[r * 5 + a] * q[r * 5 + b];
      EXPECT_NEAR(dot, a == b ? 1.0 : 0.0, 1e-12);
    }
  }
  EXPECT_EQ(q, setting_rotation(RegressionSetting::p5_local, 4));
}

TEST(Regression, SettingNames) {
  for (auto s : {RegressionSetting::bivariate, RegressionSetting::p2_global, RegressionSetting::p5_local}) {
    EXPECT_EQ(parse_regression_setting(to_string(s)), s);
  }
  EXPECT_THROW(parse_regression_setting("p3"), ConfigError);
}

TEST(Regression, TruthCloudHasResolutionPoints) {
  const auto v = setting_rotation(RegressionSetting::bivariate, 0);
  const auto law = mean_law(RegressionSetting::bivariate, 0.5, v);
  const auto c = truth_cloud(law, 4096, 256, 1, 99);
  EXPECT_EQ(c.size(), 256u);
  const auto m = c.mean();
  EXPECT_NEAR(m[0], 0.5, 0.02);
}

TEST(IndicatorCsv, GroupsInFirstAppearanceOrder) {
  std::istringstream in("month,temp,rain\n1,10.5,3\n2,11,4\n1,9.5,5\n");
  const auto g = load_indicator_csv(in, "month");
  ASSERT_EQ(g.keys, (std::vector<std::string>{"1", "2"}));
  EXPECT_EQ(g.clouds[0], PointCloud(2, {10.5, 3, 9.5, 5}));
  EXPECT_EQ(g.clouds[1], PointCloud(2, {11, 4}));
  EXPECT_FALSE(g.standardized);
}

TEST(IndicatorCsv, ColumnSubsetAndTwelveMonths) {
  std::ostringstream csv;
  csv << "year,month,a,b,c\n";
  for (int y = 0; y < 3; ++y) {
    for (int m = 1; m <= 12; ++m) csv << 2000 + y << ',' << m << ',' << m + y << ',' << 2 * m << ",7\n";
  }
  std::istringstream in(csv.str());
  const auto g = load_indicator_csv(in, "month", {"c", "a"});
  EXPECT_EQ(g.keys.size(), 12u);
  EXPECT_EQ(g.columns, (std::vector<std::string>{"c", "a"}));
  EXPECT_EQ(g.clouds[0], PointCloud(2, {7, 1, 7, 2, 7, 3}));
}

TEST(IndicatorCsv, Standardization) {
  std::istringstream in("k,a\n1,0\n1,2\n2,4\n2,6\n");
  const auto g = load_indicator_csv(in, "k", {}, true);
  EXPECT_TRUE(g.standardized);
  EXPECT_DOUBLE_EQ(g.center[0], 3.0);
  EXPECT_DOUBLE_EQ(g.scale[0], std::sqrt(5.0));
}

TEST(IndicatorCsv, Errors) {
  std::istringstream missing("k,a\n1,2\n");
  EXPECT_THROW(load_indicator_csv(missing, "month"), DataError);
  std::istringstream bad("k,a\n1,abc\n");
  EXPECT_THROW(load_indicator_csv(bad, "k"), DataError);
  std::istringstream empty_cell("k,a\n1,\n");
  EXPECT_THROW(load_indicator_csv(empty_cell, "k"), DataError);
  std::istringstream no_rows("k,a\n");
  EXPECT_THROW(load_indicator_csv(no_rows, "k"), DataError);
  std::istringstream wrong_col("k,a\n1,2\n");
  EXPECT_THROW(load_indicator_csv(wrong_col, "k", {"zzz"}), DataError);
}
