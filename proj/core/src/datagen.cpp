#include "himap/datagen.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <unordered_map>

#include "himap/error.hpp"
#include "himap/io.hpp"
#include "himap/parallel.hpp"
#include "himap/quantile_map.hpp"

namespace himap {
namespace {

// Stream ids inside one seed.
constexpr std::uint64_t kDesignStream = 1;
constexpr std::uint64_t kRotationStream = 2;
constexpr std::uint64_t kMemberBase = std::uint64_t{1} << 20;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<double> matmul_diag_sqrt(std::span<const double> v, std::span<const double> lambda) {
  const std::size_t p = lambda.size();
  std::vector<double> f(p * p);
  for (std::size_t r = 0; r < p; ++r) {
    for (std::size_t c = 0; c < p; ++c) f[r * p + c] = v[r * p + c] * std::sqrt(lambda[c]);
  }
  return f;
}

std::vector<double> alpha(RegressionSetting s, double x) {
  const std::size_t p = response_dim(s);
  switch (s) {
    case RegressionSetting::bivariate:
      return std::vector<double>(p, 0.4 * x + 0.3);
    case RegressionSetting::p2_global:
    case RegressionSetting::p5_global:
      return std::vector<double>(p, x);
    case RegressionSetting::p2_local:
    case RegressionSetting::p5_local:
      return std::vector<double>(p, 0.5 * std::sin(kTwoPi * x));
  }
  return {};
}

std::vector<double> beta(RegressionSetting s, double x) {
  const std::size_t p = response_dim(s);
  switch (s) {
    case RegressionSetting::bivariate:
      return {1.0 + 0.5 * x, 1.0 - 0.5 * x};
    case RegressionSetting::p2_global:
    case RegressionSetting::p5_global:
      return std::vector<double>(p, x + 1.0);
    case RegressionSetting::p2_local:
    case RegressionSetting::p5_local:
      return std::vector<double>(p, std::cos(0.9 * std::numbers::pi * x));
  }
  return {};
}

// Eigenvalue scale: the bivariate setting divides its draw by 100.
double eigen_scale(RegressionSetting s) { return s == RegressionSetting::bivariate ? 0.01 : 1.0; }

std::vector<double> fixed_rotation() {
  const double h = std::numbers::sqrt2 / 2.0;
  return {h, h, -h, h};
}

}  // namespace

PointCloud gen_ring_clusters(RingVariant variant, std::uint64_t seed, const RingParams& params) {
  const std::size_t per = variant == RingVariant::left ? 110 : 100;
  const std::size_t clusters = variant == RingVariant::left ? 10 : 11;
  Philox rng(seed, kMemberBase);
  std::vector<double> coords;
  coords.reserve(2 * per * clusters);
  for (std::size_t c = 0; c < clusters; ++c) {
    double cx = 0.0, cy = 0.0;
    if (c < 10) {
      const double angle = kTwoPi * static_cast<double>(c) / 10.0;
      cx = params.radius * std::cos(angle);
      cy = params.radius * std::sin(angle);
    }
    for (std::size_t k = 0; k < per; ++k) {
      coords.push_back(cx + params.spread * rng.normal());
      coords.push_back(cy + params.spread * rng.normal());
    }
  }
  return PointCloud(2, std::move(coords));
}

std::vector<PointCloud> gen_nested_ellipses(std::size_t count, std::size_t n, std::uint64_t seed,
                                            const EllipseParams& params) {
  if (count == 0 || n < 2) throw ConfigError("ellipses need count >= 1 and n >= 2");
  std::vector<PointCloud> out(count);
  parallel_for(count, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      Philox rng(seed, kMemberBase + i);
      const double cx = rng.uniform(-params.center_range, params.center_range);
      const double cy = rng.uniform(-params.center_range, params.center_range);
      struct Ellipse {
        double a, b, rot;
      };
      Ellipse outer{rng.uniform(params.outer_min, params.outer_max),
                    rng.uniform(params.outer_min, params.outer_max), rng.uniform(0.0, std::numbers::pi)};
      Ellipse inner{outer.a * rng.uniform(params.inner_ratio_min, params.inner_ratio_max),
                    outer.b * rng.uniform(params.inner_ratio_min, params.inner_ratio_max),
                    rng.uniform(0.0, std::numbers::pi)};
      std::vector<double> coords;
      coords.reserve(2 * n);
      for (std::size_t k = 0; k < n; ++k) {
        const Ellipse& e = k < n / 2 ? outer : inner;
        const double theta = rng.uniform(0.0, kTwoPi);
        const double u = e.a * std::cos(theta);
        const double v = e.b * std::sin(theta);
        coords.push_back(cx + u * std::cos(e.rot) - v * std::sin(e.rot));
        coords.push_back(cy + u * std::sin(e.rot) + v * std::cos(e.rot));
      }
      out[i] = PointCloud(2, std::move(coords));
    }
  }, 1);
  return out;
}

std::string to_string(RegressionSetting setting) {
  switch (setting) {
    case RegressionSetting::bivariate: return "bivariate";
    case RegressionSetting::p2_global: return "p2-global";
    case RegressionSetting::p2_local: return "p2-local";
    case RegressionSetting::p5_global: return "p5-global";
    case RegressionSetting::p5_local: return "p5-local";
  }
  return "unknown";
}

RegressionSetting parse_regression_setting(std::string_view name) {
  for (auto s : {RegressionSetting::bivariate, RegressionSetting::p2_global, RegressionSetting::p2_local,
                 RegressionSetting::p5_global, RegressionSetting::p5_local}) {
    if (to_string(s) == name) return s;
  }
  throw ConfigError("unknown regression setting '" + std::string(name) +
                    "' (bivariate, p2-global, p2-local, p5-global, p5-local)");
}

std::size_t response_dim(RegressionSetting setting) {
  return setting == RegressionSetting::p5_global || setting == RegressionSetting::p5_local ? 5 : 2;
}

PointCloud GaussianLaw::sample(std::size_t n, Philox& rng) const {
  const std::size_t d = dim();
  std::vector<double> coords(n * d);
  std::vector<double> z(d);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& v : z) v = rng.normal();
    for (std::size_t r = 0; r < d; ++r) {
      double s = mean[r];
      for (std::size_t c = 0; c < d; ++c) s += factor[r * d + c] * z[c];
      coords[i * d + r] = s;
    }
  }
  return PointCloud(d, std::move(coords));
}

std::vector<double> setting_rotation(RegressionSetting setting, std::uint64_t seed) {
  const std::size_t p = response_dim(setting);
  if (p == 2) return fixed_rotation();
  // Gram-Schmidt on Gaussian columns gives a Haar-distributed orthonormal matrix.
  Philox rng(seed, kRotationStream);
  std::vector<double> q(p * p);
  for (std::size_t c = 0; c < p; ++c) {
    std::vector<double> v(p);
    for (auto& e : v) e = rng.normal();
    for (std::size_t k = 0; k < c; ++k) {
      double dot = 0.0;
      for (std::size_t r = 0; r < p; ++r) dot += v[r] * q[r * p + k];
      for (std::size_t r = 0; r < p; ++r) v[r] -= dot * q[r * p + k];
    }
    double norm = 0.0;
    for (double e : v) norm += e * e;
    norm = std::sqrt(norm);
    for (std::size_t r = 0; r < p; ++r) q[r * p + c] = v[r] / norm;
  }
  return q;
}

GaussianLaw mean_law(RegressionSetting setting, double x, std::span<const double> rotation) {
  std::vector<double> lambda = beta(setting, x);
  for (auto& l : lambda) l = std::abs(l) * eigen_scale(setting);
  return GaussianLaw{alpha(setting, x), matmul_diag_sqrt(rotation, lambda)};
}

GeneratedRegression gen_regression(RegressionSetting setting, std::size_t m, std::size_t n,
                                   std::uint64_t seed) {
  if (m < 2 || n == 0) throw ConfigError("regression needs m >= 2 and n >= 1");
  GeneratedRegression out;
  out.setting = setting;
  out.rotation = setting_rotation(setting, seed);
  if (setting == RegressionSetting::bivariate) {
    for (std::size_t k = 0; k < m; ++k) {
      const double x = static_cast<double>(k) / static_cast<double>(m - 1);
      (k % 2 == 0 ? out.x : out.heldout_x).push_back(x);
    }
  } else {
    Philox rng(seed, kDesignStream);
    for (std::size_t k = 0; k < m; ++k) out.x.push_back(rng.uniform(-0.5, 0.5));
    constexpr std::size_t kHeldOut = 50;
    for (std::size_t k = 0; k < kHeldOut; ++k) {
      out.heldout_x.push_back(-0.5 + (static_cast<double>(k) + 0.5) / static_cast<double>(kHeldOut));
    }
  }

  const std::size_t count = out.x.size();
  const std::size_t p = response_dim(setting);
  out.laws.resize(count);
  out.clouds.resize(count);
  parallel_for(count, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const double x = out.x[i];
      Philox law_rng(seed, kMemberBase + 2 * i);
      std::vector<double> mu = alpha(setting, x);
      if (setting != RegressionSetting::bivariate) {
        for (auto& v : mu) v += 0.1 * law_rng.normal();
      }
      std::vector<double> lambda = beta(setting, x);
      for (std::size_t k = 0; k < p; ++k) {
        lambda[k] = std::abs(lambda[k] + 0.1 * law_rng.normal()) * eigen_scale(setting);
      }
      out.laws[i] = GaussianLaw{std::move(mu), matmul_diag_sqrt(out.rotation, lambda)};
      Philox sample_rng(seed, kMemberBase + 2 * i + 1);
      out.clouds[i] = out.laws[i].sample(n, sample_rng);
    }
  }, 1);
  return out;
}

PointCloud truth_cloud(const GaussianLaw& law, std::size_t draws, std::size_t resolution,
                       std::uint64_t seed, std::uint64_t stream) {
  Philox rng(seed, stream);
  const PointCloud sample = law.sample(draws, rng);
  return pushforward(QuantileMap::fit(sample), resolution);
}

IndicatorGroups load_indicator_csv(std::istream& in, const std::string& key_column,
                                   const std::vector<std::string>& columns, bool standardize) {
  const CsvTable table = parse_csv(in);
  const std::size_t key = table.column(key_column);
  IndicatorGroups out;
  out.columns = columns;
  if (out.columns.empty()) {
    for (std::size_t k = 0; k < table.header.size(); ++k) {
      if (k != key) out.columns.push_back(table.header[k]);
    }
  }
  if (out.columns.empty()) throw DataError("no indicator columns selected");
  std::vector<std::size_t> idx;
  for (const auto& c : out.columns) idx.push_back(table.column(c));
  if (table.rows.empty()) throw DataError("indicator CSV has no data rows");

  const std::size_t d = idx.size();
  std::unordered_map<std::string, std::size_t> group_of;
  std::vector<std::vector<double>> coords;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if (row[key].empty()) throw DataError("empty group key in row " + std::to_string(r + 1));
    auto [it, fresh] = group_of.emplace(row[key], out.keys.size());
    if (fresh) {
      out.keys.push_back(row[key]);
      coords.emplace_back();
    }
    for (std::size_t j = 0; j < d; ++j) {
      const std::string context = "'" + out.columns[j] + "' in row " + std::to_string(r + 1);
      if (row[idx[j]].empty()) throw DataError("missing value for " + context);
      coords[it->second].push_back(parse_real(row[idx[j]], context));
    }
  }

  if (standardize) {
    out.standardized = true;
    out.center.assign(d, 0.0);
    out.scale.assign(d, 0.0);
    std::size_t total = 0;
    for (const auto& g : coords) {
      total += g.size() / d;
      for (std::size_t k = 0; k < g.size(); ++k) out.center[k % d] += g[k];
    }
    for (auto& c : out.center) c /= static_cast<double>(total);
    for (const auto& g : coords) {
      for (std::size_t k = 0; k < g.size(); ++k) {
        const double diff = g[k] - out.center[k % d];
        out.scale[k % d] += diff * diff;
      }
    }
    for (auto& s : out.scale) {
      s = std::sqrt(s / static_cast<double>(total));
      if (!(s > 0.0)) s = 1.0;
    }
    for (auto& g : coords) {
      for (std::size_t k = 0; k < g.size(); ++k) g[k] = (g[k] - out.center[k % d]) / out.scale[k % d];
    }
  }
  for (auto& g : coords) out.clouds.emplace_back(d, std::move(g));
  return out;
}

IndicatorGroups load_indicator_csv(const std::filesystem::path& path, const std::string& key_column,
                                   const std::vector<std::string>& columns, bool standardize) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return load_indicator_csv(in, key_column, columns, standardize);
}

}  // namespace himap
