#pragma once

// Seeded generators shared by the property tests.

#include <cstdint>
#include <random>
#include <vector>

#include "himap/point_cloud.hpp"

namespace testing_support {

inline himap::PointCloud gaussian_cloud(std::size_t n, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> z;
  std::vector<double> c(n * d);
  for (auto& v : c) v = z(gen);
  return himap::PointCloud(d, std::move(c));
}

inline himap::PointCloud uniform_cloud(std::size_t n, std::size_t d, std::uint64_t seed, double lo = 0.0,
                                       double hi = 1.0) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> c(n * d);
  for (auto& v : c) v = u(gen);
  return himap::PointCloud(d, std::move(c));
}

// Small integer coordinates: many exact ties and duplicate points.
inline himap::PointCloud lattice_cloud(std::size_t n, std::size_t d, std::uint64_t seed, int levels = 4) {
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<int> u(0, levels - 1);
  std::vector<double> c(n * d);
  for (auto& v : c) v = u(gen);
  return himap::PointCloud(d, std::move(c));
}

inline std::vector<std::vector<double>> rows_of(const himap::PointCloud& cloud) {
  std::vector<std::vector<double>> out(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) out[i].assign(cloud.row(i).begin(), cloud.row(i).end());
  return out;
}

}  // namespace testing_support
