#include "himap/point_cloud.hpp"

#include <cmath>
#include <string>

#include "himap/error.hpp"

namespace himap {

PointCloud::PointCloud(std::size_t dim, std::vector<double> coords)
    : dim_(dim), coords_(std::move(coords)) {
  if (dim_ == 0) throw DataError("point cloud dimension must be >= 1");
  if (coords_.empty()) throw DataError("point cloud must contain at least one point");
  if (coords_.size() % dim_ != 0) {
    throw DataError("coordinate count " + std::to_string(coords_.size()) +
                    " is not a multiple of dimension " + std::to_string(dim_));
  }
  for (std::size_t k = 0; k < coords_.size(); ++k) {
    if (!std::isfinite(coords_[k])) {
      throw DataError("non-finite coordinate at row " + std::to_string(k / dim_) +
                      ", column " + std::to_string(k % dim_));
    }
  }
}

PointCloud PointCloud::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw DataError("point cloud must contain at least one point");
  const std::size_t d = rows.front().size();
  std::vector<double> coords;
  coords.reserve(rows.size() * d);
  for (const auto& r : rows) {
    if (r.size() != d) throw DataError("ragged rows in point cloud");
    coords.insert(coords.end(), r.begin(), r.end());
  }
  return PointCloud(d, std::move(coords));
}

std::vector<double> PointCloud::column(std::size_t j) const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (*this)(i, j);
  return out;
}

std::vector<double> PointCloud::mean() const {
  std::vector<double> m(dim_, 0.0);
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) m[j] += (*this)(i, j);
  }
  for (auto& v : m) v /= static_cast<double>(n);
  return m;
}

}  // namespace himap
