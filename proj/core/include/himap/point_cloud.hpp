#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace himap {

/// An n x d matrix of support points carrying uniform mass 1/n each.
///
/// Storage is row-major. A default-constructed cloud is empty (n = d = 0);
/// every other constructor enforces n >= 1, d >= 1 and finite coordinates.
class PointCloud {
 public:
  PointCloud() = default;

  /// Takes ownership of `coords` (row-major, size n * dim).
  PointCloud(std::size_t dim, std::vector<double> coords);

  static PointCloud from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const noexcept { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  std::size_t dim() const noexcept { return dim_; }
  bool empty() const noexcept { return coords_.empty(); }

  std::span<const double> row(std::size_t i) const {
    return {coords_.data() + i * dim_, dim_};
  }
  double operator()(std::size_t i, std::size_t j) const { return coords_[i * dim_ + j]; }

  std::span<const double> data() const noexcept { return coords_; }

  std::vector<double> column(std::size_t j) const;
  std::vector<double> mean() const;

  friend bool operator==(const PointCloud&, const PointCloud&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> coords_;
};

}  // namespace himap
