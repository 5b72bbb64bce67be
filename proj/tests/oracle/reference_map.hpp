#pragma once

// Brute-force reference for the empirical quantile map in one and two
// dimensions. Shares no code with the library: curve order comes from the
// classic iterative d2xy decoder on a 2^K x 2^K lattice, and every binary
// split is recovered geometrically as the axis separating the two halves of
// a contiguous range of curve indices.

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace oracle {

using Point = std::vector<double>;

inline std::pair<std::uint64_t, std::uint64_t> d2xy(std::uint64_t n, std::uint64_t d) {
  std::uint64_t x = 0, y = 0, t = d;
  for (std::uint64_t s = 1; s < n; s *= 2) {
    const std::uint64_t rx = 1 & (t / 2);
    const std::uint64_t ry = 1 & (t ^ rx);
    if (ry == 0) {
      if (rx == 1) {
        x = s - 1 - x;
        y = s - 1 - y;
      }
      std::swap(x, y);
    }
    x += s * rx;
    y += s * ry;
    t /= 4;
  }
  return {x, y};
}

class ReferenceMap {
 public:
  ReferenceMap(std::vector<Point> points, int dim, int depth)
      : pts_(std::move(points)), dim_(dim), depth_(depth) {
    if (dim != 1 && dim != 2) throw std::invalid_argument("reference supports d = 1, 2");
    const int k = (depth + dim - 1) / dim;
    const std::uint64_t side = std::uint64_t{1} << k;
    total_ = dim == 1 ? side : side * side;
    lattice_.resize(total_);
    for (std::uint64_t i = 0; i < total_; ++i) {
      if (dim == 1) {
        lattice_[i] = {i, 0};
      } else {
        lattice_[i] = d2xy(side, i);
      }
    }
    cells_.assign(std::size_t{1} << depth, Point(static_cast<std::size_t>(dim)));
    Point last(static_cast<std::size_t>(dim));
    for (int a = 0; a < dim; ++a) {
      double lo = pts_[0][a], hi = pts_[0][a];
      for (const auto& p : pts_) {
        lo = std::min(lo, p[a]);
        hi = std::max(hi, p[a]);
      }
      last[a] = 0.5 * lo + 0.5 * hi;
    }
    std::vector<std::size_t> all(pts_.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    recurse(0, total_, 0, all, last);
  }

  const std::vector<Point>& cells() const { return cells_; }

  // Split axis and reversal of a curve-index range, found geometrically.
  std::pair<int, bool> split_of(std::uint64_t begin, std::uint64_t len) const {
    const std::uint64_t half = len / 2;
    for (int axis = 0; axis < dim_; ++axis) {
      std::uint64_t max1 = 0, min1 = ~0ULL, max2 = 0, min2 = ~0ULL;
      for (std::uint64_t i = begin; i < begin + half; ++i) {
        const auto c = coord(i, axis);
        max1 = std::max(max1, c);
        min1 = std::min(min1, c);
      }
      for (std::uint64_t i = begin + half; i < begin + len; ++i) {
        const auto c = coord(i, axis);
        max2 = std::max(max2, c);
        min2 = std::min(min2, c);
      }
      if (max1 < min2) return {axis, false};
      if (max2 < min1) return {axis, true};
    }
    throw std::logic_error("halves are not separated by an axis");
  }

 private:
  std::uint64_t coord(std::uint64_t i, int axis) const {
    return axis == 0 ? lattice_[i].first : lattice_[i].second;
  }

  void recurse(std::uint64_t begin, std::uint64_t len, int level, const std::vector<std::size_t>& subset,
               Point& last) {
    if (level == depth_) {
      cells_[begin / (total_ >> depth_)] = last;
      return;
    }
    const auto [axis, reversed] = split_of(begin, len);
    std::vector<std::size_t> lower, upper;
    double cut = 0.0;
    if (subset.size() == 1) {
      cut = pts_[subset[0]][axis];
      lower = upper = subset;
    } else {
      std::vector<std::size_t> sorted = subset;
      std::sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
        if (pts_[a][axis] != pts_[b][axis]) return pts_[a][axis] < pts_[b][axis];
        return a < b;
      });
      const std::size_t k = (sorted.size() + 1) / 2;
      lower.assign(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k));
      upper.assign(sorted.begin() + static_cast<std::ptrdiff_t>(k), sorted.end());
      cut = pts_[lower.back()][axis];
    }
    const double saved = last[axis];
    last[axis] = cut;
    recurse(begin, len / 2, level + 1, reversed ? upper : lower, last);
    recurse(begin + len / 2, len / 2, level + 1, reversed ? lower : upper, last);
    last[axis] = saved;
  }

  std::vector<Point> pts_;
  int dim_;
  int depth_;
  std::uint64_t total_ = 0;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> lattice_;
  std::vector<Point> cells_;
};

}  // namespace oracle
