#include "himap/quantile_map.hpp"

#include <cmath>
#include <string>

#include "himap/error.hpp"
#include "himap/parallel.hpp"

namespace himap {
namespace {

// Dense tables are built when 2^L * d stays under this many doubles.
constexpr std::size_t kTableLimit = std::size_t{1} << 24;

class Tabulator {
 public:
  Tabulator(const HimapTree& tree, std::vector<double>& table)
      : tree_(tree), table_(table), dim_(static_cast<std::size_t>(tree.dim())) {}

  void run() {
    std::vector<double> last = tree_.root_midpoint();
    visit(0, HilbertCursor(tree_.dim()), 0, 0, last);
  }

 private:
  // `id` is kNone once the path has passed an early-stopped leaf; `anchor`
  // then supplies the cut for every remaining split.
  void visit(std::int32_t id, const HilbertCursor& cursor, int level, std::uint64_t prefix,
             std::vector<double>& last, std::span<const double> anchor = {}) {
    if (level == tree_.depth()) {
      std::copy(last.begin(), last.end(), table_.begin() + static_cast<std::ptrdiff_t>(prefix * dim_));
      return;
    }
    std::int32_t next[2] = {TreeNode::kNone, TreeNode::kNone};
    int axis = 0;
    double cut = 0.0;
    if (id != TreeNode::kNone && !tree_.node(id).is_leaf()) {
      const TreeNode& n = tree_.node(id);
      axis = n.axis;
      cut = n.cut;
      next[0] = n.children[0];
      next[1] = n.children[1];
    } else {
      if (id != TreeNode::kNone) anchor = tree_.anchor(tree_.node(id));
      axis = cursor.split().axis;
      cut = anchor[static_cast<std::size_t>(axis)];
    }
    const double saved = last[static_cast<std::size_t>(axis)];
    last[static_cast<std::size_t>(axis)] = cut;
    for (int bit = 0; bit < 2; ++bit) {
      visit(next[bit], cursor.descend(bit), level + 1, (prefix << 1) | static_cast<std::uint64_t>(bit),
            last, anchor);
    }
    last[static_cast<std::size_t>(axis)] = saved;
  }

  const HimapTree& tree_;
  std::vector<double>& table_;
  std::size_t dim_;
};

}  // namespace

QuantileMap::QuantileMap(std::shared_ptr<const HimapTree> tree) : tree_(std::move(tree)) {
  if (!tree_ || tree_->nodes().empty()) throw DataError("quantile map needs a fitted tree");
  const std::size_t cells = std::size_t{1} << tree_->depth();
  if (cells * static_cast<std::size_t>(tree_->dim()) <= kTableLimit) {
    auto table = std::make_shared<std::vector<double>>(cells * static_cast<std::size_t>(tree_->dim()));
    Tabulator(*tree_, *table).run();
    table_ = std::move(table);
  }
}

QuantileMap::QuantileMap(HimapTree tree)
    : QuantileMap(std::make_shared<const HimapTree>(std::move(tree))) {}

QuantileMap QuantileMap::fit(const PointCloud& cloud, int depth) {
  if (depth <= 0) depth = default_depth(cloud.size());
  return QuantileMap(build_tree(cloud, depth));
}

void QuantileMap::traverse(const CellAddress& address, std::span<double> out) const {
  const HimapTree& tree = *tree_;
  const auto mid = tree.root_midpoint();
  std::copy(mid.begin(), mid.end(), out.begin());
  HilbertCursor cursor(tree.dim());
  std::int32_t id = 0;
  std::span<const double> anchor;
  for (int l = 0; l < tree.depth(); ++l) {
    const int bit = address.bit(l);
    if (id != TreeNode::kNone && !tree.node(id).is_leaf()) {
      const TreeNode& n = tree.node(id);
      out[static_cast<std::size_t>(n.axis)] = n.cut;
      id = n.children[static_cast<std::size_t>(bit)];
    } else {
      if (id != TreeNode::kNone) {
        anchor = tree.anchor(tree.node(id));
        id = TreeNode::kNone;
      }
      const auto axis = static_cast<std::size_t>(cursor.split().axis);
      out[axis] = anchor[axis];
    }
    cursor = cursor.descend(bit);
  }
}

void QuantileMap::cell_value(std::uint64_t cell, std::span<double> out) const {
  const auto d = static_cast<std::size_t>(dim());
  if (out.size() != d) throw DomainError("output span has wrong dimension");
  if (table_) {
    const double* src = table_->data() + cell * d;
    std::copy(src, src + d, out.begin());
    return;
  }
  traverse(CellAddress(depth(), cell), out);
}

void QuantileMap::evaluate_into(double t, std::span<double> out) const {
  if (!tree_) throw DataError("quantile map is empty");
  cell_value(address_of(t, depth()).bits(), out);
}

std::vector<double> QuantileMap::operator()(double t) const {
  std::vector<double> out(static_cast<std::size_t>(dim()));
  evaluate_into(t, out);
  return out;
}

std::vector<double> evaluate(const QuantileMap& map, double t) { return map(t); }

QuantileGrid sample_grid(const QuantileMap& map, std::size_t resolution) {
  if (resolution == 0) throw ConfigError("grid resolution must be >= 1");
  QuantileGrid grid;
  grid.resolution = resolution;
  grid.dim = static_cast<std::size_t>(map.dim());
  grid.values.resize(resolution * grid.dim);
  parallel_for(resolution, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t g = lo; g < hi; ++g) map.evaluate_into(grid.level(g), grid.row(g));
  });
  return grid;
}

PointCloud grid_cloud(const QuantileGrid& grid) { return PointCloud(grid.dim, grid.values); }

PointCloud pushforward(const QuantileMap& map, std::size_t resolution) {
  return grid_cloud(sample_grid(map, resolution));
}

std::size_t common_resolution(const QuantileMap& a, const QuantileMap& b) {
  return std::size_t{1} << std::max(a.depth(), b.depth());
}

double grid_distance(const QuantileGrid& a, const QuantileGrid& b, double r) {
  if (a.dim != b.dim) {
    throw DomainError("dimension mismatch: " + std::to_string(a.dim) + " vs " + std::to_string(b.dim));
  }
  if (a.resolution != b.resolution) throw DomainError("grid resolution mismatch");
  if (!(r >= 1.0)) throw DomainError("distance order r must be >= 1");
  double acc = 0.0;
  for (std::size_t g = 0; g < a.resolution; ++g) {
    double sq = 0.0;
    for (std::size_t j = 0; j < a.dim; ++j) {
      const double diff = a.values[g * a.dim + j] - b.values[g * b.dim + j];
      sq += diff * diff;
    }
    acc += r == 2.0 ? sq : std::pow(std::sqrt(sq), r);
  }
  const double mean = acc / static_cast<double>(a.resolution);
  return r == 2.0 ? std::sqrt(mean) : std::pow(mean, 1.0 / r);
}

double himap_distance(const QuantileMap& a, const QuantileMap& b, double r, std::size_t resolution) {
  if (a.dim() != b.dim()) {
    throw DomainError("dimension mismatch: " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
  }
  if (resolution == 0) resolution = common_resolution(a, b);
  return grid_distance(sample_grid(a, resolution), sample_grid(b, resolution), r);
}

}  // namespace himap
