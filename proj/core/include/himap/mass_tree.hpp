#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "himap/hilbert.hpp"
#include "himap/point_cloud.hpp"

namespace himap {

inline constexpr int kMaxTreeDepth = 30;

/// One cell of the mass-aligned hierarchy.
///
/// `children` are stored in curve order: children[0] owns the first half of
/// the node's t-interval. When `reversed` is set, children[0] is the
/// geometric upper half along `axis`.
struct TreeNode {
  static constexpr std::int32_t kNone = -1;

  int depth = 0;
  std::size_t size = 0;     // number of samples in the cell
  int axis = kNone;         // geometric split axis, kNone for leaves
  bool reversed = false;
  double cut = 0.0;         // lower empirical median along `axis`
  std::array<std::int32_t, 2> children{kNone, kNone};
  HilbertCursor orientation;

  // Offsets into the owning tree's sample permutation; the index set of the
  // cell is order[begin, begin + size).
  std::size_t begin = 0;
  // Offset into the owning tree's anchor table for single-sample leaves that
  // stopped above the target depth, kNone otherwise.
  std::int32_t anchor = kNone;

  bool is_leaf() const noexcept { return axis == kNone; }

  /// Child on the geometric lower (0) or upper (1) side of the cut.
  std::int32_t geometric_child(int side) const noexcept {
    return children[static_cast<std::size_t>(side ^ static_cast<int>(reversed))];
  }
};

/// Depth-L binary tree of empirical conditional-median splits (cyclic logical
/// schedule, Hilbert-oriented child ordering). Immutable after construction.
class HimapTree {
 public:
  HimapTree() = default;

  int dim() const noexcept { return dim_; }
  int depth() const noexcept { return depth_; }
  std::size_t sample_count() const noexcept { return nodes_.empty() ? 0 : nodes_[0].size; }

  const TreeNode& root() const { return nodes_.front(); }
  const TreeNode& node(std::int32_t id) const { return nodes_[static_cast<std::size_t>(id)]; }
  std::span<const TreeNode> nodes() const noexcept { return nodes_; }

  /// Sample indices of a node. Empty for trees restored from JSON, which do
  /// not carry the sample permutation.
  std::span<const std::size_t> index_set(const TreeNode& node) const;
  bool has_index_sets() const noexcept { return !order_.empty(); }

  std::span<const double> box_lower(std::int32_t id) const;
  std::span<const double> box_upper(std::int32_t id) const;

  /// Coordinates of the single sample held by an early-stopped leaf.
  std::span<const double> anchor(const TreeNode& node) const;

  /// Logical coordinate split at depth `level` (1-based): (level - 1) mod d.
  int schedule(int level) const noexcept { return (level - 1) % dim_; }

  std::vector<double> root_midpoint() const;

 private:
  friend HimapTree build_tree(const PointCloud&, int);
  friend HimapTree tree_from_json(const std::string&);

  int dim_ = 0;
  int depth_ = 0;
  std::vector<TreeNode> nodes_;
  std::vector<std::size_t> order_;
  std::vector<double> boxes_;    // per node: d lower bounds then d upper bounds
  std::vector<double> anchors_;  // d coordinates per anchored leaf
};

/// Builds the tree by recursive lower-median splits. Ties along the split axis are broken by sample index so sibling
/// sizes never differ by more than one. Nodes with fewer than two samples
/// stop early. Cost O(n L) expected.
///
/// Throws ConfigError for depth outside [1, 30] and DataError for an empty
/// cloud.
HimapTree build_tree(const PointCloud& cloud, int depth);

/// max(1, floor(log2 n)) capped at 30.
int default_depth(std::size_t n);

/// Lower median (the ceil(k/2)-th order statistic) of `values`, expected
/// linear time. Reorders `values`. Throws Error(internal) if empty.
double select_median(std::span<double> values);

/// Node reached by following `address` from the root; stops at the first
/// leaf on the way. Throws DomainError if address.depth() > tree.depth().
const TreeNode& node_at(const HimapTree& tree, const CellAddress& address);

/// Id of node_at(tree, address).
std::int32_t node_id_at(const HimapTree& tree, const CellAddress& address);

/// JSON document {format, version, dim, depth, schedule, root_box,
/// nodes: [{depth, axis, reversed, cut, size, state, children, anchor?}]}.
/// Sample index sets are not serialized.
std::string tree_to_json(const HimapTree& tree);

/// Inverse of tree_to_json. Orientation states are recomputed from the root
/// and checked against the stored split axes. Throws DataError on malformed
/// or inconsistent documents.
HimapTree tree_from_json(const std::string& text);

}  // namespace himap
