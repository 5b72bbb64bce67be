#include "himap/mass_tree.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <string>

#include <json.hpp>

#include "himap/error.hpp"

namespace himap {
namespace {

using json = nlohmann::json;

class Builder {
 public:
  Builder(const PointCloud& cloud, std::vector<TreeNode>& nodes, std::vector<std::size_t>& order,
          std::vector<double>& boxes, std::vector<double>& anchors, int depth)
      : cloud_(cloud), nodes_(nodes), order_(order), boxes_(boxes), anchors_(anchors),
        depth_(depth), dim_(static_cast<int>(cloud.dim())) {}

  void grow(std::int32_t id) {
    const TreeNode node = nodes_[id];
    if (node.size < 2 || node.depth == depth_) {
      if (node.size == 1 && node.depth < depth_) {
        nodes_[id].anchor = static_cast<std::int32_t>(anchors_.size() / dim_);
        const auto row = cloud_.row(order_[node.begin]);
        anchors_.insert(anchors_.end(), row.begin(), row.end());
      }
      return;
    }

    const SplitAxis split = node.orientation.split();
    const int axis = split.axis;
    const auto first = order_.begin() + static_cast<std::ptrdiff_t>(node.begin);
    const auto last = first + static_cast<std::ptrdiff_t>(node.size);
    const std::size_t lower_size = (node.size + 1) / 2;

    // Strict (value, index) order: the lower child gets exactly the
    // ceil(k/2) smallest, ties resolved by sample index.
    std::nth_element(first, first + static_cast<std::ptrdiff_t>(lower_size - 1), last,
                     [&](std::size_t a, std::size_t b) {
                       const double va = cloud_(a, axis);
                       const double vb = cloud_(b, axis);
                       return va < vb || (va == vb && a < b);
                     });
    const double cut = cloud_(*(first + static_cast<std::ptrdiff_t>(lower_size - 1)), axis);

    nodes_[id].axis = axis;
    nodes_[id].reversed = split.reversed;
    nodes_[id].cut = cut;

    for (int bit = 0; bit < 2; ++bit) {
      const int side = bit ^ static_cast<int>(split.reversed);
      TreeNode child;
      child.depth = node.depth + 1;
      child.begin = side == 0 ? node.begin : node.begin + lower_size;
      child.size = side == 0 ? lower_size : node.size - lower_size;
      child.orientation = node.orientation.descend(bit);

      const auto child_id = static_cast<std::int32_t>(nodes_.size());
      nodes_.push_back(child);
      const std::size_t parent_box = static_cast<std::size_t>(id) * 2 * dim_;
      for (int k = 0; k < 2 * dim_; ++k) boxes_.push_back(boxes_[parent_box + k]);
      double* child_box = boxes_.data() + static_cast<std::size_t>(child_id) * 2 * dim_;
      if (side == 0) {
        child_box[dim_ + axis] = cut;
      } else {
        child_box[axis] = cut;
      }
      nodes_[id].children[bit] = child_id;
      grow(child_id);
    }
  }

 private:
  const PointCloud& cloud_;
  std::vector<TreeNode>& nodes_;
  std::vector<std::size_t>& order_;
  std::vector<double>& boxes_;
  std::vector<double>& anchors_;
  int depth_;
  int dim_;
};

json state_to_json(const HilbertCursor& c) {
  const auto perm = c.state().axis_perm();
  const auto flip = c.state().flip();
  json f = json::array();
  for (bool b : flip) f.push_back(b);
  return json{{"axis_perm", perm},
              {"flip", f},
              {"block_position", c.block_position()},
              {"partial_digit", c.partial_digit()}};
}

}  // namespace

std::span<const std::size_t> HimapTree::index_set(const TreeNode& node) const {
  if (order_.empty()) return {};
  return {order_.data() + node.begin, node.size};
}

std::span<const double> HimapTree::box_lower(std::int32_t id) const {
  return {boxes_.data() + static_cast<std::size_t>(id) * 2 * dim_, static_cast<std::size_t>(dim_)};
}

std::span<const double> HimapTree::box_upper(std::int32_t id) const {
  return {boxes_.data() + static_cast<std::size_t>(id) * 2 * dim_ + dim_,
          static_cast<std::size_t>(dim_)};
}

std::span<const double> HimapTree::anchor(const TreeNode& node) const {
  if (node.anchor == TreeNode::kNone) return {};
  return {anchors_.data() + static_cast<std::size_t>(node.anchor) * dim_,
          static_cast<std::size_t>(dim_)};
}

std::vector<double> HimapTree::root_midpoint() const {
  std::vector<double> mid(dim_);
  const auto lo = box_lower(0);
  const auto hi = box_upper(0);
  for (int j = 0; j < dim_; ++j) mid[j] = 0.5 * lo[j] + 0.5 * hi[j];
  return mid;
}

int default_depth(std::size_t n) {
  if (n < 2) return 1;
  const int floor_log2 = static_cast<int>(std::bit_width(n)) - 1;
  return std::clamp(floor_log2, 1, kMaxTreeDepth);
}

double select_median(std::span<double> values) {
  if (values.empty()) throw Error(ErrorKind::internal, "median of an empty sequence");
  const std::size_t k = (values.size() + 1) / 2 - 1;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k), values.end());
  return values[k];
}

HimapTree build_tree(const PointCloud& cloud, int depth) {
  if (depth < 1 || depth > kMaxTreeDepth) {
    throw ConfigError("tree depth " + std::to_string(depth) + " outside [1, " +
                      std::to_string(kMaxTreeDepth) + "]");
  }
  if (cloud.empty()) throw DataError("cannot build a tree on an empty point cloud");
  if (cloud.dim() > static_cast<std::size_t>(kMaxHilbertDim)) {
    throw ConfigError("dimension " + std::to_string(cloud.dim()) + " exceeds " +
                      std::to_string(kMaxHilbertDim));
  }

  HimapTree tree;
  const int d = static_cast<int>(cloud.dim());
  const std::size_t n = cloud.size();
  tree.dim_ = d;
  tree.depth_ = depth;
  tree.order_.resize(n);
  std::iota(tree.order_.begin(), tree.order_.end(), std::size_t{0});

  const std::size_t max_nodes = std::min<std::size_t>(2 * n, (std::size_t{2} << depth));
  tree.nodes_.reserve(max_nodes);
  tree.boxes_.reserve(max_nodes * 2 * d);

  tree.boxes_.resize(2 * d);
  for (int j = 0; j < d; ++j) {
    double lo = cloud(0, j);
    double hi = lo;
    for (std::size_t i = 1; i < n; ++i) {
      lo = std::min(lo, cloud(i, j));
      hi = std::max(hi, cloud(i, j));
    }
    tree.boxes_[j] = lo;
    tree.boxes_[d + j] = hi;
  }

  TreeNode root;
  root.size = n;
  root.orientation = HilbertCursor(d);
  tree.nodes_.push_back(root);

  Builder builder(cloud, tree.nodes_, tree.order_, tree.boxes_, tree.anchors_, depth);
  builder.grow(0);
  return tree;
}

std::int32_t node_id_at(const HimapTree& tree, const CellAddress& address) {
  if (address.depth() > tree.depth()) {
    throw DomainError("address depth " + std::to_string(address.depth()) +
                      " exceeds tree depth " + std::to_string(tree.depth()));
  }
  std::int32_t id = 0;
  for (int l = 0; l < address.depth(); ++l) {
    const TreeNode& n = tree.node(id);
    if (n.is_leaf()) break;
    id = n.children[static_cast<std::size_t>(address.bit(l))];
  }
  return id;
}

const TreeNode& node_at(const HimapTree& tree, const CellAddress& address) {
  return tree.node(node_id_at(tree, address));
}

std::string tree_to_json(const HimapTree& tree) {
  json nodes = json::array();
  for (const TreeNode& n : tree.nodes()) {
    json j{{"depth", n.depth}, {"size", n.size}, {"state", state_to_json(n.orientation)}};
    if (n.is_leaf()) {
      j["axis"] = nullptr;
      j["cut"] = nullptr;
      j["reversed"] = false;
      j["children"] = json::array();
    } else {
      j["axis"] = n.axis;
      j["cut"] = n.cut;
      j["reversed"] = n.reversed;
      j["children"] = {n.children[0], n.children[1]};
    }
    const auto a = tree.anchor(n);
    if (!a.empty()) j["anchor"] = std::vector<double>(a.begin(), a.end());
    nodes.push_back(std::move(j));
  }
  const auto lo = tree.box_lower(0);
  const auto hi = tree.box_upper(0);
  json doc{{"format", "himap-tree"},
           {"version", 1},
           {"dim", tree.dim()},
           {"depth", tree.depth()},
           {"schedule", "cyclic"},
           {"root_box",
            {{"lower", std::vector<double>(lo.begin(), lo.end())},
             {"upper", std::vector<double>(hi.begin(), hi.end())}}},
           {"nodes", std::move(nodes)}};
  return doc.dump(1) + "\n";
}

HimapTree tree_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string("tree JSON parse error: ") + e.what());
  }

  try {
    if (doc.value("format", "") != "himap-tree") throw DataError("not a himap-tree document");
    if (doc.value("schedule", "cyclic") != "cyclic") throw DataError("only cyclic schedules are supported");

    HimapTree tree;
    tree.dim_ = doc.at("dim").get<int>();
    tree.depth_ = doc.at("depth").get<int>();
    const int d = tree.dim_;
    if (d < 1 || d > kMaxHilbertDim) throw DataError("tree dimension out of range");
    if (tree.depth_ < 1 || tree.depth_ > kMaxTreeDepth) throw DataError("tree depth out of range");

    const auto lo = doc.at("root_box").at("lower").get<std::vector<double>>();
    const auto hi = doc.at("root_box").at("upper").get<std::vector<double>>();
    if (lo.size() != static_cast<std::size_t>(d) || hi.size() != static_cast<std::size_t>(d)) {
      throw DataError("root box dimension mismatch");
    }

    const json& jn = doc.at("nodes");
    if (!jn.is_array() || jn.empty()) throw DataError("tree has no nodes");
    const std::size_t count = jn.size();
    tree.nodes_.resize(count);
    tree.boxes_.assign(count * 2 * d, 0.0);
    std::copy(lo.begin(), lo.end(), tree.boxes_.begin());
    std::copy(hi.begin(), hi.end(), tree.boxes_.begin() + d);

    std::vector<bool> seen(count, false);
    tree.nodes_[0].orientation = HilbertCursor(d);
    std::vector<std::int32_t> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
      const std::int32_t id = stack.back();
      stack.pop_back();
      const json& j = jn.at(static_cast<std::size_t>(id));
      TreeNode& n = tree.nodes_[id];
      n.depth = j.at("depth").get<int>();
      n.size = j.at("size").get<std::size_t>();
      if (j.contains("anchor")) {
        const auto a = j.at("anchor").get<std::vector<double>>();
        if (a.size() != static_cast<std::size_t>(d)) throw DataError("anchor dimension mismatch");
        n.anchor = static_cast<std::int32_t>(tree.anchors_.size() / d);
        tree.anchors_.insert(tree.anchors_.end(), a.begin(), a.end());
      }
      if (j.at("axis").is_null()) continue;

      const SplitAxis expect = n.orientation.split();
      n.axis = j.at("axis").get<int>();
      n.cut = j.at("cut").get<double>();
      n.reversed = j.at("reversed").get<bool>();
      if (n.axis != expect.axis || n.reversed != expect.reversed) {
        throw DataError("node " + std::to_string(id) + " split axis disagrees with Hilbert orientation");
      }
      const auto kids = j.at("children").get<std::vector<std::int32_t>>();
      if (kids.size() != 2) throw DataError("internal node must have two children");
      for (int bit = 0; bit < 2; ++bit) {
        const std::int32_t c = kids[bit];
        if (c <= 0 || static_cast<std::size_t>(c) >= count || seen[c]) {
          throw DataError("invalid child reference " + std::to_string(c));
        }
        seen[c] = true;
        n.children[bit] = c;
        TreeNode& child = tree.nodes_[c];
        child.orientation = n.orientation.descend(bit);
        const int side = bit ^ static_cast<int>(n.reversed);
        std::copy_n(tree.boxes_.begin() + static_cast<std::ptrdiff_t>(id) * 2 * d, 2 * d,
                    tree.boxes_.begin() + static_cast<std::ptrdiff_t>(c) * 2 * d);
        double* box = tree.boxes_.data() + static_cast<std::size_t>(c) * 2 * d;
        if (side == 0) {
          box[d + n.axis] = n.cut;
        } else {
          box[n.axis] = n.cut;
        }
        stack.push_back(c);
      }
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
      throw DataError("tree contains unreachable nodes");
    }
    return tree;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed tree JSON: ") + e.what());
  }
}

}  // namespace himap
