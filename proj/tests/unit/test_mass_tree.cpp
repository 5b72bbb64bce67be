#include <gtest/gtest.h>

#include <algorithm>

#include "himap/error.hpp"
#include "himap/mass_tree.hpp"
#include "support.hpp"

using namespace himap;
using testing_support::gaussian_cloud;
using testing_support::lattice_cloud;

namespace {

void check_balanced(const HimapTree& tree) {
  for (const auto& n : tree.nodes()) {
    if (n.is_leaf()) continue;
    const auto& a = tree.node(n.children[0]);
    const auto& b = tree.node(n.children[1]);
    ASSERT_EQ(a.size + b.size, n.size);
    const auto lo = a.size > b.size ? a.size - b.size : b.size - a.size;
    ASSERT_LE(lo, 1u);
    // The geometric lower side holds the ceil(k/2) smallest.
    ASSERT_EQ(tree.node(n.geometric_child(0)).size, (n.size + 1) / 2);
  }
}

}  // namespace

TEST(MassTree, FourPointsInOneDimension) {
  const PointCloud c(1, {1, 2, 3, 4});
  const auto tree = build_tree(c, 2);
  EXPECT_EQ(tree.root().axis, 0);
  EXPECT_EQ(tree.root().cut, 2.0);
  EXPECT_EQ(tree.node(tree.root().children[0]).cut, 1.0);
  EXPECT_EQ(tree.node(tree.root().children[1]).cut, 3.0);
}

TEST(MassTree, OddCountsGiveLowerChildTheExtraPoint) {
  const PointCloud c(1, {5, 1, 4, 2, 3});
  const auto tree = build_tree(c, 1);
  EXPECT_EQ(tree.root().cut, 3.0);
  EXPECT_EQ(tree.node(tree.root().children[0]).size, 3u);
  EXPECT_EQ(tree.node(tree.root().children[1]).size, 2u);
}

TEST(MassTree, PlanarFirstSplitsFollowSchedule) {
  const auto c = gaussian_cloud(64, 2, 3);
  const auto tree = build_tree(c, 2);
  EXPECT_EQ(tree.root().axis, 0);
  EXPECT_FALSE(tree.root().reversed);
  const auto& left = tree.node(tree.root().children[0]);
  const auto& right = tree.node(tree.root().children[1]);
  EXPECT_EQ(left.axis, 1);
  EXPECT_FALSE(left.reversed);  // lower-left then upper-left
  EXPECT_EQ(right.axis, 1);
  EXPECT_TRUE(right.reversed);  // upper-right then lower-right
}

TEST(MassTree, CutIsLowerMedianOfTheCell) {
  const auto c = gaussian_cloud(301, 3, 11);
  const auto tree = build_tree(c, 6);
  for (const auto& n : tree.nodes()) {
    if (n.is_leaf()) continue;
    std::vector<double> vals;
    for (auto i : tree.index_set(n)) vals.push_back(c(i, static_cast<std::size_t>(n.axis)));
    std::sort(vals.begin(), vals.end());
    EXPECT_EQ(n.cut, vals[(vals.size() + 1) / 2 - 1]);
  }
}

TEST(MassTree, ChildrenLieOnTheirSideOfTheCut) {
  const auto c = gaussian_cloud(500, 2, 5);
  const auto tree = build_tree(c, 8);
  for (const auto& n : tree.nodes()) {
    if (n.is_leaf()) continue;
    const auto axis = static_cast<std::size_t>(n.axis);
    for (auto i : tree.index_set(tree.node(n.geometric_child(0)))) EXPECT_LE(c(i, axis), n.cut);
    for (auto i : tree.index_set(tree.node(n.geometric_child(1)))) EXPECT_GE(c(i, axis), n.cut);
  }
}

TEST(MassTree, BalancedSplitsOnRandomClouds) {
  std::uint64_t seed = 100;
  for (std::size_t d : {1u, 2u, 3u, 5u}) {
    for (std::size_t n : {2u, 3u, 17u, 100u, 1000u}) {
      const auto c = gaussian_cloud(n, d, seed++);
      check_balanced(build_tree(c, default_depth(n)));
    }
  }
}

TEST(MassTree, BalancedSplitsWithHeavyTies) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto c = lattice_cloud(257, 2, seed, 3);
    const auto tree = build_tree(c, 10);
    check_balanced(tree);
  }
  // All points identical.
  const PointCloud same(2, std::vector<double>(2 * 40, 1.5));
  check_balanced(build_tree(same, 6));
}

TEST(MassTree, TwoEqualPointsSplitIntoSingletons) {
  const PointCloud c(2, {1, 1, 1, 1});
  const auto tree = build_tree(c, 3);
  ASSERT_FALSE(tree.root().is_leaf());
  EXPECT_EQ(tree.node(tree.root().children[0]).size, 1u);
  EXPECT_EQ(tree.node(tree.root().children[1]).size, 1u);
}

TEST(MassTree, SingletonStopsEarlyWithAnchor) {
  const PointCloud c(2, {0.25, 0.75});
  const auto tree = build_tree(c, 4);
  EXPECT_TRUE(tree.root().is_leaf());
  ASSERT_EQ(tree.anchor(tree.root()).size(), 2u);
  EXPECT_EQ(tree.anchor(tree.root())[1], 0.75);
}

TEST(MassTree, BoxesNestAndContainSamples) {
  const auto c = gaussian_cloud(200, 3, 8);
  const auto tree = build_tree(c, 7);
  for (std::size_t id = 0; id < tree.nodes().size(); ++id) {
    const auto lo = tree.box_lower(static_cast<std::int32_t>(id));
    const auto hi = tree.box_upper(static_cast<std::int32_t>(id));
    for (auto i : tree.index_set(tree.nodes()[id])) {
      for (std::size_t j = 0; j < 3; ++j) {
        EXPECT_LE(lo[j], c(i, j));
        EXPECT_GE(hi[j], c(i, j));
      }
    }
  }
}

TEST(MassTree, RootBoxIsTight) {
  const PointCloud c(2, {0, 5, 2, -1, 1, 3});
  const auto tree = build_tree(c, 1);
  EXPECT_EQ(tree.box_lower(0)[0], 0.0);
  EXPECT_EQ(tree.box_upper(0)[0], 2.0);
  EXPECT_EQ(tree.box_lower(0)[1], -1.0);
  EXPECT_EQ(tree.box_upper(0)[1], 5.0);
  EXPECT_EQ(tree.root_midpoint(), (std::vector<double>{1.0, 2.0}));
}

TEST(MassTree, DefaultDepth) {
  EXPECT_EQ(default_depth(1), 1);
  EXPECT_EQ(default_depth(2), 1);
  EXPECT_EQ(default_depth(1000), 9);
  EXPECT_EQ(default_depth(1024), 10);
  EXPECT_EQ(default_depth(std::size_t{1} << 40), kMaxTreeDepth);
}

TEST(MassTree, SelectMedian) {
  std::vector<double> v{4, 1, 3, 2};
  EXPECT_EQ(select_median(v), 2.0);
  std::vector<double> w{7};
  EXPECT_EQ(select_median(w), 7.0);
  std::vector<double> empty;
  EXPECT_THROW(select_median(empty), Error);
}

TEST(MassTree, RejectsBadConfiguration) {
  const PointCloud c(1, {1, 2});
  EXPECT_THROW(build_tree(c, 0), ConfigError);
  EXPECT_THROW(build_tree(c, kMaxTreeDepth + 1), ConfigError);
  EXPECT_THROW(build_tree(PointCloud(), 3), DataError);
}

TEST(MassTree, NodeAtFollowsAddress) {
  const auto c = gaussian_cloud(64, 2, 1);
  const auto tree = build_tree(c, 6);
  const auto& n = node_at(tree, CellAddress(2, 0b10));
  EXPECT_EQ(n.depth, 2);
  EXPECT_EQ(&n, &tree.node(tree.node(tree.root().children[1]).children[0]));
  EXPECT_THROW(node_at(tree, CellAddress(7, 0)), DomainError);
}

TEST(MassTree, JsonRoundTrip) {
  const auto c = lattice_cloud(90, 3, 4, 5);
  const auto tree = build_tree(c, 9);
  const auto restored = tree_from_json(tree_to_json(tree));
  ASSERT_EQ(restored.nodes().size(), tree.nodes().size());
  EXPECT_EQ(restored.dim(), 3);
  EXPECT_EQ(restored.depth(), 9);
  EXPECT_FALSE(restored.has_index_sets());
  for (std::size_t i = 0; i < tree.nodes().size(); ++i) {
    const auto& a = tree.nodes()[i];
    const auto& b = restored.nodes()[i];
    EXPECT_EQ(a.axis, b.axis);
    EXPECT_EQ(a.cut, b.cut);
    EXPECT_EQ(a.reversed, b.reversed);
    EXPECT_EQ(a.size, b.size);
    EXPECT_EQ(a.children, b.children);
    EXPECT_EQ(a.orientation, b.orientation);
    EXPECT_EQ(std::vector<double>(tree.anchor(a).begin(), tree.anchor(a).end()),
              std::vector<double>(restored.anchor(b).begin(), restored.anchor(b).end()));
  }
  EXPECT_EQ(tree_to_json(restored), tree_to_json(tree));
}

TEST(MassTree, JsonRejectsInconsistentDocuments) {
  EXPECT_THROW(tree_from_json("not json"), DataError);
  EXPECT_THROW(tree_from_json("{\"format\": \"other\"}"), DataError);
  const auto tree = build_tree(gaussian_cloud(16, 2, 2), 3);
  std::string text = tree_to_json(tree);
  // Corrupt the root split axis.
  const auto pos = text.find("\"axis\": 0");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 9, "\"axis\": 1");
  EXPECT_THROW(tree_from_json(text), DataError);
}
