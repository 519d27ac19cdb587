#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <set>

#include "dlap/generators.hpp"
#include "dlap/tree.hpp"

using namespace dlap;

namespace {

int edge_count(const Tree& t) {
  int sum = 0;
  for (int v = 0; v < t.size(); ++v) sum += t.degree(v);
  return sum / 2;
}

// Every vertex appears once in the order and after all of its children.
bool order_is_bottom_up(const Tree& t) {
  std::vector<int> pos(t.size(), -1);
  for (int i = 0; i < t.size(); ++i) pos[t.order()[i]] = i;
  for (int v = 0; v < t.size(); ++v) {
    if (pos[v] < 0) return false;
    for (int c : t.children(v)) {
      if (pos[c] > pos[v]) return false;
    }
  }
  return true;
}

std::vector<int> parents_of(const Tree& t) { return {t.parents().begin(), t.parents().end()}; }

}  // namespace

TEST(Tree, ParentArrayValidation) {
  EXPECT_NO_THROW(Tree({Tree::kNone, 0, 0}));
  EXPECT_THROW(Tree({Tree::kNone, Tree::kNone}), Error);  // two roots
  EXPECT_THROW(Tree({1, 2, 0}), Error);                   // no root
  EXPECT_THROW(Tree({Tree::kNone, 2, 1}), Error);         // cycle
  EXPECT_THROW(Tree({Tree::kNone, 5}), Error);            // out of range
  EXPECT_THROW(Tree({Tree::kNone, 0}, {0, 1}), Error);    // root before child
}

TEST(Tree, FromEdgesChecksShape) {
  std::vector<std::pair<int, int>> ok{{0, 1}, {1, 2}, {1, 3}};
  const Tree t = Tree::from_edges(4, ok, 0);
  EXPECT_EQ(t.root(), 0);
  EXPECT_EQ(t.degree(1), 3);
  EXPECT_EQ(t.max_degree(), 3);
  std::vector<std::pair<int, int>> cyc{{0, 1}, {1, 2}, {2, 0}};
  EXPECT_THROW(Tree::from_edges(4, cyc, 0), Error);
  std::vector<std::pair<int, int>> loop{{0, 0}};
  EXPECT_THROW(Tree::from_edges(2, loop, 0), Error);
  std::vector<std::pair<int, int>> few{{0, 1}};
  EXPECT_THROW(Tree::from_edges(3, few, 0), Error);
}

TEST(Tree, RemoveLeafRelabels) {
  const Tree t = star(3);  // centre 0, leaves 1..3
  const Tree smaller = t.remove_leaf(2);
  EXPECT_EQ(smaller.size(), 3);
  EXPECT_EQ(smaller.degree(0), 2);
  EXPECT_EQ(edge_count(smaller), 2);
  EXPECT_THROW(t.remove_leaf(0), Error);
}

TEST(Tree, LeavesOfPath) {
  const Tree p = path(5);
  EXPECT_EQ(p.leaves(), (std::vector<int>{0, 4}));
  EXPECT_EQ(path(1).leaves().size(), 0u);
}

TEST(Caterpillar, ParseForms) {
  EXPECT_EQ(parse_caterpillar("[3,1,4]").counts, (std::vector<std::int64_t>{3, 1, 4}));
  EXPECT_EQ(parse_caterpillar("3 1 4").counts, (std::vector<std::int64_t>{3, 1, 4}));
  EXPECT_EQ(parse_caterpillar(" [ 3, 1 4 ] ").counts, (std::vector<std::int64_t>{3, 1, 4}));
  for (const char* bad : {"", "[]", "[3", "3]", "[3,,4]", "[3,4,]", "[3,-1]", "[3,x]", "[5]", "3.5 2", "[1;2]"}) {
    EXPECT_THROW(parse_caterpillar(bad), Error) << bad;
  }
}

TEST(Caterpillar, FormatRoundTrip) {
  const Caterpillar c({20, 4, 0, 2, 9});
  EXPECT_EQ(format_caterpillar(c), "[20,4,0,2,9]");
  EXPECT_EQ(parse_caterpillar(format_caterpillar(c)), c);
  std::vector<std::int64_t> long_run(12);
  for (int i = 0; i < 12; ++i) long_run[i] = i;
  EXPECT_EQ(format_counts_abbrev(Caterpillar(long_run)), "[0 1 2 3 4 5 .. 9 10 11]");
  EXPECT_EQ(format_counts_abbrev(c), "[20 4 0 2 9]");
}

TEST(Caterpillar, MaterializedShape) {
  const Caterpillar c({3, 0, 2, 1});
  const Tree t = caterpillar_to_tree(c);
  EXPECT_EQ(t.size(), c.vertex_count());
  EXPECT_EQ(t.size(), 10);
  EXPECT_EQ(edge_count(t), t.size() - 1);
  for (std::size_t j = 0; j < c.backbone(); ++j) EXPECT_EQ(t.degree(static_cast<int>(j)), c.degree(j));
  EXPECT_EQ(t.root(), 3);
  EXPECT_TRUE(order_is_bottom_up(t));
  EXPECT_EQ(caterpillar_counts_of(t, 4), c);
}

TEST(TreeText, ParseAndWrite) {
  const Tree t = parse_tree("# comment\nroot=2\nedge 1 2\nedge 2 3  # trailing\n\nedge 3 4\n");
  EXPECT_EQ(t.size(), 4);
  EXPECT_EQ(t.root(), 1);
  const Tree again = parse_tree(format_tree(t));
  EXPECT_EQ(parents_of(again), parents_of(t));
  EXPECT_THROW(parse_tree("edge 1 2\nroot=1\n"), Error);
  EXPECT_THROW(parse_tree("edge 1\n"), Error);
  EXPECT_THROW(parse_tree("edge 1 2 3\n"), Error);
  EXPECT_THROW(parse_tree("edge 0 1\n"), Error);
  EXPECT_THROW(parse_tree("vertex 1\n"), Error);
  EXPECT_THROW(parse_tree("edge 1 2\nedge 3 4\n"), Error);  // disconnected
}

TEST(TreeText, SampleFileLoads) {
  std::ifstream in(std::string(DLAP_DATA_DIR) + "/t144.tree");
  ASSERT_TRUE(in);
  const Tree t = parse_tree(in);
  EXPECT_EQ(t.size(), 10);
  EXPECT_TRUE(contains_t1ab(t, 4, 4));
  EXPECT_EQ(starlike_arms(t), 3);
}

// Counts of rooted (OEIS A000081) and free (A000055) unlabeled trees.
TEST(Enumeration, RootedTreeCounts) {
  const int expected[] = {1, 1, 2, 4, 9, 20, 48, 115, 286, 719};
  for (int n = 1; n <= 10; ++n) EXPECT_EQ(static_cast<int>(all_rooted_trees(n).size()), expected[n - 1]) << n;
}

TEST(Enumeration, FreeTreeCounts) {
  const int expected[] = {1, 1, 1, 2, 3, 6, 11, 23, 47, 106, 235, 551};
  for (int n = 1; n <= 12; ++n) EXPECT_EQ(static_cast<int>(all_free_trees(n).size()), expected[n - 1]) << n;
}

TEST(Enumeration, TreesAreValidAndDistinct) {
  for (int n = 1; n <= 9; ++n) {
    std::set<std::string> forms;
    for (const auto& t : all_free_trees(n)) {
      EXPECT_EQ(t.size(), n);
      EXPECT_EQ(edge_count(t), n - 1);
      EXPECT_TRUE(order_is_bottom_up(t));
      forms.insert(canonical_form(t));
    }
    EXPECT_EQ(forms.size(), all_free_trees(n).size());
  }
}

TEST(Canonical, InvariantUnderRelabelling) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const Tree t = random_tree(9, rng);
    auto edges = t.edges();
    std::vector<int> perm(t.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (auto& [u, v] : edges) {
      u = perm[u];
      v = perm[v];
    }
    const Tree relabelled = Tree::from_edges(t.size(), edges, perm[0]);
    EXPECT_EQ(canonical_form(t), canonical_form(relabelled));
  }
  EXPECT_NE(canonical_form(path(5)), canonical_form(star(4)));
}

TEST(Generators, RandomTreesAreTrees) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 14;
    const Tree t = random_tree(n, rng);
    EXPECT_EQ(t.size(), n);
    EXPECT_EQ(edge_count(t), n - 1);
  }
}

TEST(Generators, RandomIsDeterministicPerSeed) {
  std::mt19937_64 a(11), b(11);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(parents_of(random_tree(10, a)), parents_of(random_tree(10, b)));
  std::mt19937_64 c(5);
  for (int i = 0; i < 20; ++i) {
    const auto cat = random_caterpillar(6, 3, c);
    EXPECT_GE(cat.backbone(), 2u);
    EXPECT_LE(cat.backbone(), 6u);
  }
}

TEST(Generators, ShapeRecognisers) {
  EXPECT_TRUE(is_star(star(4)));
  EXPECT_TRUE(is_star(path(2)));
  EXPECT_TRUE(is_star(path(3)));
  EXPECT_FALSE(is_star(path(4)));
  EXPECT_FALSE(is_star(path(1)));
  EXPECT_EQ(starlike_arms(starlike_t1nn(3)), 3);
  EXPECT_EQ(starlike_arms(path(6)), 0);
  EXPECT_EQ(starlike_arms(caterpillar_to_tree(Caterpillar({2, 2}))), 0);
  EXPECT_TRUE(contains_t1ab(starlike_t1nn(4), 4, 4));
  EXPECT_FALSE(contains_t1ab(starlike_t1nn(3), 4, 4));
  EXPECT_EQ(starlike_t1nn(5).size(), 12);
}
