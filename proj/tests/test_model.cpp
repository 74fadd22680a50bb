#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace crnext;
using namespace testing_support;

namespace {

Matrix<int> from_rows(const std::vector<std::vector<int>>& rows) {
  Matrix<int> m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

// Plain triple loop, kept separate from crnext::multiply.
Matrix<int> naive_product(const Matrix<int>& a, const Matrix<int>& b) {
  Matrix<int> out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      int v = 0;
      for (std::size_t k = 0; k < a.cols(); ++k) v += a(i, k) * b(k, j);
      out(i, j) = v;
    }
  return out;
}

}  // namespace

TEST(Model, IntroMatricesMatchExample) {
  auto net = load_fixture("intro");
  auto mats = build_structural_matrices(net);
  EXPECT_EQ(mats.complex_matrix, from_rows({{1, 0, 0, 1}, {1, 2, 1, 0}}));
  EXPECT_EQ(mats.adjacency, from_rows({{-1, 1, 0}, {1, -1, 0}, {0, 0, -1}, {0, 0, 1}}));
  EXPECT_EQ(mats.stoich, from_rows({{-1, 1, 1}, {1, -1, -1}}));
  EXPECT_EQ(mats.source_matrix, from_rows({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}}));
  EXPECT_EQ(mats.laplacian, from_rows({{-1, 1, 0, 0}, {1, -1, 0, 0}, {0, 0, -1, 0}, {0, 0, 1, 0}}));
}

TEST(Model, SingleReactionMatrices) {
  auto net = parse_network("X1 -> X2");
  auto mats = build_structural_matrices(net);
  EXPECT_EQ(mats.complex_matrix, from_rows({{1, 0}, {0, 1}}));
  EXPECT_EQ(mats.adjacency, from_rows({{-1}, {1}}));
  EXPECT_EQ(mats.stoich, from_rows({{-1}, {1}}));
}

TEST(Model, RandomMatrixIdentities) {
  std::mt19937 rng(11);
  for (int t = 0; t < 200; ++t) {
    auto net = random_network(rng, 8, 8, 3);
    auto m = build_structural_matrices(net);
    EXPECT_EQ(m.stoich, naive_product(m.complex_matrix, m.adjacency));
    EXPECT_EQ(m.laplacian, naive_product(m.adjacency, m.source_matrix));
    EXPECT_EQ(multiply(m.complex_matrix, m.adjacency), m.stoich);
    for (std::size_t k = 0; k < m.adjacency.cols(); ++k) {
      int sum = 0, neg = 0, pos = 0;
      for (std::size_t i = 0; i < m.adjacency.rows(); ++i) {
        sum += m.adjacency(i, k);
        neg += m.adjacency(i, k) == -1;
        pos += m.adjacency(i, k) == 1;
      }
      EXPECT_EQ(sum, 0);
      EXPECT_EQ(neg, 1);
      EXPECT_EQ(pos, 1);
    }
    for (std::size_t i = 0; i < net.num_complexes(); ++i) {
      int outdeg = 0;
      for (const auto& r : net.reactions()) outdeg += r.source == i;
      EXPECT_EQ(m.laplacian(i, i), -outdeg);
    }
  }
}

TEST(Model, MultiplyRejectsBadShapes) {
  EXPECT_THROW(multiply(Matrix<int>(2, 3), Matrix<int>(2, 3)), DimensionError);
}

TEST(Model, IntroLinkageClasses) {
  auto net = load_fixture("intro");
  auto classes = strong_linkage_classes(net);
  ASSERT_EQ(classes.size(), 3u);
  EXPECT_EQ(classes[0].members, (std::vector<std::size_t>{0, 1}));
  EXPECT_TRUE(classes[0].terminal);
  EXPECT_EQ(classes[1].members, (std::vector<std::size_t>{2}));
  EXPECT_FALSE(classes[1].terminal);
  EXPECT_EQ(classes[2].members, (std::vector<std::size_t>{3}));
  EXPECT_TRUE(classes[2].terminal);
}

TEST(Model, SingleReactionLinkageClasses) {
  auto net = parse_network("X1 -> X2");
  auto classes = strong_linkage_classes(net);
  ASSERT_EQ(classes.size(), 2u);
  EXPECT_FALSE(classes[0].terminal);
  EXPECT_TRUE(classes[1].terminal);
}

TEST(Model, LinkageClassesPartitionAndAgreeWithReachability) {
  std::mt19937 rng(5);
  for (int t = 0; t < 100; ++t) {
    auto net = random_network(rng);
    auto classes = strong_linkage_classes(net);
    std::vector<int> seen(net.num_complexes(), 0);
    for (const auto& c : classes)
      for (auto v : c.members) ++seen[v];
    for (int s : seen) EXPECT_EQ(s, 1);
    EXPECT_EQ(terminal_complexes(net.num_complexes(), net.reactions()),
              terminal_by_reachability(net.num_complexes(), net.reactions()));
  }
}

TEST(Model, IsAbsorbing) {
  auto net = load_fixture("intro");
  EXPECT_TRUE(is_absorbing(net, {0, 1, 3}));
  EXPECT_FALSE(is_absorbing(net, {2}));
  EXPECT_TRUE(is_absorbing(net, net.all_complexes()));
}

TEST(Model, ForwardClosureStaysAbsorbing) {
  std::mt19937 rng(8);
  for (int t = 0; t < 50; ++t) {
    auto net = random_network(rng);
    ComplexSet y = terminal_complexes(net.num_complexes(), net.reactions());
    ASSERT_TRUE(is_absorbing(net, y));
    ComplexSet seed = y;
    seed.insert(t % net.num_complexes());
    auto closed = forward_closure(net.num_complexes(), net.reactions(), seed);
    EXPECT_TRUE(is_absorbing(net, closed));
  }
}

TEST(Model, ValidationRejectsBadNetworks) {
  std::vector<Species> sp{{0, "A"}, {1, "B"}};
  std::vector<Complex> cx{{{1, 0}}, {{0, 1}}};
  EXPECT_THROW(ReactionNetwork(sp, cx, {}), ValidationError);
  EXPECT_THROW(ReactionNetwork(sp, cx, {{0, 0}}), ValidationError);
  EXPECT_THROW(ReactionNetwork(sp, cx, {{0, 1}, {0, 1}}), ValidationError);
  EXPECT_THROW(ReactionNetwork(sp, cx, {{0, 2}}), ValidationError);
  EXPECT_THROW(ReactionNetwork(sp, {{{1, 0}}, {{1, 0}}}, {{0, 1}}), ValidationError);
  EXPECT_THROW(ReactionNetwork(sp, {{{1, 0}}, {{2, 0}}}, {{0, 1}}), ValidationError);
  EXPECT_THROW(ReactionNetwork(sp, {{{-1, 1}}, {{1, 0}}}, {{0, 1}}), ValidationError);
  EXPECT_THROW(ReactionNetwork(sp, {{{1, 0}}, {{0, 1}}, {{1, 1}}}, {{0, 1}}), ValidationError);
  EXPECT_THROW(ReactionNetwork({{0, "A"}, {1, "A"}}, cx, {{0, 1}}), ValidationError);
  EXPECT_NO_THROW(ReactionNetwork(sp, cx, {{0, 1}}));
}
