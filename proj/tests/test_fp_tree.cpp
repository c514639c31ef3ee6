#include <random>

#include <gtest/gtest.h>

#include "multiegs/fp.hpp"
#include "multiegs/tree.hpp"
#include "oracles.hpp"

using namespace multiegs;

TEST(Fp, Primes) {
  EXPECT_TRUE(is_odd_prime(3));
  EXPECT_TRUE(is_odd_prime(251));
  EXPECT_FALSE(is_odd_prime(2));
  EXPECT_FALSE(is_odd_prime(9));
  EXPECT_FALSE(is_odd_prime(1));
}

TEST(Fp, InverseMatchesBruteForce) {
  for (int p : {3, 5, 7, 11})
    for (int x = 1; x < p; ++x) EXPECT_EQ(mod(static_cast<long long>(x) * inverse_mod(x, p), p), 1);
  EXPECT_EQ(mod(-1, 3), 2);
}

TEST(Fp, RankAndNullspace) {
  EXPECT_EQ(rank_mod({{1, 2}, {2, 1}}, 3), 1);
  EXPECT_EQ(rank_mod({{1, 0}, {0, 1}, {1, 1}}, 3), 2);
  EXPECT_EQ(rank_mod({}, 3), 0);

  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const int p = trial % 2 ? 5 : 3;
    FpMatrix rows(4, std::vector<int>(3));
    for (auto& r : rows)
      for (auto& x : r) x = static_cast<int>(rng() % p);
    const auto ns = left_nullspace(rows, p);
    EXPECT_EQ(static_cast<int>(ns.size()) + rank_mod(rows, p), 4);
    for (const auto& lambda : ns)
      for (int c = 0; c < 3; ++c) {
        long long s = 0;
        for (int i = 0; i < 4; ++i) s += static_cast<long long>(lambda[i]) * rows[i][c];
        EXPECT_EQ(mod(s, p), 0);
      }
  }
}

TEST(Tree, VertexIndexing) {
  EXPECT_EQ(internal_vertex_count(3, 2), 4u);
  EXPECT_EQ(checked_power(5, 3), 125u);
  const Vertex v(3, {2, 3});
  EXPECT_EQ(v.position(), 5u);
  EXPECT_EQ(v.bfs_index(), 9u);
  EXPECT_EQ(Vertex::from_position(3, 2, 5), v);
  EXPECT_THROW(Vertex(3, {4}), std::invalid_argument);
}

TEST(Tree, RootedAction) {
  const auto a = Portrait::rooted(3, 1, 1);
  EXPECT_EQ(act(a, Vertex(3, {1})), Vertex(3, {2}));
  EXPECT_EQ(leaf_permutation(a).cycles(), "(1 2 3)");
  EXPECT_EQ(act(Portrait(3, 2), Vertex(3, {2, 1})), Vertex(3, {2, 1}));
  EXPECT_TRUE(compose(a, power(a, 2)).is_identity());
  EXPECT_EQ(invert(a), power(a, 2));
}

TEST(Tree, InverseLabels) {
  // f^-1 carries -f(v^(f^-1)) at v
  const Portrait f(3, 2, {1, 2, 1, 0});
  const Portrait g = invert(f);
  EXPECT_EQ(compose(f, g), Portrait(3, 2));
  EXPECT_EQ(compose(g, f), Portrait(3, 2));
  EXPECT_EQ(g.label(0), 2);
  EXPECT_EQ(std::vector<Residue>(g.labels().begin() + 1, g.labels().end()),
            (std::vector<Residue>{0, 1, 2}));
}

TEST(Tree, ComposeMatchesPermutations) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const int p = trial % 2 ? 3 : 5;
    const int n = p == 3 ? 3 : 2;
    std::vector<Residue> lf(internal_vertex_count(p, n)), lg(lf.size());
    for (auto& x : lf) x = static_cast<Residue>(rng() % p);
    for (auto& x : lg) x = static_cast<Residue>(rng() % p);
    const Portrait f(p, n, lf), g(p, n, lg);
    const auto pf = leaf_permutation(f).images(), pg = leaf_permutation(g).images();
    EXPECT_EQ(leaf_permutation(compose(f, g)).images(), oracle::mul(pf, pg));
    EXPECT_EQ(leaf_permutation(invert(f)).images(), oracle::inv(pf));
    EXPECT_EQ(portrait_from_leaf_permutation(p, n, leaf_permutation(f)), f);
    EXPECT_EQ(leaf_permutation(commutator(f, g)).images(), oracle::comm(pf, pg));
    EXPECT_EQ(parse_portrait(serialize(f)), f);
    // sections of a level-1 stabilizer reassemble
    auto lst = lf;
    lst[0] = 0;
    const Portrait h(p, n, lst);
    std::vector<Portrait> secs;
    for (int x = 1; x <= p; ++x) secs.push_back(section(h, Vertex(p, {x})));
    EXPECT_EQ(Portrait::assemble(0, secs), h);
    if (f.label(0) != 0) EXPECT_THROW(section(f, Vertex(p, {1})), std::invalid_argument);
  }
}

TEST(Tree, DirectedInverse) {
  // b of the Gupta-Sidki group to depth 2: level-1 labels (1,2,0)
  const Portrait b(3, 2, {0, 1, 2, 0});
  const auto inv = invert(b);
  EXPECT_EQ((std::vector<Residue>(inv.labels().begin() + 1, inv.labels().end())),
            (std::vector<Residue>{2, 1, 0}));
  EXPECT_TRUE(compose(b, inv).is_identity());
  EXPECT_EQ(section(Portrait(3, 3, std::vector<Residue>(13, 0)), Vertex(3, {2})), Portrait(3, 2));
}

TEST(Tree, FromLevelSections) {
  const auto a = Portrait::rooted(3, 1, 1);
  std::vector<Portrait> secs{a, Portrait(3, 1), power(a, 2)};
  const auto f = from_level_sections(3, 1, secs);
  EXPECT_EQ(f.label(0), 0);
  EXPECT_EQ(section(f, Vertex(3, {1})), a);
  EXPECT_EQ(section(f, Vertex(3, {3})), power(a, 2));
  EXPECT_EQ(truncate(f, 1), Portrait(3, 1));
}

TEST(Tree, NonSylowPermutationRejected) {
  // transposition of two leaves under different parents
  Permutation t(std::vector<std::uint32_t>{0, 1, 2, 4, 3, 5, 6, 7, 8});
  EXPECT_THROW(portrait_from_leaf_permutation(3, 2, t), std::invalid_argument);
}
