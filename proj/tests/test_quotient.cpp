#include <filesystem>
#include <random>

#include <gtest/gtest.h>

#include "multiegs/quotient.hpp"
#include "multiegs/suite.hpp"
#include "oracles.hpp"

using namespace multiegs;

namespace {

Portrait as_portrait(int p, int n, const oracle::Perm& x) {
  return portrait_from_leaf_permutation(p, n, Permutation(x));
}

SubgroupChain chain_of(int p, int n, const std::set<oracle::Perm>& elements) {
  std::vector<Portrait> gens;
  for (const auto& x : elements) gens.push_back(as_portrait(p, n, x));
  return SubgroupChain::generated_by(p, n, gens);
}

}  // namespace

TEST(Chain, Small) {
  const SubgroupChain trivial(3, 1);
  EXPECT_EQ(trivial.order(), 1);
  const auto a = Portrait::rooted(3, 1, 1);
  const auto c = SubgroupChain::generated_by(3, 1, std::span<const Portrait>(&a, 1));
  EXPECT_EQ(c.order(), 3);
  EXPECT_TRUE(c.contains(Permutation(std::vector<std::uint32_t>{2, 0, 1})));
  EXPECT_EQ(c.elements().size(), 3u);
}

TEST(Chain, OrdersMatchClosure) {
  for (const auto& d : {gupta_sidki_datum(), constant_pair_datum(), dependent_datum(),
                        make_datum(3, {{1, {1, 0}}, {1, {0, 1}}})}) {
    for (int n = 1; n <= 3; ++n) {
      const FiniteQuotient q(d, n);
      const auto deg = static_cast<std::size_t>(checked_power(3, n));
      const auto gens = oracle::generator_perms(d, n);
      const auto group = oracle::closure(gens, deg);
      ASSERT_EQ(q.group().order(), group.size()) << format_datum(d) << " n=" << n;
      const auto der = oracle::derived(gens, deg);
      EXPECT_EQ(q.derived().order(), der.size()) << format_datum(d) << " n=" << n;
      for (const auto& x : der) EXPECT_TRUE(q.derived().contains(Permutation(x)));
    }
  }
}

TEST(Chain, KnownOrders) {
  EXPECT_EQ(FiniteQuotient(gupta_sidki_datum(), 1).group().order(), 3);
  EXPECT_EQ(FiniteQuotient(gupta_sidki_datum(), 2).group().order(), 27);
  EXPECT_EQ(FiniteQuotient(gupta_sidki_datum(), 3).group().order(), 2187);
  EXPECT_EQ(FiniteQuotient(constant_pair_datum(), 2).group().order(), 81);
  EXPECT_THROW(FiniteQuotient(gupta_sidki_datum(), 10), GuardError);
}

TEST(Chain, MembershipAndElements) {
  const FiniteQuotient q(gupta_sidki_datum(), 3);
  const auto elems = q.group().elements();
  EXPECT_EQ(elems.size(), 2187u);
  std::set<Portrait> distinct(elems.begin(), elems.end());
  EXPECT_EQ(distinct.size(), elems.size());
  std::mt19937_64 rng(2);
  for (int t = 0; t < 50; ++t) {
    const auto g = q.group().random_element(rng);
    EXPECT_TRUE(q.group().contains(g));
    EXPECT_TRUE(distinct.count(g));
  }
  // random elements of the whole Sylow subgroup: membership agrees with the closure
  const auto gens = oracle::generator_perms(gupta_sidki_datum(), 3);
  const auto group = oracle::closure(gens, 27);
  int members = 0;
  for (int t = 0; t < 200; ++t) {
    std::vector<Residue> labels(13);
    for (auto& x : labels) x = static_cast<Residue>(rng() % 3);
    const Portrait g(3, 3, labels);
    const bool in = group.count(leaf_permutation(g).images()) > 0;
    members += in;
    EXPECT_EQ(q.group().contains(g), in);
  }
  EXPECT_LT(members, 200);
}

TEST(Chain, LevelKernels) {
  const FiniteQuotient q(gupta_sidki_datum(), 2);
  EXPECT_EQ(q.group().level_kernel(1).order(), 9);
  EXPECT_EQ(q.group().level_kernel(2).order(), 1);
  const auto a = q.image(GroupWord::a(3));
  const auto ca = SubgroupChain::generated_by(3, 2, std::span<const Portrait>(&a, 1));
  EXPECT_EQ(ca.level_kernel(1).order(), 1);
  // kernel order is |Q_n| / |Q_k|
  const FiniteQuotient q4(dependent_datum(), 4);
  for (int k = 1; k <= 4; ++k)
    EXPECT_EQ(q4.group().log_order() - q4.group().level_kernel(k).log_order(),
              FiniteQuotient(dependent_datum(), k).group().log_order());
}

TEST(Chain, SeriesNested) {
  for (const auto& d : {gupta_sidki_datum(), exceptional_datum(), constant_pair_datum()}) {
    const FiniteQuotient q(d, 3);
    EXPECT_TRUE(q.group().contains(q.derived()));
    EXPECT_TRUE(q.derived().contains(q.gamma3()));
    EXPECT_TRUE(q.derived().contains(q.second_derived()));
  }
  const auto a = Portrait::rooted(3, 2, 1);
  EXPECT_EQ(derived(SubgroupChain::generated_by(3, 2, std::span<const Portrait>(&a, 1))).order(), 1);
}

TEST(Chain, ProjectionCommutesWithDerived) {
  const auto d = gupta_sidki_datum();
  const FiniteQuotient q(d, 4), low(d, 3);
  for (const auto& g : q.derived().strong_generators()) EXPECT_TRUE(low.derived().contains(truncate(g, 3)));
  // and the projection is onto
  std::vector<Portrait> projected;
  for (const auto& g : q.derived().strong_generators()) projected.push_back(truncate(g, 3));
  EXPECT_EQ(SubgroupChain::generated_by(3, 3, projected), low.derived());
}

TEST(Chain, SectionImages) {
  const FiniteQuotient q(gupta_sidki_datum(), 3);
  for (int x = 1; x <= 3; ++x)
    EXPECT_EQ(section_image(q.group().level_kernel(1), Vertex(3, {x})).order(),
              FiniteQuotient(gupta_sidki_datum(), 2).group().order());
  EXPECT_EQ(section_image(SubgroupChain(3, 3), Vertex(3, {1})).order(), 1);
  for (bool full : joint_image_subdirect(q, q.derived())) EXPECT_TRUE(full);
}

TEST(Chain, NormalClosureMatchesOracle) {
  const auto d = gupta_sidki_datum();
  const FiniteQuotient q(d, 3);
  const auto gens = oracle::generator_perms(d, 3);
  const auto bperm = gens[1];
  const auto oracle_nc = oracle::normal_closure({bperm}, gens, 27);
  const auto b = q.image(GroupWord::b(d, 1, 1));
  EXPECT_EQ(normal_closure(q, std::span<const Portrait>(&b, 1)).order(), oracle_nc.size());
  EXPECT_EQ(chain_of(3, 3, oracle_nc), normal_closure(q, std::span<const Portrait>(&b, 1)));
  const Portrait e(3, 3);
  EXPECT_EQ(normal_closure(q, std::span<const Portrait>(&e, 1)).order(), 1);
}

TEST(Chain, VertexProduct) {
  const FiniteQuotient q(gupta_sidki_datum(), 1);
  const auto prod = vertex_product(q.group(), 2);
  EXPECT_EQ(prod.depth(), 3);
  EXPECT_EQ(prod.log_order(), 9);
  EXPECT_TRUE(prod.contains(from_level_sections(3, 2, std::vector<Portrait>(9, Portrait::rooted(3, 1, 1)))));
}

TEST(Cache, DiskRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "multiegs-test-cache";
  std::filesystem::remove_all(dir);
  const auto d = exceptional_datum();
  SubgroupChain built;
  {
    ChainCache cache(dir);
    built = FiniteQuotient(d, 3, kDefaultDegreeGuard, &cache).derived();
    EXPECT_GT(cache.misses(), 0u);
  }
  {
    ChainCache cache(dir);
    const auto loaded = FiniteQuotient(d, 3, kDefaultDegreeGuard, &cache).derived();
    EXPECT_EQ(cache.misses(), 0u);
    EXPECT_EQ(loaded, built);
  }
  EXPECT_EQ(read_chain(write_chain(built)), built);
  std::filesystem::remove_all(dir);
}
