#include <gtest/gtest.h>

#include "multiegs/datum.hpp"
#include "multiegs/suite.hpp"
#include "oracles.hpp"

using namespace multiegs;

TEST(Datum, Validation) {
  EXPECT_TRUE(validate(make_datum(3, {{1, {1, 2}}})).empty());
  EXPECT_FALSE(validate(make_datum(3, {{1, {1, 2}}, {1, {2, 1}}})).empty());
  EXPECT_FALSE(validate(make_datum(3, {})).empty());
  EXPECT_FALSE(validate(make_datum(3, {{1, {0, 0}}})).empty());
  EXPECT_THROW(require_valid(make_datum(3, {})), std::invalid_argument);
}

TEST(Datum, VectorShapes) {
  EXPECT_TRUE(is_symmetric(DefiningVector{{1, 1}}));
  EXPECT_TRUE(is_constant(DefiningVector{{1, 1}}));
  EXPECT_TRUE(is_constant(DefiningVector{{2, 2}}));
  EXPECT_FALSE(is_symmetric(DefiningVector{{1, 2}}));
  EXPECT_TRUE(is_symmetric(DefiningVector{{1, 0, 0, 1}}));
  EXPECT_FALSE(is_constant(DefiningVector{{1, 0, 0, 1}}));
}

TEST(Datum, DirectedPortraitLabels) {
  const auto gs = directed_portrait(3, 1, DefiningVector{{1, 2}}, 2);
  EXPECT_EQ(gs.label(0), 0);
  EXPECT_EQ((std::vector<Residue>(gs.labels().begin() + 1, gs.labels().end())),
            (std::vector<Residue>{1, 2, 0}));
  const auto b = directed_portrait(5, 2, DefiningVector{{1, 0, 0, 1}}, 2);
  EXPECT_EQ((std::vector<Residue>(b.labels().begin() + 1, b.labels().end())),
            (std::vector<Residue>{0, 0, 1, 0, 1}));
  EXPECT_TRUE(directed_portrait(3, 2, DefiningVector{{1, 1}}, 1).is_identity());
}

TEST(Datum, DirectedPortraitMatchesRecursion) {
  for (int j = 1; j <= 3; ++j)
    for (const auto& e : std::vector<std::vector<int>>{{1, 2}, {1, 0}, {2, 2}}) {
      const auto f = directed_portrait(3, j, DefiningVector{e}, 4);
      EXPECT_EQ(leaf_permutation(f).images(), oracle::directed_perm(3, 4, j, e)) << j;
    }
  const std::vector<int> e{1, 0, 3, 1};
  EXPECT_EQ(leaf_permutation(directed_portrait(5, 4, DefiningVector{e}, 3)).images(),
            oracle::directed_perm(5, 3, 4, e));
}

TEST(Datum, Torsion) {
  EXPECT_TRUE(is_torsion(gupta_sidki_datum()));
  EXPECT_FALSE(is_torsion(constant_single_datum()));
  EXPECT_FALSE(is_torsion(exceptional_datum()));
}

TEST(Datum, Classification) {
  const auto gs = classify(gupta_sidki_datum());
  EXPECT_TRUE(gs.branch_over_derived);
  EXPECT_EQ(gs.csp, CspStatus::HasCSP);

  const auto g = classify(make_datum(3, {{1, {1, 1}}, {3, {1, 1}}}));
  EXPECT_TRUE(g.in_G_class);
  EXPECT_TRUE(g.not_branch);
  EXPECT_EQ(g.csp, CspStatus::OutsideTheoremScope);

  const auto e = classify(exceptional_datum());
  EXPECT_TRUE(e.in_E_class);
  EXPECT_TRUE(e.branch_over_derived);
  EXPECT_EQ(e.csp, CspStatus::NoCSP);

  const auto dep = classify(dependent_datum());
  EXPECT_TRUE(dep.branch_over_derived);
  EXPECT_EQ(dep.csp, CspStatus::NoCSP);

  // a scalar multiple of the pattern is still exceptional
  EXPECT_TRUE(classify(make_datum(5, {{1, {2, 0, 0, 2}}, {3, {0, 3, 3, 0}}})).in_E_class);
  EXPECT_FALSE(classify(make_datum(5, {{1, {1, 0, 0, 1}}, {2, {0, 1, 2, 0}}})).in_E_class);
}

TEST(Datum, ExceptionalEmptyForThree) {
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        for (int d = 0; d < 3; ++d) {
          if ((!a && !b) || (!c && !d)) continue;
          EXPECT_FALSE(classify(make_datum(3, {{1, {a, b}}, {2, {c, d}}})).in_E_class);
        }
}

TEST(Datum, DependencyExamples) {
  const auto dep = dependency(dependent_datum());
  ASSERT_TRUE(dep);
  EXPECT_EQ(dep->target, (FamilyElement{1, {1}}));
  ASSERT_EQ(dep->terms.size(), 1u);
  EXPECT_EQ(dep->terms[0], (FamilyElement{2, {1}}));

  const auto scaled = dependency(make_datum(3, {{1, {1, 2}}, {2, {2, 1}}}));
  ASSERT_TRUE(scaled);
  EXPECT_EQ(scaled->target, (FamilyElement{1, {1}}));
  EXPECT_EQ(scaled->terms[0], (FamilyElement{2, {2}}));

  EXPECT_FALSE(dependency(make_datum(3, {{1, {1, 0}}, {1, {0, 1}}})));
}

TEST(Datum, DependencyHoldsModuloSecondStabilizer) {
  // c and the conjugated product agree on the first two levels
  for (const auto& d : {dependent_datum(), make_datum(3, {{1, {1, 2}}, {2, {2, 1}}}),
                        make_datum(5, {{1, {1, 2, 0, 0}}, {2, {1, 0, 0, 0}}, {4, {0, 1, 0, 0}}})}) {
    const auto dep = dependency(d);
    ASSERT_TRUE(dep);
    const int j = dep->target.family;
    auto family_portrait = [&](const FamilyElement& f) {
      Portrait r(d.p, 2);
      for (int i = 1; i <= d.family_size(f.family); ++i)
        r = compose(r, power(generator_portrait(d, f.family, i, 2), f.exponents[i - 1]));
      return r;
    };
    Portrait rhs(d.p, 2);
    for (const auto& t : dep->terms)
      rhs = compose(rhs, conjugate(family_portrait(t), Portrait::rooted(d.p, 2, t.family - j)));
    EXPECT_EQ(family_portrait(dep->target), rhs) << format_datum(d);
  }
}

TEST(Datum, ParseAndFormat) {
  const auto d = parse_datum("# comment\np 3\n\nfamily 1 = 1,2\nfamily 3 = 1,0 ; 0,1\n");
  EXPECT_EQ(d.family_size(1), 1);
  EXPECT_EQ(d.family_size(3), 2);
  EXPECT_EQ(parse_datum(format_datum(d)), d);
  EXPECT_EQ(format_datum(gupta_sidki_datum()), "p 3\nfamily 1 = 1,2\n");
  EXPECT_EQ(datum_hash(d).size(), 16u);
  EXPECT_NE(datum_hash(d), datum_hash(gupta_sidki_datum()));
  try {
    parse_datum("p 3\nfamily 1 = 1,2,3\n");
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  EXPECT_THROW(parse_datum("p 4\nfamily 1 = 1,2\n"), std::invalid_argument);
  EXPECT_THROW(parse_datum("family 1 = 1,2\n"), std::invalid_argument);
}
