#include <gtest/gtest.h>

#include "multiegs/lab.hpp"
#include "multiegs/suite.hpp"

using namespace multiegs;

namespace {

std::string cert(const CheckReport& r, const std::string& key) {
  for (const auto& [k, v] : r.certificates)
    if (k == key) return v;
  return "";
}

}  // namespace

TEST(Lab, BranchOverDerived) {
  EXPECT_EQ(check_branch_over_derived(gupta_sidki_datum(), 3).verdict, Verdict::Verified);
  const auto g = check_branch_over_derived(constant_single_datum(), 3);
  EXPECT_EQ(g.verdict, Verdict::RefutedByWitness);
  EXPECT_TRUE(g.agrees());
  EXPECT_FALSE(cert(g, "witness").empty());
  EXPECT_EQ(check_branch_over_derived(exceptional_datum(), 3).verdict, Verdict::Verified);
  EXPECT_THROW(check_branch_over_derived(gupta_sidki_datum(), 2), PreconditionError);
}

TEST(Lab, BranchOverGamma3) {
  EXPECT_EQ(check_branch_over_gamma3(gupta_sidki_datum(), 3).verdict, Verdict::Verified);
  EXPECT_THROW(check_branch_over_gamma3(constant_pair_datum(), 3), PreconditionError);
}

TEST(Lab, Key) {
  EXPECT_EQ(check_key(gupta_sidki_datum(), 3).verdict, Verdict::Verified);
  EXPECT_EQ(check_key(make_datum(3, {{1, {1, 2}}, {2, {2, 1}}}), 3).verdict, Verdict::Verified);
  EXPECT_THROW(check_key(constant_pair_datum(), 3), PreconditionError);
  const auto e = check_key(exceptional_datum(), 3);
  EXPECT_EQ(e.expected, Verdict::RefutedByWitness);
}

TEST(Lab, SubdirectAndSecondDerived) {
  EXPECT_EQ(check_subdirect(gupta_sidki_datum(), 3).verdict, Verdict::Verified);
  EXPECT_EQ(check_second_derived(gupta_sidki_datum(), 3).verdict, Verdict::Verified);
  EXPECT_EQ(check_second_derived(exceptional_datum(), 3).verdict, Verdict::Verified);
  EXPECT_THROW(check_subdirect(constant_pair_datum(), 3), PreconditionError);
}

TEST(Lab, CspPositive) {
  EXPECT_EQ(check_csp_positive(gupta_sidki_datum(), 3).verdict, Verdict::Verified);
  EXPECT_THROW(check_csp_positive(dependent_datum(), 4), PreconditionError);
  EXPECT_THROW(check_csp_positive(gupta_sidki_datum(), 2), PreconditionError);
}

TEST(Lab, DependentWitness) {
  const auto w = dependent_witness(dependent_datum(), 3);
  ASSERT_EQ(w.t.size(), 3u);
  const auto& d = dependent_datum();
  EXPECT_TRUE(compose(invert(evaluate(w.c, d, 3)), evaluate(w.t[2], d, 3)).is_identity());
  EXPECT_EQ(abelianization(w.t[2], d), abelianization(w.product, d));
  EXPECT_NE(abelianization(w.t[2], d), abelianization(w.c, d));
  // every t_k agrees with c to depth k
  for (int k = 1; k <= 3; ++k)
    EXPECT_TRUE(compose(invert(evaluate(w.c, d, k)), evaluate(w.t[k - 1], d, k)).is_identity()) << k;
  EXPECT_THROW(dependent_witness(gupta_sidki_datum(), 3), PreconditionError);
}

TEST(Lab, ExceptionalWitness) {
  const auto w = exceptional_witness(exceptional_datum(), 3);
  for (int k = 1; k <= 3; ++k) EXPECT_TRUE(evaluate(w.t[k - 1], exceptional_datum(), k).is_identity());
  EXPECT_THROW(exceptional_witness(gupta_sidki_datum(), 2), PreconditionError);
  const auto r = csp_witness_exceptional(exceptional_datum(), 2, 4);
  EXPECT_EQ(cert(r, "t_n in St(n)"), "yes");
  EXPECT_EQ(cert(r, "t_n in [b^(j),b^(k)] gamma3(Q_m)"), "yes");
}

TEST(Lab, Fractality) {
  const auto r = check_fractality(gupta_sidki_datum(), 3);
  EXPECT_EQ(r.verdict, Verdict::Verified);
  const auto g = check_fractality(constant_pair_datum(), 4);
  EXPECT_EQ(g.verdict, Verdict::RefutedByWitness);
  EXPECT_NE(cert(g, "depth 2").find("defect index 3^1"), std::string::npos);
}

TEST(Lab, FullSectionVertex) {
  const auto gs = gupta_sidki_datum();
  const auto u = find_full_section_vertex(gs, GroupWord::a(3), 2, 4);
  ASSERT_TRUE(u);
  EXPECT_LE(u->level(), 2);
  const auto two = make_datum(3, {{1, {1, 2}}, {2, {1, 0}}});
  const auto v = find_full_section_vertex(two, GroupWord::b(two, 1, 1), 2, 4);
  ASSERT_TRUE(v);
  EXPECT_THROW(find_full_section_vertex(gs, GroupWord(3), 2, 4), PreconditionError);
}

TEST(Lab, NormalClosureBlocks) {
  const auto gs = gupta_sidki_datum();
  const auto r = check_normal_closure_blocks(gs, GroupWord::a(3), 5);
  EXPECT_EQ(r.verdict, Verdict::Verified);
  EXPECT_NE(cert(r, "K_n contained for n"), "none");
  const auto e = exceptional_datum();
  const auto re = check_normal_closure_blocks(e, parse_word("[a, b[1]]", e), 4);
  EXPECT_EQ(cert(re, "K_n"), "not asserted for class E");
  EXPECT_THROW(check_normal_closure_blocks(gs, parse_word("b[1]^3", gs), 4), PreconditionError);
}

TEST(Lab, WeakCsp) {
  EXPECT_EQ(check_weak_csp(gupta_sidki_datum(), 2).verdict, Verdict::Verified);
  EXPECT_THROW(check_weak_csp(constant_pair_datum(), 2), PreconditionError);
}

TEST(Lab, ConstantVectorAnalysis) {
  const auto r = constant_vector_analysis(constant_pair_datum(), 2);
  EXPECT_EQ(r.verdict, Verdict::Verified) << format_report(r);
  EXPECT_EQ(cert(r, "(a) |Q_n : K|"), "3^1");
  EXPECT_THROW(constant_vector_analysis(gupta_sidki_datum(), 2), PreconditionError);
}

TEST(Lab, MonotoneInLevel) {
  for (const auto& [name, d] : suite_data()) {
    if (d.p != 3) continue;
    const auto high = check_branch_over_derived(d, 4);
    if (high.verdict == Verdict::Verified)
      EXPECT_EQ(check_branch_over_derived(d, 3).verdict, Verdict::Verified) << name;
  }
}

TEST(Lab, ReportsAreDeterministic) {
  const auto a = format_report(run_check("key", gupta_sidki_datum(), 3, 5));
  const auto b = format_report(run_check("key", gupta_sidki_datum(), 3, 5));
  EXPECT_EQ(a, b);
  const auto json = reports_json({run_check("fractality", gupta_sidki_datum(), 3, 5)});
  EXPECT_NE(json.find("\"verdict\": \"Verified\""), std::string::npos);
  EXPECT_THROW(run_check("nope", gupta_sidki_datum(), 3, 5), std::invalid_argument);
  const auto guarded = run_check("key", gupta_sidki_datum(), 3, 5, LabConfig{10});
  EXPECT_EQ(guarded.verdict, Verdict::GuardExceeded);
}
