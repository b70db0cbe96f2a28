#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <filesystem>
#include <random>

#include "iccdec/descriptor_io.hpp"
#include "iccdec/icc_rules.hpp"
#include "iccdec/matrix_groups.hpp"
#include "iccdec/oracle.hpp"

using namespace iccdec;

namespace {

StructuredGroup cyc(std::int64_t n, const char* name) {
  return StructuredGroup::finite_cyclic(n, name);
}

// Cayley table of S3 with elements listed as permutations of {0,1,2};
// element 0 is the identity.
FiniteTable s3_table() {
  std::vector<std::array<int, 3>> perms;
  std::array<int, 3> p{0, 1, 2};
  do {
    perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  auto index = [&](const std::array<int, 3>& q) {
    return static_cast<int>(std::find(perms.begin(), perms.end(), q) - perms.begin());
  };
  std::vector<std::vector<int>> t(6, std::vector<int>(6));
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      std::array<int, 3> c{};
      for (int k = 0; k < 3; ++k) c[k] = perms[i][perms[j][k]];
      t[i][j] = index(c);
    }
  }
  return FiniteTable(t);
}

Verdict decide_words(const StructuredGroup& g) { return decide_group(g); }

}  // namespace

TEST(IccRules, FreeProductOrders) {
  EXPECT_EQ(icc_free_product(Cardinal::finite(2), Cardinal::finite(2)).status, Status::NotICC);
  EXPECT_EQ(icc_free_product(Cardinal::finite(2), Cardinal::finite(3)).status, Status::ICC);
  EXPECT_EQ(icc_free_product(Cardinal::infinite(), Cardinal::finite(2)).status, Status::ICC);
  EXPECT_THROW(icc_free_product(Cardinal::finite(1), Cardinal::finite(3)), UsageError);
  EXPECT_TRUE(cites(icc_free_product(Cardinal::finite(2), Cardinal::finite(2)),
                    Citation::InfiniteDihedral));
  EXPECT_TRUE(cites(icc_free_product(Cardinal::finite(2), Cardinal::finite(3)), Citation::Prop3i));
}

TEST(IccRules, FreeProductSymmetric) {
  const std::vector<Cardinal> orders{Cardinal::finite(2), Cardinal::finite(3), Cardinal::finite(7),
                                     Cardinal::infinite(), Cardinal::unknown()};
  for (const auto& a : orders) {
    for (const auto& b : orders) {
      EXPECT_EQ(icc_free_product(a, b).status, icc_free_product(b, a).status);
    }
  }
}

TEST(IccRules, DecideDihedralHasTranslationWitness) {
  const auto g = StructuredGroup::free_product(cyc(2, "a"), cyc(2, "b"));
  const auto v = decide_group(g);
  ASSERT_EQ(v.status, Status::NotICC);
  ASSERT_TRUE(v.witness && v.witness->element);
  EXPECT_EQ(*v.witness->element, reduce_word(g, "a b"));
}

TEST(IccRules, AmalgamTrivialEdge) {
  const auto l = cyc(2, "a");
  const auto r = cyc(3, "b");
  const auto g =
      StructuredGroup::amalgam(l, r, EdgeGroup{FiniteTable(), {l.identity()}, {r.identity()}});
  EXPECT_EQ(icc_amalgam(g, std::nullopt, std::nullopt).status, Status::ICC);
}

TEST(IccRules, AmalgamCentralEdgeIsUnknown) {
  const auto l = cyc(4, "a");
  const auto r = cyc(6, "b");
  const auto g = StructuredGroup::amalgam(
      l, r,
      EdgeGroup{FiniteTable::cyclic(2), {l.identity(), reduce_word(l, "a^2")},
                {r.identity(), reduce_word(r, "b^3")}});
  const auto v = icc_amalgam(g, decide_group(l), decide_group(r));
  EXPECT_EQ(v.status, Status::Unknown);
  EXPECT_TRUE(cites(v, Citation::HypothesesNotMet));
  // The oracle agrees that -I has a finite class: it is central.
  EXPECT_EQ(symbolic_class_bound(g, reduce_word(g, "a^2")), ClassBound::Central);
}

TEST(IccRules, AmalgamEdgeNotNormalInBoth) {
  // S3 *_{Z/2} Z/4: the transposition subgroup is not normal in S3.
  const auto s3 = StructuredGroup::finite_group(s3_table());
  const auto z4 = cyc(4, "c");
  GroupElement transposition = s3.identity();
  for (const auto& x : enumerate_ball(s3, 3)) {
    if (!x.is_identity() && multiply(x, x).is_identity()) {
      transposition = x;
      break;
    }
  }
  ASSERT_FALSE(transposition.is_identity());
  const auto g = StructuredGroup::amalgam(
      s3, z4,
      EdgeGroup{FiniteTable::cyclic(2), {s3.identity(), transposition},
                {z4.identity(), reduce_word(z4, "c^2")}});
  const auto v = icc_amalgam(g, decide_group(s3), decide_group(z4));
  EXPECT_EQ(v.status, Status::ICC);
  EXPECT_TRUE(cites(v, Citation::Prop3iii));
  // Oracle evidence: a nontrivial edge element has a growing class.
  const auto rep = conjugacy_class_ball(g, reduce_word(g, "c^2"), 6);
  EXPECT_FALSE(rep.stabilized);
}

TEST(IccRules, AmalgamFactorIcc) {
  const auto l = StructuredGroup::free_product(cyc(2, "a"), cyc(3, "b"));
  const auto r = cyc(2, "c");
  const auto g = StructuredGroup::amalgam(
      l, r, EdgeGroup{FiniteTable::cyclic(2), {l.identity(), reduce_word(l, "a")},
                      {r.identity(), reduce_word(r, "c")}});
  // index of the edge in the right factor is 1, so the amalgam is just l
  EXPECT_EQ(decide_group(g).status, Status::ICC);
  EXPECT_THROW(icc_amalgam(r, std::nullopt, std::nullopt), UsageError);
}

TEST(IccRules, HnnBaseIcc) {
  const auto base = StructuredGroup::free_product(cyc(2, "a"), cyc(3, "b"));
  const auto g = StructuredGroup::hnn(
      base, FiniteHnnAssociation{{base.identity(), reduce_word(base, "a")},
                                 {base.identity(), reduce_word(base, "a")}});
  const auto v = icc_hnn(g, decide_group(base));
  EXPECT_EQ(v.status, Status::ICC);
  EXPECT_TRUE(cites(v, Citation::Prop3iv));
}

TEST(IccRules, HnnTrivialAssociationIsFree) {
  const auto base = StructuredGroup::infinite_cyclic("x");
  const auto g = StructuredGroup::hnn(base, FiniteHnnAssociation{{base.identity()}, {base.identity()}},
                                      "y");
  const auto v = icc_hnn(g, decide_group(base));
  EXPECT_EQ(v.status, Status::ICC);
  EXPECT_TRUE(cites(v, Citation::Prop3v));
  EXPECT_FALSE(conjugacy_class_ball(g, g.generator("x"), 6).stabilized);
}

TEST(IccRules, HnnNormalFiniteSubgroupIsUnknown) {
  const auto base =
      StructuredGroup::direct_with_finite(StructuredGroup::infinite_cyclic("z"), FiniteTable::cyclic(2));
  const auto f = base.generator("f");
  const auto g = StructuredGroup::hnn(base, FiniteHnnAssociation{{base.identity(), f},
                                                                  {base.identity(), f}});
  const auto v = icc_hnn(g, decide_group(base));
  EXPECT_EQ(v.status, Status::Unknown);
  EXPECT_THROW(icc_hnn(base, std::nullopt), UsageError);
}

TEST(IccRules, HnnCyclicAssociations) {
  const auto z = StructuredGroup::infinite_cyclic("a");
  EXPECT_EQ(decide_group(StructuredGroup::hnn(z, CyclicHnnAssociation{1, 2})).status, Status::ICC);
  EXPECT_EQ(decide_group(StructuredGroup::hnn(z, CyclicHnnAssociation{2, 2})).status,
            Status::Unknown);
  EXPECT_EQ(decide_group(StructuredGroup::hnn(z, CyclicHnnAssociation{1, 1})).status,
            Status::Unknown);
}

TEST(IccRules, FiniteIndexDescend) {
  const auto v = icc_finite_index_descend(Verdict::icc({Citation::Prop3i, "", "free product"}));
  EXPECT_EQ(v.status, Status::ICC);
  EXPECT_TRUE(cites(v, Citation::Lemma4));
  EXPECT_THROW(icc_finite_index_descend(
                   Verdict::not_icc({Citation::FiniteGroup, "", "x"}, Witness::finite_group())),
               UsageError);
  // F2 (index 6 in Z/2 * Z/3): oracle growth of the class of x.
  const auto f2 = StructuredGroup::free_group(2);
  const auto rep = conjugacy_class_ball(f2, f2.generator("x"), 6);
  EXPECT_TRUE(std::is_sorted(rep.counts_by_radius.begin(), rep.counts_by_radius.end()));
  EXPECT_GT(rep.counts_by_radius.back(), rep.counts_by_radius[3]);
}

TEST(IccRules, IndexTwoLift) {
  const Verdict h = Verdict::icc({Citation::Prop3i, "", "index-2 subgroup"});
  EXPECT_EQ(icc_index_two_lift(h, false).status, Status::ICC);
  const auto lifted = icc_index_two_lift(h, true);
  EXPECT_EQ(lifted.status, Status::NotICC);
  EXPECT_TRUE(lifted.witness.has_value());
  const auto tf = icc_index_two_lift(h, false, true);
  EXPECT_EQ(tf.status, Status::ICC);
  EXPECT_TRUE(cites(tf, Citation::Lemma5));
  // With the FC-center search on F2 x Z/2 the involution is found.
  const auto g =
      StructuredGroup::direct_with_finite(StructuredGroup::free_group(2), FiniteTable::cyclic(2));
  const auto found = icc_index_two_lift(h, g);
  ASSERT_EQ(found.status, Status::NotICC);
  ASSERT_TRUE(found.witness->element);
  EXPECT_EQ(*found.witness->element, g.generator("f"));
}

TEST(IccRules, MonodromyClassification) {
  EXPECT_EQ(classify_monodromy({{1, 5}, {0, 1}}), MonodromyClass::Parabolic);
  EXPECT_EQ(classify_monodromy({{0, -1}, {1, 0}}), MonodromyClass::Elliptic);
  EXPECT_EQ(classify_monodromy({{2, 1}, {1, 1}}), MonodromyClass::Hyperbolic);
  EXPECT_EQ(classify_monodromy({{-1, 1}, {0, -1}}), MonodromyClass::Parabolic);
  EXPECT_EQ(classify_monodromy({{0, -1}, {1, 1}}), MonodromyClass::Elliptic);
  EXPECT_EQ(classify_monodromy({{-1, 0}, {0, -1}}), MonodromyClass::Parabolic);
  EXPECT_THROW(classify_monodromy({{2, 0}, {0, 1}}), UsageError);
}

TEST(IccRules, MonodromyClassConjugationInvariant) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> pick(0, 3);
  const std::vector<detail::IntMatrix> gl2z{{{1, 1}, {0, 1}}, {{1, 0}, {1, 1}},
                                            {{0, 1}, {1, 0}}, {{0, -1}, {1, 0}}};
  const std::vector<detail::IntMatrix> phis{{{2, 1}, {1, 1}}, {{1, 1}, {0, 1}}, {{0, -1}, {1, 0}},
                                            {{0, -1}, {1, 1}}, {{-1, 2}, {0, -1}}, {{3, 2}, {1, 1}}};
  for (int i = 0; i < 300; ++i) {
    detail::IntMatrix g = detail::mat_identity(2);
    for (int k = 0; k < 4; ++k) g = detail::mat_mul(g, gl2z[pick(rng)]);
    for (const auto& phi : phis) {
      const auto conj = detail::mat_mul(detail::mat_mul(g, phi), detail::unimodular_inverse(g));
      EXPECT_EQ(classify_monodromy(conj), classify_monodromy(phi));
    }
  }
}

TEST(IccRules, TorusBundleTrichotomy) {
  EXPECT_EQ(icc_torus_bundle({{2, 1}, {1, 1}}).status, Status::ICC);
  const auto par = icc_torus_bundle({{1, 1}, {0, 1}});
  ASSERT_EQ(par.status, Status::NotICC);
  ASSERT_TRUE(par.witness && par.witness->element);
  EXPECT_EQ(to_string(*par.witness->element), "((1,0),0)");
  EXPECT_TRUE(cites(par, Citation::Lemma10));
  EXPECT_TRUE(cites(par, Citation::Prop2));
  const auto ell = icc_torus_bundle({{0, -1}, {1, 0}});
  EXPECT_EQ(ell.status, Status::NotICC);
  EXPECT_TRUE(ell.witness.has_value());
  EXPECT_THROW(icc_torus_bundle({{0, 1}, {1, 0}}), UsageError);
  EXPECT_EQ(icc_torus_bundle({{2, 1}, {1, 1}}).reasons.front().display_label(),
            "Lemma 10 (hyperbolic)");
}

TEST(IccRules, NegativeParabolicWitnessClassIsPair) {
  const auto g = StructuredGroup::semidirect({{-1, 1}, {0, -1}});
  const auto v = decide_group(g);
  ASSERT_EQ(v.status, Status::NotICC);
  ASSERT_TRUE(v.witness && v.witness->element);
  const auto rep = conjugacy_class_ball(g, *v.witness->element, 8);
  EXPECT_TRUE(rep.stabilized);
  EXPECT_EQ(rep.conjugates.size(), 2u);
}

TEST(IccRules, FiniteOrderWitnessHasBoundedClass) {
  for (const detail::IntMatrix& phi :
       {detail::IntMatrix{{0, -1}, {1, 0}}, detail::IntMatrix{{0, -1}, {1, 1}},
        detail::IntMatrix{{-1, 0}, {0, -1}}, detail::IntMatrix{{-1, -1}, {1, 0}}}) {
    const auto g = StructuredGroup::semidirect(phi);
    const auto v = decide_group(g);
    ASSERT_EQ(v.status, Status::NotICC);
    ASSERT_TRUE(v.witness && v.witness->element);
    EXPECT_NE(symbolic_class_bound(g, *v.witness->element), ClassBound::None);
  }
}

TEST(IccRules, Surfaces) {
  EXPECT_EQ(icc_surface(1, true, 0).status, Status::NotICC);
  EXPECT_EQ(icc_surface(2, true, 0).status, Status::ICC);
  EXPECT_EQ(icc_surface(0, true, 1).status, Status::NotICC);
  EXPECT_EQ(icc_surface(0, true, 2).status, Status::NotICC);
  EXPECT_EQ(icc_surface(0, true, 0).status, Status::NotICC);
  EXPECT_EQ(icc_surface(1, false, 0).status, Status::NotICC);
  EXPECT_EQ(icc_surface(1, false, 1).status, Status::NotICC);
  EXPECT_EQ(icc_surface(2, false, 0).status, Status::NotICC);
  EXPECT_EQ(icc_surface(3, false, 0).status, Status::ICC);
  EXPECT_EQ(icc_surface(0, true, 3).status, Status::ICC);
  EXPECT_EQ(icc_surface(1, true, 1).status, Status::ICC);
}

TEST(IccRules, DirectWithFiniteAndFiniteGroups) {
  const auto g = StructuredGroup::direct_with_finite(
      StructuredGroup::free_product(cyc(2, "a"), cyc(3, "b")), FiniteTable::cyclic(2));
  const auto v = decide_words(g);
  ASSERT_EQ(v.status, Status::NotICC);
  ASSERT_TRUE(v.witness->element);
  EXPECT_EQ(symbolic_class_bound(g, *v.witness->element), ClassBound::Central);
  const auto fin = decide_group(StructuredGroup::finite_group(s3_table()));
  EXPECT_EQ(fin.status, Status::NotICC);
  EXPECT_EQ(fin.witness->kind, Witness::Kind::FiniteGroup);
}

TEST(IccRules, VerdictWellFormed) {
  std::vector<Verdict> vs{
      decide_group(figure8_group()),
      decide_group(StructuredGroup::free_group(2)),
      decide_group(StructuredGroup::semidirect({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}})),
      decide_group(StructuredGroup::semidirect({{0, 0, 1}, {1, 0, 0}, {0, 1, 1}})),
      icc_surface(4, true, 0),
      icc_torus_bundle({{1, 1}, {0, 1}}),
  };
  for (const auto& v : vs) {
    EXPECT_TRUE(v.well_formed());
    for (const auto& r : v.reasons) EXPECT_TRUE(citation_from_label(label(r.citation)).has_value());
  }
  for (Citation c : kAllCitations) EXPECT_EQ(citation_from_label(label(c)), c);
}

TEST(IccRules, AgreesWithOracleOnCorpusGroups) {
  int checked = 0;
  for (const auto& e : std::filesystem::directory_iterator(std::string(ICCDEC_CORPUS_DIR) + "/groups")) {
    SCOPED_TRACE(e.path().string());
    const Descriptor d = load_descriptor(e.path().string());
    const Verdict v = decide(d);
    EXPECT_TRUE(v.well_formed());
    const auto g = descriptor_group(d);
    if (!g || v.status == Status::Unknown) continue;
    if (v.status == Status::NotICC) {
      if (!v.witness->element) {
        EXPECT_TRUE(g->order().is_finite());
        continue;
      }
      const auto w = reduce_word(*g, format_word(render(*v.witness->element)));
      const auto rep = conjugacy_class_ball(*g, w, 8);
      EXPECT_TRUE(rep.stabilized);
      EXPECT_LE(rep.conjugates.size(), 2u);
    } else {
      GroupElement sample = g->identity();
      for (const auto& x : g->generators()) {
        sample = multiply(sample, x);
        const auto rep = conjugacy_class_ball(*g, x, 8);
        for (int r = 5; r <= 8; ++r) {
          EXPECT_GT(rep.counts_by_radius[r], rep.counts_by_radius[r - 1]) << to_string(x) << " r=" << r;
        }
      }
      // Generator classes may grow only linearly (21 at radius 10 for e1 or for a in BS(1,2)).
      const auto rep = conjugacy_class_ball(*g, sample, 10);
      EXPECT_GT(rep.counts_by_radius[10], 25u) << to_string(sample);
    }
    ++checked;
  }
  EXPECT_GE(checked, 15);
}
