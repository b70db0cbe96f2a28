#include <gtest/gtest.h>

#include <filesystem>

#include "iccdec/descriptor_io.hpp"
#include "iccdec/manifold.hpp"
#include "iccdec/oracle.hpp"

using namespace iccdec;

namespace {

namespace fs = std::filesystem;

ManifoldDescriptor sum(std::vector<PrimePiece> pieces, bool orientable = true) {
  ManifoldDescriptor m;
  m.orientable = orientable;
  m.pieces = std::move(pieces);
  return m;
}

OtherIrreduciblePiece of_order(std::uint64_t n) {
  OtherIrreduciblePiece o;
  o.pi1_order = Cardinal::finite(n);
  return o;
}

SeifertPiece seifert(int genus, int boundary, std::vector<std::pair<std::int64_t, std::int64_t>> f,
                     std::optional<std::int64_t> b) {
  SeifertInvariants s;
  s.base_genus = genus;
  s.boundary_components = boundary;
  s.exceptional_fibers = std::move(f);
  s.euler_obstruction = b;
  return {s};
}

std::vector<ManifoldDescriptor> corpus_manifolds() {
  std::vector<ManifoldDescriptor> out;
  for (const auto& e : fs::directory_iterator(fs::path(ICCDEC_CORPUS_DIR) / "manifolds")) {
    const auto d = load_descriptor(e.path().string());
    out.push_back(std::get<ManifoldDescriptor>(d));
  }
  return out;
}

}  // namespace

TEST(Manifold, PoincareVarietyIdempotent) {
  for (const auto& m : corpus_manifolds()) {
    const auto p = poincare_variety(m);
    EXPECT_EQ(poincare_variety(p), p);
    for (const auto& piece : p.pieces) {
      if (p.pieces.size() > 1) EXPECT_FALSE(std::holds_alternative<HomotopySpherePiece>(piece));
    }
  }
}

TEST(Manifold, HomotopySpheresDoNotChangeVerdict) {
  for (auto m : corpus_manifolds()) {
    const auto before = decide_icc(m);
    m.pieces.push_back(HomotopySpherePiece{});
    m.pieces.insert(m.pieces.begin(), HomotopySpherePiece{});
    const auto after = decide_icc(m);
    EXPECT_EQ(before.status, after.status);
  }
}

TEST(Manifold, P3SumP3IsDihedral) {
  const auto v = decide_icc(sum({of_order(2), of_order(2)}));
  ASSERT_EQ(v.status, Status::NotICC);
  EXPECT_TRUE(cites(v, Citation::InfiniteDihedral));
  EXPECT_TRUE(cites(v, Citation::Theorem13));
  ASSERT_TRUE(v.witness && v.witness->element);
  EXPECT_EQ(to_string(*v.witness->element), "a b");
  const auto rep = conjugacy_class_ball(StructuredGroup(v.witness->element->node_ptr()), *v.witness->element, 6);
  EXPECT_EQ(rep.conjugates.size(), 2u);
}

TEST(Manifold, FreeProductOfPieces) {
  EXPECT_EQ(decide_icc(sum({of_order(2), of_order(3)})).status, Status::ICC);
  EXPECT_EQ(decide_icc(sum({of_order(5), of_order(5)})).status, Status::ICC);
  EXPECT_EQ(decide_icc(sum({of_order(2), of_order(2), of_order(2)})).status, Status::ICC);
  EXPECT_EQ(decide_icc(sum({HyperbolicPiece{}, SphereBundlePiece{}})).status, Status::ICC);
  EXPECT_EQ(decide_icc(sum({OtherIrreduciblePiece{}, of_order(2)})).status, Status::Unknown);
  EXPECT_EQ(decide_icc(sum({of_order(1), of_order(2)})).status, Status::NotICC);
}

TEST(Manifold, SinglePieces) {
  EXPECT_EQ(decide_icc(sum({HyperbolicPiece{}})).status, Status::ICC);
  EXPECT_EQ(decide_icc(sum({HyperbolicPiece{false}})).status, Status::Unknown);
  EXPECT_EQ(decide_icc(sum({SphereBundlePiece{}})).status, Status::NotICC);
  EXPECT_EQ(decide_icc(sum({HomotopySpherePiece{}})).status, Status::NotICC);
  EXPECT_EQ(decide_icc(sum({TorusBundlePiece{{{2, 1}, {1, 1}}}})).status, Status::ICC);
  EXPECT_EQ(decide_icc(sum({TorusBundlePiece{{{1, 3}, {0, 1}}}})).status, Status::NotICC);
  EXPECT_THROW(decide_icc(sum({TorusBundlePiece{{{0, 1}, {1, 0}}}})), UsageError);
  EXPECT_THROW(decide_icc(sum({SphereBundlePiece{false}})), UsageError);
  EXPECT_THROW(decide_icc(sum({})), UsageError);
}

TEST(Manifold, OtherIrreducibleFlags) {
  OtherIrreduciblePiece o;
  o.pi1_order = Cardinal::infinite();
  EXPECT_EQ(decide_icc(sum({o})).status, Status::Unknown);
  o.normal_cyclic_infinite_subgroup = false;
  EXPECT_EQ(decide_icc(sum({o})).status, Status::ICC);
  o.normal_cyclic_infinite_subgroup = true;
  EXPECT_EQ(decide_icc(sum({o})).status, Status::NotICC);
  EXPECT_EQ(decide_icc(sum({of_order(8)})).status, Status::NotICC);
}

TEST(Manifold, NonOrientable) {
  EXPECT_THROW(decide_icc_orientable(sum({HyperbolicPiece{}}, false)), UsageError);
  EXPECT_THROW(decide_icc_nonorientable(sum({HyperbolicPiece{}})), UsageError);
  const auto h = decide_icc(sum({HyperbolicPiece{}}, false));
  EXPECT_EQ(h.status, Status::ICC);
  EXPECT_TRUE(cites(h, Citation::Theorem19));
  OtherIrreduciblePiece o;
  o.pi1_order = Cardinal::infinite();
  EXPECT_EQ(decide_icc(sum({o}, false)).status, Status::Unknown);
  o.contains_nonstandard_p2xi = false;
  EXPECT_EQ(decide_icc(sum({o}, false)).status, Status::Unknown);
  o.seifert_mod_p = false;
  EXPECT_EQ(decide_icc(sum({o}, false)).status, Status::ICC);
  o.seifert_mod_p = true;
  EXPECT_EQ(decide_icc(sum({o}, false)).status, Status::NotICC);
  o.seifert_mod_p.reset();
  o.homotopy_p2_x_s1 = true;
  EXPECT_EQ(decide_icc(sum({o}, false)).status, Status::NotICC);
  EXPECT_EQ(decide_icc(sum({SphereBundlePiece{false}}, false)).status, Status::NotICC);
  const auto klein = decide_icc(sum({TorusBundlePiece{{{1, 0}, {0, -1}}}}, false));
  EXPECT_EQ(klein.status, Status::NotICC);
}

TEST(Manifold, SeifertPieceWitnessClassIsSmall) {
  const std::vector<SeifertPiece> pieces{
      seifert(0, 1, {{2, 1}, {3, 1}}, std::nullopt), seifert(0, 1, {{2, 1}, {5, 2}, {3, 1}}, std::nullopt),
      seifert(1, 0, {}, 1),                         seifert(1, 0, {}, -2),
      seifert(0, 0, {{2, 1}, {2, 1}}, 1),           seifert(2, 2, {{3, 1}}, std::nullopt),
  };
  for (const auto& p : pieces) {
    const auto v = decide_icc(sum({p}));
    ASSERT_EQ(v.status, Status::NotICC);
    const auto sg = seifert_group(p.invariants);
    ASSERT_TRUE(sg.realization && sg.fiber);
    const auto rep = conjugacy_class_ball(*sg.realization, *sg.fiber, 5);
    for (const auto& c : rep.conjugates) {
      EXPECT_TRUE(c == *sg.fiber || c == invert(*sg.fiber));
    }
    if (v.witness->element) EXPECT_EQ(to_string(*v.witness->element), to_string(*sg.fiber));
  }
}

TEST(Manifold, TrefoilComplementWitness) {
  const auto v = decide_icc(sum({seifert(0, 1, {{2, 1}, {3, 1}}, std::nullopt)}));
  ASSERT_EQ(v.status, Status::NotICC);
  EXPECT_EQ(v.witness->description.rfind("h = x^2", 0), 0u) << v.witness->description;
  EXPECT_TRUE(cites(v, Citation::Lemma1));
  EXPECT_TRUE(cites(v, Citation::Prop2));
}

TEST(Manifold, NormalCyclicRouteAgrees) {
  for (const auto& m : corpus_manifolds()) {
    if (!m.orientable) continue;
    const auto v = decide_icc(m);
    if (v.status == Status::Unknown || v.witness && v.witness->kind == Witness::Kind::FiniteGroup) {
      continue;
    }
    const auto route = has_normal_infinite_cyclic_subgroup(m);
    ASSERT_TRUE(route.has_value());
    EXPECT_EQ(*route, v.status == Status::NotICC);
  }
}

TEST(Knot, TorusKnots) {
  const auto t = decide_icc_knot(TorusKnot{2, 3});
  ASSERT_EQ(t.status, Status::NotICC);
  EXPECT_EQ(t.witness->description, "x^2");
  EXPECT_TRUE(cites(t, Citation::Cor20));
  EXPECT_EQ(decide_icc_knot(TorusKnot{3, 5}).witness->description, "x^3");
  EXPECT_EQ(decide_icc_knot(TorusKnot{1, 4}).status, Status::NotICC);
  EXPECT_THROW(decide_icc_knot(TorusKnot{2, 4}), UsageError);
  const auto g = torus_knot_group(2, 3);
  EXPECT_EQ(to_string(*t.witness->element), to_string(reduce_word(g, "x^2")));
}

TEST(Knot, NonTorusKnots) {
  EXPECT_EQ(decide_icc_knot(HyperbolicKnot{}).status, Status::ICC);
  EXPECT_EQ(decide_icc_knot(FlaggedKnot{false}).status, Status::ICC);
  EXPECT_EQ(decide_icc_knot(FlaggedKnot{true}).status, Status::NotICC);
}

TEST(Link, Flags) {
  EXPECT_EQ(decide_icc_link({2, true}).status, Status::NotICC);
  EXPECT_EQ(decide_icc_link({3, false}).status, Status::ICC);
  EXPECT_EQ(decide_icc_link({2, std::nullopt}).status, Status::Unknown);
}
