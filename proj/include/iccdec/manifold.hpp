#ifndef ICCDEC_MANIFOLD_HPP_
#define ICCDEC_MANIFOLD_HPP_

// Declarative descriptors of compact 3-manifolds (prime pieces of a
// connected sum), knots and links, and the theorem engine deciding ICC for
// their fundamental groups. Flags are inputs; nothing here recognizes
// geometry.

#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "iccdec/cardinal.hpp"
#include "iccdec/error.hpp"
#include "iccdec/group_core.hpp"
#include "iccdec/icc_rules.hpp"
#include "iccdec/oracle.hpp"
#include "iccdec/seifert.hpp"
#include "iccdec/verdict.hpp"

namespace iccdec {

struct SeifertPiece {
  SeifertInvariants invariants;
  bool operator==(const SeifertPiece&) const = default;
};

struct HyperbolicPiece {
  bool finite_volume = true;
  bool operator==(const HyperbolicPiece&) const = default;
};

struct TorusBundlePiece {
  detail::IntMatrix monodromy;
  bool operator==(const TorusBundlePiece&) const = default;
};

// orientable_bundle: S^2 x S^1 when true, the twisted bundle otherwise.
struct SphereBundlePiece {
  bool orientable_bundle = true;
  bool operator==(const SphereBundlePiece&) const = default;
};

struct HomotopySpherePiece {
  bool operator==(const HomotopySpherePiece&) const = default;
};

struct OtherIrreduciblePiece {
  Cardinal pi1_order = Cardinal::unknown();
  std::optional<bool> normal_cyclic_infinite_subgroup;
  std::optional<bool> contains_nonstandard_p2xi;
  std::optional<bool> seifert_mod_p;
  std::optional<bool> homotopy_p2_x_s1;
  bool operator==(const OtherIrreduciblePiece&) const = default;
};

using PrimePiece = std::variant<SeifertPiece, HyperbolicPiece, TorusBundlePiece, SphereBundlePiece,
                                HomotopySpherePiece, OtherIrreduciblePiece>;

struct ManifoldDescriptor {
  bool orientable = true;
  std::vector<PrimePiece> pieces;
  bool boundary_spheres_capped = false;
  bool operator==(const ManifoldDescriptor&) const = default;
};

struct TorusKnot {
  std::int64_t p = 2;
  std::int64_t q = 3;
  bool operator==(const TorusKnot&) const = default;
};
struct HyperbolicKnot {
  bool operator==(const HyperbolicKnot&) const = default;
};
struct FlaggedKnot {
  bool is_torus = false;
  bool operator==(const FlaggedKnot&) const = default;
};
using KnotDescriptor = std::variant<TorusKnot, HyperbolicKnot, FlaggedKnot>;

struct LinkDescriptor {
  int components = 1;
  std::optional<bool> is_seifert_fiber_union;
  bool operator==(const LinkDescriptor&) const = default;
};

inline std::string_view piece_kind(const PrimePiece& p) {
  static const char* names[] = {"seifert", "hyperbolic", "torus_bundle", "sphere_bundle",
                                "homotopy_sphere", "other_irreducible"};
  return names[p.index()];
}

inline GroupOrder piece_order(const PrimePiece& piece) {
  struct Visitor {
    GroupOrder operator()(const SeifertPiece& s) const { return seifert_group(s.invariants).order; }
    GroupOrder operator()(const HyperbolicPiece&) const {
      return GroupOrder::exactly(Cardinal::infinite());
    }
    GroupOrder operator()(const TorusBundlePiece&) const {
      return GroupOrder::exactly(Cardinal::infinite());
    }
    GroupOrder operator()(const SphereBundlePiece&) const {
      return GroupOrder::exactly(Cardinal::infinite());
    }
    GroupOrder operator()(const HomotopySpherePiece&) const {
      return GroupOrder::exactly(Cardinal::finite(1));
    }
    GroupOrder operator()(const OtherIrreduciblePiece& o) const {
      return GroupOrder::exactly(o.pi1_order);
    }
  };
  return std::visit(Visitor{}, piece);
}

// Drops homotopy spheres; S^3 (a single homotopy sphere) when nothing is
// left.
inline ManifoldDescriptor poincare_variety(const ManifoldDescriptor& m) {
  ManifoldDescriptor out;
  out.orientable = m.orientable;
  out.boundary_spheres_capped = true;
  for (const auto& p : m.pieces) {
    if (!std::holds_alternative<HomotopySpherePiece>(p)) out.pieces.push_back(p);
  }
  if (out.pieces.empty()) out.pieces.push_back(HomotopySpherePiece{});
  return out;
}

namespace detail {

inline Verdict finite_verdict(const GroupOrder& o, Citation why, const std::string& what) {
  return Verdict::not_icc({why, "", what + " has a finite fundamental group (order " +
                                        o.to_string() + ")"},
                          Witness::finite_group());
}

inline Verdict seifert_piece_verdict(const SeifertPiece& s) {
  const SeifertGroup sg = seifert_group(s.invariants);
  if (sg.order.value.is_finite()) {
    return finite_verdict(sg.order, Citation::Prop2, "Seifert piece");
  }
  const ClassBound bound = presentation_fiber_bound(sg.presentation);
  const std::string note = bound == ClassBound::Central ? "central" : "class {h, h^-1}";
  Witness w = Witness::symbolic("regular fiber class h (" + note + ")");
  if (sg.fiber) {
    w = Witness::of(*sg.fiber, "regular fiber, " + note);
    if (s.invariants.boundary_components > 0 && !s.invariants.exceptional_fibers.empty()) {
      const auto& f = s.invariants.exceptional_fibers.front();
      if (f.second == 1) {
        w.description = "h = x^" + std::to_string(f.first) + " (regular fiber, " + note + ")";
      }
    }
  }
  Verdict v = Verdict::not_icc(
      {Citation::Lemma1, "", "the regular fiber h generates a normal infinite cyclic subgroup"},
      w);
  v.then({Citation::Prop2, "", "a non-simply-connected Seifert group has a finite class"});
  return v;
}

inline Verdict nonorientable_bundle_verdict(const IntMatrix& phi) {
  const StructuredGroup g = StructuredGroup::semidirect(phi);
  return decide_group(g);
}

// Verdict for one nontrivial prime piece.
inline Verdict piece_verdict(const PrimePiece& piece, bool orientable) {
  if (const auto* s = std::get_if<SeifertPiece>(&piece)) return seifert_piece_verdict(*s);
  if (const auto* h = std::get_if<HyperbolicPiece>(&piece)) {
    if (!h->finite_volume) {
      return Verdict::unknown(
          {Citation::NoApplicableRule, "", "hyperbolic piece of infinite volume"});
    }
    Verdict v = Verdict::icc({Citation::Prop21, "", "finite-volume hyperbolic piece"});
    if (!orientable) {
      v.then({Citation::Lemma5, "", "torsion-free with the orientation cover of index 2"});
    }
    return v;
  }
  if (const auto* t = std::get_if<TorusBundlePiece>(&piece)) {
    require_2x2(t->monodromy);
    const std::int64_t det = determinant(t->monodromy);
    if (det == 1) return icc_torus_bundle(t->monodromy);
    if (orientable) throw UsageError("an orientable torus bundle needs monodromy of det +1");
    return nonorientable_bundle_verdict(t->monodromy);
  }
  if (const auto* b = std::get_if<SphereBundlePiece>(&piece)) {
    if (orientable && !b->orientable_bundle) {
      throw UsageError("the twisted sphere bundle is not orientable");
    }
    const StructuredGroup z = StructuredGroup::infinite_cyclic("t");
    return Verdict::not_icc({Citation::Abelian, "", "sphere bundle over the circle has group Z"},
                            Witness::of(z.generator("t"), "central"));
  }
  if (std::holds_alternative<HomotopySpherePiece>(piece)) {
    return finite_verdict(GroupOrder::exactly(Cardinal::finite(1)), Citation::FiniteGroup,
                          "homotopy sphere");
  }
  const auto& o = std::get<OtherIrreduciblePiece>(piece);
  if (orientable) {
    if (o.normal_cyclic_infinite_subgroup == true) {
      Verdict v = Verdict::not_icc(
          {Citation::SeifertConjecture, "",
           "a normal infinite cyclic subgroup makes the piece Seifert fibered"},
          Witness::symbolic("generator of the normal infinite cyclic subgroup"));
      v.then({Citation::Prop2, "", "its conjugacy class is finite"});
      return v;
    }
    if (o.pi1_order.is_finite()) {
      return finite_verdict(GroupOrder::exactly(o.pi1_order), Citation::FiniteGroup, "piece");
    }
    if (o.normal_cyclic_infinite_subgroup == false && o.pi1_order.is_infinite()) {
      return Verdict::icc({Citation::Theorem12, "",
                           "infinite group without a normal infinite cyclic subgroup: not "
                           "Seifert, hence ICC"});
    }
    return Verdict::unknown({Citation::HypothesesNotMet, "",
                             "irreducible piece lacks the normal cyclic subgroup flag or an "
                             "infinite group order"});
  }
  if (o.homotopy_p2_x_s1 == true) {
    return Verdict::not_icc(
        {Citation::Lemma16, "", "homotopy type of P^2 x S^1: group Z x Z/2"},
        Witness::symbolic("central involution of Z x Z/2"));
  }
  if (o.seifert_mod_p == true) {
    Verdict v = Verdict::not_icc(
        {Citation::Theorem15, "", "Seifert modulo P: a nontrivial normal cyclic subgroup"},
        Witness::symbolic("generator of the normal cyclic subgroup"));
    v.then({Citation::Prop2, "", "its conjugacy class is finite"});
    return v;
  }
  if (o.pi1_order.is_finite()) {
    return finite_verdict(GroupOrder::exactly(o.pi1_order), Citation::FiniteGroup, "piece");
  }
  if (o.seifert_mod_p == false && o.pi1_order.is_infinite()) {
    Verdict v = Verdict::icc(
        {Citation::Prop18, "", "not Seifert modulo P, without nonstandard P^2 x I"});
    v.then({Citation::Theorem19, "", "infinite group of a non-orientable irreducible piece"});
    return v;
  }
  return Verdict::unknown({Citation::HypothesesNotMet, "",
                           "irreducible piece lacks the Seifert-modulo-P flag or an infinite "
                           "group order"});
}

// Free-product rule over the nontrivial pieces of P(M).
inline Verdict sum_verdict(const std::vector<GroupOrder>& orders, bool orientable) {
  std::vector<GroupOrder> known;
  std::size_t unknown = 0;
  for (const auto& o : orders) {
    if (o.value.is_unknown()) {
      ++unknown;
    } else {
      known.push_back(o);
    }
  }
  const bool dihedral_pair = known.size() == 2 && known[0].is_exactly(2) && known[1].is_exactly(2);
  if (unknown == 0 && dihedral_pair) {
    if (!orientable) {
      return Verdict::unknown({Citation::OutsideTheorem19, "",
                               "the group is infinite dihedral (two pieces of order 2)"});
    }
    const StructuredGroup d = StructuredGroup::free_product(StructuredGroup::finite_cyclic(2, "a"),
                                                            StructuredGroup::finite_cyclic(2, "b"));
    return Verdict::not_icc(
        {Citation::InfiniteDihedral, "", "P^3 # P^3 shape: Z/2 * Z/2"},
        Witness::of(reduce_word(d, "a b"), "translation, class {ab, ba}"));
  }
  if (known.size() >= 2 && !dihedral_pair) {
    Verdict v = Verdict::icc(
        {Citation::KneserMilnor, "",
         "the group is a free product of " + std::to_string(orders.size()) + " piece groups"});
    v.then({Citation::Prop3i, "", "a factor has order >= 3 (or there are >= 3 factors)"});
    return v;
  }
  return Verdict::unknown({Citation::HypothesesNotMet, "",
                           "piece group orders are unknown, so the free-product rule cannot "
                           "be applied"});
}

inline Verdict decide_manifold(const ManifoldDescriptor& m) {
  if (m.pieces.empty()) throw UsageError("a manifold descriptor needs at least one piece");
  const ManifoldDescriptor p = poincare_variety(m);
  const Reason normalized{Citation::PoincareVariety, "",
                          "normalized to P(M) with " + std::to_string(p.pieces.size()) +
                              " piece(s)"};
  if (!m.orientable) {
    for (const auto& piece : p.pieces) {
      if (const auto* o = std::get_if<OtherIrreduciblePiece>(&piece)) {
        if (o->contains_nonstandard_p2xi != false) {
          return Verdict::unknown({Citation::OutsideTheorem19, "",
                                   "a piece may contain a nonstandard P^2 x I"})
              .after(normalized);
        }
      }
    }
  }
  std::vector<const PrimePiece*> nontrivial;
  std::vector<GroupOrder> orders;
  for (const auto& piece : p.pieces) {
    const GroupOrder o = piece_order(piece);
    if (o.is_trivial()) continue;
    nontrivial.push_back(&piece);
    orders.push_back(o);
  }
  Verdict v;
  if (nontrivial.empty()) {
    v = finite_verdict(GroupOrder::exactly(Cardinal::finite(1)), Citation::FiniteGroup, "S^3");
  } else if (nontrivial.size() == 1) {
    v = piece_verdict(*nontrivial.front(), m.orientable);
  } else {
    v = sum_verdict(orders, m.orientable);
  }
  v.after(normalized);
  v.then({m.orientable ? Citation::Theorem13 : Citation::Theorem19, "",
          m.orientable ? "verdict for the orientable manifold through P(M)"
                       : "verdict for the non-orientable manifold through P(M)"});
  return v;
}

}  // namespace detail

inline Verdict decide_icc_orientable(const ManifoldDescriptor& m) {
  if (!m.orientable) throw UsageError("decide_icc_orientable: descriptor is not orientable");
  return detail::decide_manifold(m);
}

inline Verdict decide_icc_nonorientable(const ManifoldDescriptor& m) {
  if (m.orientable) throw UsageError("decide_icc_nonorientable: descriptor is orientable");
  return detail::decide_manifold(m);
}

inline Verdict decide_icc(const ManifoldDescriptor& m) {
  return m.orientable ? decide_icc_orientable(m) : decide_icc_nonorientable(m);
}

// Second route for orientable descriptors: whether the group has a normal
// infinite cyclic subgroup, computed piece by piece without the verdict
// engine. nullopt when the descriptor does not determine it.
inline std::optional<bool> has_normal_infinite_cyclic_subgroup(const ManifoldDescriptor& m) {
  const ManifoldDescriptor p = poincare_variety(m);
  std::vector<const PrimePiece*> nontrivial;
  for (const auto& piece : p.pieces) {
    if (!piece_order(piece).is_trivial()) nontrivial.push_back(&piece);
  }
  if (nontrivial.empty()) return false;
  if (nontrivial.size() >= 2) {
    std::vector<GroupOrder> orders;
    for (const auto* piece : nontrivial) {
      const GroupOrder o = piece_order(*piece);
      if (o.value.is_unknown()) return std::nullopt;
      orders.push_back(o);
    }
    // Only Z/2 * Z/2 among nontrivial free products has one.
    return orders.size() == 2 && orders[0].is_exactly(2) && orders[1].is_exactly(2);
  }
  const PrimePiece& piece = *nontrivial.front();
  if (piece_order(piece).value.is_finite()) return false;
  if (const auto* s = std::get_if<SeifertPiece>(&piece)) {
    return seifert_group(s->invariants).order.value.is_infinite();
  }
  if (std::holds_alternative<HyperbolicPiece>(piece)) return false;
  if (const auto* t = std::get_if<TorusBundlePiece>(&piece)) {
    return classify_monodromy(t->monodromy) != MonodromyClass::Hyperbolic;
  }
  if (std::holds_alternative<SphereBundlePiece>(piece)) return true;
  const auto& o = std::get<OtherIrreduciblePiece>(piece);
  return o.normal_cyclic_infinite_subgroup;
}

inline Verdict decide_icc_knot(const KnotDescriptor& k) {
  if (const auto* t = std::get_if<TorusKnot>(&k)) {
    if (std::gcd(t->p, t->q) != 1) {
      throw UsageError("torus knot parameters must be coprime");
    }
    const std::int64_t p = checked::abs(t->p), q = checked::abs(t->q);
    const Reason infinite{Citation::Cor20, "",
                          "knot groups are infinite: the abelianization is infinite cyclic"};
    if (p <= 1 || q <= 1) {
      const StructuredGroup z = StructuredGroup::infinite_cyclic("x");
      Verdict v = Verdict::not_icc(infinite, Witness::of(z.generator("x"), "central"));
      v.then({Citation::Abelian, "", "the unknot has group Z"});
      return v;
    }
    const StructuredGroup g = torus_knot_group(p, q);
    Witness w = Witness::of(g.generator("h"), "central");
    w.description = "x^" + std::to_string(p);
    Verdict v = Verdict::not_icc(infinite, w);
    v.then({Citation::Cor20, "", "a torus knot group <x, y | x^p = y^q> has central x^p"});
    v.then({Citation::Prop2, "", "the central fiber class is a finite conjugacy class"});
    return v;
  }
  const bool torus = std::holds_alternative<FlaggedKnot>(k) && std::get<FlaggedKnot>(k).is_torus;
  if (torus) {
    return Verdict::not_icc({Citation::Cor20, "", "flagged as a torus knot"},
                            Witness::symbolic("central element x^p of <x, y | x^p = y^q>"));
  }
  Verdict v = Verdict::icc({Citation::Cor20, "", "not a torus knot, so the group is ICC"});
  if (std::holds_alternative<HyperbolicKnot>(k)) {
    v.then({Citation::Prop21, "", "hyperbolic knot complement has finite volume"});
  }
  return v;
}

inline Verdict decide_icc_link(const LinkDescriptor& l) {
  if (!l.is_seifert_fiber_union) {
    return Verdict::unknown(
        {Citation::HypothesesNotMet, "", "is_seifert_fiber_union flag is missing"});
  }
  if (*l.is_seifert_fiber_union) {
    Verdict v = Verdict::not_icc(
        {Citation::LinkRemark, "", "the link is a union of fibers of a Seifert fibration"},
        Witness::symbolic("regular fiber class h"));
    v.then({Citation::Prop2, "", "the fiber class is a finite conjugacy class"});
    return v;
  }
  return Verdict::icc(
      {Citation::LinkRemark, "", "the link is not a union of Seifert fibers"});
}

}  // namespace iccdec

#endif  // ICCDEC_MANIFOLD_HPP_
