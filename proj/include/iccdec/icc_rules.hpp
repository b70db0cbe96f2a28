#ifndef ICCDEC_ICC_RULES_HPP_
#define ICCDEC_ICC_RULES_HPP_

// Group-level ICC combinators. Each returns a three-valued verdict; when a
// rule's hypotheses fail the answer is Unknown, never a negation.

#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "iccdec/cardinal.hpp"
#include "iccdec/error.hpp"
#include "iccdec/group_core.hpp"
#include "iccdec/oracle.hpp"
#include "iccdec/verdict.hpp"

namespace iccdec {

enum class MonodromyClass { Elliptic, Parabolic, Hyperbolic };

inline std::string_view to_string(MonodromyClass c) {
  switch (c) {
    case MonodromyClass::Elliptic: return "elliptic";
    case MonodromyClass::Parabolic: return "parabolic";
    case MonodromyClass::Hyperbolic: return "hyperbolic";
  }
  return "?";
}

namespace detail {

inline void require_2x2(const IntMatrix& phi) {
  if (phi.size() != 2 || phi[0].size() != 2 || phi[1].size() != 2) {
    throw UsageError("monodromy must be a 2x2 integer matrix");
  }
}

inline bool at_least(const Cardinal& c, std::uint64_t n) {
  return c.is_infinite() || (c.is_finite() && c.value() >= n);
}

// A nonzero primitive integer vector v with m v = 0, if one exists
// (n <= 3). Sign normalized so the first nonzero entry is positive.
inline std::optional<std::vector<std::int64_t>> integer_kernel_vector(const IntMatrix& m) {
  const std::size_t n = m.size();
  using namespace checked;
  if (determinant(m) != 0) return std::nullopt;
  std::vector<std::int64_t> v(n, 0);
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::any_of(m[i].begin(), m[i].end(), [](std::int64_t x) { return x != 0; })) {
      rows.push_back(i);
    }
  }
  if (rows.empty()) {
    v[0] = 1;
  } else if (n == 2) {
    const auto& r = m[rows[0]];
    v = {r[1], neg(r[0])};
  } else if (n == 3) {
    auto cross = [](const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
      return std::vector<std::int64_t>{sub(mul(a[1], b[2]), mul(a[2], b[1])),
                                       sub(mul(a[2], b[0]), mul(a[0], b[2])),
                                       sub(mul(a[0], b[1]), mul(a[1], b[0]))};
    };
    auto nonzero = [](const std::vector<std::int64_t>& a) {
      return std::any_of(a.begin(), a.end(), [](std::int64_t x) { return x != 0; });
    };
    const auto& r = m[rows[0]];
    bool found = false;
    for (std::size_t j = 1; j < rows.size() && !found; ++j) {
      auto c = cross(r, m[rows[j]]);
      if (nonzero(c)) {
        v = c;
        found = true;
      }
    }
    if (!found) {
      // Rank one: any vector orthogonal to r.
      for (std::size_t e = 0; e < 3 && !found; ++e) {
        std::vector<std::int64_t> basis(3, 0);
        basis[e] = 1;
        auto c = cross(r, basis);
        if (nonzero(c)) {
          v = c;
          found = true;
        }
      }
    }
  }
  std::int64_t g = 0;
  for (auto x : v) g = std::gcd(g, checked::abs(x));
  if (g == 0) return std::nullopt;
  for (auto& x : v) x /= g;
  for (auto x : v) {
    if (x != 0) {
      if (x < 0)
        for (auto& y : v) y = neg(y);
      break;
    }
  }
  return v;
}

inline IntMatrix shift_diagonal(IntMatrix m, std::int64_t eps) {
  for (std::size_t i = 0; i < m.size(); ++i) m[i][i] = checked::sub(m[i][i], eps);
  return m;
}

inline GroupElement semidirect_vector(const StructuredGroup& g, const std::vector<std::int64_t>& v) {
  SemidirectForm f;
  for (std::size_t i = 0; i < v.size(); ++i) f.v[i] = v[i];
  return g.node().wrap(f);
}

// Smallest k in 1..12 with phi^k = I.
inline std::optional<std::int64_t> finite_order(const SemidirectNode& s) {
  const IntMatrix id = mat_identity(s.rank());
  IntMatrix p = id;
  for (std::int64_t k = 1; k <= 12; ++k) {
    p = mat_mul(p, s.phi());
    if (p == id) return k;
  }
  return std::nullopt;
}

}  // namespace detail

inline MonodromyClass classify_monodromy(const detail::IntMatrix& phi) {
  detail::require_2x2(phi);
  const std::int64_t det = detail::determinant(phi);
  const std::int64_t tr = checked::add(phi[0][0], phi[1][1]);
  if (det == 1) {
    const std::int64_t a = checked::abs(tr);
    if (a <= 1) return MonodromyClass::Elliptic;
    if (a == 2) return MonodromyClass::Parabolic;
    return MonodromyClass::Hyperbolic;
  }
  if (det == -1) {
    // x^2 - tr x - 1 always has real roots with product -1.
    return tr == 0 ? MonodromyClass::Parabolic : MonodromyClass::Hyperbolic;
  }
  throw UsageError("monodromy determinant must be +-1");
}

inline Verdict icc_free_product(const Cardinal& left, const Cardinal& right) {
  if (left == Cardinal::finite(1) || right == Cardinal::finite(1) ||
      left == Cardinal::finite(0) || right == Cardinal::finite(0)) {
    throw UsageError("free product factors must have order >= 2");
  }
  if (left == Cardinal::finite(2) && right == Cardinal::finite(2)) {
    return Verdict::not_icc(
        {Citation::InfiniteDihedral, "", "Z/2 * Z/2 is the infinite dihedral group"},
        Witness::symbolic("translation ab, class {ab, ba}"));
  }
  if (detail::at_least(left, 3) || detail::at_least(right, 3)) {
    return Verdict::icc({Citation::Prop3i, "",
                         "free product with factor orders " + left.to_string() + " and " +
                             right.to_string() + ", one of them >= 3"});
  }
  return Verdict::unknown({Citation::HypothesesNotMet, "",
                           "factor orders " + left.to_string() + " and " + right.to_string() +
                               " are not known to satisfy max >= 3"});
}

namespace detail {

// Nontrivial subgroups of the edge group whose images are normal in both
// factors. Normality of a finite subset is preserved by conjugation by all
// generators iff the subgroup is normal.
inline std::vector<std::vector<int>> edge_subgroups_normal_in_both(const AmalgamNode& a) {
  std::vector<std::vector<int>> out;
  for (const auto& sub : a.edge().subgroups()) {
    if (sub.size() <= 1) continue;
    bool normal = true;
    for (int side = 0; side < 2 && normal; ++side) {
      const GroupNode& f = a.factor(side);
      std::vector<GroupElement> image;
      for (int x : sub) image.push_back(a.embedding(side, x));
      for (const auto& p : f.generator_payloads()) {
        const GroupElement s = f.wrap(p);
        for (const auto& y : image) {
          const GroupElement c = conjugate(y, s);
          if (std::find(image.begin(), image.end(), c) == image.end()) {
            normal = false;
            break;
          }
        }
        if (!normal) break;
      }
    }
    if (normal) out.push_back(sub);
  }
  return out;
}

}  // namespace detail

inline Verdict icc_amalgam(const StructuredGroup& g, const std::optional<Verdict>& left_verdict,
                           const std::optional<Verdict>& right_verdict) {
  const auto* a = g.as<detail::AmalgamNode>();
  if (!a) throw UsageError("icc_amalgam: group is not an amalgam");
  const Cardinal i0 = a->index(0), i1 = a->index(1);
  const bool indices_ok = (detail::at_least(i0, 3) && detail::at_least(i1, 2)) ||
                          (detail::at_least(i1, 3) && detail::at_least(i0, 2));
  if (!indices_ok) {
    return Verdict::unknown({Citation::HypothesesNotMet, "",
                             "edge indices " + i0.to_string() + " and " + i1.to_string() +
                                 " do not satisfy >= 3 and >= 2"});
  }
  for (const auto* v : {&left_verdict, &right_verdict}) {
    if (*v && (*v)->status == Status::ICC) {
      Verdict out = Verdict::icc({Citation::Prop3ii, "", "a factor is ICC"});
      return out;
    }
  }
  const auto normal = detail::edge_subgroups_normal_in_both(*a);
  if (normal.empty()) {
    return Verdict::icc({Citation::Prop3iii, "",
                         "no nontrivial subgroup of the edge group is normal in both factors"});
  }
  return Verdict::unknown({Citation::HypothesesNotMet, "",
                           "the edge group has a nontrivial subgroup of order " +
                               std::to_string(normal.front().size()) +
                               " normal in both factors, and finite groups are not ICC"});
}

namespace detail {

// Searches for a nontrivial subgroup of the (finite) domain subgroup that is
// normal in the HNN group: the normal closure of each cyclic subgroup <a> is
// grown by conjugation with all generators until it leaves the domain or
// reaches a fixpoint. Returns the order of a normal subgroup found.
inline std::optional<std::size_t> hnn_normal_subgroup_in_domain(const StructuredGroup& g,
                                                                const FiniteAssociation& assoc,
                                                                int bound) {
  const auto* h = g.as<HnnNode>();
  auto embed = [&](const GroupElement& x) { return h->wrap(HnnForm{{x}, {}}); };
  auto in_domain = [&](const GroupElement& y) -> std::optional<GroupElement> {
    const auto& f = y.form<HnnForm>();
    if (!f.signs.empty() || !assoc.in_domain(f.segments[0])) return std::nullopt;
    return f.segments[0];
  };
  std::vector<GroupElement> conjugators;
  for (const auto& s : g.generators()) {
    conjugators.push_back(s);
    conjugators.push_back(invert(s));
  }
  for (const auto& a : assoc.domain()) {
    if (a.is_identity()) continue;
    std::vector<GroupElement> n{a};  // base elements, closed as a subgroup below
    auto close = [&]() {
      for (std::size_t i = 0; i < n.size(); ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
          for (const auto& p : {multiply(n[i], n[j]), multiply(n[j], n[i])}) {
            if (std::find(n.begin(), n.end(), p) == n.end()) n.push_back(p);
          }
        }
      }
    };
    close();
    bool escaped = false;
    bool fixpoint = false;
    for (int iter = 0; iter < bound && !escaped && !fixpoint; ++iter) {
      fixpoint = true;
      const auto snapshot = n;
      for (const auto& x : snapshot) {
        for (const auto& s : conjugators) {
          const auto c = in_domain(conjugate(embed(x), s));
          if (!c) {
            escaped = true;
            break;
          }
          if (std::find(n.begin(), n.end(), *c) == n.end()) {
            n.push_back(*c);
            fixpoint = false;
          }
        }
        if (escaped) break;
      }
      if (!escaped && !fixpoint) close();
    }
    if (!escaped && fixpoint) return n.size();
  }
  return std::nullopt;
}

}  // namespace detail

inline Verdict icc_hnn(const StructuredGroup& g, const std::optional<Verdict>& base_verdict,
                       int bound = 64) {
  const auto* h = g.as<detail::HnnNode>();
  if (!h) throw UsageError("icc_hnn: group is not an HNN extension");
  const auto& assoc = h->association();
  if (!assoc.domain_proper() && !assoc.image_proper()) {
    return Verdict::unknown(
        {Citation::HypothesesNotMet, "", "both associated subgroups equal the base"});
  }
  if (base_verdict && base_verdict->status == Status::ICC) {
    return Verdict::icc({Citation::Prop3iv, "", "the base group is ICC"});
  }
  if (const auto* fin = dynamic_cast<const detail::FiniteAssociation*>(&assoc)) {
    const auto found = detail::hnn_normal_subgroup_in_domain(g, *fin, bound);
    if (!found) {
      return Verdict::icc({Citation::Prop3v, "",
                           "no nontrivial subgroup of the associated subgroup is normal"});
    }
    return Verdict::unknown({Citation::HypothesesNotMet, "",
                             "the associated subgroup contains a normal subgroup of order " +
                                 std::to_string(*found) + ", and finite groups are not ICC"});
  }
  const auto& cyc = dynamic_cast<const detail::CyclicAssociation&>(assoc);
  const auto p = checked::abs(cyc.domain_power()), q = checked::abs(cyc.image_power());
  if (p != q) {
    return Verdict::icc({Citation::Prop3v, "",
                         "<a^" + std::to_string(cyc.domain_power()) +
                             "> contains no nontrivial normal subgroup since |p| != |q|"});
  }
  return Verdict::unknown({Citation::HypothesesNotMet, "",
                           "<a^" + std::to_string(p) + "> is normal in the HNN extension"});
}

inline Verdict icc_finite_index_descend(const Verdict& super_verdict) {
  if (super_verdict.status != Status::ICC) {
    throw UsageError("finite-index descent needs an ICC supergroup");
  }
  Verdict out = super_verdict;
  out.witness.reset();
  out.then({Citation::Lemma4, "", "finite-index subgroup of an ICC group"});
  return out;
}

inline Verdict icc_index_two_lift(const Verdict& sub_verdict, bool has_central_involution,
                                  bool torsion_free = false) {
  if (sub_verdict.status != Status::ICC) {
    return Verdict::unknown(
        {Citation::HypothesesNotMet, "", "the index-2 subgroup is not known to be ICC"});
  }
  Verdict out = sub_verdict;
  out.witness.reset();
  if (torsion_free) {
    out.then({Citation::Lemma5, "", "torsion-free with an ICC subgroup of index 2"});
    return out;
  }
  if (!has_central_involution) {
    out.then({Citation::Lemma6, "", "index-2 ICC subgroup and no central involution"});
    return out;
  }
  out.status = Status::NotICC;
  out.then({Citation::Lemma6, "", "G = H x Z/2 with a central involution"});
  out.witness = Witness::symbolic("central involution z (class {z})");
  return out;
}

// Computes the central-involution flag from the oracle's FC-center
// approximation (evidence, not proof, when none is found).
inline Verdict icc_index_two_lift(const Verdict& sub_verdict, const StructuredGroup& group,
                                  int radius = 6, int window = 3) {
  for (const auto& z : fc_center_candidates(group, radius, window)) {
    if (multiply(z, z).is_identity() && symbolic_class_bound(group, z) == ClassBound::Central) {
      Verdict out = icc_index_two_lift(sub_verdict, true);
      if (out.status == Status::NotICC) out.witness = Witness::of(z, "central involution");
      return out;
    }
  }
  Verdict out = icc_index_two_lift(sub_verdict, false);
  if (out.status == Status::ICC) {
    out.reasons.back().text += " (evidence: none found within radius " + std::to_string(radius) +
                               ")";
  }
  return out;
}

namespace detail {

// Torus-bundle style verdict for Z^n x| Z with n = 2, det +1, on the
// given group so witnesses live in it.
inline Verdict torus_bundle_verdict(const StructuredGroup& g) {
  const auto* s = g.as<SemidirectNode>();
  const MonodromyClass c = classify_monodromy(s->phi());
  const std::string q(to_string(c));
  if (c == MonodromyClass::Hyperbolic) {
    return Verdict::icc({Citation::Lemma10, q, "hyperbolic monodromy gives an ICC group"});
  }
  if (c == MonodromyClass::Parabolic) {
    const std::int64_t tr = checked::add(s->phi()[0][0], s->phi()[1][1]);
    const std::int64_t eps = tr > 0 ? 1 : -1;
    const auto v = integer_kernel_vector(shift_diagonal(s->phi(), eps));
    const GroupElement w = semidirect_vector(g, *v);
    Verdict out = Verdict::not_icc(
        {Citation::Lemma10, q, "parabolic monodromy: the bundle is Seifert fibered"},
        Witness::of(w, eps > 0 ? "fixed by phi, class is a singleton" : "phi v = -v, class {v, -v}"));
    out.then({Citation::Prop2, "", "the fiber class has a finite conjugacy class"});
    return out;
  }
  Witness w = Witness::symbolic("regular fiber class h");
  if (const auto k = finite_order(*s)) {
    SemidirectForm f;
    f.m = *k;
    w.element = g.node().wrap(f);
    w.description += " (t^" + std::to_string(*k) + " is central)";
  }
  Verdict out = Verdict::not_icc(
      {Citation::Lemma10, q, "elliptic monodromy: the bundle is Seifert fibered"}, w);
  out.then({Citation::Prop2, "", "the fiber class has a finite conjugacy class"});
  return out;
}

}  // namespace detail

inline Verdict icc_torus_bundle(const detail::IntMatrix& phi) {
  detail::require_2x2(phi);
  if (detail::determinant(phi) != 1) {
    throw UsageError("torus bundle monodromy must lie in SL(2,Z)");
  }
  return detail::torus_bundle_verdict(StructuredGroup::semidirect(phi));
}

inline Verdict icc_surface(int genus, bool orientable, int boundary) {
  if (genus < 0 || boundary < 0) throw UsageError("surface data must be nonnegative");
  if (!orientable && genus < 1) throw UsageError("non-orientable genus must be >= 1");
  struct Exception {
    int genus;
    bool orientable;
    int boundary;
    const char* name;
    bool finite;
  };
  static const Exception exceptions[] = {
      {0, true, 1, "disk", true},          {0, true, 0, "sphere", true},
      {0, true, 2, "annulus", false},      {1, true, 0, "torus", false},
      {1, false, 0, "projective plane", true}, {1, false, 1, "Moebius band", false},
      {2, false, 0, "Klein bottle", false},
  };
  for (const auto& e : exceptions) {
    if (e.genus == genus && e.orientable == orientable && e.boundary == boundary) {
      const std::string text = std::string(e.name) + " has finite or virtually abelian group";
      if (e.finite) return Verdict::not_icc({Citation::SurfaceList, "", text}, Witness::finite_group());
      const StructuredGroup g = StructuredGroup::surface(genus, orientable, boundary);
      const GroupElement w = g.generators().front();
      return Verdict::not_icc({Citation::SurfaceList, "", text},
                              Witness::of(w, "class contained in {w, w^-1}"));
    }
  }
  if (boundary > 0) {
    return Verdict::icc({Citation::SurfaceList, "", "bounded surface with non-abelian free group"})
        .then({Citation::Prop3i, "", "free product of infinite cyclic groups"});
  }
  return Verdict::icc({Citation::SurfaceList, "", "closed surface of negative Euler characteristic"});
}

// Structural dispatcher over the constructions.
inline Verdict decide_group(const StructuredGroup& g) {
  const Cardinal order = g.order();
  if (order.is_finite()) {
    return Verdict::not_icc(
        {Citation::FiniteGroup, "", "finite group of order " + order.to_string()},
        Witness::finite_group());
  }
  switch (g.kind()) {
    case GroupKind::FiniteCyclic:
      break;
    case GroupKind::InfiniteCyclic:
      return Verdict::not_icc({Citation::Abelian, "", "infinite cyclic group"},
                              Witness::of(g.generators().front(), "central"));
    case GroupKind::FreeProduct: {
      const auto kids = g.children();
      const Cardinal l = kids[0].order(), r = kids[1].order();
      if (l == Cardinal::finite(1)) return decide_group(kids[1]);
      if (r == Cardinal::finite(1)) return decide_group(kids[0]);
      Verdict v = icc_free_product(l, r);
      if (v.status == Status::NotICC) {
        const GroupElement t = multiply(g.generator(kids[0].generator_symbols().front().name),
                                        g.generator(kids[1].generator_symbols().front().name));
        v.witness = Witness::of(t, "translation, class {ab, ba}");
      }
      return v;
    }
    case GroupKind::Amalgam: {
      const auto* a = g.as<detail::AmalgamNode>();
      const auto kids = g.children();
      if (a->index(0) == Cardinal::finite(1)) return decide_group(kids[1]);
      if (a->index(1) == Cardinal::finite(1)) return decide_group(kids[0]);
      return icc_amalgam(g, decide_group(kids[0]), decide_group(kids[1]));
    }
    case GroupKind::Hnn:
      return icc_hnn(g, decide_group(g.children().front()));
    case GroupKind::SemidirectZnByZ: {
      const auto* s = g.as<detail::SemidirectNode>();
      const std::int64_t det = detail::determinant(s->phi());
      if (s->rank() == 2 && det == 1) return detail::torus_bundle_verdict(g);
      if (s->rank() == 2) {
        const MonodromyClass c = classify_monodromy(s->phi());
        if (c == MonodromyClass::Hyperbolic) {
          Verdict v = Verdict::icc({Citation::Lemma10, "hyperbolic",
                                    "phi^2 is hyperbolic in SL(2,Z), so the index-2 subgroup "
                                    "Z^2 x|_{phi^2} Z is ICC"});
          return icc_index_two_lift(v, false, true);
        }
      }
      // A vector fixed or negated by phi has conjugacy class of size <= 2.
      for (std::int64_t eps : {1, -1}) {
        if (const auto v = detail::integer_kernel_vector(detail::shift_diagonal(s->phi(), eps))) {
          const GroupElement w = detail::semidirect_vector(g, *v);
          const Citation cite = s->rank() == 1
                                    ? (eps > 0 ? Citation::Abelian : Citation::SurfaceList)
                                    : Citation::Prop2;
          return Verdict::not_icc(
              {cite, "", eps > 0 ? "phi fixes a nonzero vector, which is central"
                                 : "phi negates a nonzero vector, whose class is {v, -v}"},
              Witness::of(w, eps > 0 ? "central" : "class {v, -v}"));
        }
      }
      if (const auto k = detail::finite_order(*s)) {
        SemidirectForm f;
        f.m = *k;
        return Verdict::not_icc({Citation::Prop2, "", "phi has finite order, so t^k is central"},
                                Witness::of(g.node().wrap(f), "central"));
      }
      return Verdict::unknown({Citation::NoApplicableRule, "",
                               "no rule covers this semidirect product of rank " +
                                   std::to_string(s->rank())});
    }
    case GroupKind::DirectWithFinite: {
      const auto* d = g.as<detail::DirectNode>();
      const auto kids = g.children();
      if (d->finite().order() == 1) return decide_group(kids.front());
      DirectForm f;
      f.h.push_back(kids.front().identity());
      f.f = d->finite().greedy_generators().front();
      return Verdict::not_icc(
          {Citation::Lemma6, "", "direct product with a nontrivial finite group"},
          Witness::of(g.node().wrap(f), "class lies in the finite factor"));
    }
    case GroupKind::MatrixGroupSL2Eisenstein: {
      const auto* m = g.as<detail::MatrixNode>();
      if (m->declared_lattice()) {
        return Verdict::icc(
            {Citation::Prop21, "", "finite-covolume lattice of a hyperbolic 3-manifold"});
      }
      return Verdict::unknown(
          {Citation::NoApplicableRule, "", "matrix group not declared to be a lattice"});
    }
    case GroupKind::FiberedFreeProduct: {
      const auto* fb = g.as<detail::FiberedNode>();
      const GroupElement h = g.node().wrap(fb->fiber_payload());
      const bool central = symbolic_class_bound(g, h) == ClassBound::Central;
      Verdict v = Verdict::not_icc(
          {Citation::Lemma1, "", "the regular fiber generates a normal infinite cyclic subgroup"},
          Witness::of(h, central ? "fiber class, central" : "fiber class, class {h, h^-1}"));
      v.then({Citation::Prop2, "", "the fiber class is finite"});
      return v;
    }
  }
  return Verdict::unknown({Citation::NoApplicableRule, "", "no rule applies"});
}

}  // namespace iccdec

#endif  // ICCDEC_ICC_RULES_HPP_
