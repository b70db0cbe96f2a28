#include <gtest/gtest.h>

#include <functional>
#include <random>
#include <sstream>

#include "iccdec/group_core.hpp"
#include "iccdec/matrix_groups.hpp"
#include "oracles.hpp"

using namespace iccdec;

namespace {

constexpr int kCases = 1000;

// Maps a word to a value that is equal for two words iff they are equal in
// the group (a faithful model), rendered as a string.
using Model = std::function<std::string(const Word&)>;

struct Construction {
  std::string label;
  StructuredGroup group;
  Model model;
};

std::vector<std::string> names_of(const StructuredGroup& g) {
  std::vector<std::string> out;
  for (const auto& s : g.generator_symbols()) out.push_back(s.name);
  return out;
}

template <class Mat>
std::string key(const Mat& m) {
  std::ostringstream os;
  for (const auto& x : m.e) os << x << ",";
  return os.str();
}

std::string affine_key(const oracle::Affine2& a) {
  return key(a.phi_m) + "|" + std::to_string(a.v[0]) + "," + std::to_string(a.v[1]) + "|" +
         std::to_string(a.m);
}

StructuredGroup cyc(std::int64_t n, const char* name) {
  return StructuredGroup::finite_cyclic(n, name);
}

std::vector<Construction> constructions() {
  std::vector<Construction> out;
  out.push_back({"finite cyclic Z/7", cyc(7, "a"), [](const Word& w) {
                   std::int64_t s = 0;
                   for (const auto& l : w) s += l.inverse ? -1 : 1;
                   return std::to_string(((s % 7) + 7) % 7);
                 }});
  out.push_back({"infinite cyclic", StructuredGroup::infinite_cyclic("t"), [](const Word& w) {
                   std::int64_t s = 0;
                   for (const auto& l : w) s += l.inverse ? -1 : 1;
                   return std::to_string(s);
                 }});
  out.push_back({"free product Z/2*Z/2",
                 StructuredGroup::free_product(cyc(2, "a"), cyc(2, "b")), [](const Word& w) {
                   return key(oracle::evaluate(w, oracle::dihedral_generators(),
                                               oracle::inverse_unimodular));
                 }});
  out.push_back({"free product Z/2*Z/3",
                 StructuredGroup::free_product(cyc(2, "a"), cyc(3, "b")),
                 [](const Word& w) { return key(oracle::modular_eval(w)); }});
  out.push_back({"free group F2", StructuredGroup::free_group(2),
                 [](const Word& w) { return format_word(oracle::free_reduce(w)); }});
  {
    const auto l = cyc(4, "a");
    const auto r = cyc(6, "b");
    out.push_back(
        {"amalgam Z/4 *_Z/2 Z/6",
         StructuredGroup::amalgam(l, r,
                                  EdgeGroup{FiniteTable::cyclic(2),
                                            {l.identity(), reduce_word(l, "a^2")},
                                            {r.identity(), reduce_word(r, "b^3")}}),
         [](const Word& w) {
           return key(oracle::evaluate(w, oracle::sl2z_generators(), oracle::inverse_unimodular));
         }});
  }
  {
    // Z/6 *_{Z/3} Z/6 with a non-central-looking edge; no faithful model.
    const auto l = cyc(6, "a");
    const auto r = cyc(6, "b");
    out.push_back({"amalgam Z/6 *_Z/3 Z/6",
                   StructuredGroup::amalgam(
                       l, r,
                       EdgeGroup{FiniteTable::cyclic(3),
                                 {l.identity(), reduce_word(l, "a^2"), reduce_word(l, "a^4")},
                                 {r.identity(), reduce_word(r, "b^4"), reduce_word(r, "b^2")}}),
                   nullptr});
  }
  out.push_back({"HNN BS(1,2)",
                 StructuredGroup::hnn(StructuredGroup::infinite_cyclic("a"),
                                      CyclicHnnAssociation{1, 2}, "t"),
                 [](const Word& w) {
                   return key(oracle::evaluate(w, oracle::bs12_generators(), oracle::inverse));
                 }});
  out.push_back({"HNN BS(2,3)",
                 StructuredGroup::hnn(StructuredGroup::infinite_cyclic("a"),
                                      CyclicHnnAssociation{2, 3}, "t"),
                 nullptr});
  {
    const auto base = StructuredGroup::free_product(cyc(2, "a"), cyc(3, "b"));
    out.push_back({"HNN with finite edge",
                   StructuredGroup::hnn(base,
                                        FiniteHnnAssociation{{base.identity(), reduce_word(base, "a")},
                                                             {base.identity(), reduce_word(base, "b a b'")}},
                                        "t"),
                   nullptr});
  }
  for (const auto& [label, phi] :
       std::vector<std::pair<std::string, oracle::IM>>{{"semidirect hyperbolic", {{2, 1, 1, 1}}},
                                                       {"semidirect elliptic", {{0, -1, 1, 0}}},
                                                       {"semidirect parabolic", {{1, 1, 0, 1}}},
                                                       {"semidirect det -1", {{0, 1, 1, 0}}}}) {
    const detail::IntMatrix m{{phi.e[0], phi.e[1]}, {phi.e[2], phi.e[3]}};
    out.push_back({label, StructuredGroup::semidirect(m), [phi = phi](const Word& w) {
                     return affine_key(oracle::evaluate(w, oracle::semidirect_generators(phi),
                                                        oracle::affine_inverse));
                   }});
  }
  out.push_back({"semidirect Z^3",
                 StructuredGroup::semidirect({{0, 0, 1}, {1, 0, 0}, {0, 1, 1}}), nullptr});
  out.push_back({"semidirect Klein bottle", StructuredGroup::semidirect({{-1}}, {"a", "b"}), nullptr});
  out.push_back({"direct with finite",
                 StructuredGroup::direct_with_finite(
                     StructuredGroup::free_product(cyc(2, "a"), cyc(3, "b")), FiniteTable::cyclic(2)),
                 nullptr});
  out.push_back({"finite group V4",
                 StructuredGroup::finite_group(
                     FiniteTable({{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}})),
                 nullptr});
  out.push_back({"matrix figure-eight", figure8_group(), nullptr});
  out.push_back({"fibered trefoil",
                 StructuredGroup::fibered_free_product({{2, 1, "x"}, {3, 1, "y"}}, {}, "h"),
                 nullptr});
  out.push_back({"fibered with free factors",
                 StructuredGroup::fibered_free_product({{3, 2, "x"}}, {{"d", 1}, {"c", -1}}, "h"),
                 nullptr});
  return out;
}

void expect_axioms(const Construction& c, std::uint64_t seed) {
  const auto& g = c.group;
  const auto names = names_of(g);
  ASSERT_FALSE(names.empty()) << c.label;
  std::mt19937_64 rng(seed);
  int failures = 0;
  for (int i = 0; i < kCases; ++i) {
    const Word u = oracle::random_word(rng, names, 12);
    const Word v = oracle::random_word(rng, names, 12);
    const Word w = oracle::random_word(rng, names, 12);
    const GroupElement x = reduce_word(g, u), y = reduce_word(g, v), z = reduce_word(g, w);
    bool ok = true;
    // idempotence of the normal form
    if (g.node().renderable()) ok &= reduce_word(g, render(x)) == x;
    // the product of normal forms is the normal form of the concatenation
    Word uv = u;
    append(uv, v);
    ok &= multiply(x, y) == reduce_word(g, uv);
    ok &= multiply(multiply(x, y), z) == multiply(x, multiply(y, z));
    ok &= multiply(x, invert(x)).is_identity() && multiply(invert(x), x).is_identity();
    ok &= multiply(x, g.identity()) == x && multiply(g.identity(), x) == x;
    ok &= invert(invert(x)) == x;
    ok &= reduce_word(g, inverse_word(u)) == invert(x);
    ok &= (x == y) == (compare(x, y) == 0);
    ok &= !(x == y) || x.hash() == y.hash();
    if (c.model) ok &= (x == y) == (c.model(u) == c.model(v));
    if (c.model) ok &= x.is_identity() == (c.model(u) == c.model({}));
    if (!ok && ++failures <= 3) {
      ADD_FAILURE() << c.label << ": case " << i << " u=" << format_word(u)
                    << " v=" << format_word(v) << " w=" << format_word(w);
    }
  }
  EXPECT_EQ(failures, 0) << c.label;
}

}  // namespace

TEST(NormalFormProperties, ThousandCasesPerConstruction) {
  std::uint64_t seed = 20240601;
  for (const auto& c : constructions()) {
    SCOPED_TRACE(c.label);
    expect_axioms(c, seed++);
  }
}

TEST(NormalFormProperties, ModelsDetectIdentityOnShortWords) {
  // The models themselves must satisfy the defining relators.
  EXPECT_EQ(key(oracle::modular_eval(parse_word("a a"))), key(oracle::modular_eval({})));
  EXPECT_EQ(key(oracle::modular_eval(parse_word("b b b"))), key(oracle::modular_eval({})));
  const auto bs = oracle::bs12_generators();
  EXPECT_TRUE(oracle::evaluate(parse_word("t a t'"), bs, oracle::inverse) ==
              oracle::evaluate(parse_word("a a"), bs, oracle::inverse));
  const auto sl = oracle::sl2z_generators();
  EXPECT_TRUE(oracle::evaluate(parse_word("a a"), sl, oracle::inverse_unimodular) ==
              oracle::evaluate(parse_word("b b b"), sl, oracle::inverse_unimodular));
}

TEST(NormalFormProperties, BrittonNonPinchOnBs12) {
  const auto g = StructuredGroup::hnn(StructuredGroup::infinite_cyclic("a"),
                                      CyclicHnnAssociation{1, 2}, "t");
  const auto* node = g.as<detail::HnnNode>();
  ASSERT_NE(node, nullptr);
  const auto& assoc = node->association();
  std::mt19937_64 rng(99);
  int checked = 0, violations = 0;
  for (int i = 0; i < kCases; ++i) {
    const Word u = oracle::random_word(rng, {"a", "t"}, 16);
    const GroupElement x = reduce_word(g, u);
    const auto& f = x.form<HnnForm>();
    ASSERT_EQ(f.segments.size(), f.signs.size() + 1);
    for (std::size_t k = 0; k + 1 < f.signs.size(); ++k) {
      const auto& mid = f.segments[k + 1];
      // t a t^-1 with a in the domain, or t^-1 b t with b in the image
      if (f.signs[k] == 1 && f.signs[k + 1] == -1 && assoc.in_domain(mid)) ++violations;
      if (f.signs[k] == -1 && f.signs[k + 1] == 1 && assoc.in_image(mid)) ++violations;
      ++checked;
    }
    if (!f.signs.empty()) {
      // Britton: a reduced word containing t is not the identity.
      EXPECT_FALSE(x.is_identity());
      EXPECT_FALSE(oracle::evaluate(u, oracle::bs12_generators(), oracle::inverse) ==
                   oracle::QM{});
    }
  }
  EXPECT_EQ(violations, 0);
  EXPECT_GT(checked, 0);
}

TEST(NormalFormProperties, FreeProductSyllablesNeverIdentity) {
  const auto g = StructuredGroup::free_product(cyc(2, "a"), cyc(3, "b"));
  std::mt19937_64 rng(5);
  for (int i = 0; i < kCases; ++i) {
    const auto x = reduce_word(g, oracle::random_word(rng, {"a", "b"}, 14));
    const auto& f = x.form<SyllableForm>();
    EXPECT_EQ(f.parts.empty(), x.is_identity());
    for (std::size_t k = 0; k + 1 < f.factors.size(); ++k) EXPECT_NE(f.factors[k], f.factors[k + 1]);
    for (const auto& p : f.parts) EXPECT_FALSE(p.is_identity());
  }
}
