#ifndef ICCDEC_SEIFERT_HPP_
#define ICCDEC_SEIFERT_HPP_

// Seifert invariants, the standard presentation of the fundamental group
// with its fiber class h, finiteness data and, where one is implemented,
// a realization of the group with a normal form.
//
// Conventions: q_j^alpha_j h^beta_j = 1 for each exceptional fiber; h is
// central for an orientable base and inverted by the one-sided generators
// c_i otherwise; closed bases add q_1...q_n P h^b = 1 where P is the
// product of commutators [a_i, b_i] (or of squares c_i^2).

#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

#include "iccdec/cardinal.hpp"
#include "iccdec/checked_int.hpp"
#include "iccdec/error.hpp"
#include "iccdec/group_core.hpp"
#include "iccdec/oracle.hpp"
#include "iccdec/words.hpp"

namespace iccdec {

struct SeifertInvariants {
  int base_genus = 0;
  bool base_orientable = true;
  int boundary_components = 0;
  std::vector<std::pair<std::int64_t, std::int64_t>> exceptional_fibers;
  std::optional<std::int64_t> euler_obstruction;

  void validate() const {
    if (base_genus < 0) throw UsageError("base_genus must be >= 0");
    if (!base_orientable && base_genus < 1) {
      throw UsageError("a non-orientable base needs base_genus >= 1");
    }
    if (boundary_components < 0) throw UsageError("boundary_components must be >= 0");
    for (const auto& [a, b] : exceptional_fibers) {
      if (a < 2) throw UsageError("exceptional fiber multiplicity must be >= 2");
      if (std::gcd(a, b) != 1) {
        throw UsageError("exceptional fiber (" + std::to_string(a) + "," + std::to_string(b) +
                         ") is not coprime");
      }
    }
    if (euler_obstruction.has_value() != (boundary_components == 0)) {
      throw UsageError("euler_obstruction must be given exactly when the base is closed");
    }
  }

  bool closed() const { return boundary_components == 0; }

  // Euler characteristic of the base surface.
  std::int64_t base_euler_characteristic() const {
    return base_orientable ? 2 - 2 * base_genus - boundary_components
                           : 2 - base_genus - boundary_components;
  }

  boost::rational<std::int64_t> orbifold_euler_characteristic() const {
    boost::rational<std::int64_t> chi(base_euler_characteristic());
    for (const auto& f : exceptional_fibers) {
      chi -= boost::rational<std::int64_t>(1) - boost::rational<std::int64_t>(1, f.first);
    }
    return chi;
  }

  // b - sum beta_j / alpha_j (closed bases only).
  boost::rational<std::int64_t> euler_number() const {
    boost::rational<std::int64_t> e(euler_obstruction.value_or(0));
    for (const auto& f : exceptional_fibers) e -= boost::rational<std::int64_t>(f.second, f.first);
    return e;
  }

  bool operator==(const SeifertInvariants&) const = default;
};

struct Presentation {
  std::vector<std::string> generators;
  std::vector<Word> relators;
  std::string fiber = "h";

  std::string to_string() const {
    std::string s = "<";
    for (std::size_t i = 0; i < generators.size(); ++i) {
      if (i) s += ", ";
      s += generators[i];
    }
    s += " | ";
    for (std::size_t i = 0; i < relators.size(); ++i) {
      if (i) s += ", ";
      s += format_word(relators[i]);
    }
    return s + ">";
  }
};

// Exact order, or for some finite groups only a lower bound.
struct GroupOrder {
  Cardinal value = Cardinal::unknown();
  bool exact = true;

  static GroupOrder exactly(Cardinal c) { return {c, true}; }
  static GroupOrder finite_at_least(std::uint64_t n) { return {Cardinal::finite(n), false}; }

  bool is_trivial() const { return exact && value == Cardinal::finite(1); }
  bool is_exactly(std::uint64_t n) const { return exact && value == Cardinal::finite(n); }

  std::string to_string() const {
    if (value.is_finite() && !exact) return "finite, >= " + value.to_string();
    return value.to_string();
  }
};

struct SeifertGroup {
  Presentation presentation;
  GroupOrder order;
  std::optional<StructuredGroup> realization;
  std::optional<GroupElement> fiber;  // h inside the realization
};

namespace detail {

inline Word commutator(const std::string& x, const std::string& y) {
  return {{x, false}, {y, false}, {x, true}, {y, true}};
}

// Column-transform diagonalization over Z: returns the diagonal (one entry
// per column, 0 for free columns) and V with R V diagonal up to row ops.
inline std::pair<std::vector<std::int64_t>, IntMatrix> diagonalize(IntMatrix r) {
  const std::size_t rows = r.size();
  const std::size_t cols = rows ? r[0].size() : 0;
  IntMatrix v = mat_identity(cols);
  using namespace checked;
  auto col_op = [&](std::size_t dst, std::size_t src, std::int64_t k) {
    for (auto& row : r) row[dst] = sub(row[dst], mul(k, row[src]));
    for (auto& row : v) row[dst] = sub(row[dst], mul(k, row[src]));
  };
  auto col_swap = [&](std::size_t a, std::size_t b) {
    for (auto& row : r) std::swap(row[a], row[b]);
    for (auto& row : v) std::swap(row[a], row[b]);
  };
  auto row_op = [&](std::size_t dst, std::size_t src, std::int64_t k) {
    for (std::size_t j = 0; j < cols; ++j) r[dst][j] = sub(r[dst][j], mul(k, r[src][j]));
  };
  std::size_t t = 0;
  for (; t < rows && t < cols; ++t) {
    while (true) {
      // Smallest nonzero entry of the remaining block becomes the pivot.
      std::optional<std::pair<std::size_t, std::size_t>> best;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j)
          if (r[i][j] != 0 && (!best || checked::abs(r[i][j]) < checked::abs(r[best->first][best->second])))
            best = std::make_pair(i, j);
      if (!best) break;
      std::swap(r[t], r[best->first]);
      col_swap(t, best->second);
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        const std::int64_t q = r[i][t] / r[t][t];
        row_op(i, t, q);
        clean = clean && r[i][t] == 0;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        const std::int64_t q = r[t][j] / r[t][t];
        col_op(j, t, q);
        clean = clean && r[t][j] == 0;
      }
      if (clean) break;
    }
  }
  std::vector<std::int64_t> diag(cols, 0);
  for (std::size_t j = 0; j < cols && j < rows; ++j) diag[j] = checked::abs(r[j][j]);
  return {diag, v};
}

}  // namespace detail

inline SeifertGroup seifert_group(const SeifertInvariants& s) {
  s.validate();
  SeifertGroup out;
  Presentation& p = out.presentation;
  const std::string h = p.fiber;
  std::vector<std::string> surface_gens;
  if (s.base_orientable) {
    for (int i = 1; i <= s.base_genus; ++i) {
      surface_gens.push_back("a" + std::to_string(i));
      surface_gens.push_back("b" + std::to_string(i));
    }
  } else {
    for (int i = 1; i <= s.base_genus; ++i) surface_gens.push_back("c" + std::to_string(i));
  }
  std::vector<std::string> boundary_gens;
  for (int i = 1; i <= s.boundary_components; ++i) boundary_gens.push_back("d" + std::to_string(i));
  std::vector<std::string> fiber_gens;
  for (std::size_t j = 1; j <= s.exceptional_fibers.size(); ++j) {
    fiber_gens.push_back("q" + std::to_string(j));
  }
  for (const auto* list : {&surface_gens, &boundary_gens, &fiber_gens}) {
    p.generators.insert(p.generators.end(), list->begin(), list->end());
  }
  p.generators.push_back(h);

  for (const auto& g : surface_gens) {
    if (s.base_orientable) {
      p.relators.push_back(detail::commutator(g, h));
    } else {
      p.relators.push_back({{g, false}, {h, false}, {g, true}, {h, false}});
    }
  }
  for (const auto& g : boundary_gens) p.relators.push_back(detail::commutator(g, h));
  for (std::size_t j = 0; j < fiber_gens.size(); ++j) {
    p.relators.push_back(detail::commutator(fiber_gens[j], h));
    Word w = power_word(fiber_gens[j], s.exceptional_fibers[j].first);
    append(w, power_word(h, s.exceptional_fibers[j].second));
    p.relators.push_back(std::move(w));
  }
  Word product;
  for (const auto& g : fiber_gens) product.push_back({g, false});
  if (s.base_orientable) {
    for (int i = 1; i <= s.base_genus; ++i) {
      append(product, detail::commutator("a" + std::to_string(i), "b" + std::to_string(i)));
    }
  } else {
    for (const auto& g : surface_gens) append(product, power_word(g, 2));
  }
  for (const auto& g : boundary_gens) product.push_back({g, false});
  if (s.closed()) append(product, power_word(h, *s.euler_obstruction));
  p.relators.push_back(std::move(product));

  const auto n_fibers = s.exceptional_fibers.size();

  // Bounded base: free product of fibered cyclic factors along h.
  if (!s.closed()) {
    std::vector<detail::FiberFactor> fibers;
    const char* short_names[] = {"x", "y", "z"};
    for (std::size_t j = 0; j < n_fibers; ++j) {
      const auto [a, b] = s.exceptional_fibers[j];
      fibers.push_back({a, b, n_fibers <= 3 ? short_names[j] : "x" + std::to_string(j + 1)});
    }
    std::vector<detail::FreeFactor> free;
    for (const auto& g : surface_gens) free.push_back({g, s.base_orientable ? 1 : -1});
    for (int i = 1; i < s.boundary_components; ++i) free.push_back({"d" + std::to_string(i), 1});
    StructuredGroup g = StructuredGroup::fibered_free_product(fibers, free, h);
    out.fiber = g.generator(h);
    out.realization = std::move(g);
    out.order = GroupOrder::exactly(Cardinal::infinite());
    return out;
  }

  const auto chi = s.orbifold_euler_characteristic();
  const auto e = s.euler_number();
  const bool finite = chi.numerator() > 0 && e.numerator() != 0;

  // S^2 base with at most two exceptional fibers: the group is cyclic.
  if (s.base_orientable && s.base_genus == 0 && n_fibers <= 2) {
    const std::size_t n = n_fibers + 1;
    detail::IntMatrix rel(n, std::vector<std::int64_t>(n, 0));
    for (std::size_t j = 0; j < n_fibers; ++j) {
      rel[j][j] = s.exceptional_fibers[j].first;
      rel[j][n - 1] = s.exceptional_fibers[j].second;
      rel[n - 1][j] = 1;
    }
    rel[n - 1][n - 1] = *s.euler_obstruction;
    const auto [diag, v] = detail::diagonalize(rel);
    std::optional<std::size_t> col;
    for (std::size_t j = 0; j < n; ++j) {
      if (diag[j] != 1) {
        if (col) throw std::logic_error("expected a cyclic group");
        col = j;
      }
    }
    if (!col) {
      StructuredGroup g = StructuredGroup::finite_cyclic(1, "g");
      out.fiber = g.identity();
      out.realization = std::move(g);
      out.order = GroupOrder::exactly(Cardinal::finite(1));
      return out;
    }
    const std::int64_t d = diag[*col];
    const std::int64_t hv = v[n - 1][*col];
    StructuredGroup g = d == 0 ? StructuredGroup::infinite_cyclic("g")
                               : StructuredGroup::finite_cyclic(d, "g");
    out.fiber = g.node().wrap(CyclicForm{d == 0 ? hv : checked::mod(hv, d)});
    out.order = GroupOrder::exactly(d == 0 ? Cardinal::infinite()
                                           : Cardinal::finite(static_cast<std::uint64_t>(d)));
    out.realization = std::move(g);
    return out;
  }

  // Torus base without exceptional fibers: Z^2 x| Z with phi = [[1,b],[0,1]].
  if (s.base_orientable && s.base_genus == 1 && n_fibers == 0) {
    StructuredGroup g = StructuredGroup::semidirect({{1, *s.euler_obstruction}, {0, 1}},
                                                    {h, "a1", "b1"});
    out.fiber = g.generator(h);
    out.realization = std::move(g);
    out.order = GroupOrder::exactly(Cardinal::infinite());
    return out;
  }

  // Projective-plane base without exceptional fibers.
  if (!s.base_orientable && s.base_genus == 1 && n_fibers == 0) {
    const std::int64_t b = *s.euler_obstruction;
    if (b == 0) {
      StructuredGroup g = StructuredGroup::free_product(StructuredGroup::finite_cyclic(2, "c1"),
                                                        StructuredGroup::finite_cyclic(2, "s"));
      out.fiber = reduce_word(g, "c1 s");
      out.realization = std::move(g);
      out.order = GroupOrder::exactly(Cardinal::infinite());
    } else {
      out.order = GroupOrder::exactly(Cardinal::finite(4 * static_cast<std::uint64_t>(
                                                               checked::abs(b))));
    }
    return out;
  }

  out.order = finite ? GroupOrder::finite_at_least(4) : GroupOrder::exactly(Cardinal::infinite());
  return out;
}

// Reads the class bound of h off the relators: every other generator must
// appear in a relator [g,h] (central) or g h g^-1 h (inverting).
inline ClassBound presentation_fiber_bound(const Presentation& p) {
  bool central = true;
  for (const auto& g : p.generators) {
    if (g == p.fiber) continue;
    bool found = false;
    for (const auto& r : p.relators) {
      if (r == detail::commutator(g, p.fiber)) {
        found = true;
        break;
      }
      if (r == Word{{g, false}, {p.fiber, false}, {g, true}, {p.fiber, false}}) {
        found = true;
        central = false;
        break;
      }
    }
    if (!found) return ClassBound::None;
  }
  return central ? ClassBound::Central : ClassBound::CentralUpToInverse;
}

// Group <x, y | x^p = y^q> with h = x^p: the disk-base Seifert group with
// fibers (p,1), (q,1), i.e. the torus knot group.
inline StructuredGroup torus_knot_group(std::int64_t p, std::int64_t q) {
  return StructuredGroup::fibered_free_product({{p, 1, "x"}, {q, 1, "y"}}, {}, "h");
}

}  // namespace iccdec

#endif  // ICCDEC_SEIFERT_HPP_
