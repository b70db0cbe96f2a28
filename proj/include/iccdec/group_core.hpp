#ifndef ICCDEC_GROUP_CORE_HPP_
#define ICCDEC_GROUP_CORE_HPP_

// Exact element arithmetic and canonical normal forms for the structured
// group constructions: cyclic groups, free products, amalgams over finite
// edge groups, HNN extensions (finite or cyclic associated subgroups),
// Z^n x| Z, direct products with a finite group, matrix groups over the
// Eisenstein integers and free products of fibered cyclic factors (the
// fundamental groups of Seifert spaces with nonempty boundary).
//
// Every element carries a canonical payload: two elements are equal iff
// their payloads are identical.

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include <boost/container_hash/hash.hpp>

#include "iccdec/cardinal.hpp"
#include "iccdec/checked_int.hpp"
#include "iccdec/eisenstein.hpp"
#include "iccdec/error.hpp"
#include "iccdec/finite_table.hpp"
#include "iccdec/words.hpp"

namespace iccdec {

enum class GroupKind {
  FiniteCyclic,
  InfiniteCyclic,
  FreeProduct,
  Amalgam,
  Hnn,
  SemidirectZnByZ,
  DirectWithFinite,
  MatrixGroupSL2Eisenstein,
  FiberedFreeProduct,
};

inline std::string_view to_string(GroupKind k) {
  switch (k) {
    case GroupKind::FiniteCyclic: return "finite_cyclic";
    case GroupKind::InfiniteCyclic: return "infinite_cyclic";
    case GroupKind::FreeProduct: return "free_product";
    case GroupKind::Amalgam: return "amalgam";
    case GroupKind::Hnn: return "hnn";
    case GroupKind::SemidirectZnByZ: return "semidirect";
    case GroupKind::DirectWithFinite: return "direct_with_finite";
    case GroupKind::MatrixGroupSL2Eisenstein: return "matrix_sl2_eisenstein";
    case GroupKind::FiberedFreeProduct: return "fibered_free_product";
  }
  return "?";
}

// `factor_index` numbers the leaf construction blocks of a group in
// depth-first order.
struct GeneratorSymbol {
  std::string name;
  int factor_index = 0;
};

class GroupElement;
class StructuredGroup;

namespace detail {
class GroupNode;
}

// ---------------------------------------------------------------------------
// Normal-form payloads
// ---------------------------------------------------------------------------

// Residue in [0, n) for Z/n, exponent for Z.
struct CyclicForm {
  std::int64_t value = 0;
};

// parts[0] parts[1] ... parts[k-1] * edge, with parts alternating between
// factors and each part a canonical left-coset representative.
struct SyllableForm {
  std::vector<int> factors;
  std::vector<GroupElement> parts;
  int edge = 0;
};

// segments[0] t^signs[0] segments[1] ... t^signs[k-1] segments[k].
// segments[i] for i < k is a canonical left-coset representative of the
// subgroup that can cross the following stable letter; no pinches remain.
struct HnnForm {
  std::vector<GroupElement> segments;
  std::vector<int> signs;
};

// (v, m) in Z^n x|_phi Z; (v, m)(w, k) = (v + phi^m w, m + k).
struct SemidirectForm {
  std::array<std::int64_t, 3> v{};
  std::int64_t m = 0;
};

// (h, f) in H x F. `h` is empty for a bare finite group.
struct DirectForm {
  std::vector<GroupElement> h;
  int f = 0;
};

struct MatrixForm {
  std::shared_ptr<const Mat2E> m;
};

// x_{factors[0]}^{exps[0]} ... x_{factors[k-1]}^{exps[k-1]} h^fiber.
struct FiberedForm {
  std::vector<int> factors;
  std::vector<std::int64_t> exps;
  std::int64_t fiber = 0;
};

using Payload = std::variant<CyclicForm, SyllableForm, HnnForm, SemidirectForm,
                             DirectForm, MatrixForm, FiberedForm>;

namespace detail {

class GroupNode : public std::enable_shared_from_this<GroupNode> {
 public:
  virtual ~GroupNode() = default;

  virtual GroupKind kind() const = 0;
  virtual Payload identity_payload() const = 0;
  virtual Payload multiply(const Payload& x, const Payload& y) const = 0;
  virtual Payload invert(const Payload& x) const = 0;
  virtual bool is_identity(const Payload& x) const = 0;
  // Total order with the identity first.
  virtual std::strong_ordering compare(const Payload& x, const Payload& y) const = 0;
  virtual std::size_t hash(const Payload& x) const = 0;
  virtual void render(const Payload& x, Word& out) const = 0;
  virtual bool renderable() const { return true; }
  virtual std::string describe(const Payload& x) const {
    Word w;
    render(x, w);
    return format_word(w);
  }
  virtual Cardinal order() const = 0;
  virtual int block_count() const { return 1; }
  virtual std::vector<std::shared_ptr<const GroupNode>> children() const { return {}; }

  const std::vector<GeneratorSymbol>& symbols() const { return symbols_; }
  const std::vector<Payload>& generator_payloads() const { return gen_payloads_; }

  std::optional<std::size_t> find_generator(std::string_view name) const {
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
      if (symbols_[i].name == name) return i;
    }
    return std::nullopt;
  }

  GroupElement wrap(Payload p) const;

 protected:
  void add_generator(std::string name, int block, Payload p) {
    if (name.empty()) throw UsageError("generator names must be nonempty");
    for (char c : name) {
      if (c == ' ' || c == '\t' || c == '\'' || c == '^' || c == ',') {
        throw UsageError("generator name '" + name + "' contains a reserved character");
      }
    }
    if (name == "1") throw UsageError("'1' is reserved for the identity");
    if (find_generator(name)) {
      throw UsageError("duplicate generator name '" + name + "'");
    }
    symbols_.push_back({std::move(name), block});
    gen_payloads_.push_back(std::move(p));
  }

 private:
  std::vector<GeneratorSymbol> symbols_;
  std::vector<Payload> gen_payloads_;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// GroupElement
// ---------------------------------------------------------------------------

class GroupElement {
 public:
  GroupElement(std::shared_ptr<const detail::GroupNode> owner, Payload p)
      : owner_(std::move(owner)), payload_(std::move(p)) {}

  const detail::GroupNode& node() const { return *owner_; }
  const std::shared_ptr<const detail::GroupNode>& node_ptr() const { return owner_; }
  const Payload& payload() const { return payload_; }

  template <class Form>
  const Form& form() const {
    return std::get<Form>(payload_);
  }

  bool is_identity() const { return owner_->is_identity(payload_); }
  std::size_t hash() const { return owner_->hash(payload_); }
  bool same_owner(const GroupElement& o) const { return owner_.get() == o.owner_.get(); }

  friend bool operator==(const GroupElement& a, const GroupElement& b) {
    return a.same_owner(b) && a.owner_->compare(a.payload_, b.payload_) == 0;
  }

 private:
  std::shared_ptr<const detail::GroupNode> owner_;
  Payload payload_;
};

// Deterministic total order within one group (identity first).
inline std::strong_ordering compare(const GroupElement& a, const GroupElement& b) {
  if (!a.same_owner(b)) throw UsageError("comparing elements of different groups");
  return a.node().compare(a.payload(), b.payload());
}

inline bool operator<(const GroupElement& a, const GroupElement& b) { return compare(a, b) < 0; }

struct GroupElementHash {
  std::size_t operator()(const GroupElement& g) const { return g.hash(); }
};

inline GroupElement detail::GroupNode::wrap(Payload p) const {
  return GroupElement(shared_from_this(), std::move(p));
}

inline GroupElement multiply(const GroupElement& g, const GroupElement& h) {
  if (!g.same_owner(h)) throw UsageError("multiply: elements belong to different groups");
  return g.node().wrap(g.node().multiply(g.payload(), h.payload()));
}

inline GroupElement invert(const GroupElement& g) {
  return g.node().wrap(g.node().invert(g.payload()));
}

// by * g * by^-1
inline GroupElement conjugate(const GroupElement& g, const GroupElement& by) {
  if (!g.same_owner(by)) throw UsageError("conjugate: elements belong to different groups");
  return multiply(multiply(by, g), invert(by));
}

inline GroupElement power(const GroupElement& g, std::int64_t k) {
  GroupElement base = k < 0 ? invert(g) : g;
  GroupElement acc = g.node().wrap(g.node().identity_payload());
  for (std::int64_t i = 0; i < (k < 0 ? -k : k); ++i) acc = multiply(acc, base);
  return acc;
}

inline Word render(const GroupElement& g) {
  Word w;
  g.node().render(g.payload(), w);
  return w;
}

inline std::string to_string(const GroupElement& g) { return g.node().describe(g.payload()); }

namespace detail {

inline std::strong_ordering cmp_int(std::int64_t a, std::int64_t b) { return a <=> b; }

template <class T>
std::strong_ordering cmp_lex(const std::vector<T>& a, const std::vector<T>& b) {
  if (a.size() != b.size()) return a.size() <=> b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if constexpr (std::is_same_v<T, GroupElement>) {
      if (auto c = compare(a[i], b[i]); c != 0) return c;
    } else {
      if (auto c = a[i] <=> b[i]; c != 0) return c;
    }
  }
  return std::strong_ordering::equal;
}

inline void hash_mix(std::size_t& seed, std::size_t v) { boost::hash_combine(seed, v); }

// Canonical representative of the left coset x*S for a finite S: the least
// element of {x s}. Returns (rep, s*) with rep = x * s*.
inline std::pair<GroupElement, std::size_t> least_in_coset(
    const GroupElement& x, const std::vector<GroupElement>& subgroup) {
  std::optional<GroupElement> best;
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < subgroup.size(); ++i) {
    GroupElement cand = multiply(x, subgroup[i]);
    if (!best || compare(cand, *best) < 0) {
      best = std::move(cand);
      best_i = i;
    }
  }
  return {*best, best_i};
}

// ---------------------------------------------------------------------------
// Z/n and Z
// ---------------------------------------------------------------------------

class CyclicNode final : public GroupNode {
 public:
  // n == 0 denotes the infinite cyclic group.
  CyclicNode(std::int64_t n, std::string name) : n_(n) {
    if (n < 0) throw UsageError("cyclic order must be >= 1");
    if (n != 1) add_generator(name, 0, CyclicForm{1});
    name_ = std::move(name);
  }

  GroupKind kind() const override {
    return n_ == 0 ? GroupKind::InfiniteCyclic : GroupKind::FiniteCyclic;
  }
  std::int64_t modulus() const { return n_; }
  const std::string& name() const { return name_; }

  Payload identity_payload() const override { return CyclicForm{0}; }
  Payload multiply(const Payload& x, const Payload& y) const override {
    const auto a = std::get<CyclicForm>(x).value;
    const auto b = std::get<CyclicForm>(y).value;
    if (n_ == 0) return CyclicForm{checked::add(a, b)};
    return CyclicForm{(a + b) % n_};
  }
  Payload invert(const Payload& x) const override {
    const auto a = std::get<CyclicForm>(x).value;
    if (n_ == 0) return CyclicForm{checked::neg(a)};
    return CyclicForm{(n_ - a) % n_};
  }
  bool is_identity(const Payload& x) const override {
    return std::get<CyclicForm>(x).value == 0;
  }
  std::strong_ordering compare(const Payload& x, const Payload& y) const override {
    const auto a = std::get<CyclicForm>(x).value;
    const auto b = std::get<CyclicForm>(y).value;
    if (n_ != 0) return a <=> b;
    // 0, 1, -1, 2, -2, ...
    const auto ka = std::make_pair(a < 0 ? -a : a, a < 0);
    const auto kb = std::make_pair(b < 0 ? -b : b, b < 0);
    return ka <=> kb;
  }
  std::size_t hash(const Payload& x) const override {
    return std::hash<std::int64_t>{}(std::get<CyclicForm>(x).value);
  }
  void render(const Payload& x, Word& out) const override {
    append(out, power_word(name_, std::get<CyclicForm>(x).value));
  }
  Cardinal order() const override {
    return n_ == 0 ? Cardinal::infinite() : Cardinal::finite(static_cast<std::uint64_t>(n_));
  }

 private:
  std::int64_t n_;
  std::string name_;
};

// ---------------------------------------------------------------------------
// Free products and amalgams over a finite edge group
// ---------------------------------------------------------------------------

class AmalgamNode final : public GroupNode {
 public:
  AmalgamNode(std::shared_ptr<const GroupNode> left, std::shared_ptr<const GroupNode> right,
              FiniteTable edge, std::vector<Payload> left_emb, std::vector<Payload> right_emb,
              bool is_free_product)
      : left_(std::move(left)),
        right_(std::move(right)),
        edge_(std::move(edge)),
        free_(is_free_product) {
    if (static_cast<int>(left_emb.size()) != edge_.order() ||
        static_cast<int>(right_emb.size()) != edge_.order()) {
      throw UsageError("amalgam embeddings must list one image per edge element");
    }
    for (auto& p : left_emb) emb_[0].push_back(left_->wrap(std::move(p)));
    for (auto& p : right_emb) emb_[1].push_back(right_->wrap(std::move(p)));
    for (int side = 0; side < 2; ++side) validate_embedding(emb_[side]);

    const int left_blocks = left_->block_count();
    const std::vector<const GroupNode*> sides{left_.get(), right_.get()};
    for (int side = 0; side < 2; ++side) {
      const auto& syms = sides[side]->symbols();
      const auto& gens = sides[side]->generator_payloads();
      for (std::size_t i = 0; i < syms.size(); ++i) {
        SyllableForm f;
        mul_factor(f, side, sides[side]->wrap(gens[i]));
        add_generator(syms[i].name, syms[i].factor_index + (side ? left_blocks : 0), std::move(f));
      }
    }
  }

  GroupKind kind() const override { return free_ ? GroupKind::FreeProduct : GroupKind::Amalgam; }
  int block_count() const override { return left_->block_count() + right_->block_count(); }
  std::vector<std::shared_ptr<const GroupNode>> children() const override {
    return {left_, right_};
  }

  const GroupNode& factor(int side) const { return side == 0 ? *left_ : *right_; }
  const FiniteTable& edge() const { return edge_; }
  // Image of edge element i in factor `side`.
  const GroupElement& embedding(int side, int i) const { return emb_[side][i]; }

  // [factor : edge]
  Cardinal index(int side) const {
    const Cardinal o = factor(side).order();
    if (!o.is_finite()) return o;
    return Cardinal::finite(o.value() / static_cast<std::uint64_t>(edge_.order()));
  }

  Payload identity_payload() const override { return SyllableForm{}; }

  Payload multiply(const Payload& x, const Payload& y) const override {
    SyllableForm r = std::get<SyllableForm>(x);
    const auto& b = std::get<SyllableForm>(y);
    for (std::size_t i = 0; i < b.parts.size(); ++i) mul_factor(r, b.factors[i], b.parts[i]);
    mul_factor(r, 0, emb_[0][b.edge]);
    return r;
  }

  Payload invert(const Payload& x) const override {
    const auto& a = std::get<SyllableForm>(x);
    SyllableForm r;
    r.edge = edge_.inv(a.edge);
    for (std::size_t i = a.parts.size(); i-- > 0;) {
      mul_factor(r, a.factors[i], iccdec::invert(a.parts[i]));
    }
    return r;
  }

  bool is_identity(const Payload& x) const override {
    const auto& a = std::get<SyllableForm>(x);
    return a.parts.empty() && a.edge == 0;
  }

  std::strong_ordering compare(const Payload& x, const Payload& y) const override {
    const auto& a = std::get<SyllableForm>(x);
    const auto& b = std::get<SyllableForm>(y);
    if (auto c = a.parts.size() <=> b.parts.size(); c != 0) return c;
    if (auto c = cmp_lex(a.factors, b.factors); c != 0) return c;
    if (auto c = cmp_lex(a.parts, b.parts); c != 0) return c;
    return a.edge <=> b.edge;
  }

  std::size_t hash(const Payload& x) const override {
    const auto& a = std::get<SyllableForm>(x);
    std::size_t seed = a.parts.size();
    for (std::size_t i = 0; i < a.parts.size(); ++i) {
      hash_mix(seed, static_cast<std::size_t>(a.factors[i]));
      hash_mix(seed, a.parts[i].hash());
    }
    hash_mix(seed, static_cast<std::size_t>(a.edge));
    return seed;
  }

  void render(const Payload& x, Word& out) const override {
    const auto& a = std::get<SyllableForm>(x);
    for (const auto& p : a.parts) p.node().render(p.payload(), out);
    if (a.edge != 0) left_->render(emb_[0][a.edge].payload(), out);
  }
  bool renderable() const override { return left_->renderable() && right_->renderable(); }

  Cardinal order() const override {
    const Cardinal i0 = index(0);
    const Cardinal i1 = index(1);
    if (i0 == Cardinal::finite(1)) return right_->order();
    if (i1 == Cardinal::finite(1)) return left_->order();
    if (i0.is_unknown() || i1.is_unknown()) return Cardinal::unknown();
    return Cardinal::infinite();
  }

 private:
  // Splits x in factor `side` as rep * emb(edge index).
  std::pair<GroupElement, int> split(int side, const GroupElement& x) const {
    auto [rep, i] = least_in_coset(x, emb_[side]);
    return {rep, edge_.inv(static_cast<int>(i))};
  }

  void mul_factor(SyllableForm& f, int side, const GroupElement& g) const {
    GroupElement y = iccdec::multiply(emb_[side][f.edge], g);
    if (!f.parts.empty() && f.factors.back() == side) {
      y = iccdec::multiply(f.parts.back(), y);
      f.parts.pop_back();
      f.factors.pop_back();
    }
    auto [rep, c] = split(side, y);
    if (!rep.is_identity()) {
      f.factors.push_back(side);
      f.parts.push_back(std::move(rep));
    }
    f.edge = c;
  }

  void validate_embedding(const std::vector<GroupElement>& emb) const {
    if (!emb[0].is_identity()) throw UsageError("edge embedding must send 0 to the identity");
    for (int i = 0; i < edge_.order(); ++i) {
      for (int j = 0; j < edge_.order(); ++j) {
        if (!(iccdec::multiply(emb[i], emb[j]) == emb[edge_.mul(i, j)])) {
          throw UsageError("edge embedding is not a homomorphism");
        }
        if (i < j && emb[i] == emb[j]) throw UsageError("edge embedding is not injective");
      }
    }
  }

  std::shared_ptr<const GroupNode> left_;
  std::shared_ptr<const GroupNode> right_;
  FiniteTable edge_;
  std::array<std::vector<GroupElement>, 2> emb_;
  bool free_;
};

// ---------------------------------------------------------------------------
// HNN extensions: t a t^-1 = phi(a) for a in the domain subgroup A.
// ---------------------------------------------------------------------------

class Association {
 public:
  virtual ~Association() = default;
  virtual bool in_domain(const GroupElement& x) const = 0;
  virtual bool in_image(const GroupElement& x) const = 0;
  virtual GroupElement phi(const GroupElement& a) const = 0;
  virtual GroupElement phi_inv(const GroupElement& b) const = 0;
  // x = rep * a with a in the domain.
  virtual std::pair<GroupElement, GroupElement> split_domain(const GroupElement& x) const = 0;
  // x = rep * b with b in the image.
  virtual std::pair<GroupElement, GroupElement> split_image(const GroupElement& x) const = 0;
  virtual bool domain_proper() const = 0;
  virtual bool image_proper() const = 0;
  virtual Cardinal domain_order() const = 0;
};

// Finite associated subgroups listed element by element; domain[i] maps to
// image[i].
class FiniteAssociation final : public Association {
 public:
  FiniteAssociation(const GroupNode& base, std::vector<GroupElement> domain,
                    std::vector<GroupElement> image)
      : domain_(std::move(domain)), image_(std::move(image)) {
    if (domain_.empty() || domain_.size() != image_.size()) {
      throw UsageError("HNN association needs equally many domain and image elements");
    }
    check_subgroup(domain_, "domain");
    check_subgroup(image_, "image");
    for (std::size_t i = 0; i < domain_.size(); ++i) {
      for (std::size_t j = 0; j < domain_.size(); ++j) {
        const auto k = index_of(domain_, iccdec::multiply(domain_[i], domain_[j]));
        if (!(image_[*k] == iccdec::multiply(image_[i], image_[j]))) {
          throw UsageError("HNN association is not a homomorphism");
        }
      }
    }
    const Cardinal o = base.order();
    domain_proper_ = !(o.is_finite() && o.value() == domain_.size());
    image_proper_ = domain_proper_;
  }

  const std::vector<GroupElement>& domain() const { return domain_; }
  const std::vector<GroupElement>& image() const { return image_; }

  bool in_domain(const GroupElement& x) const override { return index_of(domain_, x).has_value(); }
  bool in_image(const GroupElement& x) const override { return index_of(image_, x).has_value(); }
  GroupElement phi(const GroupElement& a) const override { return image_[*index_of(domain_, a)]; }
  GroupElement phi_inv(const GroupElement& b) const override {
    return domain_[*index_of(image_, b)];
  }
  std::pair<GroupElement, GroupElement> split_domain(const GroupElement& x) const override {
    auto [rep, i] = least_in_coset(x, domain_);
    return {rep, iccdec::invert(domain_[i])};
  }
  std::pair<GroupElement, GroupElement> split_image(const GroupElement& x) const override {
    auto [rep, i] = least_in_coset(x, image_);
    return {rep, iccdec::invert(image_[i])};
  }
  bool domain_proper() const override { return domain_proper_; }
  bool image_proper() const override { return image_proper_; }
  Cardinal domain_order() const override { return Cardinal::finite(domain_.size()); }

 private:
  static std::optional<std::size_t> index_of(const std::vector<GroupElement>& v,
                                             const GroupElement& x) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] == x) return i;
    }
    return std::nullopt;
  }
  static void check_subgroup(const std::vector<GroupElement>& s, const char* what) {
    bool has_identity = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
      has_identity = has_identity || s[i].is_identity();
      for (std::size_t j = 0; j < s.size(); ++j) {
        if (i < j && s[i] == s[j]) {
          throw UsageError(std::string("HNN ") + what + " lists an element twice");
        }
        if (!index_of(s, iccdec::multiply(s[i], s[j]))) {
          throw UsageError(std::string("HNN ") + what + " is not closed under multiplication");
        }
      }
    }
    if (!has_identity) throw UsageError(std::string("HNN ") + what + " lacks the identity");
  }

  std::vector<GroupElement> domain_;
  std::vector<GroupElement> image_;
  bool domain_proper_ = true;
  bool image_proper_ = true;
};

// Base Z = <a>, domain <a^p>, image <a^q>, phi(a^p) = a^q.
class CyclicAssociation final : public Association {
 public:
  CyclicAssociation(const CyclicNode& base, std::int64_t p, std::int64_t q)
      : base_(base), p_(p), q_(q) {
    if (base.modulus() != 0) {
      throw UsageError("cyclic HNN association requires an infinite cyclic base");
    }
    if (p == 0 || q == 0) throw UsageError("cyclic HNN association powers must be nonzero");
  }

  std::int64_t domain_power() const { return p_; }
  std::int64_t image_power() const { return q_; }

  bool in_domain(const GroupElement& x) const override { return value(x) % p_ == 0; }
  bool in_image(const GroupElement& x) const override { return value(x) % q_ == 0; }
  GroupElement phi(const GroupElement& a) const override {
    return make(checked::mul(value(a) / p_, q_));
  }
  GroupElement phi_inv(const GroupElement& b) const override {
    return make(checked::mul(value(b) / q_, p_));
  }
  std::pair<GroupElement, GroupElement> split_domain(const GroupElement& x) const override {
    return split(x, p_);
  }
  std::pair<GroupElement, GroupElement> split_image(const GroupElement& x) const override {
    return split(x, q_);
  }
  bool domain_proper() const override { return p_ != 1 && p_ != -1; }
  bool image_proper() const override { return q_ != 1 && q_ != -1; }
  Cardinal domain_order() const override { return Cardinal::infinite(); }

 private:
  static std::int64_t value(const GroupElement& x) { return x.form<CyclicForm>().value; }
  GroupElement make(std::int64_t n) const { return base_.wrap(CyclicForm{n}); }
  std::pair<GroupElement, GroupElement> split(const GroupElement& x, std::int64_t k) const {
    const std::int64_t n = value(x);
    const std::int64_t r = checked::mod(n, k < 0 ? -k : k);
    return {make(r), make(n - r)};
  }

  const CyclicNode& base_;
  std::int64_t p_;
  std::int64_t q_;
};

class HnnNode final : public GroupNode {
 public:
  HnnNode(std::shared_ptr<const GroupNode> base, std::string stable)
      : base_(std::move(base)), stable_(std::move(stable)) {}

  // Two-phase construction: the association refers to base elements.
  void finish(std::unique_ptr<Association> assoc) {
    assoc_ = std::move(assoc);
    const auto& syms = base_->symbols();
    const auto& gens = base_->generator_payloads();
    for (std::size_t i = 0; i < syms.size(); ++i) {
      add_generator(syms[i].name, syms[i].factor_index,
                    HnnForm{{base_->wrap(gens[i])}, {}});
    }
    const GroupElement one = base_->wrap(base_->identity_payload());
    add_generator(stable_, base_->block_count(), HnnForm{{one, one}, {1}});
  }

  GroupKind kind() const override { return GroupKind::Hnn; }
  int block_count() const override { return base_->block_count() + 1; }
  std::vector<std::shared_ptr<const GroupNode>> children() const override { return {base_}; }
  const GroupNode& base() const { return *base_; }
  const Association& association() const { return *assoc_; }
  const std::string& stable_letter() const { return stable_; }

  Payload identity_payload() const override {
    return HnnForm{{base_->wrap(base_->identity_payload())}, {}};
  }

  Payload multiply(const Payload& x, const Payload& y) const override {
    HnnForm r = std::get<HnnForm>(x);
    const auto& b = std::get<HnnForm>(y);
    mul_base(r, b.segments[0]);
    for (std::size_t i = 0; i < b.signs.size(); ++i) {
      mul_stable(r, b.signs[i]);
      mul_base(r, b.segments[i + 1]);
    }
    return r;
  }

  Payload invert(const Payload& x) const override {
    const auto& a = std::get<HnnForm>(x);
    HnnForm r = std::get<HnnForm>(identity_payload());
    mul_base(r, iccdec::invert(a.segments.back()));
    for (std::size_t i = a.signs.size(); i-- > 0;) {
      mul_stable(r, -a.signs[i]);
      mul_base(r, iccdec::invert(a.segments[i]));
    }
    return r;
  }

  bool is_identity(const Payload& x) const override {
    const auto& a = std::get<HnnForm>(x);
    return a.signs.empty() && a.segments[0].is_identity();
  }

  std::strong_ordering compare(const Payload& x, const Payload& y) const override {
    const auto& a = std::get<HnnForm>(x);
    const auto& b = std::get<HnnForm>(y);
    const bool ia = is_identity(x), ib = is_identity(y);
    if (ia != ib) return ia ? std::strong_ordering::less : std::strong_ordering::greater;
    if (auto c = cmp_lex(a.signs, b.signs); c != 0) return c;
    return cmp_lex(a.segments, b.segments);
  }

  std::size_t hash(const Payload& x) const override {
    const auto& a = std::get<HnnForm>(x);
    std::size_t seed = a.signs.size();
    for (int s : a.signs) hash_mix(seed, static_cast<std::size_t>(s + 2));
    for (const auto& g : a.segments) hash_mix(seed, g.hash());
    return seed;
  }

  void render(const Payload& x, Word& out) const override {
    const auto& a = std::get<HnnForm>(x);
    for (std::size_t i = 0; i < a.segments.size(); ++i) {
      base_->render(a.segments[i].payload(), out);
      if (i < a.signs.size()) out.push_back({stable_, a.signs[i] < 0});
    }
  }
  bool renderable() const override { return base_->renderable(); }

  Cardinal order() const override { return Cardinal::infinite(); }

 private:
  static void mul_base(HnnForm& f, const GroupElement& g) {
    f.segments.back() = iccdec::multiply(f.segments.back(), g);
  }

  void mul_stable(HnnForm& f, int eps) const {
    GroupElement& last = f.segments.back();
    if (!f.signs.empty() && f.signs.back() == -eps) {
      // t g t^-1 = phi(g) for g in A; t^-1 g t = phi^-1(g) for g in B.
      if (eps < 0 && assoc_->in_domain(last)) {
        GroupElement img = assoc_->phi(last);
        f.segments.pop_back();
        f.signs.pop_back();
        mul_base(f, img);
        return;
      }
      if (eps > 0 && assoc_->in_image(last)) {
        GroupElement pre = assoc_->phi_inv(last);
        f.segments.pop_back();
        f.signs.pop_back();
        mul_base(f, pre);
        return;
      }
    }
    if (eps > 0) {
      // g t = r b t = r t phi^-1(b)
      auto [rep, b] = assoc_->split_image(last);
      last = std::move(rep);
      f.signs.push_back(1);
      f.segments.push_back(assoc_->phi_inv(b));
    } else {
      // g t^-1 = r a t^-1 = r t^-1 phi(a)
      auto [rep, a] = assoc_->split_domain(last);
      last = std::move(rep);
      f.signs.push_back(-1);
      f.segments.push_back(assoc_->phi(a));
    }
  }

  std::shared_ptr<const GroupNode> base_;
  std::string stable_;
  std::unique_ptr<Association> assoc_;
};

// ---------------------------------------------------------------------------
// Z^n x|_phi Z, n <= 3
// ---------------------------------------------------------------------------

using IntMatrix = std::vector<std::vector<std::int64_t>>;

inline std::int64_t determinant(const IntMatrix& m) {
  const auto n = m.size();
  using namespace checked;
  if (n == 1) return m[0][0];
  if (n == 2) return sub(mul(m[0][0], m[1][1]), mul(m[0][1], m[1][0]));
  if (n == 3) {
    return add(sub(mul(m[0][0], sub(mul(m[1][1], m[2][2]), mul(m[1][2], m[2][1]))),
                   mul(m[0][1], sub(mul(m[1][0], m[2][2]), mul(m[1][2], m[2][0])))),
               mul(m[0][2], sub(mul(m[1][0], m[2][1]), mul(m[1][1], m[2][0]))));
  }
  throw UsageError("determinant: only sizes 1..3 are supported");
}

inline IntMatrix mat_mul(const IntMatrix& a, const IntMatrix& b) {
  const auto n = a.size();
  IntMatrix c(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j)
        c[i][j] = checked::add(c[i][j], checked::mul(a[i][k], b[k][j]));
  return c;
}

inline IntMatrix mat_identity(std::size_t n) {
  IntMatrix m(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

// Inverse of a unimodular matrix (det = +-1) via the adjugate.
inline IntMatrix unimodular_inverse(const IntMatrix& m) {
  const auto n = m.size();
  const std::int64_t d = determinant(m);
  if (d != 1 && d != -1) throw UsageError("matrix is not invertible over the integers");
  IntMatrix inv(n, std::vector<std::int64_t>(n, 0));
  if (n == 1) {
    inv[0][0] = d;
    return inv;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      IntMatrix minor;
      for (std::size_t r = 0; r < n; ++r) {
        if (r == j) continue;
        std::vector<std::int64_t> row;
        for (std::size_t c = 0; c < n; ++c)
          if (c != i) row.push_back(m[r][c]);
        minor.push_back(std::move(row));
      }
      const std::int64_t cof = (((i + j) % 2) ? -1 : 1) * determinant(minor);
      inv[i][j] = checked::mul(cof, d);  // 1/d == d for d = +-1
    }
  }
  return inv;
}

class SemidirectNode final : public GroupNode {
 public:
  SemidirectNode(IntMatrix phi, std::vector<std::string> names) : phi_(std::move(phi)) {
    const auto n = phi_.size();
    if (n < 1 || n > 3) throw UsageError("semidirect rank must be between 1 and 3");
    for (const auto& row : phi_) {
      if (row.size() != n) throw UsageError("semidirect matrix must be square");
    }
    const std::int64_t d = determinant(phi_);
    if (d != 1 && d != -1) throw UsageError("semidirect matrix must have determinant +-1");
    phi_inv_ = unimodular_inverse(phi_);
    if (names.empty()) {
      for (std::size_t i = 0; i < n; ++i) names.push_back("e" + std::to_string(i + 1));
      names.push_back("t");
    }
    if (names.size() != n + 1) throw UsageError("semidirect needs rank + 1 generator names");
    for (std::size_t i = 0; i < n; ++i) {
      SemidirectForm f;
      f.v[i] = 1;
      add_generator(names[i], 0, f);
    }
    SemidirectForm t;
    t.m = 1;
    add_generator(names[n], 0, t);
  }

  GroupKind kind() const override { return GroupKind::SemidirectZnByZ; }
  std::size_t rank() const { return phi_.size(); }
  const IntMatrix& phi() const { return phi_; }

  IntMatrix phi_power(std::int64_t m) const {
    IntMatrix base = m < 0 ? phi_inv_ : phi_;
    std::int64_t e = m < 0 ? -m : m;
    IntMatrix acc = mat_identity(rank());
    while (e > 0) {
      if (e & 1) acc = mat_mul(acc, base);
      e >>= 1;
      if (e > 0) base = mat_mul(base, base);
    }
    return acc;
  }

  Payload identity_payload() const override { return SemidirectForm{}; }

  Payload multiply(const Payload& x, const Payload& y) const override {
    const auto& a = std::get<SemidirectForm>(x);
    const auto& b = std::get<SemidirectForm>(y);
    SemidirectForm r;
    const auto w = apply(a.m == 0 ? mat_identity(rank()) : phi_power(a.m), b.v);
    for (std::size_t i = 0; i < rank(); ++i) r.v[i] = checked::add(a.v[i], w[i]);
    r.m = checked::add(a.m, b.m);
    return r;
  }

  Payload invert(const Payload& x) const override {
    const auto& a = std::get<SemidirectForm>(x);
    SemidirectForm r;
    const auto w = apply(phi_power(checked::neg(a.m)), a.v);
    for (std::size_t i = 0; i < rank(); ++i) r.v[i] = checked::neg(w[i]);
    r.m = checked::neg(a.m);
    return r;
  }

  bool is_identity(const Payload& x) const override {
    const auto& a = std::get<SemidirectForm>(x);
    return a.m == 0 && a.v == std::array<std::int64_t, 3>{};
  }

  std::strong_ordering compare(const Payload& x, const Payload& y) const override {
    const auto& a = std::get<SemidirectForm>(x);
    const auto& b = std::get<SemidirectForm>(y);
    const bool ia = is_identity(x), ib = is_identity(y);
    if (ia != ib) return ia ? std::strong_ordering::less : std::strong_ordering::greater;
    if (auto c = a.m <=> b.m; c != 0) return c;
    return a.v <=> b.v;
  }

  std::size_t hash(const Payload& x) const override {
    const auto& a = std::get<SemidirectForm>(x);
    std::size_t seed = std::hash<std::int64_t>{}(a.m);
    for (auto c : a.v) hash_mix(seed, std::hash<std::int64_t>{}(c));
    return seed;
  }

  void render(const Payload& x, Word& out) const override {
    const auto& a = std::get<SemidirectForm>(x);
    for (std::size_t i = 0; i < rank(); ++i) append(out, power_word(symbols()[i].name, a.v[i]));
    append(out, power_word(symbols()[rank()].name, a.m));
  }

  std::string describe(const Payload& x) const override {
    const auto& a = std::get<SemidirectForm>(x);
    std::string s = "((";
    for (std::size_t i = 0; i < rank(); ++i) {
      if (i) s += ",";
      s += std::to_string(a.v[i]);
    }
    return s + ")," + std::to_string(a.m) + ")";
  }

  Cardinal order() const override { return Cardinal::infinite(); }

 private:
  std::array<std::int64_t, 3> apply(const IntMatrix& m, const std::array<std::int64_t, 3>& v) const {
    std::array<std::int64_t, 3> r{};
    for (std::size_t i = 0; i < rank(); ++i)
      for (std::size_t j = 0; j < rank(); ++j)
        r[i] = checked::add(r[i], checked::mul(m[i][j], v[j]));
    return r;
  }

  IntMatrix phi_;
  IntMatrix phi_inv_;
};

// ---------------------------------------------------------------------------
// H x F with F finite (F alone when H is absent)
// ---------------------------------------------------------------------------

class DirectNode final : public GroupNode {
 public:
  DirectNode(std::shared_ptr<const GroupNode> h, FiniteTable f, std::vector<std::string> names)
      : h_(std::move(h)), f_(std::move(f)) {
    const auto gens = f_.greedy_generators();
    if (names.empty()) {
      if (gens.size() == 1) {
        names.push_back("f");
      } else {
        for (std::size_t i = 0; i < gens.size(); ++i) names.push_back("f" + std::to_string(i + 1));
      }
    }
    if (names.size() != gens.size()) {
      throw UsageError("finite factor needs " + std::to_string(gens.size()) +
                       " generator names");
    }
    f_names_ = names;
    if (h_) {
      const auto& syms = h_->symbols();
      const auto& hp = h_->generator_payloads();
      for (std::size_t i = 0; i < syms.size(); ++i) {
        add_generator(syms[i].name, syms[i].factor_index, DirectForm{{h_->wrap(hp[i])}, 0});
      }
    }
    const int block = h_ ? h_->block_count() : 0;
    for (std::size_t i = 0; i < gens.size(); ++i) {
      add_generator(names[i], block, DirectForm{h_one(), gens[i]});
    }
    // Shortest words for every element of F, for rendering.
    f_words_.assign(f_.order(), Word{});
    std::vector<bool> seen(f_.order(), false);
    seen[0] = true;
    std::vector<int> frontier{0};
    while (!frontier.empty()) {
      std::vector<int> next;
      for (int x : frontier) {
        for (std::size_t i = 0; i < gens.size(); ++i) {
          for (bool inv : {false, true}) {
            const int y = f_.mul(x, inv ? f_.inv(gens[i]) : gens[i]);
            if (seen[y]) continue;
            seen[y] = true;
            f_words_[y] = f_words_[x];
            f_words_[y].push_back({names[i], inv});
            next.push_back(y);
          }
        }
      }
      frontier = std::move(next);
    }
  }

  GroupKind kind() const override { return GroupKind::DirectWithFinite; }
  int block_count() const override { return (h_ ? h_->block_count() : 0) + 1; }
  std::vector<std::shared_ptr<const GroupNode>> children() const override {
    if (h_) return {h_};
    return {};
  }
  const GroupNode* h() const { return h_.get(); }
  const FiniteTable& finite() const { return f_; }

  Payload identity_payload() const override { return DirectForm{h_one(), 0}; }

  Payload multiply(const Payload& x, const Payload& y) const override {
    const auto& a = std::get<DirectForm>(x);
    const auto& b = std::get<DirectForm>(y);
    DirectForm r;
    if (h_) r.h.push_back(iccdec::multiply(a.h[0], b.h[0]));
    r.f = f_.mul(a.f, b.f);
    return r;
  }

  Payload invert(const Payload& x) const override {
    const auto& a = std::get<DirectForm>(x);
    DirectForm r;
    if (h_) r.h.push_back(iccdec::invert(a.h[0]));
    r.f = f_.inv(a.f);
    return r;
  }

  bool is_identity(const Payload& x) const override {
    const auto& a = std::get<DirectForm>(x);
    return a.f == 0 && (!h_ || a.h[0].is_identity());
  }

  std::strong_ordering compare(const Payload& x, const Payload& y) const override {
    const auto& a = std::get<DirectForm>(x);
    const auto& b = std::get<DirectForm>(y);
    if (h_) {
      if (auto c = iccdec::compare(a.h[0], b.h[0]); c != 0) return c;
    }
    return a.f <=> b.f;
  }

  std::size_t hash(const Payload& x) const override {
    const auto& a = std::get<DirectForm>(x);
    std::size_t seed = static_cast<std::size_t>(a.f);
    if (h_) hash_mix(seed, a.h[0].hash());
    return seed;
  }

  void render(const Payload& x, Word& out) const override {
    const auto& a = std::get<DirectForm>(x);
    if (h_) h_->render(a.h[0].payload(), out);
    append(out, f_words_[a.f]);
  }
  bool renderable() const override { return !h_ || h_->renderable(); }

  Cardinal order() const override {
    const auto nf = static_cast<std::uint64_t>(f_.order());
    if (!h_) return Cardinal::finite(nf);
    const Cardinal oh = h_->order();
    if (oh.is_finite()) return Cardinal::finite(oh.value() * nf);
    return oh;
  }

 private:
  std::vector<GroupElement> h_one() const {
    if (!h_) return {};
    return {h_->wrap(h_->identity_payload())};
  }

  std::shared_ptr<const GroupNode> h_;
  FiniteTable f_;
  std::vector<std::string> f_names_;
  std::vector<Word> f_words_;
};

// ---------------------------------------------------------------------------
// Subgroups of SL(2, Z[w]) given by generators
// ---------------------------------------------------------------------------

class MatrixNode final : public GroupNode {
 public:
  MatrixNode(std::vector<Mat2E> gens, std::vector<std::string> names, bool lattice)
      : lattice_(lattice) {
    if (names.empty()) {
      for (std::size_t i = 0; i < gens.size(); ++i) {
        names.push_back(std::string(1, static_cast<char>('A' + i)));
      }
    }
    if (names.size() != gens.size()) throw UsageError("one name per matrix generator required");
    for (std::size_t i = 0; i < gens.size(); ++i) {
      add_generator(names[i], 0, MatrixForm{std::make_shared<const Mat2E>(gens[i])});
    }
    for (const auto& g : gens) {
      // A non-identity matrix with trace 2 is unipotent, hence of infinite order.
      if (g.trace() == EisensteinInt(2) && !g.is_identity()) has_unipotent_ = true;
    }
  }

  GroupKind kind() const override { return GroupKind::MatrixGroupSL2Eisenstein; }
  // Declared (not verified) to be a lattice of finite covolume.
  bool declared_lattice() const { return lattice_; }

  static const Mat2E& mat(const Payload& x) { return *std::get<MatrixForm>(x).m; }

  Payload identity_payload() const override {
    return MatrixForm{std::make_shared<const Mat2E>(Mat2E::identity())};
  }
  Payload multiply(const Payload& x, const Payload& y) const override {
    return MatrixForm{std::make_shared<const Mat2E>(mat(x) * mat(y))};
  }
  Payload invert(const Payload& x) const override {
    return MatrixForm{std::make_shared<const Mat2E>(mat(x).inverse())};
  }
  bool is_identity(const Payload& x) const override { return mat(x).is_identity(); }
  std::strong_ordering compare(const Payload& x, const Payload& y) const override {
    const bool ia = is_identity(x), ib = is_identity(y);
    if (ia != ib) return ia ? std::strong_ordering::less : std::strong_ordering::greater;
    return mat(x) <=> mat(y);
  }
  std::size_t hash(const Payload& x) const override { return mat(x).hash(); }
  void render(const Payload&, Word&) const override {
    throw UnsupportedError("matrix group elements have no canonical word");
  }
  bool renderable() const override { return false; }
  std::string describe(const Payload& x) const override { return mat(x).to_string(); }
  Cardinal order() const override {
    return has_unipotent_ ? Cardinal::infinite() : Cardinal::unknown();
  }

 private:
  bool lattice_;
  bool has_unipotent_ = false;
};

// ---------------------------------------------------------------------------
// Free products of fibered factors amalgamated along a common fiber h:
//   fiber factors <x, h | x^alpha = h^beta, x h = h x>,
//   free factors  <c, h | c h c^-1 = h^sign>.
// ---------------------------------------------------------------------------

struct FiberFactor {
  std::int64_t alpha = 2;
  std::int64_t beta = 1;
  std::string name;
};

struct FreeFactor {
  std::string name;
  int sign = 1;  // +1: commutes with the fiber, -1: inverts it
};

class FiberedNode final : public GroupNode {
 public:
  FiberedNode(std::vector<FiberFactor> fibers, std::vector<FreeFactor> free, std::string fiber_name)
      : fibers_(std::move(fibers)), free_(std::move(free)), fiber_name_(std::move(fiber_name)) {
    for (const auto& f : fibers_) {
      if (f.alpha < 2) throw UsageError("fiber multiplicity must be >= 2");
      if (std::gcd(f.alpha, f.beta) != 1) throw UsageError("fiber invariants must be coprime");
    }
    for (const auto& f : free_) {
      if (f.sign != 1 && f.sign != -1) throw UsageError("free factor sign must be +-1");
    }
    const int total = static_cast<int>(fibers_.size() + free_.size());
    for (int j = 0; j < total; ++j) add_generator(factor_name(j), 0, FiberedForm{{j}, {1}, 0});
    add_generator(fiber_name_, 0, FiberedForm{{}, {}, 1});
  }

  GroupKind kind() const override { return GroupKind::FiberedFreeProduct; }
  const std::vector<FiberFactor>& fibers() const { return fibers_; }
  const std::vector<FreeFactor>& free_factors() const { return free_; }
  Payload fiber_payload() const { return FiberedForm{{}, {}, 1}; }

  Payload identity_payload() const override { return FiberedForm{}; }

  Payload multiply(const Payload& x, const Payload& y) const override {
    FiberedForm r = std::get<FiberedForm>(x);
    const auto& b = std::get<FiberedForm>(y);
    for (std::size_t i = 0; i < b.factors.size(); ++i) mul_syllable(r, b.factors[i], b.exps[i]);
    r.fiber = checked::add(r.fiber, b.fiber);
    return r;
  }

  Payload invert(const Payload& x) const override {
    const auto& a = std::get<FiberedForm>(x);
    FiberedForm r;
    r.fiber = checked::neg(a.fiber);
    for (std::size_t i = a.factors.size(); i-- > 0;) {
      mul_syllable(r, a.factors[i], checked::neg(a.exps[i]));
    }
    return r;
  }

  bool is_identity(const Payload& x) const override {
    const auto& a = std::get<FiberedForm>(x);
    return a.factors.empty() && a.fiber == 0;
  }

  std::strong_ordering compare(const Payload& x, const Payload& y) const override {
    const auto& a = std::get<FiberedForm>(x);
    const auto& b = std::get<FiberedForm>(y);
    const bool ia = is_identity(x), ib = is_identity(y);
    if (ia != ib) return ia ? std::strong_ordering::less : std::strong_ordering::greater;
    if (auto c = cmp_lex(a.factors, b.factors); c != 0) return c;
    if (auto c = cmp_lex(a.exps, b.exps); c != 0) return c;
    return a.fiber <=> b.fiber;
  }

  std::size_t hash(const Payload& x) const override {
    const auto& a = std::get<FiberedForm>(x);
    std::size_t seed = std::hash<std::int64_t>{}(a.fiber);
    for (std::size_t i = 0; i < a.factors.size(); ++i) {
      hash_mix(seed, static_cast<std::size_t>(a.factors[i]));
      hash_mix(seed, std::hash<std::int64_t>{}(a.exps[i]));
    }
    return seed;
  }

  void render(const Payload& x, Word& out) const override {
    const auto& a = std::get<FiberedForm>(x);
    for (std::size_t i = 0; i < a.factors.size(); ++i) {
      append(out, power_word(factor_name(a.factors[i]), a.exps[i]));
    }
    append(out, power_word(fiber_name_, a.fiber));
  }

  Cardinal order() const override { return Cardinal::infinite(); }

 private:
  const std::string& factor_name(int j) const {
    const auto nf = static_cast<int>(fibers_.size());
    return j < nf ? fibers_[j].name : free_[j - nf].name;
  }

  int sign_of(int j, std::int64_t e) const {
    const auto nf = static_cast<int>(fibers_.size());
    if (j < nf) return 1;
    return (free_[j - nf].sign < 0 && (e % 2 != 0)) ? -1 : 1;
  }

  // (w h^k) x_j^e = w x_j^e h^(sign * k), then merge and reduce mod alpha.
  void mul_syllable(FiberedForm& f, int j, std::int64_t e) const {
    if (sign_of(j, e) < 0) f.fiber = checked::neg(f.fiber);
    if (!f.factors.empty() && f.factors.back() == j) {
      e = checked::add(f.exps.back(), e);
      f.factors.pop_back();
      f.exps.pop_back();
    }
    const auto nf = static_cast<int>(fibers_.size());
    if (j < nf) {
      const auto& fb = fibers_[j];
      const std::int64_t q = checked::floor_div(e, fb.alpha);
      e = checked::sub(e, checked::mul(q, fb.alpha));
      f.fiber = checked::add(f.fiber, checked::mul(q, fb.beta));
    }
    if (e != 0) {
      f.factors.push_back(j);
      f.exps.push_back(e);
    }
  }

  std::vector<FiberFactor> fibers_;
  std::vector<FreeFactor> free_;
  std::string fiber_name_;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// StructuredGroup
// ---------------------------------------------------------------------------

// Finite edge group of an amalgam with its two embeddings, each listed as
// one word per edge element (index 0 = identity).
struct EdgeGroup {
  FiniteTable table;
  std::vector<GroupElement> left;
  std::vector<GroupElement> right;
};

// Associated subgroups of an HNN extension: either explicit finite lists
// (domain[i] maps to image[i]) or <a^p> -> <a^q> inside an infinite cyclic
// base.
struct FiniteHnnAssociation {
  std::vector<GroupElement> domain;
  std::vector<GroupElement> image;
};
struct CyclicHnnAssociation {
  std::int64_t domain_power = 1;
  std::int64_t image_power = 1;
};
using HnnAssociation = std::variant<FiniteHnnAssociation, CyclicHnnAssociation>;

class StructuredGroup {
 public:
  explicit StructuredGroup(std::shared_ptr<const detail::GroupNode> node)
      : node_(std::move(node)) {}

  static StructuredGroup finite_cyclic(std::int64_t n, std::string name = "a") {
    if (n < 1) throw UsageError("FiniteCyclic order must be >= 1");
    return StructuredGroup(std::make_shared<detail::CyclicNode>(n, std::move(name)));
  }

  static StructuredGroup infinite_cyclic(std::string name = "t") {
    return StructuredGroup(std::make_shared<detail::CyclicNode>(0, std::move(name)));
  }

  static StructuredGroup free_product(const StructuredGroup& l, const StructuredGroup& r) {
    std::vector<Payload> le{l.node_->identity_payload()};
    std::vector<Payload> re{r.node_->identity_payload()};
    return StructuredGroup(std::make_shared<detail::AmalgamNode>(
        l.node_, r.node_, FiniteTable(), std::move(le), std::move(re), true));
  }

  // Free group realized as Z * Z * ... ; default names x, y, z, then x4, x5...
  static StructuredGroup free_group(int rank, std::vector<std::string> names = {}) {
    if (rank < 0) throw UsageError("free group rank must be >= 0");
    if (names.empty()) {
      const char* defaults[] = {"x", "y", "z"};
      for (int i = 0; i < rank; ++i) {
        names.push_back(i < 3 ? defaults[i] : "x" + std::to_string(i + 1));
      }
    }
    if (static_cast<int>(names.size()) != rank) throw UsageError("free group: one name per generator");
    if (rank == 0) return finite_cyclic(1, "_");
    StructuredGroup g = infinite_cyclic(names[0]);
    for (int i = 1; i < rank; ++i) g = free_product(g, infinite_cyclic(names[i]));
    return g;
  }

  static StructuredGroup amalgam(const StructuredGroup& l, const StructuredGroup& r,
                                 const EdgeGroup& edge) {
    std::vector<Payload> le, re;
    for (const auto& g : edge.left) {
      if (g.node_ptr() != l.node_) throw UsageError("left embedding must lie in the left factor");
      le.push_back(g.payload());
    }
    for (const auto& g : edge.right) {
      if (g.node_ptr() != r.node_) throw UsageError("right embedding must lie in the right factor");
      re.push_back(g.payload());
    }
    return StructuredGroup(std::make_shared<detail::AmalgamNode>(
        l.node_, r.node_, edge.table, std::move(le), std::move(re), false));
  }

  static StructuredGroup hnn(const StructuredGroup& base, const HnnAssociation& assoc,
                             std::string stable = "t") {
    auto node = std::make_shared<detail::HnnNode>(base.node_, std::move(stable));
    std::unique_ptr<detail::Association> a;
    if (const auto* fin = std::get_if<FiniteHnnAssociation>(&assoc)) {
      for (const auto& g : fin->domain)
        if (g.node_ptr() != base.node_) throw UsageError("HNN domain must lie in the base");
      for (const auto& g : fin->image)
        if (g.node_ptr() != base.node_) throw UsageError("HNN image must lie in the base");
      a = std::make_unique<detail::FiniteAssociation>(*base.node_, fin->domain, fin->image);
    } else {
      const auto& cyc = std::get<CyclicHnnAssociation>(assoc);
      const auto* c = dynamic_cast<const detail::CyclicNode*>(base.node_.get());
      if (!c) throw UsageError("cyclic HNN association requires an infinite cyclic base");
      a = std::make_unique<detail::CyclicAssociation>(*c, cyc.domain_power, cyc.image_power);
    }
    node->finish(std::move(a));
    return StructuredGroup(std::move(node));
  }

  // Names: basis vectors then the stable letter (default e1..en, t).
  static StructuredGroup semidirect(const detail::IntMatrix& phi,
                                    std::vector<std::string> names = {}) {
    return StructuredGroup(std::make_shared<detail::SemidirectNode>(phi, std::move(names)));
  }

  static StructuredGroup direct_with_finite(const StructuredGroup& h, const FiniteTable& f,
                                            std::vector<std::string> names = {}) {
    return StructuredGroup(std::make_shared<detail::DirectNode>(h.node_, f, std::move(names)));
  }

  // A bare finite group, realized as DirectWithFinite with no H factor.
  static StructuredGroup finite_group(const FiniteTable& f, std::vector<std::string> names = {}) {
    return StructuredGroup(std::make_shared<detail::DirectNode>(nullptr, f, std::move(names)));
  }

  // Fundamental group of a compact surface, realized by a construction
  // with a normal form: free groups for nonempty boundary, Z^2 for the
  // torus, Z x|_{-1} Z for the Klein bottle. Closed surfaces of negative
  // Euler characteristic are rejected.
  static StructuredGroup surface(int genus, bool orientable, int boundary) {
    if (genus < 0 || boundary < 0) throw UsageError("surface data must be nonnegative");
    if (!orientable && genus < 1) throw UsageError("non-orientable genus must be >= 1");
    if (boundary > 0) {
      std::vector<std::string> names;
      if (orientable) {
        for (int i = 1; i <= genus; ++i) {
          names.push_back("a" + std::to_string(i));
          names.push_back("b" + std::to_string(i));
        }
      } else {
        for (int i = 1; i <= genus; ++i) names.push_back("c" + std::to_string(i));
      }
      for (int i = 1; i < boundary; ++i) names.push_back("d" + std::to_string(i));
      return free_group(static_cast<int>(names.size()), names);
    }
    if (orientable) {
      if (genus == 0) return finite_cyclic(1, "_");
      if (genus == 1) return semidirect({{1}}, {"a", "b"});
    } else {
      if (genus == 1) return finite_cyclic(2, "c");
      if (genus == 2) return semidirect({{-1}}, {"a", "b"});
    }
    throw UnsupportedError("no normal form implemented for closed surface groups of negative "
                           "Euler characteristic");
  }

  static StructuredGroup matrix_sl2_eisenstein(const std::vector<Mat2E>& gens,
                                               std::vector<std::string> names = {},
                                               bool declared_lattice = false) {
    return StructuredGroup(
        std::make_shared<detail::MatrixNode>(gens, std::move(names), declared_lattice));
  }

  static StructuredGroup fibered_free_product(std::vector<detail::FiberFactor> fibers,
                                              std::vector<detail::FreeFactor> free,
                                              std::string fiber_name = "h") {
    return StructuredGroup(std::make_shared<detail::FiberedNode>(
        std::move(fibers), std::move(free), std::move(fiber_name)));
  }

  GroupKind kind() const { return node_->kind(); }
  Cardinal order() const { return node_->order(); }
  const detail::GroupNode& node() const { return *node_; }
  const std::shared_ptr<const detail::GroupNode>& node_ptr() const { return node_; }

  GroupElement identity() const { return node_->wrap(node_->identity_payload()); }

  const std::vector<GeneratorSymbol>& generator_symbols() const { return node_->symbols(); }

  std::vector<GroupElement> generators() const {
    std::vector<GroupElement> out;
    for (const auto& p : node_->generator_payloads()) out.push_back(node_->wrap(p));
    return out;
  }

  GroupElement generator(std::string_view name) const {
    const auto i = node_->find_generator(name);
    if (!i) throw UsageError("unknown generator symbol '" + std::string(name) + "'");
    return node_->wrap(node_->generator_payloads()[*i]);
  }

  bool owns(const GroupElement& g) const { return g.node_ptr().get() == node_.get(); }

  std::vector<StructuredGroup> children() const {
    std::vector<StructuredGroup> out;
    for (auto& c : node_->children()) out.emplace_back(c);
    return out;
  }

  template <class Node>
  const Node* as() const {
    return dynamic_cast<const Node*>(node_.get());
  }

  friend bool operator==(const StructuredGroup& a, const StructuredGroup& b) {
    return a.node_.get() == b.node_.get();
  }

 private:
  std::shared_ptr<const detail::GroupNode> node_;
};

// Multiplies the letters out, left to right, into canonical form.
inline GroupElement reduce_word(const StructuredGroup& group, const Word& letters) {
  const auto& node = group.node();
  Payload acc = node.identity_payload();
  std::vector<std::optional<Payload>> inverses(node.symbols().size());
  for (const auto& l : letters) {
    const auto i = node.find_generator(l.generator);
    if (!i) throw UsageError("unknown generator symbol '" + l.generator + "'");
    const Payload& g = node.generator_payloads()[*i];
    if (l.inverse) {
      if (!inverses[*i]) inverses[*i] = node.invert(g);
      acc = node.multiply(acc, *inverses[*i]);
    } else {
      acc = node.multiply(acc, g);
    }
  }
  return node.wrap(std::move(acc));
}

inline GroupElement reduce_word(const StructuredGroup& group, std::string_view text) {
  return reduce_word(group, parse_word(text));
}

}  // namespace iccdec

#endif  // ICCDEC_GROUP_CORE_HPP_
