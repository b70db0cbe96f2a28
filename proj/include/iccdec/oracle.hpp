#ifndef ICCDEC_ORACLE_HPP_
#define ICCDEC_ORACLE_HPP_

// Brute-force evidence over Cayley balls: ball enumeration, conjugacy-class
// balls, FC-center candidates and greedy strongly-ICC witness sequences.
// Everything here is a lower bound or an observation at finite radius, with
// one exception: symbolic_class_bound checks the generators exactly.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "iccdec/error.hpp"
#include "iccdec/group_core.hpp"
#include "iccdec/words.hpp"

namespace iccdec {

// Designated generators followed by their inverses, interleaved
// (g1, g1', g2, g2', ...), skipping repeats such as involutions.
struct BallGenerator {
  GroupElement element;
  Letter letter;
};

inline std::vector<BallGenerator> ball_generators(const StructuredGroup& group) {
  std::vector<BallGenerator> out;
  const auto gens = group.generators();
  const auto& syms = group.generator_symbols();
  auto seen = [&](const GroupElement& g) {
    return std::any_of(out.begin(), out.end(),
                       [&](const BallGenerator& b) { return b.element == g; });
  };
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (gens[i].is_identity()) continue;
    if (!seen(gens[i])) out.push_back({gens[i], {syms[i].name, false}});
    GroupElement inv = invert(gens[i]);
    if (!seen(inv)) out.push_back({std::move(inv), {syms[i].name, true}});
  }
  return out;
}

struct BallEntry {
  GroupElement element;
  Word word;
};

// Lazy breadth-first sphere walker. Each sphere is sorted by the group's
// payload order.
class BallWalker {
 public:
  explicit BallWalker(const StructuredGroup& group)
      : gens_(ball_generators(group)) {
    sphere_.push_back({group.identity(), {}});
    seen_.insert(group.identity());
  }

  int radius() const { return radius_; }
  const std::vector<BallEntry>& sphere() const { return sphere_; }

  // Moves to the next sphere; returns false when it is empty (finite group
  // exhausted).
  bool advance() {
    std::vector<BallEntry> next;
    for (const auto& e : sphere_) {
      for (const auto& g : gens_) {
        GroupElement y = multiply(e.element, g.element);
        if (seen_.insert(y).second) {
          Word w = e.word;
          w.push_back(g.letter);
          next.push_back({std::move(y), std::move(w)});
        }
      }
    }
    std::sort(next.begin(), next.end(),
              [](const BallEntry& a, const BallEntry& b) { return a.element < b.element; });
    sphere_ = std::move(next);
    ++radius_;
    return !sphere_.empty();
  }

 private:
  std::vector<BallGenerator> gens_;
  std::vector<BallEntry> sphere_;
  std::unordered_set<GroupElement, GroupElementHash> seen_;
  int radius_ = 0;
};

struct Ball {
  std::vector<BallEntry> entries;
  // sphere_end[r] = number of entries of length <= r.
  std::vector<std::size_t> sphere_end;

  std::vector<GroupElement> elements() const {
    std::vector<GroupElement> out;
    out.reserve(entries.size());
    for (const auto& e : entries) out.push_back(e.element);
    return out;
  }
};

inline Ball ball_with_words(const StructuredGroup& group, int radius) {
  if (radius < 0) throw UsageError("radius must be nonnegative");
  Ball b;
  BallWalker walker(group);
  for (int r = 0; r <= radius; ++r) {
    if (r > 0) walker.advance();
    for (const auto& e : walker.sphere()) b.entries.push_back(e);
    b.sphere_end.push_back(b.entries.size());
  }
  return b;
}

inline std::vector<GroupElement> enumerate_ball(const StructuredGroup& group, int radius) {
  return ball_with_words(group, radius).elements();
}

struct ClassBallReport {
  GroupElement element;
  int radius = 0;
  int window = 3;
  std::vector<GroupElement> conjugates;  // sorted by payload order
  bool stabilized = false;
  std::vector<std::size_t> counts_by_radius;  // index r = 0..radius
};

namespace detail {

inline void check_owner(const StructuredGroup& group, const GroupElement& g) {
  if (!group.owns(g)) throw UsageError("element does not belong to the group");
}

inline ClassBallReport class_ball_over(const Ball& ball, const GroupElement& g, int radius,
                                       int window) {
  ClassBallReport rep{g, radius, window, {}, false, {}};
  std::unordered_set<GroupElement, GroupElementHash> seen;
  std::size_t start = 0;
  for (int r = 0; r <= radius; ++r) {
    for (std::size_t i = start; i < ball.sphere_end[r]; ++i) {
      GroupElement c = conjugate(g, ball.entries[i].element);
      if (seen.insert(c).second) rep.conjugates.push_back(std::move(c));
    }
    start = ball.sphere_end[r];
    rep.counts_by_radius.push_back(rep.conjugates.size());
  }
  std::sort(rep.conjugates.begin(), rep.conjugates.end());
  // Nested sets: equal counts mean equal sets.
  rep.stabilized = rep.counts_by_radius[radius] == rep.counts_by_radius[radius - window];
  return rep;
}

}  // namespace detail

inline ClassBallReport conjugacy_class_ball(const StructuredGroup& group, const GroupElement& g,
                                            int radius, int window = 3) {
  detail::check_owner(group, g);
  if (window < 1 || radius < window) throw UsageError("need radius >= window >= 1");
  return detail::class_ball_over(ball_with_words(group, radius), g, radius, window);
}

// Nontrivial elements of ball(radius - window) whose class ball stabilizes.
// An over-approximation of the FC-center inside the ball.
inline std::vector<GroupElement> fc_center_candidates(const StructuredGroup& group, int radius,
                                                      int window = 3) {
  if (window < 1 || radius < window) throw UsageError("need radius >= window >= 1");
  const Ball ball = ball_with_words(group, radius);
  std::vector<GroupElement> out;
  for (std::size_t i = 0; i < ball.sphere_end[radius - window]; ++i) {
    const auto& x = ball.entries[i].element;
    if (x.is_identity()) continue;
    if (detail::class_ball_over(ball, x, radius, window).stabilized) out.push_back(x);
  }
  return out;
}

struct WitnessSequence {
  std::vector<GroupElement> target_set;
  std::vector<GroupElement> gammas;
  std::vector<Word> gamma_words;
  bool verified = false;
  int length_requested = 0;
  // Radius of the last accepted gamma when verified, else the radius searched.
  int radius_used = 0;
};

// Greedy breadth-first extension: gamma is accepted when, for every f in F,
// gamma f gamma^-1 differs from all conjugates produced by earlier gammas.
inline WitnessSequence strong_icc_witness(const StructuredGroup& group,
                                          const std::vector<GroupElement>& targets, int k,
                                          int search_radius) {
  if (k < 1) throw UsageError("witness length must be >= 1");
  if (targets.empty()) throw UsageError("target set must be nonempty");
  if (search_radius < 0) throw UsageError("search radius must be nonnegative");
  for (const auto& f : targets) {
    detail::check_owner(group, f);
    if (f.is_identity()) throw UsageError("target set must not contain the identity");
  }
  WitnessSequence ws;
  ws.target_set = targets;
  ws.length_requested = k;
  std::vector<std::unordered_set<GroupElement, GroupElementHash>> used(targets.size());

  BallWalker walker(group);
  while (true) {
    for (const auto& e : walker.sphere()) {
      std::vector<GroupElement> conj;
      conj.reserve(targets.size());
      bool fresh = true;
      for (std::size_t i = 0; i < targets.size() && fresh; ++i) {
        conj.push_back(conjugate(targets[i], e.element));
        fresh = !used[i].count(conj.back());
      }
      if (!fresh) continue;
      for (std::size_t i = 0; i < targets.size(); ++i) used[i].insert(conj[i]);
      ws.gammas.push_back(e.element);
      ws.gamma_words.push_back(e.word);
      if (static_cast<int>(ws.gammas.size()) == k) {
        ws.verified = true;
        ws.radius_used = walker.radius();
        return ws;
      }
    }
    if (walker.radius() >= search_radius || !walker.advance()) break;
  }
  ws.radius_used = walker.radius();
  return ws;
}

// Independent re-check of the defining inequalities.
inline bool verify_witness(const WitnessSequence& ws) {
  for (const auto& f : ws.target_set) {
    std::unordered_set<GroupElement, GroupElementHash> seen;
    for (const auto& g : ws.gammas) {
      if (!seen.insert(conjugate(f, g)).second) return false;
    }
  }
  return true;
}

enum class ClassBound { None, Central, CentralUpToInverse };

// Exact check against the generators: if every generator commutes with g
// then g is central; if every generator conjugates g to g or g^-1 then the
// class of g is contained in {g, g^-1}.
inline ClassBound symbolic_class_bound(const StructuredGroup& group, const GroupElement& g) {
  detail::check_owner(group, g);
  bool central = true;
  const GroupElement ginv = invert(g);
  for (const auto& s : group.generators()) {
    const GroupElement c = conjugate(g, s);
    if (c == g) continue;
    if (c == ginv) {
      central = false;
      continue;
    }
    return ClassBound::None;
  }
  return central ? ClassBound::Central : ClassBound::CentralUpToInverse;
}

}  // namespace iccdec

#endif  // ICCDEC_ORACLE_HPP_
