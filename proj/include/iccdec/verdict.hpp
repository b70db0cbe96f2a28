#ifndef ICCDEC_VERDICT_HPP_
#define ICCDEC_VERDICT_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "iccdec/group_core.hpp"

namespace iccdec {

enum class Status { ICC, NotICC, Unknown };

inline std::string_view to_string(Status s) {
  switch (s) {
    case Status::ICC: return "ICC";
    case Status::NotICC: return "NotICC";
    case Status::Unknown: return "Unknown";
  }
  return "?";
}

// Fixed enumeration of statements a verdict may cite.
enum class Citation {
  Lemma1,
  Prop2,
  Prop3i,
  Prop3ii,
  Prop3iii,
  Prop3iv,
  Prop3v,
  Lemma4,
  Lemma5,
  Lemma6,
  Lemma10,
  Theorem12,
  Theorem13,
  Theorem15,
  Lemma16,
  Prop17,
  Prop18,
  Theorem19,
  Cor20,
  LinkRemark,
  Prop21,
  Prop24,
  SeifertConjecture,
  InfiniteDihedral,
  SurfaceList,
  FiniteGroup,
  Abelian,
  KneserMilnor,
  PoincareVariety,
  HypothesesNotMet,
  OutsideTheorem19,
  NoApplicableRule,
};

inline constexpr Citation kAllCitations[] = {
    Citation::Lemma1,        Citation::Prop2,           Citation::Prop3i,
    Citation::Prop3ii,       Citation::Prop3iii,        Citation::Prop3iv,
    Citation::Prop3v,        Citation::Lemma4,          Citation::Lemma5,
    Citation::Lemma6,        Citation::Lemma10,         Citation::Theorem12,
    Citation::Theorem13,     Citation::Theorem15,       Citation::Lemma16,
    Citation::Prop17,        Citation::Prop18,          Citation::Theorem19,
    Citation::Cor20,         Citation::LinkRemark,      Citation::Prop21,
    Citation::Prop24,        Citation::SeifertConjecture, Citation::InfiniteDihedral,
    Citation::SurfaceList,   Citation::FiniteGroup,     Citation::Abelian,
    Citation::KneserMilnor,  Citation::PoincareVariety, Citation::HypothesesNotMet,
    Citation::OutsideTheorem19, Citation::NoApplicableRule,
};

inline std::string_view label(Citation c) {
  switch (c) {
    case Citation::Lemma1: return "Lemma 1";
    case Citation::Prop2: return "Prop 2";
    case Citation::Prop3i: return "Prop 3(i)";
    case Citation::Prop3ii: return "Prop 3(ii)";
    case Citation::Prop3iii: return "Prop 3(iii)";
    case Citation::Prop3iv: return "Prop 3(iv)";
    case Citation::Prop3v: return "Prop 3(v)";
    case Citation::Lemma4: return "Lemma 4";
    case Citation::Lemma5: return "Lemma 5";
    case Citation::Lemma6: return "Lemma 6";
    case Citation::Lemma10: return "Lemma 10";
    case Citation::Theorem12: return "Theorem 12";
    case Citation::Theorem13: return "Theorem 13";
    case Citation::Theorem15: return "Theorem 15";
    case Citation::Lemma16: return "Lemma 16";
    case Citation::Prop17: return "Prop 17";
    case Citation::Prop18: return "Prop 18";
    case Citation::Theorem19: return "Theorem 19";
    case Citation::Cor20: return "Cor 20";
    case Citation::LinkRemark: return "link remark";
    case Citation::Prop21: return "Prop 21";
    case Citation::Prop24: return "Prop 24";
    case Citation::SeifertConjecture: return "Seifert fibration conjecture";
    case Citation::InfiniteDihedral: return "infinite dihedral";
    case Citation::SurfaceList: return "surface list";
    case Citation::FiniteGroup: return "finite group";
    case Citation::Abelian: return "abelian";
    case Citation::KneserMilnor: return "Kneser-Milnor";
    case Citation::PoincareVariety: return "Poincare variety";
    case Citation::HypothesesNotMet: return "hypotheses not met";
    case Citation::OutsideTheorem19: return "outside Theorem 19 hypotheses";
    case Citation::NoApplicableRule: return "no applicable rule";
  }
  return "?";
}

inline std::optional<Citation> citation_from_label(std::string_view s) {
  for (Citation c : kAllCitations) {
    if (label(c) == s) return c;
  }
  return std::nullopt;
}

struct Reason {
  Citation citation;
  std::string qualifier;  // e.g. "hyperbolic"; printed in parentheses
  std::string text;

  std::string display_label() const {
    std::string s(label(citation));
    if (!qualifier.empty()) s += " (" + qualifier + ")";
    return s;
  }
};

struct Witness {
  enum class Kind { Element, FiniteGroup, Symbolic };
  Kind kind = Kind::Symbolic;
  std::string description;
  std::optional<GroupElement> element;

  static Witness of(const GroupElement& g, std::string note = {}) {
    std::string d = to_string(g);
    if (!note.empty()) d += " (" + note + ")";
    return {Kind::Element, std::move(d), g};
  }
  static Witness finite_group() { return {Kind::FiniteGroup, "group is finite", std::nullopt}; }
  static Witness symbolic(std::string d) { return {Kind::Symbolic, std::move(d), std::nullopt}; }
};

inline std::string_view to_string(Witness::Kind k) {
  switch (k) {
    case Witness::Kind::Element: return "element";
    case Witness::Kind::FiniteGroup: return "finite_group";
    case Witness::Kind::Symbolic: return "symbolic";
  }
  return "?";
}

struct Verdict {
  Status status = Status::Unknown;
  std::vector<Reason> reasons;
  std::optional<Witness> witness;

  static Verdict icc(Reason r) { return {Status::ICC, {std::move(r)}, std::nullopt}; }
  static Verdict not_icc(Reason r, Witness w) {
    return {Status::NotICC, {std::move(r)}, std::move(w)};
  }
  static Verdict unknown(Reason r) { return {Status::Unknown, {std::move(r)}, std::nullopt}; }

  Verdict& then(Reason r) {
    reasons.push_back(std::move(r));
    return *this;
  }
  Verdict& after(Reason r) {
    reasons.insert(reasons.begin(), std::move(r));
    return *this;
  }

  bool well_formed() const {
    if (reasons.empty()) return false;
    if (status == Status::NotICC && !witness) return false;
    for (const auto& r : reasons) {
      if (!citation_from_label(label(r.citation))) return false;
    }
    return true;
  }
};

inline bool cites(const Verdict& v, Citation c) {
  for (const auto& r : v.reasons) {
    if (r.citation == c) return true;
  }
  return false;
}

}  // namespace iccdec

#endif  // ICCDEC_VERDICT_HPP_
