#ifndef ICCDEC_DESCRIPTOR_IO_HPP_
#define ICCDEC_DESCRIPTOR_IO_HPP_

// JSON descriptor files (schema_version 1). Parsing is strict: unknown keys,
// non-integer numbers and wrong types are rejected with a JSON-pointer path
// or, for syntax errors, a line/column position.

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "iccdec/error.hpp"
#include "iccdec/group_core.hpp"
#include "iccdec/icc_rules.hpp"
#include "iccdec/manifold.hpp"
#include "iccdec/matrix_groups.hpp"
#include "iccdec/seifert.hpp"

namespace iccdec {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

class DescriptorError : public UsageError {
 public:
  using UsageError::UsageError;
};

// A structurally described group; the construction object is kept as
// validated JSON and built on demand.
struct GroupDescriptor {
  Json construction;
  bool operator==(const GroupDescriptor&) const = default;
};

using Descriptor = std::variant<GroupDescriptor, ManifoldDescriptor, KnotDescriptor, LinkDescriptor>;

inline std::string_view descriptor_type(const Descriptor& d) {
  static const char* names[] = {"group", "manifold", "knot", "link"};
  return names[d.index()];
}

namespace io {

inline std::string pointer(const std::string& base, const std::string& key) {
  std::string k;
  for (char c : key) {
    if (c == '~') {
      k += "~0";
    } else if (c == '/') {
      k += "~1";
    } else {
      k += c;
    }
  }
  return base + "/" + k;
}

inline std::string pointer(const std::string& base, std::size_t i) {
  return base + "/" + std::to_string(i);
}

[[noreturn]] inline void fail(const std::string& path, const std::string& msg) {
  throw DescriptorError((path.empty() ? std::string("/") : path) + ": " + msg);
}

inline void require_object(const Json& j, const std::string& path,
                           const std::set<std::string>& required,
                           const std::set<std::string>& optional = {}) {
  if (!j.is_object()) fail(path, "expected an object");
  for (const auto& [k, v] : j.items()) {
    if (!required.count(k) && !optional.count(k)) fail(pointer(path, k), "unknown key");
  }
  for (const auto& k : required) {
    if (!j.contains(k)) fail(path, "missing required key '" + k + "'");
  }
}

inline std::int64_t get_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  if (j.is_number_unsigned() && j.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX)) {
    fail(path, "integer out of range");
  }
  return j.get<std::int64_t>();
}

inline int get_small_int(const Json& j, const std::string& path) {
  const std::int64_t v = get_int(j, path);
  if (v < -1000000 || v > 1000000) fail(path, "integer out of range");
  return static_cast<int>(v);
}

inline bool get_bool(const Json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected a boolean");
  return j.get<bool>();
}

inline std::string get_string(const Json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

inline const Json& get_array(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  return j;
}

inline std::vector<std::string> get_strings(const Json& j, const std::string& path) {
  std::vector<std::string> out;
  const Json& a = get_array(j, path);
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(get_string(a[i], pointer(path, i)));
  return out;
}

inline detail::IntMatrix get_matrix(const Json& j, const std::string& path) {
  detail::IntMatrix m;
  const Json& rows = get_array(j, path);
  if (rows.empty()) fail(path, "expected a nonempty square matrix");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string rp = pointer(path, i);
    const Json& row = get_array(rows[i], rp);
    if (row.size() != rows.size()) fail(rp, "expected a square matrix");
    std::vector<std::int64_t> r;
    for (std::size_t k = 0; k < row.size(); ++k) r.push_back(get_int(row[k], pointer(rp, k)));
    m.push_back(std::move(r));
  }
  return m;
}

inline Json matrix_json(const detail::IntMatrix& m) {
  Json a = Json::array();
  for (const auto& row : m) a.push_back(row);
  return a;
}

inline Cardinal get_cardinal(const Json& j, const std::string& path) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "infinite") return Cardinal::infinite();
    if (s == "unknown") return Cardinal::unknown();
    fail(path, "expected a positive integer, \"infinite\" or \"unknown\"");
  }
  const std::int64_t n = get_int(j, path);
  if (n < 1) fail(path, "group order must be >= 1");
  return Cardinal::finite(static_cast<std::uint64_t>(n));
}

inline Json cardinal_json(const Cardinal& c) {
  if (c.is_infinite()) return "infinite";
  if (c.is_unknown()) return "unknown";
  return c.value();
}

// Default generator names for leaves: a, b, c, ... skipping t and h.
class Namer {
 public:
  std::string next() {
    while (true) {
      const char c = static_cast<char>('a' + (i_ % 26));
      const int round = i_ / 26;
      ++i_;
      if (c == 't' || c == 'h') continue;
      return round == 0 ? std::string(1, c) : std::string(1, c) + std::to_string(round);
    }
  }

 private:
  int i_ = 0;
};

inline FiniteTable get_finite(const Json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected {\"cyclic\": n} or {\"table\": [[...]]}");
  if (j.contains("cyclic")) {
    require_object(j, path, {"cyclic"});
    const std::int64_t n = get_int(j["cyclic"], pointer(path, "cyclic"));
    if (n < 1 || n > 10000) fail(pointer(path, "cyclic"), "order must be between 1 and 10000");
    return FiniteTable::cyclic(static_cast<int>(n));
  }
  require_object(j, path, {"table"});
  const std::string tp = pointer(path, "table");
  const Json& rows = get_array(j["table"], tp);
  std::vector<std::vector<int>> t;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Json& row = get_array(rows[i], pointer(tp, i));
    std::vector<int> r;
    for (std::size_t k = 0; k < row.size(); ++k) {
      r.push_back(get_small_int(row[k], pointer(pointer(tp, i), k)));
    }
    t.push_back(std::move(r));
  }
  try {
    return FiniteTable(std::move(t));
  } catch (const UsageError& e) {
    fail(tp, e.what());
  }
}

inline EisensteinInt get_eisenstein(const Json& j, const std::string& path) {
  const Json& a = get_array(j, path);
  if (a.size() != 2) fail(path, "expected [a, b] for a + b w");
  return EisensteinInt(static_cast<long long>(get_int(a[0], pointer(path, 0))),
                       static_cast<long long>(get_int(a[1], pointer(path, 1))));
}

inline std::vector<GroupElement> get_words(const Json& j, const std::string& path,
                                           const StructuredGroup& g) {
  std::vector<GroupElement> out;
  const auto words = get_strings(j, path);
  for (std::size_t i = 0; i < words.size(); ++i) {
    try {
      out.push_back(reduce_word(g, words[i]));
    } catch (const UsageError& e) {
      fail(pointer(path, i), e.what());
    }
  }
  return out;
}

inline SeifertInvariants get_seifert(const Json& j, const std::string& path,
                                     const std::set<std::string>& extra = {}) {
  std::set<std::string> optional{"exceptional_fibers", "euler_obstruction"};
  optional.insert(extra.begin(), extra.end());
  require_object(j, path, {"base_genus", "base_orientable", "boundary_components"}, optional);
  SeifertInvariants s;
  s.base_genus = get_small_int(j["base_genus"], pointer(path, "base_genus"));
  s.base_orientable = get_bool(j["base_orientable"], pointer(path, "base_orientable"));
  s.boundary_components =
      get_small_int(j["boundary_components"], pointer(path, "boundary_components"));
  if (j.contains("exceptional_fibers")) {
    const std::string fp = pointer(path, "exceptional_fibers");
    const Json& fibers = get_array(j["exceptional_fibers"], fp);
    for (std::size_t i = 0; i < fibers.size(); ++i) {
      const std::string ip = pointer(fp, i);
      const Json& f = get_array(fibers[i], ip);
      if (f.size() != 2) fail(ip, "expected [alpha, beta]");
      s.exceptional_fibers.emplace_back(get_int(f[0], pointer(ip, 0)), get_int(f[1], pointer(ip, 1)));
    }
  }
  if (j.contains("euler_obstruction") && !j["euler_obstruction"].is_null()) {
    s.euler_obstruction = get_int(j["euler_obstruction"], pointer(path, "euler_obstruction"));
  }
  try {
    s.validate();
  } catch (const UsageError& e) {
    fail(path, e.what());
  }
  return s;
}

inline Json seifert_json(const SeifertInvariants& s) {
  Json j;
  j["base_genus"] = s.base_genus;
  j["base_orientable"] = s.base_orientable;
  j["boundary_components"] = s.boundary_components;
  Json fibers = Json::array();
  for (const auto& [a, b] : s.exceptional_fibers) fibers.push_back({a, b});
  j["exceptional_fibers"] = fibers;
  if (s.euler_obstruction) j["euler_obstruction"] = *s.euler_obstruction;
  return j;
}

inline StructuredGroup build_group(const Json& j, const std::string& path, Namer& namer);

inline std::string only_key(const Json& j, const std::string& path,
                            const std::set<std::string>& constructions) {
  if (!j.is_object()) fail(path, "expected a group construction object");
  std::optional<std::string> found;
  for (const auto& [k, v] : j.items()) {
    if (constructions.count(k)) {
      if (found) fail(path, "more than one construction key ('" + *found + "', '" + k + "')");
      found = k;
    }
  }
  if (!found) fail(path, "missing construction key");
  return *found;
}

inline StructuredGroup build_group_impl(const Json& j, const std::string& path, Namer& namer) {
  static const std::set<std::string> kinds{
      "cyclic",   "infinite_cyclic",    "free",    "free_product",
      "amalgam",  "hnn",                "semidirect", "direct_with_finite",
      "surface",  "matrix_sl2_eisenstein", "seifert"};
  const std::string kind = only_key(j, path, kinds);
  const std::string kp = pointer(path, kind);
  const Json& body = j[kind];
  if (kind == "cyclic") {
    require_object(j, path, {"cyclic"}, {"name"});
    const std::int64_t n = get_int(body, kp);
    if (n < 1) fail(kp, "order must be >= 1");
    const std::string name =
        j.contains("name") ? get_string(j["name"], pointer(path, "name")) : namer.next();
    return StructuredGroup::finite_cyclic(n, name);
  }
  if (kind == "infinite_cyclic") {
    require_object(j, path, {"infinite_cyclic"}, {"name"});
    if (!get_bool(body, kp)) fail(kp, "expected true");
    const std::string name =
        j.contains("name") ? get_string(j["name"], pointer(path, "name")) : namer.next();
    return StructuredGroup::infinite_cyclic(name);
  }
  if (kind == "free") {
    require_object(j, path, {"free"}, {"names"});
    const int rank = get_small_int(body, kp);
    if (rank < 0 || rank > 64) fail(kp, "rank must be between 0 and 64");
    std::vector<std::string> names;
    if (j.contains("names")) names = get_strings(j["names"], pointer(path, "names"));
    return StructuredGroup::free_group(rank, names);
  }
  if (kind == "free_product") {
    require_object(j, path, {"free_product"});
    const Json& parts = get_array(body, kp);
    if (parts.size() < 2) fail(kp, "a free product needs at least two factors");
    StructuredGroup g = build_group(parts[0], pointer(kp, 0), namer);
    for (std::size_t i = 1; i < parts.size(); ++i) {
      g = StructuredGroup::free_product(g, build_group(parts[i], pointer(kp, i), namer));
    }
    return g;
  }
  if (kind == "amalgam") {
    require_object(j, path, {"amalgam"});
    require_object(body, kp, {"left", "right", "edge", "left_embedding", "right_embedding"});
    const StructuredGroup l = build_group(body["left"], pointer(kp, "left"), namer);
    const StructuredGroup r = build_group(body["right"], pointer(kp, "right"), namer);
    EdgeGroup edge{get_finite(body["edge"], pointer(kp, "edge")),
                   get_words(body["left_embedding"], pointer(kp, "left_embedding"), l),
                   get_words(body["right_embedding"], pointer(kp, "right_embedding"), r)};
    return StructuredGroup::amalgam(l, r, edge);
  }
  if (kind == "hnn") {
    require_object(j, path, {"hnn"});
    require_object(body, kp, {"base"}, {"stable", "domain", "image", "powers"});
    const StructuredGroup base = build_group(body["base"], pointer(kp, "base"), namer);
    const std::string stable =
        body.contains("stable") ? get_string(body["stable"], pointer(kp, "stable")) : "t";
    if (body.contains("powers")) {
      if (body.contains("domain") || body.contains("image")) {
        fail(kp, "give either 'powers' or 'domain' and 'image'");
      }
      const std::string pp = pointer(kp, "powers");
      const Json& p = get_array(body["powers"], pp);
      if (p.size() != 2) fail(pp, "expected [p, q]");
      return StructuredGroup::hnn(
          base, CyclicHnnAssociation{get_int(p[0], pointer(pp, 0)), get_int(p[1], pointer(pp, 1))},
          stable);
    }
    if (!body.contains("domain") || !body.contains("image")) {
      fail(kp, "missing 'domain' and 'image' (or 'powers')");
    }
    return StructuredGroup::hnn(
        base,
        FiniteHnnAssociation{get_words(body["domain"], pointer(kp, "domain"), base),
                             get_words(body["image"], pointer(kp, "image"), base)},
        stable);
  }
  if (kind == "semidirect") {
    require_object(j, path, {"semidirect"});
    require_object(body, kp, {"phi"}, {"names"});
    std::vector<std::string> names;
    if (body.contains("names")) names = get_strings(body["names"], pointer(kp, "names"));
    return StructuredGroup::semidirect(get_matrix(body["phi"], pointer(kp, "phi")), names);
  }
  if (kind == "direct_with_finite") {
    require_object(j, path, {"direct_with_finite"});
    require_object(body, kp, {"finite"}, {"h", "names"});
    std::vector<std::string> names;
    if (body.contains("names")) names = get_strings(body["names"], pointer(kp, "names"));
    const FiniteTable f = get_finite(body["finite"], pointer(kp, "finite"));
    if (!body.contains("h")) return StructuredGroup::finite_group(f, names);
    return StructuredGroup::direct_with_finite(build_group(body["h"], pointer(kp, "h"), namer), f,
                                               names);
  }
  if (kind == "surface") {
    require_object(j, path, {"surface"});
    require_object(body, kp, {"genus", "orientable", "boundary"});
    return StructuredGroup::surface(get_small_int(body["genus"], pointer(kp, "genus")),
                                    get_bool(body["orientable"], pointer(kp, "orientable")),
                                    get_small_int(body["boundary"], pointer(kp, "boundary")));
  }
  if (kind == "matrix_sl2_eisenstein") {
    require_object(j, path, {"matrix_sl2_eisenstein"});
    if (body.is_string()) {
      if (body.get<std::string>() != "figure_eight") fail(kp, "unknown preset");
      return figure8_group();
    }
    require_object(body, kp, {"generators"}, {"names", "lattice"});
    const std::string gp = pointer(kp, "generators");
    const Json& gens = get_array(body["generators"], gp);
    std::vector<Mat2E> mats;
    for (std::size_t i = 0; i < gens.size(); ++i) {
      const std::string ip = pointer(gp, i);
      const Json& m = get_array(gens[i], ip);
      if (m.size() != 2) fail(ip, "expected [[p, q], [r, s]]");
      std::vector<EisensteinInt> e;
      for (std::size_t r = 0; r < 2; ++r) {
        const Json& row = get_array(m[r], pointer(ip, r));
        if (row.size() != 2) fail(pointer(ip, r), "expected two entries");
        for (std::size_t c = 0; c < 2; ++c) {
          e.push_back(get_eisenstein(row[c], pointer(pointer(ip, r), c)));
        }
      }
      try {
        mats.emplace_back(e[0], e[1], e[2], e[3]);
      } catch (const UsageError& err) {
        fail(ip, err.what());
      }
    }
    std::vector<std::string> names;
    if (body.contains("names")) names = get_strings(body["names"], pointer(kp, "names"));
    const bool lattice = body.contains("lattice") && get_bool(body["lattice"], pointer(kp, "lattice"));
    return StructuredGroup::matrix_sl2_eisenstein(mats, names, lattice);
  }
  // seifert
  require_object(j, path, {"seifert"});
  const SeifertGroup sg = seifert_group(get_seifert(body, kp));
  if (!sg.realization) {
    throw UnsupportedError("no normal form implemented for this Seifert group");
  }
  return *sg.realization;
}

inline StructuredGroup build_group(const Json& j, const std::string& path, Namer& namer) {
  try {
    return build_group_impl(j, path, namer);
  } catch (const DescriptorError&) {
    throw;
  } catch (const UnsupportedError&) {
    throw;
  } catch (const UsageError& e) {
    fail(path, e.what());
  }
}

inline ManifoldDescriptor parse_manifold(const Json& j) {
  require_object(j, "", {"schema_version", "type", "orientable", "pieces"},
                 {"boundary_spheres_capped"});
  ManifoldDescriptor m;
  m.orientable = get_bool(j["orientable"], "/orientable");
  if (j.contains("boundary_spheres_capped")) {
    m.boundary_spheres_capped = get_bool(j["boundary_spheres_capped"], "/boundary_spheres_capped");
  }
  const Json& pieces = get_array(j["pieces"], "/pieces");
  if (pieces.empty()) fail("/pieces", "at least one piece is required");
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const std::string pp = pointer("/pieces", i);
    const Json& p = pieces[i];
    if (!p.is_object() || !p.contains("kind")) fail(pp, "missing required key 'kind'");
    const std::string kind = get_string(p["kind"], pointer(pp, "kind"));
    if (kind == "seifert") {
      m.pieces.push_back(SeifertPiece{get_seifert(p, pp, {"kind"})});
    } else if (kind == "hyperbolic") {
      require_object(p, pp, {"kind"}, {"finite_volume"});
      HyperbolicPiece h;
      if (p.contains("finite_volume")) h.finite_volume = get_bool(p["finite_volume"], pointer(pp, "finite_volume"));
      m.pieces.push_back(h);
    } else if (kind == "torus_bundle") {
      require_object(p, pp, {"kind", "monodromy"});
      const std::string mp = pointer(pp, "monodromy");
      TorusBundlePiece t{get_matrix(p["monodromy"], mp)};
      if (t.monodromy.size() != 2) fail(mp, "expected a 2x2 matrix");
      const std::int64_t det = detail::determinant(t.monodromy);
      if (det != 1 && det != -1) fail(mp, "determinant must be +-1");
      m.pieces.push_back(t);
    } else if (kind == "sphere_bundle") {
      require_object(p, pp, {"kind"}, {"orientable_bundle"});
      SphereBundlePiece b;
      if (p.contains("orientable_bundle")) {
        b.orientable_bundle = get_bool(p["orientable_bundle"], pointer(pp, "orientable_bundle"));
      }
      m.pieces.push_back(b);
    } else if (kind == "homotopy_sphere") {
      require_object(p, pp, {"kind"});
      m.pieces.push_back(HomotopySpherePiece{});
    } else if (kind == "other_irreducible") {
      require_object(p, pp, {"kind"},
                     {"pi1_order", "normal_cyclic_infinite_subgroup", "contains_nonstandard_p2xi",
                      "seifert_mod_p", "homotopy_p2_x_s1"});
      OtherIrreduciblePiece o;
      if (p.contains("pi1_order")) o.pi1_order = get_cardinal(p["pi1_order"], pointer(pp, "pi1_order"));
      auto flag = [&](const char* key, std::optional<bool>& dst) {
        if (p.contains(key) && !p[key].is_null()) dst = get_bool(p[key], pointer(pp, key));
      };
      flag("normal_cyclic_infinite_subgroup", o.normal_cyclic_infinite_subgroup);
      flag("contains_nonstandard_p2xi", o.contains_nonstandard_p2xi);
      flag("seifert_mod_p", o.seifert_mod_p);
      flag("homotopy_p2_x_s1", o.homotopy_p2_x_s1);
      m.pieces.push_back(o);
    } else {
      fail(pointer(pp, "kind"), "unknown piece kind '" + kind + "'");
    }
  }
  return m;
}

inline KnotDescriptor parse_knot(const Json& j) {
  require_object(j, "", {"schema_version", "type"}, {"torus", "hyperbolic", "is_torus"});
  const int given = static_cast<int>(j.contains("torus")) + static_cast<int>(j.contains("hyperbolic")) +
                    static_cast<int>(j.contains("is_torus"));
  if (given != 1) fail("", "a knot needs exactly one of 'torus', 'hyperbolic', 'is_torus'");
  if (j.contains("torus")) {
    const Json& t = get_array(j["torus"], "/torus");
    if (t.size() != 2) fail("/torus", "expected [p, q]");
    TorusKnot k{get_int(t[0], "/torus/0"), get_int(t[1], "/torus/1")};
    if (std::gcd(k.p, k.q) != 1) fail("/torus", "torus knot parameters must be coprime");
    return k;
  }
  if (j.contains("hyperbolic")) {
    if (!get_bool(j["hyperbolic"], "/hyperbolic")) fail("/hyperbolic", "expected true");
    return HyperbolicKnot{};
  }
  return FlaggedKnot{get_bool(j["is_torus"], "/is_torus")};
}

inline LinkDescriptor parse_link(const Json& j) {
  require_object(j, "", {"schema_version", "type", "components"}, {"is_seifert_fiber_union"});
  LinkDescriptor l;
  l.components = get_small_int(j["components"], "/components");
  if (l.components < 1) fail("/components", "a link has at least one component");
  if (j.contains("is_seifert_fiber_union") && !j["is_seifert_fiber_union"].is_null()) {
    l.is_seifert_fiber_union = get_bool(j["is_seifert_fiber_union"], "/is_seifert_fiber_union");
  }
  return l;
}

inline std::string position_of(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace io

inline Descriptor parse_descriptor_json(const Json& j) {
  using namespace io;
  if (!j.is_object()) fail("", "expected a JSON object");
  if (!j.contains("schema_version")) fail("", "missing required key 'schema_version'");
  if (get_int(j["schema_version"], "/schema_version") != kSchemaVersion) {
    fail("/schema_version", "unsupported schema version (expected 1)");
  }
  if (!j.contains("type")) fail("", "missing required key 'type'");
  const std::string type = get_string(j["type"], "/type");
  if (type == "group") {
    require_object(j, "", {"schema_version", "type", "construction"});
    Namer namer;
    try {
      build_group(j["construction"], "/construction", namer);
    } catch (const UnsupportedError&) {
      // Schema-valid; the construction just has no normal form.
    }
    return GroupDescriptor{j["construction"]};
  }
  if (type == "manifold") return parse_manifold(j);
  if (type == "knot") return parse_knot(j);
  if (type == "link") return parse_link(j);
  fail("/type", "expected one of \"group\", \"manifold\", \"knot\", \"link\"");
}

inline Descriptor parse_descriptor(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw DescriptorError("JSON syntax error at " + io::position_of(text, e.byte) + " (byte " +
                          std::to_string(e.byte) + ")");
  }
  return parse_descriptor_json(j);
}

inline Descriptor load_descriptor(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_descriptor(ss.str());
}

inline Json to_json(const ManifoldDescriptor& m) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["type"] = "manifold";
  j["orientable"] = m.orientable;
  j["boundary_spheres_capped"] = m.boundary_spheres_capped;
  Json pieces = Json::array();
  for (const auto& piece : m.pieces) {
    Json p;
    if (const auto* s = std::get_if<SeifertPiece>(&piece)) {
      p = io::seifert_json(s->invariants);
    } else if (const auto* h = std::get_if<HyperbolicPiece>(&piece)) {
      p["finite_volume"] = h->finite_volume;
    } else if (const auto* t = std::get_if<TorusBundlePiece>(&piece)) {
      p["monodromy"] = io::matrix_json(t->monodromy);
    } else if (const auto* b = std::get_if<SphereBundlePiece>(&piece)) {
      p["orientable_bundle"] = b->orientable_bundle;
    } else if (const auto* o = std::get_if<OtherIrreduciblePiece>(&piece)) {
      p["pi1_order"] = io::cardinal_json(o->pi1_order);
      auto flag = [&](const char* key, const std::optional<bool>& v) {
        if (v) p[key] = *v;
      };
      flag("normal_cyclic_infinite_subgroup", o->normal_cyclic_infinite_subgroup);
      flag("contains_nonstandard_p2xi", o->contains_nonstandard_p2xi);
      flag("seifert_mod_p", o->seifert_mod_p);
      flag("homotopy_p2_x_s1", o->homotopy_p2_x_s1);
    }
    p["kind"] = piece_kind(piece);
    pieces.push_back(p);
  }
  j["pieces"] = pieces;
  return j;
}

inline Json to_json(const Descriptor& d) {
  if (const auto* g = std::get_if<GroupDescriptor>(&d)) {
    return Json{{"schema_version", kSchemaVersion}, {"type", "group"}, {"construction", g->construction}};
  }
  if (const auto* m = std::get_if<ManifoldDescriptor>(&d)) return to_json(*m);
  Json j;
  j["schema_version"] = kSchemaVersion;
  if (const auto* k = std::get_if<KnotDescriptor>(&d)) {
    j["type"] = "knot";
    if (const auto* t = std::get_if<TorusKnot>(k)) {
      j["torus"] = {t->p, t->q};
    } else if (std::holds_alternative<HyperbolicKnot>(*k)) {
      j["hyperbolic"] = true;
    } else {
      j["is_torus"] = std::get<FlaggedKnot>(*k).is_torus;
    }
    return j;
  }
  const auto& l = std::get<LinkDescriptor>(d);
  j["type"] = "link";
  j["components"] = l.components;
  if (l.is_seifert_fiber_union) j["is_seifert_fiber_union"] = *l.is_seifert_fiber_union;
  return j;
}

inline StructuredGroup build_group(const GroupDescriptor& g) {
  io::Namer namer;
  return io::build_group(g.construction, "/construction", namer);
}

// Surfaces are decided from their data, other constructions structurally.
inline Verdict decide_group_descriptor(const GroupDescriptor& g) {
  const Json& c = g.construction;
  if (c.contains("surface")) {
    const Json& s = c["surface"];
    return icc_surface(s["genus"].get<int>(), s["orientable"].get<bool>(),
                       s["boundary"].get<int>());
  }
  return decide_group(build_group(g));
}

inline Verdict decide(const Descriptor& d) {
  if (const auto* g = std::get_if<GroupDescriptor>(&d)) return decide_group_descriptor(*g);
  if (const auto* m = std::get_if<ManifoldDescriptor>(&d)) return decide_icc(*m);
  if (const auto* k = std::get_if<KnotDescriptor>(&d)) return decide_icc_knot(*k);
  return decide_icc_link(std::get<LinkDescriptor>(d));
}

// A group with a normal form for the descriptor, when one is implemented.
inline std::optional<StructuredGroup> descriptor_group(const Descriptor& d) {
  if (const auto* g = std::get_if<GroupDescriptor>(&d)) {
    try {
      return build_group(*g);
    } catch (const UnsupportedError&) {
      return std::nullopt;
    }
  }
  if (const auto* k = std::get_if<KnotDescriptor>(&d)) {
    if (const auto* t = std::get_if<TorusKnot>(k)) {
      const std::int64_t p = checked::abs(t->p), q = checked::abs(t->q);
      if (p <= 1 || q <= 1) return StructuredGroup::infinite_cyclic("x");
      return torus_knot_group(p, q);
    }
    return std::nullopt;
  }
  if (const auto* m = std::get_if<ManifoldDescriptor>(&d)) {
    const ManifoldDescriptor p = poincare_variety(*m);
    std::vector<const PrimePiece*> nontrivial;
    for (const auto& piece : p.pieces) {
      if (!piece_order(piece).is_trivial()) nontrivial.push_back(&piece);
    }
    if (nontrivial.size() != 1) return std::nullopt;
    const PrimePiece& piece = *nontrivial.front();
    if (const auto* s = std::get_if<SeifertPiece>(&piece)) {
      return seifert_group(s->invariants).realization;
    }
    if (const auto* t = std::get_if<TorusBundlePiece>(&piece)) {
      return StructuredGroup::semidirect(t->monodromy);
    }
    if (std::holds_alternative<SphereBundlePiece>(piece)) {
      return StructuredGroup::infinite_cyclic("t");
    }
  }
  return std::nullopt;
}

}  // namespace iccdec

#endif  // ICCDEC_DESCRIPTOR_IO_HPP_
