#ifndef ICCDEC_CLI_HPP_
#define ICCDEC_CLI_HPP_

// Command-line front end. run_cli is the whole program and writes only to
// the given streams, so tests can drive it in-process.

#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "iccdec/descriptor_io.hpp"
#include "iccdec/error.hpp"
#include "iccdec/manifold.hpp"
#include "iccdec/oracle.hpp"
#include "iccdec/verdict.hpp"
#include "iccdec/words.hpp"

namespace iccdec {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUnknown = 2;
inline constexpr std::size_t kListLimit = 50;

struct CliOptions {
  std::string command;
  std::string file;
  bool json = false;
  std::optional<int> radius;
  std::optional<int> window;
  std::optional<std::string> element;
  std::optional<std::string> set;
  std::optional<int> length;
};

namespace cli {

inline Json witness_json(const std::optional<Witness>& w) {
  if (!w) return nullptr;
  Json j{{"kind", to_string(w->kind)}, {"description", w->description}};
  if (w->element) j["element"] = to_string(*w->element);
  return j;
}

inline Json verdict_json(const Verdict& v) {
  Json reasons = Json::array();
  for (const auto& r : v.reasons) {
    reasons.push_back({{"label", r.display_label()},
                       {"citation", std::string(label(r.citation))},
                       {"text", r.text}});
  }
  return Json{{"status", std::string(to_string(v.status))},
              {"witness", witness_json(v.witness)},
              {"reasons", reasons}};
}

inline void print_verdict(std::ostream& out, const Verdict& v) {
  out << "status: " << to_string(v.status) << "\n";
  if (v.witness) out << "witness: " << v.witness->description << "\n";
  out << "reasons:\n";
  for (const auto& r : v.reasons) out << "  [" << r.display_label() << "] " << r.text << "\n";
}

inline int exit_code(const Verdict& v) {
  return v.status == Status::Unknown ? kExitUnknown : kExitOk;
}

inline std::string rational_string(const boost::rational<std::int64_t>& r) {
  std::string s = std::to_string(r.numerator());
  if (r.denominator() != 1) s += "/" + std::to_string(r.denominator());
  return s;
}

inline Json group_json(const StructuredGroup& g) {
  Json gens = Json::array();
  for (const auto& s : g.generator_symbols()) gens.push_back(s.name);
  return Json{{"kind", std::string(to_string(g.kind()))},
              {"order", g.order().to_string()},
              {"generators", gens}};
}

inline Json piece_json(const PrimePiece& piece) {
  Json j{{"kind", std::string(piece_kind(piece))}, {"pi1_order", piece_order(piece).to_string()}};
  if (const auto* s = std::get_if<SeifertPiece>(&piece)) {
    const SeifertGroup sg = seifert_group(s->invariants);
    j["presentation"] = sg.presentation.to_string();
    j["orbifold_euler_characteristic"] =
        rational_string(s->invariants.orbifold_euler_characteristic());
    if (s->invariants.closed()) j["euler_number"] = rational_string(s->invariants.euler_number());
    j["realization"] = sg.realization ? Json(group_json(*sg.realization)) : Json(nullptr);
    if (sg.fiber) j["fiber"] = to_string(*sg.fiber);
  } else if (const auto* t = std::get_if<TorusBundlePiece>(&piece)) {
    j["monodromy_class"] = std::string(to_string(classify_monodromy(t->monodromy)));
  }
  return j;
}

inline Json optional_bool_json(const std::optional<bool>& b) {
  return b ? Json(*b) : Json(nullptr);
}

inline Json explain_json(const Descriptor& d, const Verdict& v) {
  Json j{{"type", std::string(descriptor_type(d))}, {"descriptor", to_json(d)}};
  if (const auto* m = std::get_if<ManifoldDescriptor>(&d)) {
    const ManifoldDescriptor p = poincare_variety(*m);
    j["poincare_variety"] = to_json(p);
    Json pieces = Json::array();
    for (const auto& piece : p.pieces) pieces.push_back(piece_json(piece));
    j["pieces"] = pieces;
    if (m->orientable) {
      j["normal_infinite_cyclic_subgroup"] =
          optional_bool_json(has_normal_infinite_cyclic_subgroup(*m));
    }
  } else if (const auto* g = std::get_if<GroupDescriptor>(&d)) {
    try {
      j["group"] = group_json(build_group(*g));
    } catch (const UnsupportedError& e) {
      j["group"] = Json{{"unsupported", e.what()}};
    }
  }
  j["verdict"] = verdict_json(v);
  return j;
}

inline void print_explain(std::ostream& out, const Json& e, const Verdict& v) {
  out << "type: " << e["type"].get<std::string>() << "\n";
  out << "descriptor: " << e["descriptor"].dump() << "\n";
  if (e.contains("poincare_variety")) {
    out << "poincare variety: " << e["pieces"].size() << " piece(s)\n";
    for (const auto& p : e["pieces"]) {
      out << "  - " << p["kind"].get<std::string>() << ", pi1 order "
          << p["pi1_order"].get<std::string>() << "\n";
      if (p.contains("monodromy_class")) {
        out << "    monodromy: " << p["monodromy_class"].get<std::string>() << "\n";
      }
      if (p.contains("presentation")) {
        out << "    presentation: " << p["presentation"].get<std::string>() << "\n";
        out << "    orbifold euler characteristic: "
            << p["orbifold_euler_characteristic"].get<std::string>() << "\n";
        if (p.contains("euler_number")) {
          out << "    euler number: " << p["euler_number"].get<std::string>() << "\n";
        }
        if (!p["realization"].is_null()) {
          out << "    normal form: " << p["realization"]["kind"].get<std::string>() << "\n";
        }
        if (p.contains("fiber")) out << "    fiber h: " << p["fiber"].get<std::string>() << "\n";
      }
    }
    if (e.contains("normal_infinite_cyclic_subgroup")) {
      const Json& b = e["normal_infinite_cyclic_subgroup"];
      out << "normal infinite cyclic subgroup: "
          << (b.is_null() ? "undetermined" : (b.get<bool>() ? "yes" : "no")) << "\n";
    }
  }
  if (e.contains("group")) {
    const Json& g = e["group"];
    if (g.contains("unsupported")) {
      out << "group: " << g["unsupported"].get<std::string>() << "\n";
    } else {
      std::string gens;
      for (const auto& s : g["generators"]) gens += (gens.empty() ? "" : " ") + s.get<std::string>();
      out << "group: " << g["kind"].get<std::string>() << ", order "
          << g["order"].get<std::string>() << ", generators " << gens << "\n";
    }
  }
  print_verdict(out, v);
}

inline StructuredGroup require_group(const Descriptor& d) {
  auto g = descriptor_group(d);
  if (!g) throw UsageError("this descriptor has no implemented group normal form");
  return *g;
}

inline std::vector<std::string> split_set(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, ',')) out.push_back(cur);
  if (out.empty()) throw UsageError("--set must list at least one word");
  return out;
}

inline std::string bound_note(ClassBound b) {
  switch (b) {
    case ClassBound::Central: return "central (symbolically verified)";
    case ClassBound::CentralUpToInverse: return "class within {g, g^-1} (symbolically verified)";
    case ClassBound::None: break;
  }
  return "";
}

inline int cmd_decide(const CliOptions& o, std::ostream& out) {
  const Descriptor d = load_descriptor(o.file);
  const Verdict v = decide(d);
  if (o.json) {
    Json j = verdict_json(v);
    j["type"] = std::string(descriptor_type(d));
    out << j.dump(2) << "\n";
  } else {
    print_verdict(out, v);
  }
  return exit_code(v);
}

inline int cmd_explain(const CliOptions& o, std::ostream& out) {
  const Descriptor d = load_descriptor(o.file);
  const Verdict v = decide(d);
  const Json e = explain_json(d, v);
  if (o.json) {
    out << e.dump(2) << "\n";
  } else {
    print_explain(out, e, v);
  }
  return exit_code(v);
}

inline int cmd_enumerate(const CliOptions& o, std::ostream& out) {
  const StructuredGroup g = require_group(load_descriptor(o.file));
  const int radius = o.radius.value_or(6);
  const int window = o.window.value_or(std::min(3, radius));
  GroupElement x = g.identity();
  if (o.element) {
    x = reduce_word(g, *o.element);
  } else {
    const auto gens = g.generators();
    if (gens.empty()) throw UsageError("the group has no generators; pass --element");
    x = gens.front();
  }
  const ClassBallReport rep = conjugacy_class_ball(g, x, radius, window);
  const std::string note = bound_note(symbolic_class_bound(g, x));
  const bool listed = rep.conjugates.size() <= kListLimit;
  if (o.json) {
    Json conj = Json::array();
    if (listed) {
      for (const auto& c : rep.conjugates) conj.push_back(to_string(c));
    }
    Json j{{"element", to_string(x)},
           {"group", group_json(g)},
           {"radius", radius},
           {"window", window},
           {"counts_by_radius", rep.counts_by_radius},
           {"stabilized", rep.stabilized},
           {"conjugates", listed ? conj : Json(nullptr)},
           {"note", note.empty() ? Json(nullptr) : Json(note)}};
    out << j.dump(2) << "\n";
    return kExitOk;
  }
  out << "group: " << to_string(g.kind()) << "\n";
  out << "element: " << to_string(x) << "\n";
  out << "radius: " << radius << " (window " << window << ")\n";
  out << "counts_by_radius:";
  for (auto c : rep.counts_by_radius) out << " " << c;
  out << "\n";
  out << "stabilized: " << (rep.stabilized ? "yes" : "no") << "\n";
  if (!note.empty()) out << "note: " << note << "\n";
  if (listed) {
    out << "conjugates (" << rep.conjugates.size() << "):\n";
    for (const auto& c : rep.conjugates) out << "  " << to_string(c) << "\n";
  } else {
    out << "conjugates: " << rep.conjugates.size() << " (not listed, more than " << kListLimit
        << ")\n";
  }
  return kExitOk;
}

inline int cmd_witness(const CliOptions& o, std::ostream& out) {
  const StructuredGroup g = require_group(load_descriptor(o.file));
  const int radius = o.radius.value_or(10);
  const int k = o.length.value_or(5);
  std::vector<GroupElement> targets;
  if (o.set) {
    for (const auto& w : split_set(*o.set)) targets.push_back(reduce_word(g, w));
  } else {
    const auto gens = g.generators();
    if (gens.empty()) throw UsageError("the group has no generators; pass --set");
    targets.push_back(gens.front());
  }
  const WitnessSequence ws = strong_icc_witness(g, targets, k, radius);
  std::vector<std::string> words;
  for (const auto& w : ws.gamma_words) words.push_back(w.empty() ? "1" : format_word(w));
  if (o.json) {
    Json set = Json::array();
    for (const auto& f : ws.target_set) set.push_back(to_string(f));
    Json gammas = Json::array();
    for (const auto& x : ws.gammas) gammas.push_back(to_string(x));
    Json j{{"set", set},
           {"length_requested", ws.length_requested},
           {"found", ws.gammas.size()},
           {"verified", ws.verified},
           {"radius_used", ws.radius_used},
           {"sequence", words},
           {"elements", gammas}};
    out << j.dump(2) << "\n";
    return kExitOk;
  }
  std::string seq;
  for (const auto& w : words) seq += (seq.empty() ? "" : ", ") + w;
  if (ws.verified) {
    out << "verified: " << k << " conjugators found within radius " << ws.radius_used << "\n";
  } else {
    out << "exhausted: found " << ws.gammas.size() << " of " << k << " conjugators up to radius "
        << ws.radius_used << "\n";
  }
  out << "sequence: " << seq << "\n";
  return kExitOk;
}

}  // namespace cli

inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Decide the ICC property for 3-manifold groups and structured groups", "iccdec"};
  app.require_subcommand(1);
  CliOptions o;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("file", o.file, "descriptor file (JSON)")->required();
    sub->add_flag("--json", o.json, "machine-readable output");
  };
  auto add_ball = [&](CLI::App* sub) {
    sub->add_option("--radius", o.radius, "ball radius")->check(CLI::NonNegativeNumber);
  };
  CLI::App* decide_cmd = app.add_subcommand("decide", "print the verdict and its reasons");
  CLI::App* explain_cmd = app.add_subcommand("explain", "verdict with the normalized descriptor");
  CLI::App* enumerate_cmd = app.add_subcommand("enumerate", "conjugacy class ball of an element");
  CLI::App* witness_cmd = app.add_subcommand("witness", "strongly-ICC witness sequence search");
  for (CLI::App* sub : {decide_cmd, explain_cmd, enumerate_cmd, witness_cmd}) add_common(sub);
  add_ball(enumerate_cmd);
  enumerate_cmd->add_option("--element", o.element, "element word, e.g. \"a b' a^2\"");
  enumerate_cmd->add_option("--window", o.window, "stabilization window")->check(CLI::PositiveNumber);
  add_ball(witness_cmd);
  witness_cmd->add_option("--set", o.set, "comma-separated target words");
  witness_cmd->add_option("--length", o.length, "sequence length k")->check(CLI::PositiveNumber);

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "iccdec: " << e.what() << "\n";
    return kExitError;
  }
  try {
    if (decide_cmd->parsed()) return cli::cmd_decide(o, out);
    if (explain_cmd->parsed()) return cli::cmd_explain(o, out);
    if (enumerate_cmd->parsed()) return cli::cmd_enumerate(o, out);
    return cli::cmd_witness(o, out);
  } catch (const std::exception& e) {
    err << "iccdec: " << o.file << ": " << e.what() << "\n";
    return kExitError;
  }
}

inline int run_cli(int argc, char** argv, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(std::move(args), out, err);
}

}  // namespace iccdec

#endif  // ICCDEC_CLI_HPP_
