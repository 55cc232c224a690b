#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "itl/structures.hpp"

namespace itl {

/// Back-and-forth conditions shared by p-morphisms and bisimulations.
enum class Condition { G_f, G_b, H_f, H_b, L_f, L_b, F_f, F_b, PV, B };

inline std::string_view to_string(Condition c) {
  switch (c) {
    case Condition::G_f: return "G-f";
    case Condition::G_b: return "G-b";
    case Condition::H_f: return "H-f";
    case Condition::H_b: return "H-b";
    case Condition::L_f: return "L-f";
    case Condition::L_b: return "L-b";
    case Condition::F_f: return "F-f";
    case Condition::F_b: return "F-b";
    case Condition::PV: return "PV";
    case Condition::B: return "B";
  }
  return "?";
}

inline std::optional<Condition> parse_condition(std::string_view name) {
  for (Condition c : {Condition::G_f, Condition::G_b, Condition::H_f, Condition::H_b, Condition::L_f, Condition::L_b,
                      Condition::F_f, Condition::F_b, Condition::PV, Condition::B}) {
    if (to_string(c) == name) return c;
  }
  return std::nullopt;
}

/// Data that pins down one violation; which fields are used depends on the
/// condition (see the checkers). `history` names a history by its leaf.
struct Witness {
  std::vector<Point> source;
  std::vector<Point> target;
  std::string history;
  std::string atom;

  friend bool operator==(const Witness&, const Witness&) = default;
};

inline std::string describe(const Witness& w) {
  std::string out;
  auto list = [&out](std::string_view label, const std::vector<Point>& pts) {
    if (pts.empty()) return;
    if (!out.empty()) out += " ";
    out += std::string(label) + "=";
    for (std::size_t i = 0; i < pts.size(); ++i) out += (i ? "," : "") + to_string(pts[i]);
  };
  list("source", w.source);
  list("target", w.target);
  if (!w.history.empty()) out += (out.empty() ? "" : " ") + std::string("history=") + w.history;
  if (!w.atom.empty()) out += (out.empty() ? "" : " ") + std::string("atom=") + w.atom;
  return out;
}

namespace detail {

inline std::set<std::string> union_atoms(const Model& a, const Model& b) {
  auto atoms = a.atoms();
  auto more = b.atoms();
  atoms.insert(more.begin(), more.end());
  return atoms;
}

}  // namespace detail

}  // namespace itl
