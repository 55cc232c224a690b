#pragma once

// Bisimulations between pointed models: checking a given relation, the
// greatest bisimulation by pair removal, and a bounded search for formulas
// that separate two points.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "itl/conditions.hpp"
#include "itl/formula.hpp"
#include "itl/point_set.hpp"
#include "itl/semantics.hpp"
#include "itl/structures.hpp"

namespace itl {

struct PointRelation {
  std::set<std::pair<Point, Point>> pairs;

  friend bool operator==(const PointRelation&, const PointRelation&) = default;
};

/// Dense index form of a relation between the points of two models.
class RelationMatrix {
public:
  RelationMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), cells_(rows * cols, 0) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool contains(PointId a, PointId b) const { return cells_[a * cols_ + b] != 0; }
  void insert(PointId a, PointId b) { cells_[a * cols_ + b] = 1; }
  void erase(PointId a, PointId b) { cells_[a * cols_ + b] = 0; }

  std::size_t size() const {
    return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), char{1}));
  }

  std::vector<std::pair<PointId, PointId>> pairs() const {
    std::vector<std::pair<PointId, PointId>> out;
    for (PointId a = 0; a < rows_; ++a) {
      for (PointId b = 0; b < cols_; ++b) {
        if (contains(a, b)) out.emplace_back(a, b);
      }
    }
    return out;
  }

  friend bool operator==(const RelationMatrix&, const RelationMatrix&) = default;

private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<char> cells_;
};

inline RelationMatrix to_matrix(const Model& src, const Model& dst, const PointRelation& rel) {
  RelationMatrix out(src.frame().point_count(), dst.frame().point_count());
  for (const auto& [a, b] : rel.pairs) out.insert(src.frame().point_index(a), dst.frame().point_index(b));
  return out;
}

inline PointRelation to_relation(const Model& src, const Model& dst, const RelationMatrix& m) {
  PointRelation out;
  for (const auto& [a, b] : m.pairs()) out.pairs.emplace(src.frame().point(a), dst.frame().point(b));
  return out;
}

struct BisimulationFailure {
  Condition condition;
  Point source;  // the related pair whose condition fails (the anchor for B)
  Point target;
  Witness witness;
};

struct BisimulationReport {
  std::vector<BisimulationFailure> failures;

  bool ok() const noexcept { return failures.empty(); }

  bool failed(Condition c) const {
    return std::any_of(failures.begin(), failures.end(), [c](const auto& f) { return f.condition == c; });
  }
};

namespace detail {

// F-f for the pair (s, t): for every history g of t's class there is a
// history h of s's class such that each later moment r on h is matched by a
// later r' on g with (r,[h]_r) B (r',[g]_r').
inline bool bisim_future_forward(const Model& a, const Model& b, const RelationMatrix& rel, PointId s, PointId t,
                                 HistoryId g) {
  const Frame& fa = a.frame();
  const Frame& fb = b.frame();
  const MomentId ms = fa.point_moment(s);
  const MomentId mt = fb.point_moment(t);
  for (HistoryId h : fa.point_histories(s)) {
    bool every = true;
    for (MomentId r : fa.history_moments(h)) {
      if (!every) break;
      if (!fa.earlier(ms, r)) continue;
      const PointId left = fa.point_on(r, h);
      bool found = false;
      for (MomentId r2 : fb.history_moments(g)) {
        if (fb.earlier(mt, r2) && rel.contains(left, fb.point_on(r2, g))) found = true;
      }
      every = found;
    }
    if (every) return true;
  }
  return false;
}

// F-b for (s, t), given a history h of s's class.
inline bool bisim_future_backward(const Model& a, const Model& b, const RelationMatrix& rel, PointId s, PointId t,
                                  HistoryId h) {
  const Frame& fa = a.frame();
  const Frame& fb = b.frame();
  const MomentId ms = fa.point_moment(s);
  const MomentId mt = fb.point_moment(t);
  for (HistoryId g : fb.point_histories(t)) {
    bool every = true;
    for (MomentId r2 : fb.history_moments(g)) {
      if (!every) break;
      if (!fb.earlier(mt, r2)) continue;
      const PointId right = fb.point_on(r2, g);
      bool found = false;
      for (MomentId r : fa.history_moments(h)) {
        if (fa.earlier(ms, r) && rel.contains(fa.point_on(r, h), right)) found = true;
      }
      every = found;
    }
    if (every) return true;
  }
  return false;
}

enum class Rel { succ, pred, same };

inline bool related(const Frame& fr, Rel kind, PointId from, PointId to) {
  switch (kind) {
    case Rel::succ: return precedes(fr, from, to);
    case Rel::pred: return precedes(fr, to, from);
    case Rel::same: return same_moment(fr, from, to);
  }
  return false;
}

// Forward: every kind-neighbour r of s has a kind-neighbour r' of t with r B r'.
// Returns the first unanswered r, if any.
inline std::optional<PointId> unanswered_forward(const Frame& fa, const Frame& fb, const RelationMatrix& rel,
                                                 Rel kind, PointId s, PointId t) {
  for (PointId r = 0; r < fa.point_count(); ++r) {
    if (!related(fa, kind, s, r)) continue;
    bool answered = false;
    for (PointId r2 = 0; r2 < fb.point_count() && !answered; ++r2) {
      answered = related(fb, kind, t, r2) && rel.contains(r, r2);
    }
    if (!answered) return r;
  }
  return std::nullopt;
}

inline std::optional<PointId> unanswered_backward(const Frame& fa, const Frame& fb, const RelationMatrix& rel,
                                                  Rel kind, PointId s, PointId t) {
  for (PointId r2 = 0; r2 < fb.point_count(); ++r2) {
    if (!related(fb, kind, t, r2)) continue;
    bool answered = false;
    for (PointId r = 0; r < fa.point_count() && !answered; ++r) {
      answered = related(fa, kind, s, r) && rel.contains(r, r2);
    }
    if (!answered) return r2;
  }
  return std::nullopt;
}

// All conditions of one related pair; stops after the first failure when
// `first_only`.
inline std::vector<BisimulationFailure> pair_failures(const Model& a, const Model& b, const RelationMatrix& rel,
                                                      PointId s, PointId t, Language lang, bool first_only) {
  const Frame& fa = a.frame();
  const Frame& fb = b.frame();
  std::vector<BisimulationFailure> out;
  auto fail = [&](Condition c, Witness w) {
    out.push_back({c, fa.point(s), fb.point(t), std::move(w)});
    return first_only;
  };

  for (const auto& atom : union_atoms(a, b)) {
    if (a.holds(atom, s) != b.holds(atom, t)) {
      if (fail(Condition::PV, {{}, {}, {}, atom})) return out;
      break;
    }
  }
  const std::pair<Condition, Rel> forward[] = {
      {Condition::G_f, Rel::succ}, {Condition::H_f, Rel::pred}, {Condition::L_f, Rel::same}};
  const std::pair<Condition, Rel> backward[] = {
      {Condition::G_b, Rel::succ}, {Condition::H_b, Rel::pred}, {Condition::L_b, Rel::same}};
  for (std::size_t i = 0; i < 3; ++i) {
    if (auto r = unanswered_forward(fa, fb, rel, forward[i].second, s, t)) {
      if (fail(forward[i].first, {{fa.point(*r)}, {}, {}, {}})) return out;
    }
    if (auto r2 = unanswered_backward(fa, fb, rel, backward[i].second, s, t)) {
      if (fail(backward[i].first, {{}, {fb.point(*r2)}, {}, {}})) return out;
    }
  }
  if (lang == Language::LF) {
    for (HistoryId g : fb.point_histories(t)) {
      if (!bisim_future_forward(a, b, rel, s, t, g)) {
        if (fail(Condition::F_f, {{}, {}, fb.leaf_name(g), {}})) return out;
        break;
      }
    }
    for (HistoryId h : fa.point_histories(s)) {
      if (!bisim_future_backward(a, b, rel, s, t, h)) {
        if (fail(Condition::F_b, {{}, {}, fa.leaf_name(h), {}})) return out;
        break;
      }
    }
  }
  return out;
}

}  // namespace detail

/// Every related pair is checked against PV and the back-and-forth
/// conditions (F-f/F-b in LF); the anchor condition B comes last.
inline BisimulationReport check_bisimulation(const Model& src, const Model& dst, const RelationMatrix& rel,
                                             std::pair<PointId, PointId> anchor, Language lang) {
  BisimulationReport report;
  for (const auto& [s, t] : rel.pairs()) {
    auto failures = detail::pair_failures(src, dst, rel, s, t, lang, false);
    report.failures.insert(report.failures.end(), failures.begin(), failures.end());
  }
  if (!rel.contains(anchor.first, anchor.second)) {
    const Point a = src.frame().point(anchor.first);
    const Point b = dst.frame().point(anchor.second);
    report.failures.push_back({Condition::B, a, b, {{a}, {b}, {}, {}}});
  }
  return report;
}

inline BisimulationReport check_bisimulation(const Model& src, const Model& dst, const PointRelation& rel,
                                             const std::pair<Point, Point>& anchor, Language lang) {
  return check_bisimulation(src, dst, to_matrix(src, dst, rel),
                            {src.frame().point_index(anchor.first), dst.frame().point_index(anchor.second)}, lang);
}

/// Whether every related pair satisfies PV and the back-and-forth conditions.
/// Stops at the first failure.
inline bool is_bisimulation(const Model& src, const Model& dst, const RelationMatrix& rel, Language lang) {
  for (const auto& [s, t] : rel.pairs()) {
    if (!detail::pair_failures(src, dst, rel, s, t, lang, true).empty()) return false;
  }
  return true;
}

/// Re-verifies one reported failure from its pair and witness alone.
inline bool replay_failure(const Model& src, const Model& dst, const RelationMatrix& rel,
                           const BisimulationFailure& failure, Language lang) {
  const Frame& fa = src.frame();
  const Frame& fb = dst.frame();
  const PointId s = fa.point_index(failure.source);
  const PointId t = fb.point_index(failure.target);
  const Witness& w = failure.witness;
  if (failure.condition == Condition::B) return !rel.contains(s, t);
  if (!rel.contains(s, t)) return false;

  auto forward = [&](detail::Rel kind) {
    const PointId r = fa.point_index(w.source.at(0));
    if (!detail::related(fa, kind, s, r)) return false;
    for (PointId r2 = 0; r2 < fb.point_count(); ++r2) {
      if (detail::related(fb, kind, t, r2) && rel.contains(r, r2)) return false;
    }
    return true;
  };
  auto backward = [&](detail::Rel kind) {
    const PointId r2 = fb.point_index(w.target.at(0));
    if (!detail::related(fb, kind, t, r2)) return false;
    for (PointId r = 0; r < fa.point_count(); ++r) {
      if (detail::related(fa, kind, s, r) && rel.contains(r, r2)) return false;
    }
    return true;
  };

  switch (failure.condition) {
    case Condition::PV: return src.holds(w.atom, s) != dst.holds(w.atom, t);
    case Condition::G_f: return forward(detail::Rel::succ);
    case Condition::H_f: return forward(detail::Rel::pred);
    case Condition::L_f: return forward(detail::Rel::same);
    case Condition::G_b: return backward(detail::Rel::succ);
    case Condition::H_b: return backward(detail::Rel::pred);
    case Condition::L_b: return backward(detail::Rel::same);
    case Condition::F_f: {
      if (lang != Language::LF) return false;
      auto g = fb.find_history(w.history);
      if (!g || !fb.passes(*g, fb.point_moment(t)) || fb.point_on(fb.point_moment(t), *g) != t) return false;
      return !detail::bisim_future_forward(src, dst, rel, s, t, *g);
    }
    case Condition::F_b: {
      if (lang != Language::LF) return false;
      auto h = fa.find_history(w.history);
      if (!h || !fa.passes(*h, fa.point_moment(s)) || fa.point_on(fa.point_moment(s), *h) != s) return false;
      return !detail::bisim_future_backward(src, dst, rel, s, t, *h);
    }
    case Condition::B: break;
  }
  return false;
}

/// Starts from all pairs agreeing on every atom and deletes violating pairs
/// until nothing changes. Every condition only asks for related witnesses, so
/// the result is the largest relation whose pairs all satisfy them.
inline RelationMatrix greatest_bisimulation_matrix(const Model& src, const Model& dst, Language lang) {
  const std::size_t n = src.frame().point_count();
  const std::size_t m = dst.frame().point_count();
  const auto atoms = detail::union_atoms(src, dst);
  RelationMatrix rel(n, m);
  for (PointId s = 0; s < n; ++s) {
    for (PointId t = 0; t < m; ++t) {
      bool agree = true;
      for (const auto& atom : atoms) agree = agree && src.holds(atom, s) == dst.holds(atom, t);
      if (agree) rel.insert(s, t);
    }
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& [s, t] : rel.pairs()) {
      if (!detail::pair_failures(src, dst, rel, s, t, lang, true).empty()) {
        rel.erase(s, t);
        changed = true;
      }
    }
  }
  return rel;
}

inline PointRelation greatest_bisimulation(const Model& src, const Model& dst, Language lang) {
  return to_relation(src, dst, greatest_bisimulation_matrix(src, dst, lang));
}

inline bool bisimilar(const Model& src, const Point& p, const Model& dst, const Point& q, Language lang) {
  const PointId a = src.frame().point_index(p);
  const PointId b = dst.frame().point_index(q);
  return greatest_bisimulation_matrix(src, dst, lang).contains(a, b);
}

constexpr int default_distinguishing_depth = 4;

/// Breadth-first over formulas by depth, built from up to two atoms of the
/// valuations ("p" if there are none). Formulas with the same pair of truth
/// sets on both models are interchangeable inside larger formulas, so only
/// the first of each is kept. Returns a formula of minimal depth on which
/// the points differ, or nothing if none exists up to `max_depth`.
inline std::optional<Formula> find_distinguishing_formula(const Model& src, const Point& p, const Model& dst,
                                                          const Point& q, Language lang,
                                                          int max_depth = default_distinguishing_depth) {
  const PointId a = src.frame().point_index(p);
  const PointId b = dst.frame().point_index(q);
  const auto all_atoms = detail::union_atoms(src, dst);
  for (const auto& atom : all_atoms) {
    if (src.holds(atom, a) != dst.holds(atom, b)) return Formula::atom(atom);
  }

  std::vector<std::string> atoms(all_atoms.begin(), all_atoms.end());
  if (atoms.size() > 2) atoms.resize(2);
  if (atoms.empty()) atoms.push_back("p");

  struct Candidate {
    Formula formula;
    PointSet left;
    PointSet right;
  };
  std::vector<Candidate> kept;
  std::set<std::pair<std::vector<Word>, std::vector<Word>>> seen;

  auto offer = [&](Formula f, PointSet left, PointSet right) -> bool {
    auto key = std::make_pair(std::vector<Word>(left.words().begin(), left.words().end()),
                              std::vector<Word>(right.words().begin(), right.words().end()));
    if (!seen.insert(std::move(key)).second) return false;
    const bool differs = left.test(a) != right.test(b);
    kept.push_back({std::move(f), std::move(left), std::move(right)});
    return differs;
  };

  for (const auto& atom : atoms) {
    if (offer(Formula::atom(atom), src.atom_extension(atom), dst.atom_extension(atom))) return kept.back().formula;
  }

  std::vector<Op> unary_ops{Op::Not, Op::G, Op::H, Op::L};
  if (lang == Language::LF) unary_ops.push_back(Op::F);

  std::size_t prev_begin = 0;
  for (int d = 1; d <= max_depth; ++d) {
    const std::size_t prev_end = kept.size();
    for (Op op : unary_ops) {
      for (std::size_t i = prev_begin; i < prev_end; ++i) {
        PointSet left(src.frame().point_count());
        PointSet right(dst.frame().point_count());
        clauses::apply_unary(src.frame(), Semantics::history, op, kept[i].left.words(), left.words());
        clauses::apply_unary(dst.frame(), Semantics::history, op, kept[i].right.words(), right.words());
        if (offer(Formula::unary(op, kept[i].formula), std::move(left), std::move(right))) return kept.back().formula;
      }
    }
    for (std::size_t i = 0; i < prev_end; ++i) {
      for (std::size_t j = 0; j < prev_end; ++j) {
        if (i < prev_begin && j < prev_begin) continue;
        PointSet left(src.frame().point_count());
        PointSet right(dst.frame().point_count());
        clauses::conjunction(kept[i].left.words(), kept[j].left.words(), left.words());
        clauses::conjunction(kept[i].right.words(), kept[j].right.words(), right.words());
        if (offer(Formula::conjunction(kept[i].formula, kept[j].formula), std::move(left), std::move(right))) {
          return kept.back().formula;
        }
      }
    }
    prev_begin = prev_end;
  }
  return std::nullopt;
}

}  // namespace itl
