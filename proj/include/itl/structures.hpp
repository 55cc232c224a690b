#pragma once

// Finite trees with indistinguishability functions, their points of
// evaluation, and the derived relations between points.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "itl/error.hpp"
#include "itl/point_set.hpp"

namespace itl {

using MomentId = std::size_t;
using HistoryId = std::size_t;
using ClassId = std::size_t;
using PointId = std::size_t;

/// Moments plus immediate-successor edges (parent, child); `<` is the
/// transitive closure of the edges. Forests are allowed.
struct Tree {
  std::vector<std::string> moments;
  std::vector<std::pair<std::string, std::string>> edges;

  friend bool operator==(const Tree&, const Tree&) = default;
};

/// For each moment, a partition of the histories through it. Histories are
/// named by their leaf.
struct IndistFunction {
  std::map<std::string, std::vector<std::vector<std::string>>> classes_at;

  friend bool operator==(const IndistFunction&, const IndistFunction&) = default;
};

/// A point of evaluation (moment, class); the class is the block at `moment`
/// containing the history that ends in leaf `rep`.
struct Point {
  std::string moment;
  std::string rep;

  auto operator<=>(const Point&) const = default;
};

/// Textual form `moment/rep`. The split is at the last '/'.
inline std::string to_string(const Point& p) { return p.moment + "/" + p.rep; }

inline Point parse_point(std::string_view text) {
  auto slash = text.rfind('/');
  if (slash == std::string_view::npos || slash == 0 || slash + 1 == text.size()) {
    throw InvalidPoint("point must have the form moment/rep, got '" + std::string(text) + "'");
  }
  return Point{std::string(text.substr(0, slash)), std::string(text.substr(slash + 1))};
}

/// A maximal chain, identified by its leaf. `moments` runs root to leaf.
struct History {
  std::string leaf;
  std::vector<std::string> moments;

  friend bool operator==(const History&, const History&) = default;
};

// ---------------------------------------------------------------------------
// Validation

enum class ViolationKind {
  empty_tree,
  duplicate_moment,
  edge_endpoint,
  duplicate_edge,
  cycle,
  downward_linearity,
  indist_domain,
  partition_cover,
  partition_overlap,
  empty_block,
  coherence,
};

inline std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::empty_tree: return "empty-tree";
    case ViolationKind::duplicate_moment: return "duplicate-moment";
    case ViolationKind::edge_endpoint: return "edge-endpoint";
    case ViolationKind::duplicate_edge: return "duplicate-edge";
    case ViolationKind::cycle: return "irreflexivity";
    case ViolationKind::downward_linearity: return "downward-linearity";
    case ViolationKind::indist_domain: return "indist-domain";
    case ViolationKind::partition_cover: return "partition-cover";
    case ViolationKind::partition_overlap: return "partition-overlap";
    case ViolationKind::empty_block: return "empty-block";
    case ViolationKind::coherence: return "coherence";
  }
  return "unknown";
}

/// Witness layouts:
///   cycle               the moments of the cycle, first repeated at the end
///   downward_linearity  (b, c, a): b and c precede a but are incomparable
///   partition_cover     (t, leaf): leaf misplaced at t, or missing from I_t
///   partition_overlap   (t, leaf)
///   coherence           (h, k, t, s): h I_t k, s < t, not h I_s k
struct Violation {
  ViolationKind kind;
  std::vector<std::string> witness;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }

  bool has(ViolationKind kind) const {
    return std::any_of(violations.begin(), violations.end(),
                       [kind](const Violation& v) { return v.kind == kind; });
  }

  const Violation* find(ViolationKind kind) const {
    auto it = std::find_if(violations.begin(), violations.end(),
                           [kind](const Violation& v) { return v.kind == kind; });
    return it == violations.end() ? nullptr : &*it;
  }
};

class ValidationError : public Error {
public:
  explicit ValidationError(ValidationReport report)
      : Error(describe(report)), report_(std::move(report)) {}

  const ValidationReport& report() const noexcept { return report_; }

private:
  static std::string describe(const ValidationReport& report) {
    std::string text = "invalid frame";
    for (const auto& v : report.violations) text += "; " + v.message;
    return text;
  }

  ValidationReport report_;
};

namespace detail {

inline std::string join(const std::vector<std::string>& items, std::string_view sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

// Order structure of a tree that already passed the tree checks. Moments are
// indexed in lexicographic order of their names, histories in lexicographic
// order of their leaves.
class TreeIndex {
public:
  explicit TreeIndex(const Tree& tree) {
    names_ = tree.moments;
    std::sort(names_.begin(), names_.end());
    const std::size_t n = names_.size();
    for (std::size_t i = 0; i < n; ++i) index_.emplace(names_[i], i);

    std::vector<std::vector<MomentId>> succ(n);
    std::vector<bool> has_child(n, false);
    for (const auto& [parent, child] : tree.edges) {
      succ[index_.at(parent)].push_back(index_.at(child));
      has_child[index_.at(parent)] = true;
    }

    less_.assign(n, std::vector<char>(n, 0));
    for (MomentId a = 0; a < n; ++a) {
      std::vector<MomentId> stack(succ[a]);
      while (!stack.empty()) {
        MomentId b = stack.back();
        stack.pop_back();
        if (less_[a][b]) continue;
        less_[a][b] = 1;
        for (MomentId c : succ[b]) stack.push_back(c);
      }
    }

    for (MomentId m = 0; m < n; ++m) {
      if (has_child[m]) continue;
      std::vector<MomentId> chain;
      for (MomentId s = 0; s < n; ++s) {
        if (less_[s][m]) chain.push_back(s);
      }
      // Down-sets are linear, so < is a total order on the chain.
      std::sort(chain.begin(), chain.end(), [this](MomentId x, MomentId y) { return less_[x][y]; });
      chain.push_back(m);
      leaf_of_.emplace(names_[m], chains_.size());
      leaves_.push_back(m);
      chains_.push_back(std::move(chain));
    }

    passes_.assign(chains_.size(), std::vector<char>(n, 0));
    through_.assign(n, {});
    for (HistoryId h = 0; h < chains_.size(); ++h) {
      for (MomentId m : chains_[h]) {
        passes_[h][m] = 1;
        through_[m].push_back(h);
      }
    }
  }

  std::size_t moment_count() const noexcept { return names_.size(); }
  const std::string& moment_name(MomentId m) const { return names_[m]; }
  std::optional<MomentId> find_moment(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  bool earlier(MomentId a, MomentId b) const { return less_[a][b] != 0; }

  std::size_t history_count() const noexcept { return chains_.size(); }
  const std::string& leaf_name(HistoryId h) const { return names_[leaves_[h]]; }
  std::optional<HistoryId> find_history(std::string_view leaf) const {
    auto it = leaf_of_.find(std::string(leaf));
    if (it == leaf_of_.end()) return std::nullopt;
    return it->second;
  }
  std::span<const MomentId> chain(HistoryId h) const { return chains_[h]; }
  bool passes(HistoryId h, MomentId m) const { return passes_[h][m] != 0; }
  std::span<const HistoryId> through(MomentId m) const { return through_[m]; }

private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, MomentId> index_;
  std::vector<std::vector<char>> less_;
  std::vector<MomentId> leaves_;
  std::unordered_map<std::string, HistoryId> leaf_of_;
  std::vector<std::vector<MomentId>> chains_;
  std::vector<std::vector<char>> passes_;
  std::vector<std::vector<HistoryId>> through_;
};

// Returns the moments of a cycle (first repeated at the end), or empty.
inline std::vector<std::string> find_cycle(const Tree& tree,
                                           const std::unordered_map<std::string, std::size_t>& index) {
  const std::size_t n = tree.moments.size();
  std::vector<std::vector<std::size_t>> succ(n);
  for (const auto& [parent, child] : tree.edges) succ[index.at(parent)].push_back(index.at(child));

  enum : char { white, grey, black };
  std::vector<char> colour(n, white);
  std::vector<std::size_t> path;
  std::vector<std::string> cycle;

  auto visit = [&](auto& self, std::size_t v) -> bool {
    colour[v] = grey;
    path.push_back(v);
    for (std::size_t w : succ[v]) {
      if (colour[w] == grey) {
        auto start = std::find(path.begin(), path.end(), w);
        for (auto it = start; it != path.end(); ++it) cycle.push_back(tree.moments[*it]);
        cycle.push_back(tree.moments[w]);
        return true;
      }
      if (colour[w] == white && self(self, w)) return true;
    }
    path.pop_back();
    colour[v] = black;
    return false;
  };
  for (std::size_t v = 0; v < n; ++v) {
    if (colour[v] == white && visit(visit, v)) break;
  }
  return cycle;
}

}  // namespace detail

/// Checks the tree invariants only: declared endpoints, no duplicates,
/// irreflexive closure, downward linearity.
inline ValidationReport validate_tree(const Tree& tree) {
  ValidationReport report;
  auto add = [&](ViolationKind kind, std::vector<std::string> witness, std::string message) {
    report.violations.push_back({kind, std::move(witness), std::move(message)});
  };

  if (tree.moments.empty()) {
    add(ViolationKind::empty_tree, {}, "tree has no moments");
    return report;
  }

  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < tree.moments.size(); ++i) {
    if (!index.emplace(tree.moments[i], i).second) {
      add(ViolationKind::duplicate_moment, {tree.moments[i]}, "moment '" + tree.moments[i] + "' declared twice");
    }
  }
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& [parent, child] : tree.edges) {
    for (const auto& end : {parent, child}) {
      if (!index.contains(end)) {
        add(ViolationKind::edge_endpoint, {parent, child},
            "edge (" + parent + ", " + child + ") names undeclared moment '" + end + "'");
      }
    }
    if (!seen.emplace(parent, child).second) {
      add(ViolationKind::duplicate_edge, {parent, child}, "edge (" + parent + ", " + child + ") listed twice");
    }
  }
  if (!report.ok()) return report;

  if (auto cycle = detail::find_cycle(tree, index); !cycle.empty()) {
    add(ViolationKind::cycle, cycle, "order is not irreflexive: cycle " + detail::join(cycle, " < "));
    return report;
  }

  // Acyclic now, so the closure is well defined. Downward linearity reduces to
  // pairwise comparability of each moment's immediate predecessors.
  const detail::TreeIndex order(tree);
  std::map<std::string, std::vector<std::string>> preds;
  std::vector<std::string> children_in_order;
  for (const auto& [parent, child] : tree.edges) {
    auto& list = preds[child];
    if (list.empty()) children_in_order.push_back(child);
    list.push_back(parent);
  }
  for (const auto& a : children_in_order) {
    const auto& list = preds[a];
    bool reported = false;
    for (std::size_t i = 0; i < list.size() && !reported; ++i) {
      for (std::size_t j = i + 1; j < list.size() && !reported; ++j) {
        MomentId b = *order.find_moment(list[i]);
        MomentId c = *order.find_moment(list[j]);
        if (!order.earlier(b, c) && !order.earlier(c, b)) {
          add(ViolationKind::downward_linearity, {list[i], list[j], a},
              "order is not downward linear: " + list[i] + " and " + list[j] + " both precede " + a +
                  " but are incomparable");
          reported = true;
        }
      }
    }
  }
  return report;
}

/// Checks every tree and indistinguishability invariant. Violations are data;
/// indistinguishability checks run only on a well-formed tree.
inline ValidationReport validate_frame(const Tree& tree, const IndistFunction& indist) {
  ValidationReport report = validate_tree(tree);
  if (!report.ok()) return report;
  auto add = [&](ViolationKind kind, std::vector<std::string> witness, std::string message) {
    report.violations.push_back({kind, std::move(witness), std::move(message)});
  };

  const detail::TreeIndex order(tree);
  for (const auto& [moment, blocks] : indist.classes_at) {
    if (!order.find_moment(moment)) {
      add(ViolationKind::indist_domain, {moment}, "indistinguishability given for undeclared moment '" + moment + "'");
    }
  }
  for (MomentId t = 0; t < order.moment_count(); ++t) {
    const auto& name = order.moment_name(t);
    auto it = indist.classes_at.find(name);
    if (it == indist.classes_at.end()) {
      add(ViolationKind::indist_domain, {name}, "no indistinguishability classes at moment '" + name + "'");
      continue;
    }
    std::set<HistoryId> seen;
    for (const auto& block : it->second) {
      if (block.empty()) add(ViolationKind::empty_block, {name}, "empty class at moment '" + name + "'");
      for (const auto& leaf : block) {
        auto h = order.find_history(leaf);
        if (!h || !order.passes(*h, t)) {
          add(ViolationKind::partition_cover, {name, leaf},
              "classes at '" + name + "' must cover exactly the histories through it: '" + leaf +
                  "' does not pass through '" + name + "'");
        } else if (!seen.insert(*h).second) {
          add(ViolationKind::partition_overlap, {name, leaf},
              "history '" + leaf + "' appears in more than one class at '" + name + "'");
        }
      }
    }
    for (HistoryId h : order.through(t)) {
      if (!seen.contains(h)) {
        add(ViolationKind::partition_cover, {name, order.leaf_name(h)},
            "classes at '" + name + "' must cover exactly the histories through it: '" + order.leaf_name(h) +
                "' is missing");
      }
    }
  }
  if (!report.ok()) return report;

  // Backward coherence: every block at t lies inside one block at each s < t.
  std::vector<std::vector<std::size_t>> block_of(order.moment_count(),
                                                 std::vector<std::size_t>(order.history_count(), 0));
  for (MomentId t = 0; t < order.moment_count(); ++t) {
    const auto& blocks = indist.classes_at.at(order.moment_name(t));
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      for (const auto& leaf : blocks[b]) block_of[t][*order.find_history(leaf)] = b;
    }
  }
  for (MomentId t = 0; t < order.moment_count(); ++t) {
    const auto& name = order.moment_name(t);
    bool reported = false;
    for (const auto& block : indist.classes_at.at(name)) {
      HistoryId h = *order.find_history(block.front());
      for (const auto& leaf : block) {
        HistoryId k = *order.find_history(leaf);
        for (MomentId s : order.chain(h)) {
          if (reported || !order.earlier(s, t)) continue;
          if (block_of[s][h] != block_of[s][k]) {
            const auto& sname = order.moment_name(s);
            add(ViolationKind::coherence, {block.front(), leaf, name, sname},
                "indistinguishability is not backward coherent: '" + block.front() + "' and '" + leaf +
                    "' share a class at '" + name + "' but not at earlier '" + sname + "'");
            reported = true;
          }
        }
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Frames

/// A validated frame: tree plus indistinguishability function, with the
/// derived indices. Immutable; copies share one index.
class Frame {
public:
  /// Throws ValidationError unless validate_frame(tree, indist) is ok.
  static Frame build(Tree tree, IndistFunction indist) {
    auto report = validate_frame(tree, indist);
    if (!report.ok()) throw ValidationError(std::move(report));
    return Frame(std::make_shared<const Impl>(std::move(tree), std::move(indist)));
  }

  const Tree& tree() const noexcept { return impl_->tree; }
  const IndistFunction& indist() const noexcept { return impl_->indist; }

  std::size_t moment_count() const noexcept { return order().moment_count(); }
  const std::string& moment_name(MomentId m) const { return order().moment_name(m); }
  std::optional<MomentId> find_moment(std::string_view name) const { return order().find_moment(name); }
  MomentId moment_index(std::string_view name) const {
    auto m = find_moment(name);
    if (!m) throw InvalidPoint("unknown moment '" + std::string(name) + "'");
    return *m;
  }
  /// a < b
  bool earlier(MomentId a, MomentId b) const { return order().earlier(a, b); }

  std::size_t history_count() const noexcept { return order().history_count(); }
  const std::string& leaf_name(HistoryId h) const { return order().leaf_name(h); }
  std::optional<HistoryId> find_history(std::string_view leaf) const { return order().find_history(leaf); }
  std::span<const MomentId> history_moments(HistoryId h) const { return order().chain(h); }
  bool passes(HistoryId h, MomentId m) const { return order().passes(h, m); }
  std::span<const HistoryId> histories_at(MomentId m) const { return order().through(m); }

  std::size_t class_count(MomentId m) const { return impl_->classes[m].size(); }
  std::span<const HistoryId> block(MomentId m, ClassId c) const { return impl_->classes[m][c]; }
  /// [h]_{I_m}; h must pass through m.
  ClassId class_of(MomentId m, HistoryId h) const { return impl_->class_of[m][h]; }

  std::size_t point_count() const noexcept { return impl_->points.size(); }
  PointId point_at(MomentId m, ClassId c) const { return impl_->point_of[m][c]; }
  /// The point (m, [h]_{I_m}).
  PointId point_on(MomentId m, HistoryId h) const { return point_at(m, class_of(m, h)); }
  MomentId point_moment(PointId p) const { return impl_->points[p].first; }
  ClassId point_class(PointId p) const { return impl_->points[p].second; }
  std::span<const HistoryId> point_histories(PointId p) const {
    return block(point_moment(p), point_class(p));
  }

  /// Canonical form: the representative is the smallest leaf of the class.
  Point point(PointId p) const {
    return Point{moment_name(point_moment(p)), leaf_name(point_histories(p).front())};
  }

  std::optional<PointId> find_point(const Point& p) const {
    auto m = find_moment(p.moment);
    auto h = find_history(p.rep);
    if (!m || !h || !passes(*h, *m)) return std::nullopt;
    return point_on(*m, *h);
  }

  PointId point_index(const Point& p) const {
    if (auto id = find_point(p)) return *id;
    throw InvalidPoint("'" + to_string(p) + "' is not a point of the frame");
  }

  Point canonical(const Point& p) const { return point(point_index(p)); }

  /// Identity of the shared index; equal for copies of the same frame.
  const void* identity() const noexcept { return impl_.get(); }

private:
  struct Impl {
    Impl(Tree t, IndistFunction i) : tree(std::move(t)), indist(std::move(i)), order(tree) {
      const std::size_t n = order.moment_count();
      classes.resize(n);
      class_of.assign(n, std::vector<ClassId>(order.history_count(), 0));
      point_of.resize(n);
      for (MomentId m = 0; m < n; ++m) {
        for (const auto& names : indist.classes_at.at(order.moment_name(m))) {
          std::vector<HistoryId> ids;
          for (const auto& leaf : names) ids.push_back(*order.find_history(leaf));
          std::sort(ids.begin(), ids.end());
          classes[m].push_back(std::move(ids));
        }
        std::sort(classes[m].begin(), classes[m].end());
        for (ClassId c = 0; c < classes[m].size(); ++c) {
          for (HistoryId h : classes[m][c]) class_of[m][h] = c;
          point_of[m].push_back(points.size());
          points.emplace_back(m, c);
        }
      }
    }

    Tree tree;
    IndistFunction indist;
    detail::TreeIndex order;
    std::vector<std::vector<std::vector<HistoryId>>> classes;
    std::vector<std::vector<ClassId>> class_of;
    std::vector<std::vector<PointId>> point_of;
    std::vector<std::pair<MomentId, ClassId>> points;
  };

  explicit Frame(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  const detail::TreeIndex& order() const noexcept { return impl_->order; }

  std::shared_ptr<const Impl> impl_;
};

// ---------------------------------------------------------------------------
// Operations on trees and frames

namespace detail {

inline std::vector<History> collect_histories(const TreeIndex& order, std::span<const HistoryId> ids) {
  std::vector<History> out;
  for (HistoryId h : ids) {
    History history{order.leaf_name(h), {}};
    for (MomentId m : order.chain(h)) history.moments.push_back(order.moment_name(m));
    out.push_back(std::move(history));
  }
  return out;
}

inline TreeIndex checked_index(const Tree& tree) {
  auto report = validate_tree(tree);
  if (!report.ok()) throw ValidationError(std::move(report));
  return TreeIndex(tree);
}

}  // namespace detail

/// One history per maximal moment, ordered by leaf name.
inline std::vector<History> histories(const Tree& tree) {
  const auto order = detail::checked_index(tree);
  std::vector<HistoryId> all(order.history_count());
  for (HistoryId h = 0; h < all.size(); ++h) all[h] = h;
  return detail::collect_histories(order, all);
}

inline std::vector<History> histories(const Frame& frame) { return histories(frame.tree()); }

inline std::vector<History> histories_through(const Frame& frame, std::string_view moment) {
  const auto order = detail::checked_index(frame.tree());
  return detail::collect_histories(order, order.through(frame.moment_index(moment)));
}

/// All points in canonical order (moment name, then representative).
inline std::vector<Point> points(const Frame& frame) {
  std::vector<Point> out;
  out.reserve(frame.point_count());
  for (PointId p = 0; p < frame.point_count(); ++p) out.push_back(frame.point(p));
  return out;
}

/// The class of `p` as a sorted list of history ids.
inline std::span<const HistoryId> class_histories(const Frame& frame, PointId p) {
  return frame.point_histories(p);
}

/// p ≺ q: p's moment is earlier and p's class contains q's class.
inline bool precedes(const Frame& frame, PointId p, PointId q) {
  if (!frame.earlier(frame.point_moment(p), frame.point_moment(q))) return false;
  auto outer = frame.point_histories(p);
  auto inner = frame.point_histories(q);
  return std::includes(outer.begin(), outer.end(), inner.begin(), inner.end());
}

inline bool precedes(const Frame& frame, const Point& p, const Point& q) {
  return precedes(frame, frame.point_index(p), frame.point_index(q));
}

/// p ∼ q: both are classes at the same moment.
inline bool same_moment(const Frame& frame, PointId p, PointId q) {
  return frame.point_moment(p) == frame.point_moment(q);
}

inline bool same_moment(const Frame& frame, const Point& p, const Point& q) {
  return same_moment(frame, frame.point_index(p), frame.point_index(q));
}

/// Histories are identified at t iff they coincide or share a moment after t.
inline IndistFunction undividedness_indist(const Tree& tree) {
  const auto order = detail::checked_index(tree);
  IndistFunction indist;
  for (MomentId t = 0; t < order.moment_count(); ++t) {
    auto& blocks = indist.classes_at[order.moment_name(t)];
    std::vector<bool> placed(order.history_count(), false);
    for (HistoryId h : order.through(t)) {
      if (placed[h]) continue;
      std::vector<std::string> block;
      for (HistoryId k : order.through(t)) {
        if (placed[k]) continue;
        bool together = h == k;
        for (MomentId s : order.chain(h)) {
          if (together) break;
          together = order.earlier(t, s) && order.passes(k, s);
        }
        if (together) {
          placed[k] = true;
          block.push_back(order.leaf_name(k));
        }
      }
      blocks.push_back(std::move(block));
    }
  }
  return indist;
}

// ---------------------------------------------------------------------------
// Models

/// Atom name to the set of points where it holds.
using Valuation = std::map<std::string, std::set<Point>>;

/// Atom name to its extension over a frame's point ids.
using AtomExtensions = std::map<std::string, PointSet, std::less<>>;

/// A frame with a valuation whose points are stored canonically.
class Model {
public:
  /// Throws InvalidPoint if the valuation names a point outside the frame.
  static Model build(Frame frame, const Valuation& valuation) {
    Model model(std::move(frame));
    for (const auto& [atom, pts] : valuation) {
      auto& canonical = model.valuation_[atom];
      PointSet ext(model.frame_.point_count());
      for (const auto& p : pts) {
        PointId id = model.frame_.find_point(p).value_or(model.frame_.point_count());
        if (id == model.frame_.point_count()) {
          throw InvalidPoint("valuation of '" + atom + "' names '" + to_string(p) + "', which is not a point of the frame");
        }
        ext.set(id);
        canonical.insert(model.frame_.point(id));
      }
      model.extensions_.emplace(atom, std::move(ext));
    }
    return model;
  }

  const Frame& frame() const noexcept { return frame_; }
  const Valuation& valuation() const noexcept { return valuation_; }

  /// Extension of an atom; atoms absent from the valuation hold nowhere.
  const PointSet& atom_extension(const std::string& atom) const {
    auto it = extensions_.find(atom);
    return it == extensions_.end() ? empty_ : it->second;
  }

  bool holds(const std::string& atom, PointId p) const { return atom_extension(atom).test(p); }

  const AtomExtensions& extensions() const noexcept { return extensions_; }

  std::set<std::string> atoms() const {
    std::set<std::string> out;
    for (const auto& [atom, pts] : valuation_) out.insert(atom);
    return out;
  }

private:
  explicit Model(Frame frame) : frame_(std::move(frame)), empty_(frame_.point_count()) {}

  Frame frame_;
  Valuation valuation_;
  AtomExtensions extensions_;
  PointSet empty_;
};

}  // namespace itl
