#pragma once

// Frame and model p-morphisms: point maps checked condition by condition,
// the set-equality characterisation, exhaustive search, and valuation
// pullback along a map.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "itl/conditions.hpp"
#include "itl/error.hpp"
#include "itl/formula.hpp"
#include "itl/structures.hpp"

namespace itl {

/// A total function from the points of a source frame to points of a target
/// frame, given pointwise.
struct PointMap {
  std::vector<std::pair<Point, Point>> pairs;

  friend bool operator==(const PointMap&, const PointMap&) = default;
};

/// Index form of a map: image[p] is the target point id of source point p.
using Image = std::vector<PointId>;

/// Throws MapError if the map is partial, not a function, or names points
/// outside either frame.
inline Image resolve_map(const Frame& src, const Frame& dst, const PointMap& map) {
  constexpr PointId unset = static_cast<PointId>(-1);
  Image image(src.point_count(), unset);
  for (const auto& [from, to] : map.pairs) {
    auto p = src.find_point(from);
    if (!p) throw MapError("'" + to_string(from) + "' is not a point of the source frame");
    auto q = dst.find_point(to);
    if (!q) throw MapError("'" + to_string(to) + "' is not a point of the target frame");
    if (image[*p] != unset && image[*p] != *q) {
      throw MapError("map sends '" + to_string(src.point(*p)) + "' to two different points");
    }
    image[*p] = *q;
  }
  for (PointId p = 0; p < image.size(); ++p) {
    if (image[p] == unset) throw MapError("partial map: no image for '" + to_string(src.point(p)) + "'");
  }
  return image;
}

/// Canonical pointwise form, ordered by source point.
inline PointMap to_point_map(const Frame& src, const Frame& dst, std::span<const PointId> image) {
  PointMap map;
  for (PointId p = 0; p < image.size(); ++p) map.pairs.emplace_back(src.point(p), dst.point(image[p]));
  return map;
}

struct ConditionResult {
  Condition condition;
  std::vector<Witness> violations;  // canonical order; first is the minimal witness

  bool passed() const noexcept { return violations.empty(); }
};

struct MorphismReport {
  std::vector<ConditionResult> results;

  bool ok() const {
    return std::all_of(results.begin(), results.end(), [](const ConditionResult& r) { return r.passed(); });
  }

  const ConditionResult* find(Condition c) const {
    for (const auto& r : results) {
      if (r.condition == c) return &r;
    }
    return nullptr;
  }

  bool passed(Condition c) const {
    const auto* r = find(c);
    return r != nullptr && r->passed();
  }
};

namespace detail {

// Each checker appends up to `limit` witnesses and returns whether none was found.

inline bool check_g_forward(const Frame& src, const Frame& dst, std::span<const PointId> f, std::size_t limit,
                            std::vector<Witness>& out) {
  for (PointId p = 0; p < src.point_count(); ++p) {
    for (PointId q = 0; q < src.point_count(); ++q) {
      if (out.size() >= limit) return out.empty();
      if (precedes(src, p, q) && !precedes(dst, f[p], f[q])) out.push_back({{src.point(p), src.point(q)}, {}, {}, {}});
    }
  }
  return out.empty();
}

inline bool check_l_forward(const Frame& src, const Frame& dst, std::span<const PointId> f, std::size_t limit,
                            std::vector<Witness>& out) {
  for (PointId p = 0; p < src.point_count(); ++p) {
    for (PointId q = 0; q < src.point_count(); ++q) {
      if (out.size() >= limit) return out.empty();
      if (same_moment(src, p, q) && !same_moment(dst, f[p], f[q])) {
        out.push_back({{src.point(p), src.point(q)}, {}, {}, {}});
      }
    }
  }
  return out.empty();
}

// Back conditions: whenever f(p) R' q', some q with p R q has f(q) = q'.
template <class SrcRel, class DstRel>
bool check_back(const Frame& src, const Frame& dst, std::span<const PointId> f, SrcRel src_rel, DstRel dst_rel,
                std::size_t limit, std::vector<Witness>& out) {
  for (PointId p = 0; p < src.point_count(); ++p) {
    for (PointId target = 0; target < dst.point_count(); ++target) {
      if (out.size() >= limit) return out.empty();
      if (!dst_rel(f[p], target)) continue;
      bool answered = false;
      for (PointId q = 0; q < src.point_count() && !answered; ++q) answered = src_rel(p, q) && f[q] == target;
      if (!answered) out.push_back({{src.point(p)}, {dst.point(target)}, {}, {}});
    }
  }
  return out.empty();
}

// Some h in p's class whose every later moment s maps onto a later moment of
// target history `h_dst`: f((s,[h]_s)) = (s', [h_dst]_s') with f1(p) <' s'.
inline bool future_forward_holds(const Frame& src, const Frame& dst, std::span<const PointId> f, PointId p,
                                 HistoryId h_dst) {
  const MomentId t = src.point_moment(p);
  const MomentId t_dst = dst.point_moment(f[p]);
  for (HistoryId h : src.point_histories(p)) {
    bool every = true;
    for (MomentId s : src.history_moments(h)) {
      if (!every) break;
      if (!src.earlier(t, s)) continue;
      const PointId image = f[src.point_on(s, h)];
      bool found = false;
      for (MomentId s_dst : dst.history_moments(h_dst)) {
        if (dst.earlier(t_dst, s_dst) && dst.point_on(s_dst, h_dst) == image) found = true;
      }
      every = found;
    }
    if (every) return true;
  }
  return false;
}

// Some h' in f2(p) whose every later moment s' is hit from a later moment of
// source history `h`.
inline bool future_backward_holds(const Frame& src, const Frame& dst, std::span<const PointId> f, PointId p,
                                  HistoryId h) {
  const MomentId t = src.point_moment(p);
  const MomentId t_dst = dst.point_moment(f[p]);
  for (HistoryId h_dst : dst.point_histories(f[p])) {
    bool every = true;
    for (MomentId s_dst : dst.history_moments(h_dst)) {
      if (!every) break;
      if (!dst.earlier(t_dst, s_dst)) continue;
      const PointId wanted = dst.point_on(s_dst, h_dst);
      bool found = false;
      for (MomentId s : src.history_moments(h)) {
        if (src.earlier(t, s) && f[src.point_on(s, h)] == wanted) found = true;
      }
      every = found;
    }
    if (every) return true;
  }
  return false;
}

inline bool check_f_forward(const Frame& src, const Frame& dst, std::span<const PointId> f, std::size_t limit,
                            std::vector<Witness>& out) {
  for (PointId p = 0; p < src.point_count(); ++p) {
    for (HistoryId h_dst : dst.point_histories(f[p])) {
      if (out.size() >= limit) return out.empty();
      if (!future_forward_holds(src, dst, f, p, h_dst)) out.push_back({{src.point(p)}, {}, dst.leaf_name(h_dst), {}});
    }
  }
  return out.empty();
}

inline bool check_f_backward(const Frame& src, const Frame& dst, std::span<const PointId> f, std::size_t limit,
                             std::vector<Witness>& out) {
  for (PointId p = 0; p < src.point_count(); ++p) {
    for (HistoryId h : src.point_histories(p)) {
      if (out.size() >= limit) return out.empty();
      if (!future_backward_holds(src, dst, f, p, h)) out.push_back({{src.point(p)}, {}, src.leaf_name(h), {}});
    }
  }
  return out.empty();
}

inline bool check_pv(const Model& src, const Model& dst, std::span<const PointId> f, std::size_t limit,
                     std::vector<Witness>& out) {
  const auto atoms = union_atoms(src, dst);
  for (PointId p = 0; p < src.frame().point_count(); ++p) {
    for (const auto& atom : atoms) {
      if (out.size() >= limit) return out.empty();
      if (src.holds(atom, p) != dst.holds(atom, f[p])) {
        out.push_back({{src.frame().point(p)}, {dst.frame().point(f[p])}, {}, atom});
      }
    }
  }
  return out.empty();
}

inline MorphismReport frame_report(const Frame& src, const Frame& dst, std::span<const PointId> f, Language lang,
                                   std::size_t limit) {
  auto dst_prec = [&dst](PointId a, PointId b) { return precedes(dst, a, b); };
  auto dst_succ = [&dst](PointId a, PointId b) { return precedes(dst, b, a); };
  auto dst_same = [&dst](PointId a, PointId b) { return same_moment(dst, a, b); };
  auto src_prec = [&src](PointId a, PointId b) { return precedes(src, a, b); };
  auto src_succ = [&src](PointId a, PointId b) { return precedes(src, b, a); };
  auto src_same = [&src](PointId a, PointId b) { return same_moment(src, a, b); };

  MorphismReport report;
  auto run = [&](Condition c, auto&& check) {
    ConditionResult r{c, {}};
    check(r.violations);
    report.results.push_back(std::move(r));
  };
  run(Condition::G_f, [&](auto& out) { check_g_forward(src, dst, f, limit, out); });
  run(Condition::G_b, [&](auto& out) { check_back(src, dst, f, src_prec, dst_prec, limit, out); });
  run(Condition::H_b, [&](auto& out) { check_back(src, dst, f, src_succ, dst_succ, limit, out); });
  run(Condition::L_f, [&](auto& out) { check_l_forward(src, dst, f, limit, out); });
  run(Condition::L_b, [&](auto& out) { check_back(src, dst, f, src_same, dst_same, limit, out); });
  if (lang == Language::LF) {
    run(Condition::F_f, [&](auto& out) { check_f_forward(src, dst, f, limit, out); });
    run(Condition::F_b, [&](auto& out) { check_f_backward(src, dst, f, limit, out); });
  }
  return report;
}

inline void require_total(const Frame& src, const Frame& dst, std::span<const PointId> f) {
  if (f.size() != src.point_count()) throw MapError("map must assign an image to every source point");
  for (PointId q : f) {
    if (q >= dst.point_count()) throw MapError("map image outside the target frame");
  }
}

}  // namespace detail

constexpr std::size_t all_witnesses = static_cast<std::size_t>(-1);

/// G-f, G-b, H-b, L-f, L-b, and in LF also F-f, F-b. Each condition lists up
/// to `witness_limit` violations in canonical order.
inline MorphismReport check_frame_pmorphism(const Frame& src, const Frame& dst, std::span<const PointId> image,
                                            Language lang, std::size_t witness_limit = all_witnesses) {
  detail::require_total(src, dst, image);
  return detail::frame_report(src, dst, image, lang, witness_limit);
}

inline MorphismReport check_frame_pmorphism(const Frame& src, const Frame& dst, const PointMap& map, Language lang,
                                            std::size_t witness_limit = all_witnesses) {
  return check_frame_pmorphism(src, dst, resolve_map(src, dst, map), lang, witness_limit);
}

/// Frame conditions plus PV over every atom of either valuation.
inline MorphismReport check_model_pmorphism(const Model& src, const Model& dst, std::span<const PointId> image,
                                            Language lang, std::size_t witness_limit = all_witnesses) {
  auto report = check_frame_pmorphism(src.frame(), dst.frame(), image, lang, witness_limit);
  ConditionResult pv{Condition::PV, {}};
  detail::check_pv(src, dst, image, witness_limit, pv.violations);
  report.results.push_back(std::move(pv));
  return report;
}

inline MorphismReport check_model_pmorphism(const Model& src, const Model& dst, const PointMap& map, Language lang,
                                            std::size_t witness_limit = all_witnesses) {
  return check_model_pmorphism(src, dst, resolve_map(src.frame(), dst.frame(), map), lang, witness_limit);
}

inline bool is_frame_pmorphism(const Frame& src, const Frame& dst, std::span<const PointId> image, Language lang) {
  return check_frame_pmorphism(src, dst, image, lang, 1).ok();
}

/// For every source point and S in {≺, ≻, ∼}: the image of its S-successors
/// equals the S'-successors of its image.
inline bool check_set_characterization(const Frame& src, const Frame& dst, std::span<const PointId> image) {
  detail::require_total(src, dst, image);
  using Rel = std::function<bool(const Frame&, PointId, PointId)>;
  const std::vector<Rel> relations{
      [](const Frame& fr, PointId a, PointId b) { return precedes(fr, a, b); },
      [](const Frame& fr, PointId a, PointId b) { return precedes(fr, b, a); },
      [](const Frame& fr, PointId a, PointId b) { return same_moment(fr, a, b); },
  };
  for (PointId p = 0; p < src.point_count(); ++p) {
    for (const auto& rel : relations) {
      std::vector<bool> mapped(dst.point_count(), false);
      for (PointId q = 0; q < src.point_count(); ++q) {
        if (rel(src, p, q)) mapped[image[q]] = true;
      }
      for (PointId r = 0; r < dst.point_count(); ++r) {
        if (mapped[r] != rel(dst, image[p], r)) return false;
      }
    }
  }
  return true;
}

inline bool check_set_characterization(const Frame& src, const Frame& dst, const PointMap& map) {
  return check_set_characterization(src, dst, resolve_map(src, dst, map));
}

/// Re-verifies a reported violation from its witness alone.
inline bool replay_violation(const Frame& src, const Frame& dst, std::span<const PointId> f, Condition c,
                             const Witness& w) {
  auto sp = [&](std::size_t i) { return src.point_index(w.source.at(i)); };
  auto tp = [&](std::size_t i) { return dst.point_index(w.target.at(i)); };
  switch (c) {
    case Condition::G_f: return precedes(src, sp(0), sp(1)) && !precedes(dst, f[sp(0)], f[sp(1)]);
    case Condition::L_f: return same_moment(src, sp(0), sp(1)) && !same_moment(dst, f[sp(0)], f[sp(1)]);
    case Condition::G_b:
    case Condition::H_b:
    case Condition::L_b: {
      const PointId p = sp(0);
      const PointId target = tp(0);
      auto rel = [&](const Frame& fr, PointId a, PointId b) {
        if (c == Condition::G_b) return precedes(fr, a, b);
        if (c == Condition::H_b) return precedes(fr, b, a);
        return same_moment(fr, a, b);
      };
      if (!rel(dst, f[p], target)) return false;
      for (PointId q = 0; q < src.point_count(); ++q) {
        if (rel(src, p, q) && f[q] == target) return false;
      }
      return true;
    }
    case Condition::F_f: {
      auto h_dst = dst.find_history(w.history);
      const PointId p = sp(0);
      if (!h_dst || !dst.passes(*h_dst, dst.point_moment(f[p])) || dst.point_on(dst.point_moment(f[p]), *h_dst) != f[p]) {
        return false;
      }
      return !detail::future_forward_holds(src, dst, f, p, *h_dst);
    }
    case Condition::F_b: {
      auto h = src.find_history(w.history);
      const PointId p = sp(0);
      if (!h || !src.passes(*h, src.point_moment(p)) || src.point_on(src.point_moment(p), *h) != p) return false;
      return !detail::future_backward_holds(src, dst, f, p, *h);
    }
    case Condition::H_f:
    case Condition::PV:
    case Condition::B: break;
  }
  return false;
}

inline bool replay_violation(const Model& src, const Model& dst, std::span<const PointId> f, Condition c,
                             const Witness& w) {
  if (c != Condition::PV) return replay_violation(src.frame(), dst.frame(), f, c, w);
  const PointId p = src.frame().point_index(w.source.at(0));
  return src.holds(w.atom, p) != dst.holds(w.atom, f[p]);
}

// ---------------------------------------------------------------------------
// Search

constexpr std::size_t default_search_bound = 7;

struct SearchOptions {
  bool surjective = false;
  std::optional<std::size_t> limit;
  std::size_t bound = default_search_bound;
};

/// Enumerates every total map in canonical order (lexicographic on the image
/// vector) that is a frame p-morphism. `visit` returns false to stop.
inline void for_each_pmorphism(const Frame& src, const Frame& dst, Language lang, const SearchOptions& options,
                               const std::function<bool(std::span<const PointId>)>& visit) {
  if (src.point_count() > options.bound || dst.point_count() > options.bound) {
    throw BoundError("p-morphism search limited to frames of at most " + std::to_string(options.bound) +
                     " points (source has " + std::to_string(src.point_count()) + ", target " +
                     std::to_string(dst.point_count()) + ")");
  }
  const std::size_t n = src.point_count();
  const std::size_t m = dst.point_count();
  Image image(n, 0);
  std::vector<std::size_t> hits(m, 0);
  std::size_t covered = 0;
  std::size_t emitted = 0;
  bool stop = false;

  // Forward conditions among already-assigned points.
  auto consistent = [&](PointId k) {
    for (PointId i = 0; i <= k; ++i) {
      if (precedes(src, i, k) && !precedes(dst, image[i], image[k])) return false;
      if (precedes(src, k, i) && !precedes(dst, image[k], image[i])) return false;
      if (same_moment(src, i, k) && !same_moment(dst, image[i], image[k])) return false;
    }
    return true;
  };

  auto extend = [&](auto& self, PointId k) -> void {
    if (stop) return;
    if (k == n) {
      if (options.surjective && covered != m) return;
      if (!is_frame_pmorphism(src, dst, image, lang)) return;
      ++emitted;
      if (!visit(image) || (options.limit && emitted >= *options.limit)) stop = true;
      return;
    }
    for (PointId target = 0; target < m && !stop; ++target) {
      image[k] = target;
      if (hits[target]++ == 0) ++covered;
      const bool can_cover = !options.surjective || covered + (n - k - 1) >= m;
      if (can_cover && consistent(k)) self(self, k + 1);
      if (--hits[target] == 0) --covered;
    }
  };
  extend(extend, 0);
}

inline std::vector<PointMap> search_pmorphisms(const Frame& src, const Frame& dst, Language lang,
                                               const SearchOptions& options = {}) {
  std::vector<PointMap> out;
  for_each_pmorphism(src, dst, lang, options, [&](std::span<const PointId> image) {
    out.push_back(to_point_map(src, dst, image));
    return true;
  });
  return out;
}

/// V(p) = { x : f(x) in V'(p) } for every atom of the target valuation.
inline Valuation pullback_valuation(const Frame& src, const Frame& dst, const Valuation& target,
                                    std::span<const PointId> image) {
  detail::require_total(src, dst, image);
  Valuation out;
  for (const auto& [atom, pts] : target) {
    std::set<PointId> ids;
    for (const auto& pt : pts) ids.insert(dst.point_index(pt));
    auto& pre = out[atom];
    for (PointId p = 0; p < image.size(); ++p) {
      if (ids.contains(image[p])) pre.insert(src.point(p));
    }
  }
  return out;
}

inline Valuation pullback_valuation(const Frame& src, const Frame& dst, const Valuation& target, const PointMap& map) {
  return pullback_valuation(src, dst, target, resolve_map(src, dst, map));
}

/// The graph {(x, f(x))} of a map.
inline std::vector<std::pair<PointId, PointId>> graph(std::span<const PointId> image) {
  std::vector<std::pair<PointId, PointId>> out;
  for (PointId p = 0; p < image.size(); ++p) out.emplace_back(p, image[p]);
  return out;
}

}  // namespace itl
