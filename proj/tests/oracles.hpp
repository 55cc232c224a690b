#pragma once

// Slow, direct re-implementations of the definitions, working on names and
// std::set rather than the library's indices. Tests compare against these.

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "itl/formula.hpp"
#include "itl/structures.hpp"

namespace oracle {

using Names = std::set<std::string>;

struct Order {
  std::map<std::string, Names> below;  // moment -> moments strictly earlier
  std::map<std::string, Names> above;  // moment -> moments strictly later
};

inline Order order_of(const itl::Tree& tree) {
  Order o;
  for (const auto& m : tree.moments) {
    o.below[m];
    o.above[m];
  }
  bool changed = true;
  for (const auto& [a, b] : tree.edges) o.above[a].insert(b);
  while (changed) {
    changed = false;
    for (auto& [m, ups] : o.above) {
      Names more = ups;
      for (const auto& u : ups) more.insert(o.above[u].begin(), o.above[u].end());
      if (more.size() != ups.size()) {
        ups = more;
        changed = true;
      }
    }
  }
  for (const auto& [m, ups] : o.above) {
    for (const auto& u : ups) o.below[u].insert(m);
  }
  return o;
}

/// leaf -> moments of its history (the leaf and everything below it).
inline std::map<std::string, Names> histories(const itl::Tree& tree) {
  const Order o = order_of(tree);
  std::map<std::string, Names> out;
  for (const auto& m : tree.moments) {
    if (!o.above.at(m).empty()) continue;
    Names h = o.below.at(m);
    h.insert(m);
    out[m] = h;
  }
  return out;
}

/// A point as (moment, set of leaves of its class).
using OPoint = std::pair<std::string, Names>;

struct OFrame {
  Order order;
  std::map<std::string, Names> hist;
  std::map<std::string, std::vector<Names>> classes;  // moment -> blocks
};

inline OFrame frame_of(const itl::Tree& tree, const itl::IndistFunction& indist) {
  OFrame f{order_of(tree), oracle::histories(tree), {}};
  for (const auto& [m, blocks] : indist.classes_at) {
    for (const auto& b : blocks) f.classes[m].push_back(Names(b.begin(), b.end()));
  }
  return f;
}

inline Names class_of(const OFrame& f, const std::string& t, const std::string& leaf) {
  for (const auto& b : f.classes.at(t)) {
    if (b.contains(leaf)) return b;
  }
  return {};
}

inline std::vector<OPoint> points(const OFrame& f) {
  std::vector<OPoint> out;
  for (const auto& [m, blocks] : f.classes) {
    for (const auto& b : blocks) out.emplace_back(m, b);
  }
  return out;
}

inline bool precedes(const OFrame& f, const OPoint& p, const OPoint& q) {
  if (!f.order.above.at(p.first).contains(q.first)) return false;
  for (const auto& leaf : q.second) {
    if (!p.second.contains(leaf)) return false;
  }
  return true;
}

using OValuation = std::map<std::string, std::set<OPoint>>;

/// The defining clauses, evaluated recursively along histories.
inline bool eval(const OFrame& f, const OValuation& v, const OPoint& at, const itl::Formula& phi) {
  using itl::Op;
  const auto& [t, cls] = at;
  switch (phi.op()) {
    case Op::Atom: {
      auto it = v.find(phi.name());
      return it != v.end() && it->second.contains(at);
    }
    case Op::Not: return !eval(f, v, at, phi.lhs());
    case Op::And: return eval(f, v, at, phi.lhs()) && eval(f, v, at, phi.rhs());
    case Op::G:
    case Op::H: {
      const auto& rel = phi.op() == Op::G ? f.order.above.at(t) : f.order.below.at(t);
      for (const auto& h : cls) {
        for (const auto& s : f.hist.at(h)) {
          if (rel.contains(s) && !eval(f, v, {s, class_of(f, s, h)}, phi.lhs())) return false;
        }
      }
      return true;
    }
    case Op::L: {
      for (const auto& b : f.classes.at(t)) {
        if (!eval(f, v, {t, b}, phi.lhs())) return false;
      }
      return true;
    }
    case Op::F: {
      for (const auto& h : cls) {
        bool found = false;
        for (const auto& s : f.hist.at(h)) {
          if (f.order.above.at(t).contains(s) && eval(f, v, {s, class_of(f, s, h)}, phi.lhs())) found = true;
        }
        if (!found) return false;
      }
      return true;
    }
  }
  return false;
}

inline OPoint to_opoint(const itl::Frame& fr, itl::PointId p) {
  Names cls;
  for (auto h : fr.point_histories(p)) cls.insert(fr.leaf_name(h));
  return {fr.moment_name(fr.point_moment(p)), cls};
}

inline OValuation valuation_of(const itl::Model& m) {
  OValuation out;
  for (const auto& [atom, ext] : m.extensions()) {
    auto& set = out[atom];
    for (itl::PointId p = 0; p < ext.size(); ++p) {
      if (ext.test(p)) set.insert(to_opoint(m.frame(), p));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Maps and relations between frames, condition by condition.

using OMap = std::map<OPoint, OPoint>;

inline bool same_moment(const OPoint& p, const OPoint& q) { return p.first == q.first; }

/// The point of history `leaf` at moment `t`.
inline OPoint on(const OFrame& f, const std::string& t, const std::string& leaf) { return {t, class_of(f, t, leaf)}; }

inline bool later(const OFrame& f, const std::string& t, const std::string& s) { return f.order.above.at(t).contains(s); }

using ORel = bool (*)(const OFrame&, const OPoint&, const OPoint&);

inline bool rel_succ(const OFrame& f, const OPoint& p, const OPoint& q) { return precedes(f, p, q); }
inline bool rel_pred(const OFrame& f, const OPoint& p, const OPoint& q) { return precedes(f, q, p); }
inline bool rel_same(const OFrame&, const OPoint& p, const OPoint& q) { return same_moment(p, q); }

inline bool map_forward(const OFrame& a, const OFrame& b, const OMap& m, ORel rel) {
  for (const auto& p : points(a)) {
    for (const auto& q : points(a)) {
      if (rel(a, p, q) && !rel(b, m.at(p), m.at(q))) return false;
    }
  }
  return true;
}

inline bool map_backward(const OFrame& a, const OFrame& b, const OMap& m, ORel rel) {
  for (const auto& p : points(a)) {
    for (const auto& y : points(b)) {
      if (!rel(b, m.at(p), y)) continue;
      bool found = false;
      for (const auto& q : points(a)) found = found || (rel(a, p, q) && m.at(q) == y);
      if (!found) return false;
    }
  }
  return true;
}

inline bool map_future_forward(const OFrame& a, const OFrame& b, const OMap& m) {
  for (const auto& [t, pi] : points(a)) {
    const OPoint img = m.at({t, pi});
    for (const auto& h2 : img.second) {
      bool some = false;
      for (const auto& h : pi) {
        bool every = true;
        for (const auto& s : a.hist.at(h)) {
          if (!later(a, t, s)) continue;
          bool match = false;
          for (const auto& s2 : b.hist.at(h2)) {
            match = match || (later(b, img.first, s2) && on(b, s2, h2) == m.at(on(a, s, h)));
          }
          every = every && match;
        }
        some = some || every;
      }
      if (!some) return false;
    }
  }
  return true;
}

inline bool map_future_backward(const OFrame& a, const OFrame& b, const OMap& m) {
  for (const auto& [t, pi] : points(a)) {
    const OPoint img = m.at({t, pi});
    for (const auto& h : pi) {
      bool some = false;
      for (const auto& h2 : img.second) {
        bool every = true;
        for (const auto& s2 : b.hist.at(h2)) {
          if (!later(b, img.first, s2)) continue;
          bool match = false;
          for (const auto& s : a.hist.at(h)) {
            match = match || (later(a, t, s) && m.at(on(a, s, h)) == on(b, s2, h2));
          }
          every = every && match;
        }
        some = some || every;
      }
      if (!some) return false;
    }
  }
  return true;
}

/// Condition name -> holds, for G-f, G-b, H-b, L-f, L-b, F-f, F-b.
inline std::map<std::string, bool> map_conditions(const OFrame& a, const OFrame& b, const OMap& m) {
  return {
      {"G-f", map_forward(a, b, m, rel_succ)},     {"G-b", map_backward(a, b, m, rel_succ)},
      {"H-b", map_backward(a, b, m, rel_pred)},    {"L-f", map_forward(a, b, m, rel_same)},
      {"L-b", map_backward(a, b, m, rel_same)},    {"F-f", map_future_forward(a, b, m)},
      {"F-b", map_future_backward(a, b, m)},
  };
}

using OPairs = std::set<std::pair<OPoint, OPoint>>;

inline bool holds(const OValuation& v, const std::string& atom, const OPoint& p) {
  auto it = v.find(atom);
  return it != v.end() && it->second.contains(p);
}

struct OModel {
  OFrame frame;
  OValuation val;
};

/// Whether the pair (p, q) satisfies PV and every back-and-forth clause
/// relative to `rel` (F-f and F-b only when `future`).
inline bool pair_ok(const OModel& a, const OModel& b, const OPairs& rel, const OPoint& p, const OPoint& q,
                    bool future) {
  std::set<std::string> atoms;
  for (const auto& [k, _] : a.val) atoms.insert(k);
  for (const auto& [k, _] : b.val) atoms.insert(k);
  for (const auto& x : atoms) {
    if (holds(a.val, x, p) != holds(b.val, x, q)) return false;
  }
  for (ORel r : {rel_succ, rel_pred, rel_same}) {
    for (const auto& p2 : points(a.frame)) {
      if (!r(a.frame, p, p2)) continue;
      bool ok = false;
      for (const auto& q2 : points(b.frame)) ok = ok || (r(b.frame, q, q2) && rel.contains({p2, q2}));
      if (!ok) return false;
    }
    for (const auto& q2 : points(b.frame)) {
      if (!r(b.frame, q, q2)) continue;
      bool ok = false;
      for (const auto& p2 : points(a.frame)) ok = ok || (r(a.frame, p, p2) && rel.contains({p2, q2}));
      if (!ok) return false;
    }
  }
  if (!future) return true;
  const auto& [s, rho] = p;
  const auto& [s2, rho2] = q;
  for (const auto& h2 : rho2) {
    bool some = false;
    for (const auto& h : rho) {
      bool every = true;
      for (const auto& r : a.frame.hist.at(h)) {
        if (!later(a.frame, s, r)) continue;
        bool match = false;
        for (const auto& r2 : b.frame.hist.at(h2)) {
          match = match || (later(b.frame, s2, r2) && rel.contains({on(a.frame, r, h), on(b.frame, r2, h2)}));
        }
        every = every && match;
      }
      some = some || every;
    }
    if (!some) return false;
  }
  for (const auto& h : rho) {
    bool some = false;
    for (const auto& h2 : rho2) {
      bool every = true;
      for (const auto& r2 : b.frame.hist.at(h2)) {
        if (!later(b.frame, s2, r2)) continue;
        bool match = false;
        for (const auto& r : a.frame.hist.at(h)) {
          match = match || (later(a.frame, s, r) && rel.contains({on(a.frame, r, h), on(b.frame, r2, h2)}));
        }
        every = every && match;
      }
      some = some || every;
    }
    if (!some) return false;
  }
  return true;
}

inline bool is_bisimulation(const OModel& a, const OModel& b, const OPairs& rel, bool future) {
  for (const auto& [p, q] : rel) {
    if (!pair_ok(a, b, rel, p, q, future)) return false;
  }
  return true;
}

/// Greatest bisimulation by removing failing pairs from the full product.
inline OPairs greatest(const OModel& a, const OModel& b, bool future) {
  OPairs rel;
  for (const auto& p : points(a.frame)) {
    for (const auto& q : points(b.frame)) rel.insert({p, q});
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (auto it = rel.begin(); it != rel.end();) {
      if (pair_ok(a, b, rel, it->first, it->second, future)) {
        ++it;
      } else {
        it = rel.erase(it);
        changed = true;
      }
    }
  }
  return rel;
}

inline OModel model_of(const itl::Model& m) {
  return {frame_of(m.frame().tree(), m.frame().indist()), valuation_of(m)};
}

}  // namespace oracle
