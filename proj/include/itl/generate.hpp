#pragma once

// Seeded random frames and models. Everything is a function of the seed.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "itl/error.hpp"
#include "itl/structures.hpp"

namespace itl {

enum class IndistPolicy { undividedness, coarsened };

inline std::string_view to_string(IndistPolicy p) {
  return p == IndistPolicy::undividedness ? "undividedness" : "coarsened";
}

struct GenOptions {
  std::uint64_t seed = 0;
  std::size_t moments = 5;
  std::size_t branching = 2;  // maximum children per moment
  IndistPolicy policy = IndistPolicy::undividedness;
  std::size_t atoms = 1;
};

/// p, q, r, s, then a4, a5, ...
inline std::vector<std::string> atom_names(std::size_t count) {
  static const char* const first[] = {"p", "q", "r", "s"};
  std::vector<std::string> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(i < 4 ? first[i] : "a" + std::to_string(i));
  return out;
}

namespace detail {

class UnionFind {
public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

private:
  std::vector<std::size_t> parent_;
};

inline std::string moment_label(std::size_t i, std::size_t total) {
  std::string digits = std::to_string(i);
  const std::size_t width = std::to_string(total > 0 ? total - 1 : 0).size();
  return "m" + std::string(width - digits.size(), '0') + digits;
}

}  // namespace detail

/// A random rooted tree: moment i > 0 hangs below a uniformly chosen earlier
/// moment that still has fewer than `branching` children.
inline Tree random_tree(std::mt19937_64& rng, std::size_t moments, std::size_t branching) {
  if (moments == 0) throw Error("a generated tree needs at least one moment");
  if (branching == 0) throw Error("branching must be at least 1");
  Tree tree;
  std::vector<std::size_t> children(moments, 0);
  for (std::size_t i = 0; i < moments; ++i) tree.moments.push_back(detail::moment_label(i, moments));
  for (std::size_t i = 1; i < moments; ++i) {
    std::vector<std::size_t> open;
    for (std::size_t j = 0; j < i; ++j) {
      if (children[j] < branching) open.push_back(j);
    }
    const std::size_t parent = open[rng() % open.size()];
    ++children[parent];
    tree.edges.emplace_back(tree.moments[parent], tree.moments[i]);
  }
  return tree;
}

/// Starts from undividedness, merges random pairs of classes, then pushes
/// every merge down to all earlier moments so that backward coherence holds.
inline IndistFunction coarsened_indist(std::mt19937_64& rng, const Tree& tree) {
  const IndistFunction base = undividedness_indist(tree);
  const detail::TreeIndex order(tree);
  const std::size_t n = order.moment_count();
  const std::size_t hcount = order.history_count();

  std::vector<detail::UnionFind> uf(n, detail::UnionFind(hcount));
  for (MomentId t = 0; t < n; ++t) {
    for (const auto& block : base.classes_at.at(order.moment_name(t))) {
      for (const auto& leaf : block) uf[t].unite(*order.find_history(block.front()), *order.find_history(leaf));
    }
  }
  for (MomentId t = 0; t < n; ++t) {
    auto through = order.through(t);
    if (through.size() < 2 || rng() % 2 == 0) continue;
    uf[t].unite(through[rng() % through.size()], through[rng() % through.size()]);
  }

  // Deepest moments first, so a merge reaches every ancestor.
  std::vector<MomentId> by_depth(n);
  std::iota(by_depth.begin(), by_depth.end(), MomentId{0});
  auto depth = [&](MomentId m) {
    std::size_t d = 0;
    for (MomentId s = 0; s < n; ++s) d += order.earlier(s, m) ? 1 : 0;
    return d;
  };
  std::stable_sort(by_depth.begin(), by_depth.end(), [&](MomentId a, MomentId b) { return depth(a) > depth(b); });
  for (MomentId t : by_depth) {
    for (MomentId s = 0; s < n; ++s) {
      if (!order.earlier(s, t)) continue;
      for (HistoryId h : order.through(t)) uf[s].unite(h, uf[t].find(h));
    }
  }

  IndistFunction out;
  for (MomentId t = 0; t < n; ++t) {
    std::vector<std::vector<std::string>> blocks;
    std::vector<std::size_t> roots;
    for (HistoryId h : order.through(t)) {
      const std::size_t root = uf[t].find(h);
      auto it = std::find(roots.begin(), roots.end(), root);
      if (it == roots.end()) {
        roots.push_back(root);
        blocks.push_back({});
        it = roots.end() - 1;
      }
      blocks[static_cast<std::size_t>(it - roots.begin())].push_back(order.leaf_name(h));
    }
    out.classes_at[order.moment_name(t)] = std::move(blocks);
  }
  return out;
}

inline Frame random_frame(std::mt19937_64& rng, const GenOptions& opt) {
  Tree tree = random_tree(rng, opt.moments, opt.branching);
  IndistFunction indist =
      opt.policy == IndistPolicy::undividedness ? undividedness_indist(tree) : coarsened_indist(rng, tree);
  return Frame::build(std::move(tree), std::move(indist));
}

/// Each atom holds at each point with probability 1/2.
inline Valuation random_valuation(std::mt19937_64& rng, const Frame& frame, const std::vector<std::string>& atoms) {
  Valuation val;
  for (const auto& atom : atoms) {
    auto& pts = val[atom];
    for (PointId p = 0; p < frame.point_count(); ++p) {
      if (rng() % 2) pts.insert(frame.point(p));
    }
  }
  return val;
}

inline Model gen_random_model(const GenOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  Frame frame = random_frame(rng, opt);
  Valuation val = random_valuation(rng, frame, atom_names(opt.atoms));
  return Model::build(std::move(frame), val);
}

inline Frame gen_random_frame(const GenOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  return random_frame(rng, opt);
}

}  // namespace itl
