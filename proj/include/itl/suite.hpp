#pragma once

// The property battery behind `itl suite` and the acceptance test. Each
// property is run on a fixed frame catalogue and seeded random models and
// reports how many cases it checked and how many failed.

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "itl/bisimulation.hpp"
#include "itl/document.hpp"
#include "itl/formula.hpp"
#include "itl/generate.hpp"
#include "itl/morphisms.hpp"
#include "itl/semantics.hpp"
#include "itl/structures.hpp"

namespace itl {

struct PropertyResult {
  int id = 0;
  std::string name;
  std::uint64_t cases = 0;
  std::uint64_t failures = 0;
  std::string detail;
  double seconds = 0;

  bool passed() const noexcept { return failures == 0 && cases > 0; }
};

struct SuiteOptions {
  std::uint64_t seed = 42;
};

// ---------------------------------------------------------------------------
// Fixtures

struct NamedFrame {
  std::string name;
  Frame frame;
};

namespace detail {

using Blocks = std::map<std::string, std::vector<std::vector<std::string>>>;

/// Undividedness unless classes are given.
inline Frame make_frame(std::vector<std::string> moments, std::vector<std::pair<std::string, std::string>> edges,
                        Blocks classes = {}) {
  Tree tree{std::move(moments), std::move(edges)};
  IndistFunction indist = classes.empty() ? undividedness_indist(tree) : IndistFunction{std::move(classes)};
  return Frame::build(std::move(tree), std::move(indist));
}

}  // namespace detail

/// Small frames (at most five points each) covering chains, forks with merged
/// and split classes, a stem below a fork, uneven branches and forests.
inline std::vector<NamedFrame> frame_catalogue() {
  using detail::make_frame;
  std::vector<NamedFrame> out;
  out.push_back({"single", make_frame({"r"}, {})});
  out.push_back({"chain2", make_frame({"r", "a"}, {{"r", "a"}})});
  out.push_back({"chain3", make_frame({"r", "a", "b"}, {{"r", "a"}, {"a", "b"}})});
  out.push_back({"chain4", make_frame({"r", "a", "b", "c"}, {{"r", "a"}, {"a", "b"}, {"b", "c"}})});
  out.push_back({"antichain2", make_frame({"a", "b"}, {})});
  out.push_back({"chain2_isolated", make_frame({"r", "a", "z"}, {{"r", "a"}})});
  out.push_back({"fork_merged", make_frame({"r", "a", "b"}, {{"r", "a"}, {"r", "b"}},
                                           {{"r", {{"a", "b"}}}, {"a", {{"a"}}}, {"b", {{"b"}}}})});
  out.push_back({"fork_split", make_frame({"r", "a", "b"}, {{"r", "a"}, {"r", "b"}})});
  out.push_back({"fork3_merged",
                 make_frame({"r", "a", "b", "c"}, {{"r", "a"}, {"r", "b"}, {"r", "c"}},
                            {{"r", {{"a", "b", "c"}}}, {"a", {{"a"}}}, {"b", {{"b"}}}, {"c", {{"c"}}}})});
  out.push_back({"fork3_partial",
                 make_frame({"r", "a", "b", "c"}, {{"r", "a"}, {"r", "b"}, {"r", "c"}},
                            {{"r", {{"a", "b"}, {"c"}}}, {"a", {{"a"}}}, {"b", {{"b"}}}, {"c", {{"c"}}}})});
  out.push_back({"stem_fork_merged", make_frame({"r", "s", "a", "b"}, {{"r", "s"}, {"s", "a"}, {"s", "b"}},
                                                {{"r", {{"a", "b"}}}, {"s", {{"a", "b"}}}, {"a", {{"a"}}}, {"b", {{"b"}}}})});
  out.push_back({"stem_fork_split", make_frame({"r", "s", "a", "b"}, {{"r", "s"}, {"s", "a"}, {"s", "b"}},
                                               {{"r", {{"a", "b"}}}, {"s", {{"a"}, {"b"}}}, {"a", {{"a"}}}, {"b", {{"b"}}}})});
  out.push_back({"lopsided", make_frame({"r", "a", "b", "c"}, {{"r", "a"}, {"r", "b"}, {"b", "c"}})});
  out.push_back({"lopsided_merged", make_frame({"r", "a", "b", "c"}, {{"r", "a"}, {"r", "b"}, {"b", "c"}},
                                               {{"r", {{"a", "c"}}}, {"a", {{"a"}}}, {"b", {{"c"}}}, {"c", {{"c"}}}})});
  return out;
}

/// The fork r < a, r < b with one class at r and p true only at (a,{a}).
inline Model f1_model() {
  for (auto& nf : frame_catalogue()) {
    if (nf.name == "fork_merged") return Model::build(std::move(nf.frame), Valuation{{"p", {Point{"a", "a"}}}});
  }
  throw Error("catalogue has no fork_merged frame");
}

struct MalformedDocument {
  std::string name;
  std::string json;
  ViolationKind expected;
};

/// Frame documents that break exactly one structural requirement each.
inline std::vector<MalformedDocument> malformed_corpus() {
  using K = ViolationKind;
  return {
      {"self_loop", R"({"moments":["a"],"edges":[["a","a"]],"indist":{"a":[["a"]]}})", K::cycle},
      {"two_cycle", R"({"moments":["a","b"],"edges":[["a","b"],["b","a"]],"indist":{}})", K::cycle},
      {"three_cycle", R"({"moments":["a","b","c"],"edges":[["a","b"],["b","c"],["c","a"]],"indist":{}})", K::cycle},
      {"cycle_below_root", R"({"moments":["r","a","b"],"edges":[["r","a"],["a","b"],["b","a"]],"indist":{}})",
       K::cycle},
      {"diamond",
       R"({"moments":["r","a","b","c"],"edges":[["r","a"],["r","b"],["a","c"],["b","c"]],"indist":{"r":[["c"]],"a":[["c"]],"b":[["c"]],"c":[["c"]]}})",
       K::downward_linearity},
      {"two_roots_join",
       R"({"moments":["a","b","c"],"edges":[["a","c"],["b","c"]],"indist":{"a":[["c"]],"b":[["c"]],"c":[["c"]]}})",
       K::downward_linearity},
      {"deep_join",
       R"({"moments":["r","a","b","c","d","e"],"edges":[["r","a"],["a","c"],["r","b"],["b","d"],["c","e"],["d","e"]],"indist":{}})",
       K::downward_linearity},
      {"three_parents",
       R"({"moments":["x","y","z","c"],"edges":[["x","c"],["y","c"],["z","c"]],"indist":{}})",
       K::downward_linearity},
      {"fork_missing_history",
       R"({"moments":["r","a","b"],"edges":[["r","a"],["r","b"]],"indist":{"r":[["a"]],"a":[["a"]],"b":[["b"]]}})",
       K::partition_cover},
      {"chain_foreign_leaf", R"({"moments":["r","a"],"edges":[["r","a"]],"indist":{"r":[["a"]],"a":[["b"]]}})",
       K::partition_cover},
      {"fork_wrong_branch",
       R"({"moments":["r","a","b"],"edges":[["r","a"],["r","b"]],"indist":{"r":[["a","b"]],"a":[["b"]],"b":[["b"]]}})",
       K::partition_cover},
      {"leaf_without_classes", R"({"moments":["r","a"],"edges":[["r","a"]],"indist":{"r":[["a"]],"a":[]}})",
       K::partition_cover},
      {"fork3_missing_history",
       R"({"moments":["r","a","b","c"],"edges":[["r","a"],["r","b"],["r","c"]],"indist":{"r":[["a","b"]],"a":[["a"]],"b":[["b"]],"c":[["c"]]}})",
       K::partition_cover},
      {"fork_overlap",
       R"({"moments":["r","a","b"],"edges":[["r","a"],["r","b"]],"indist":{"r":[["a","b"],["b"]],"a":[["a"]],"b":[["b"]]}})",
       K::partition_overlap},
      {"leaf_overlap", R"({"moments":["r","a"],"edges":[["r","a"]],"indist":{"r":[["a"]],"a":[["a"],["a"]]}})",
       K::partition_overlap},
      {"stem_incoherent",
       R"({"moments":["r","s","a","b"],"edges":[["r","s"],["s","a"],["s","b"]],"indist":{"r":[["a"],["b"]],"s":[["a","b"]],"a":[["a"]],"b":[["b"]]}})",
       K::coherence},
      {"long_stem_incoherent",
       R"({"moments":["r","s","u","a","b"],"edges":[["r","s"],["s","u"],["u","a"],["u","b"]],"indist":{"r":[["a"],["b"]],"s":[["a","b"]],"u":[["a","b"]],"a":[["a"]],"b":[["b"]]}})",
       K::coherence},
      {"crossed_blocks",
       R"({"moments":["r","s","a","b","c"],"edges":[["r","s"],["s","a"],["s","b"],["s","c"]],"indist":{"r":[["a"],["b","c"]],"s":[["a","b"],["c"]],"a":[["a"]],"b":[["b"]],"c":[["c"]]}})",
       K::coherence},
      {"incoherent_second_tree",
       R"({"moments":["x","r","s","a","b"],"edges":[["r","s"],["s","a"],["s","b"]],"indist":{"x":[["x"]],"r":[["a"],["b"]],"s":[["a","b"]],"a":[["a"]],"b":[["b"]]}})",
       K::coherence},
      {"split_root_merged_branch",
       R"({"moments":["r","s","a","b","c"],"edges":[["r","s"],["s","a"],["s","b"],["r","c"]],"indist":{"r":[["a"],["b"],["c"]],"s":[["a","b"]],"a":[["a"]],"b":[["b"]],"c":[["c"]]}})",
       K::coherence},
  };
}

// ---------------------------------------------------------------------------
// Helpers

namespace detail {

inline const std::vector<std::string>& corpus_atoms() {
  static const std::vector<std::string> atoms{"p", "q"};
  return atoms;
}

/// Seeded random models with 2 atoms and at most `max_points` points.
inline std::vector<Model> random_models(std::uint64_t seed, std::size_t count, std::size_t max_moments,
                                        std::size_t max_points, std::size_t atoms = 2) {
  std::mt19937_64 rng(seed);
  std::vector<Model> out;
  while (out.size() < count) {
    GenOptions opt;
    opt.moments = 1 + rng() % max_moments;
    opt.branching = 1 + rng() % 3;
    opt.policy = rng() % 2 ? IndistPolicy::coarsened : IndistPolicy::undividedness;
    opt.atoms = atoms;
    opt.seed = rng();
    Model m = gen_random_model(opt);
    if (m.frame().point_count() <= max_points) out.push_back(std::move(m));
  }
  return out;
}

// Existential duals read off the frame directly, for comparison with ~X~.
inline PointSet some_past(const Frame& fr, const PointSet& arg) {
  PointSet out(fr.point_count());
  for (PointId p = 0; p < fr.point_count(); ++p) {
    for (HistoryId h : fr.point_histories(p)) {
      for (MomentId s : fr.history_moments(h)) {
        if (fr.earlier(s, fr.point_moment(p)) && arg.test(fr.point_on(s, h))) out.set(p);
      }
    }
  }
  return out;
}

inline PointSet some_future(const Frame& fr, const PointSet& arg) {
  PointSet out(fr.point_count());
  for (PointId p = 0; p < fr.point_count(); ++p) {
    for (HistoryId h : fr.point_histories(p)) {
      for (MomentId s : fr.history_moments(h)) {
        if (fr.earlier(fr.point_moment(p), s) && arg.test(fr.point_on(s, h))) out.set(p);
      }
    }
  }
  return out;
}

inline PointSet some_class(const Frame& fr, const PointSet& arg) {
  PointSet out(fr.point_count());
  for (PointId p = 0; p < fr.point_count(); ++p) {
    const MomentId t = fr.point_moment(p);
    for (ClassId c = 0; c < fr.class_count(t); ++c) {
      if (arg.test(fr.point_at(t, c))) out.set(p);
    }
  }
  return out;
}

// Some history of the class stays in arg at every later moment on it.
inline PointSet some_history_always(const Frame& fr, const PointSet& arg) {
  PointSet out(fr.point_count());
  for (PointId p = 0; p < fr.point_count(); ++p) {
    for (HistoryId h : fr.point_histories(p)) {
      bool all = true;
      for (MomentId s : fr.history_moments(h)) {
        if (fr.earlier(fr.point_moment(p), s) && !arg.test(fr.point_on(s, h))) all = false;
      }
      if (all) out.set(p);
    }
  }
  return out;
}

/// The (p, q) valuations of a frame to test: all of them when there are at
/// most `all_up_to`, otherwise the empty one plus `sample` seeded codes.
inline std::vector<std::uint64_t> valuation_codes(const Frame& fr, std::mt19937_64& rng, std::uint64_t all_up_to,
                                                  std::size_t sample) {
  const std::size_t bits = fr.point_count() * corpus_atoms().size();
  const std::uint64_t total = bits >= 63 ? ~std::uint64_t{0} : std::uint64_t{1} << bits;
  std::vector<std::uint64_t> codes;
  if (total <= all_up_to) {
    for (std::uint64_t c = 0; c < total; ++c) codes.push_back(c);
  } else {
    codes.push_back(0);
    for (std::size_t i = 0; i < sample; ++i) codes.push_back(rng() % total);
  }
  return codes;
}

inline Model model_from_code(const Frame& fr, std::uint64_t code) {
  return Model::build(fr, to_valuation(fr, decode_valuation(fr, corpus_atoms(), code)));
}

/// Points of `a` and `b` agree on every corpus entry.
inline std::uint64_t corpus_disagreements(const CorpusExtensions& a, PointId x, const CorpusExtensions& b, PointId y,
                                          std::size_t entries) {
  std::uint64_t bad = 0;
  for (std::size_t i = 0; i < entries; ++i) bad += a.test(i, x) != b.test(i, y);
  return bad;
}

inline std::string count_line(std::initializer_list<std::pair<const char*, std::uint64_t>> items) {
  std::ostringstream out;
  bool first = true;
  for (const auto& [label, n] : items) {
    out << (first ? "" : ", ") << n << " " << label;
    first = false;
  }
  return out.str();
}

template <class F>
PropertyResult timed(int id, std::string name, F&& body) {
  const auto start = std::chrono::steady_clock::now();
  PropertyResult r;
  r.id = id;
  r.name = std::move(name);
  body(r);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

/// Models for the bisimulation properties: every catalogue frame with the
/// empty valuation and with one seeded random valuation of p, plus random
/// models of at most six points.
inline std::vector<Model> bisimulation_family(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Model> out;
  for (const auto& nf : frame_catalogue()) {
    out.push_back(Model::build(nf.frame, {}));
    out.push_back(Model::build(nf.frame, random_valuation(rng, nf.frame, {"p"})));
  }
  for (auto& m : random_models(rng(), 12, 5, 6, 1)) out.push_back(std::move(m));
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Properties

/// History and relational semantics agree on random mode-L formulas.
inline PropertyResult check_semantics_equivalence(const SuiteOptions& opt, std::size_t models = 200,
                                                  std::size_t formulas = 1000) {
  return detail::timed(1, "semantics equivalence (hist = rel)", [&](PropertyResult& r) {
    std::mt19937_64 rng(opt.seed ^ 0x51);
    for (const Model& m : detail::random_models(rng(), models, 6, 8)) {
      Evaluator hist(m, Language::L, Semantics::history);
      Evaluator rel(m, Language::L, Semantics::relational);
      for (std::size_t j = 0; j < formulas; ++j) {
        const Formula f = random_formula(rng(), 4, detail::corpus_atoms(), Language::L);
        const PointSet& a = hist.extension(f);
        const PointSet& b = rel.extension(f);
        for (PointId p = 0; p < a.size(); ++p) r.failures += a.test(p) != b.test(p);
        r.cases += a.size();
      }
    }
    r.detail = detail::count_line({{"models", models}, {"formulas per model", formulas}});
  });
}

/// P, f, M, g agree with their ~X~ expansions and with the existential
/// reading of each.
inline PropertyResult check_abbreviations(const SuiteOptions& opt, std::size_t models = 200,
                                          std::size_t formulas = 1000) {
  return detail::timed(2, "abbreviations (P f M g)", [&](PropertyResult& r) {
    std::mt19937_64 rng(opt.seed ^ 0x52);
    const std::vector<std::pair<std::string, Op>> duals{{"P", Op::H}, {"f", Op::G}, {"M", Op::L}, {"g", Op::F}};
    for (const Model& m : detail::random_models(rng(), models, 6, 8)) {
      const Frame& fr = m.frame();
      Evaluator base(m, Language::LF);
      Evaluator hist(m, Language::LF, Semantics::history);
      Evaluator rel(m, Language::LF, Semantics::relational);
      for (std::size_t j = 0; j < formulas; ++j) {
        const Formula phi = random_formula(rng(), 3, detail::corpus_atoms(), Language::LF);
        const PointSet& inner = base.extension(phi);
        for (const auto& [symbol, op] : duals) {
          const Formula surface = parse(symbol + " (" + print(phi) + ")");
          const Formula expanded = parse("~" + std::string(op_symbol(op)) + " ~(" + print(phi) + ")");
          PointSet oracle;
          switch (op) {
            case Op::H: oracle = detail::some_past(fr, inner); break;
            case Op::G: oracle = detail::some_future(fr, inner); break;
            case Op::L: oracle = detail::some_class(fr, inner); break;
            default: oracle = detail::some_history_always(fr, inner); break;
          }
          for (Evaluator* ev : {&hist, &rel}) {
            const PointSet& s = ev->extension(surface);
            const PointSet& e = ev->extension(expanded);
            for (PointId p = 0; p < fr.point_count(); ++p) {
              r.failures += (s.test(p) != e.test(p)) + (s.test(p) != oracle.test(p));
            }
            r.cases += 2 * fr.point_count();
          }
        }
      }
    }
    r.detail = detail::count_line({{"models", models}, {"formulas per model", formulas}, {"operators", 4}});
  });
}

/// On the fork with one class at the root and p only at a: f p holds and
/// F p fails at the root.
inline PropertyResult check_future_separation(const SuiteOptions&) {
  return detail::timed(3, "F vs f separation on the fork", [&](PropertyResult& r) {
    const Model m = f1_model();
    const Point root{"r", "a"};
    for (Semantics sem : {Semantics::history, Semantics::relational}) {
      r.failures += eval(m, root, parse("f p"), Language::LF, sem) != true;
      r.failures += eval(m, root, parse("F p"), Language::LF, sem) != false;
      r.cases += 2;
    }
    r.detail = "f p true and F p false at r/a under both semantics";
  });
}

/// The back-and-forth conditions agree with the successor-set equations on
/// every p-morphism found by search and on randomly sampled maps.
inline PropertyResult check_pmorphism_characterization(const SuiteOptions& opt, std::size_t samples = 10000) {
  return detail::timed(4, "p-morphism set characterization", [&](PropertyResult& r) {
    const auto cat = frame_catalogue();
    std::uint64_t positives = 0;
    std::uint64_t sampled_pm = 0;
    for (const auto& a : cat) {
      for (const auto& b : cat) {
        for_each_pmorphism(a.frame, b.frame, Language::L, {}, [&](std::span<const PointId> image) {
          ++positives;
          ++r.cases;
          r.failures += !check_set_characterization(a.frame, b.frame, image);
          return true;
        });
      }
    }
    std::mt19937_64 rng(opt.seed ^ 0x54);
    for (std::size_t i = 0; i < samples; ++i) {
      const auto& a = cat[rng() % cat.size()].frame;
      const auto& b = cat[rng() % cat.size()].frame;
      Image image(a.point_count());
      for (auto& q : image) q = rng() % b.point_count();
      const bool by_conditions = check_frame_pmorphism(a, b, image, Language::L, 1).ok();
      sampled_pm += by_conditions;
      ++r.cases;
      r.failures += by_conditions != check_set_characterization(a, b, image);
    }
    r.detail = detail::count_line({{"frames", cat.size()}, {"p-morphisms from search", positives},
                                   {"sampled maps", samples}, {"sampled maps that are p-morphisms", sampled_pm}});
  });
}

/// Results of evaluating the exhaustive corpus along every catalogue
/// p-morphism; shared by the preservation and bisimulation properties.
struct MorphismSweep {
  std::uint64_t morphisms = 0;
  std::uint64_t model_pairs = 0;
  std::uint64_t formula_cases = 0;
  std::uint64_t formula_failures = 0;
  std::uint64_t graph_anchors = 0;
  std::uint64_t graph_failures = 0;     // graphs failing check_bisimulation
  std::uint64_t anchor_cases = 0;
  std::uint64_t anchor_failures = 0;    // anchors of graphs whose points disagree
  std::uint64_t reference_cases = 0;
  std::uint64_t reference_failures = 0;  // corpus table entries differing from Evaluator
};

/// For each language, every p-morphism between catalogue frames is checked
/// against the exhaustive corpus (depth 3, atoms p and q) under target
/// valuations pulled back along it. A strided sample of each target table is
/// re-evaluated with Evaluator.
inline std::map<Language, MorphismSweep> morphism_sweep(const SuiteOptions& opt) {
  constexpr std::size_t reference_stride = 101;
  std::map<Language, MorphismSweep> out;
  const auto cat = frame_catalogue();
  std::mt19937_64 rng(opt.seed ^ 0x55);
  for (Language lang : {Language::L, Language::LF}) {
    MorphismSweep& sw = out[lang];
    const FormulaCorpus corpus(3, detail::corpus_atoms(), lang);
    // maps[dst][src] = every p-morphism src -> dst
    std::vector<std::vector<std::vector<Image>>> maps(cat.size(), std::vector<std::vector<Image>>(cat.size()));
    for (std::size_t s = 0; s < cat.size(); ++s) {
      for (std::size_t d = 0; d < cat.size(); ++d) {
        for_each_pmorphism(cat[s].frame, cat[d].frame, lang, {}, [&](std::span<const PointId> image) {
          maps[d][s].emplace_back(image.begin(), image.end());
          ++sw.morphisms;
          return true;
        });
      }
    }
    for (std::size_t d = 0; d < cat.size(); ++d) {
      const Frame& dst_frame = cat[d].frame;
      bool any = false;
      for (const auto& v : maps[d]) any = any || !v.empty();
      if (!any) continue;
      for (std::uint64_t code : detail::valuation_codes(dst_frame, rng, 64, 12)) {
        const Model dst = detail::model_from_code(dst_frame, code);
        const CorpusExtensions dst_table = evaluate_corpus(dst, corpus);
        Evaluator reference(dst, lang);
        for (std::size_t i = code % reference_stride; i < corpus.size(); i += reference_stride) {
          const PointSet& ext = reference.extension(corpus.formula(i));
          for (PointId p = 0; p < ext.size(); ++p) sw.reference_failures += ext.test(p) != dst_table.test(i, p);
          sw.reference_cases += ext.size();
        }
        for (std::size_t s = 0; s < cat.size(); ++s) {
          for (const Image& image : maps[d][s]) {
            const Frame& src_frame = cat[s].frame;
            const Model src = Model::build(src_frame, pullback_valuation(src_frame, dst_frame, dst.valuation(), image));
            const CorpusExtensions src_table = evaluate_corpus(src, corpus);
            ++sw.model_pairs;
            RelationMatrix rel(src_frame.point_count(), dst_frame.point_count());
            for (const auto& [x, y] : graph(image)) rel.insert(x, y);
            sw.graph_failures += !is_bisimulation(src, dst, rel, lang);
            for (PointId x = 0; x < image.size(); ++x) {
              const auto bad = detail::corpus_disagreements(src_table, x, dst_table, image[x], corpus.size());
              sw.formula_cases += corpus.size();
              sw.formula_failures += bad;
              ++sw.graph_anchors;
              sw.anchor_cases += corpus.size();
              sw.anchor_failures += bad != 0;
            }
          }
        }
      }
    }
  }
  return out;
}

/// Source points and their images satisfy the same corpus formulas.
inline PropertyResult preservation_result(const std::map<Language, MorphismSweep>& sweep, double seconds) {
  PropertyResult r;
  r.id = 5;
  r.name = "p-morphism truth preservation";
  std::ostringstream detail;
  for (const auto& [lang, sw] : sweep) {
    r.cases += sw.formula_cases + sw.reference_cases;
    r.failures += sw.formula_failures + sw.reference_failures;
    detail << (lang == Language::L ? "" : "; ") << to_string(lang) << ": " << sw.morphisms << " p-morphisms, "
           << sw.model_pairs << " model pairs, " << sw.reference_cases << " table entries re-evaluated";
  }
  r.detail = detail.str();
  r.seconds = seconds;
  return r;
}

/// Surjective frame p-morphisms carry frame validity from source to target,
/// and pulled-back valuations satisfy PV.
inline PropertyResult check_validity_preservation(const SuiteOptions& opt) {
  return detail::timed(6, "validity preservation (surjective)", [&](PropertyResult& r) {
    std::vector<NamedFrame> small;
    for (auto& nf : frame_catalogue()) {
      if (nf.frame.point_count() <= 4) small.push_back(std::move(nf));
    }
    std::mt19937_64 rng(opt.seed ^ 0x56);
    std::uint64_t morphisms = 0;
    std::uint64_t pv_checks = 0;
    for (Language lang : {Language::L, Language::LF}) {
      const FormulaCorpus corpus(3, detail::corpus_atoms(), lang);
      std::vector<std::vector<bool>> valid;
      for (const auto& nf : small) valid.push_back(frame_valid_corpus(nf.frame, corpus));
      for (std::size_t s = 0; s < small.size(); ++s) {
        for (std::size_t d = 0; d < small.size(); ++d) {
          const Frame& src = small[s].frame;
          const Frame& dst = small[d].frame;
          for_each_pmorphism(src, dst, lang, {.surjective = true, .limit = std::nullopt, .bound = default_search_bound}, [&](std::span<const PointId> image) {
            ++morphisms;
            for (std::size_t i = 0; i < corpus.size(); ++i) {
              ++r.cases;
              r.failures += valid[s][i] && !valid[d][i];
            }
            for (std::uint64_t code : detail::valuation_codes(dst, rng, 16, 16)) {
              const Model target = detail::model_from_code(dst, code);
              const Model source = Model::build(src, pullback_valuation(src, dst, target.valuation(), image));
              ++r.cases;
              ++pv_checks;
              r.failures += !check_model_pmorphism(source, target, image, lang, 1).ok();
            }
            return true;
          });
        }
      }
    }
    r.detail = detail::count_line({{"frames", small.size()}, {"surjective p-morphisms (L and LF)", morphisms},
                                   {"pull-back model checks", pv_checks}});
  });
}

/// Every passing bisimulation (greatest bisimulations and p-morphism graphs)
/// relates points that satisfy the same corpus formulas.
inline PropertyResult check_bisimulation_soundness(const SuiteOptions& opt,
                                                   const std::map<Language, MorphismSweep>& sweep) {
  return detail::timed(7, "bisimulation soundness", [&](PropertyResult& r) {
    const auto family = detail::bisimulation_family(opt.seed ^ 0x57);
    std::uint64_t relations = 0;
    std::uint64_t anchors = 0;
    for (Language lang : {Language::L, Language::LF}) {
      const FormulaCorpus corpus(3, detail::corpus_atoms(), lang);
      std::vector<CorpusExtensions> tables;
      for (const auto& m : family) tables.push_back(evaluate_corpus(m, corpus));
      for (std::size_t a = 0; a < family.size(); ++a) {
        for (std::size_t b = 0; b < family.size(); ++b) {
          const RelationMatrix rel = greatest_bisimulation_matrix(family[a], family[b], lang);
          if (rel.size() == 0) continue;
          ++relations;
          r.failures += !is_bisimulation(family[a], family[b], rel, lang);
          for (const auto& [x, y] : rel.pairs()) {
            ++anchors;
            r.cases += corpus.size();
            r.failures += detail::corpus_disagreements(tables[a], x, tables[b], y, corpus.size());
          }
        }
      }
      const MorphismSweep& sw = sweep.at(lang);
      r.cases += sw.anchor_cases;
      r.failures += sw.anchor_failures + sw.graph_failures;
    }
    std::uint64_t graph_anchors = 0;
    for (const auto& [lang, sw] : sweep) graph_anchors += sw.graph_anchors;
    r.detail = detail::count_line({{"models", family.size()}, {"non-empty greatest bisimulations", relations},
                                   {"anchors", anchors}, {"p-morphism graph anchors", graph_anchors}});
  });
}

/// Adding back any pair removed from the greatest bisimulation breaks it.
inline PropertyResult check_fixpoint_maximality(const SuiteOptions& opt) {
  return detail::timed(8, "greatest bisimulation maximality", [&](PropertyResult& r) {
    const auto family = detail::bisimulation_family(opt.seed ^ 0x57);
    std::uint64_t readded = 0;
    for (Language lang : {Language::L, Language::LF}) {
      for (const auto& a : family) {
        for (const auto& b : family) {
          RelationMatrix rel = greatest_bisimulation_matrix(a, b, lang);
          ++r.cases;
          r.failures += !is_bisimulation(a, b, rel, lang);
          for (PointId x = 0; x < rel.rows(); ++x) {
            for (PointId y = 0; y < rel.cols(); ++y) {
              if (rel.contains(x, y)) continue;
              rel.insert(x, y);
              ++r.cases;
              ++readded;
              r.failures += is_bisimulation(a, b, rel, lang);
              rel.erase(x, y);
            }
          }
        }
      }
    }
    r.detail = detail::count_line({{"models", family.size()}, {"model pairs (L and LF)", 2 * family.size() * family.size()},
                                   {"re-added pairs", readded}});
  });
}

/// Every reported violation replays from its witness, and every
/// distinguishing formula distinguishes.
inline PropertyResult check_witness_soundness(const SuiteOptions& opt, std::size_t maps = 3000,
                                              std::size_t relations = 1000, std::size_t queries = 600) {
  return detail::timed(9, "negative-witness soundness", [&](PropertyResult& r) {
    std::mt19937_64 rng(opt.seed ^ 0x59);
    const auto cat = frame_catalogue();
    std::uint64_t map_witnesses = 0;
    for (std::size_t i = 0; i < maps; ++i) {
      const Frame& a = cat[rng() % cat.size()].frame;
      const Frame& b = cat[rng() % cat.size()].frame;
      const Model src = Model::build(a, random_valuation(rng, a, {"p"}));
      const Model dst = Model::build(b, random_valuation(rng, b, {"p"}));
      Image image(a.point_count());
      for (auto& q : image) q = rng() % b.point_count();
      const Language lang = i % 2 ? Language::LF : Language::L;
      for (const auto& res : check_model_pmorphism(src, dst, image, lang).results) {
        for (const auto& w : res.violations) {
          ++map_witnesses;
          ++r.cases;
          r.failures += !replay_violation(src, dst, image, res.condition, w);
        }
      }
    }

    const auto family = detail::bisimulation_family(opt.seed ^ 0x57);
    std::uint64_t bisim_failures = 0;
    for (std::size_t i = 0; i < relations; ++i) {
      const Model& a = family[rng() % family.size()];
      const Model& b = family[rng() % family.size()];
      RelationMatrix rel(a.frame().point_count(), b.frame().point_count());
      for (PointId x = 0; x < rel.rows(); ++x) {
        for (PointId y = 0; y < rel.cols(); ++y) {
          if (rng() % 2) rel.insert(x, y);
        }
      }
      const Language lang = i % 2 ? Language::LF : Language::L;
      const std::pair<PointId, PointId> anchor{rng() % rel.rows(), rng() % rel.cols()};
      for (const auto& f : check_bisimulation(a, b, rel, anchor, lang).failures) {
        ++bisim_failures;
        ++r.cases;
        r.failures += !replay_failure(a, b, rel, f, lang);
      }
    }

    std::uint64_t found = 0;
    std::uint64_t undecided = 0;
    for (std::size_t i = 0; i < queries; ++i) {
      const Model& a = family[rng() % family.size()];
      const Model& b = family[rng() % family.size()];
      const Language lang = i % 2 ? Language::LF : Language::L;
      const RelationMatrix gb = greatest_bisimulation_matrix(a, b, lang);
      const PointId x = rng() % a.frame().point_count();
      const PointId y = rng() % b.frame().point_count();
      const Point p = a.frame().point(x);
      const Point q = b.frame().point(y);
      auto phi = find_distinguishing_formula(a, p, b, q, lang);
      ++r.cases;
      if (gb.contains(x, y)) {
        r.failures += phi.has_value();
        continue;
      }
      if (!phi) {
        ++undecided;
        continue;
      }
      ++found;
      for (Semantics sem : {Semantics::history, Semantics::relational}) {
        r.failures += eval(a, p, *phi, lang, sem) == eval(b, q, *phi, lang, sem);
      }
    }
    r.detail = detail::count_line({{"map witnesses", map_witnesses}, {"bisimulation failures", bisim_failures},
                                   {"distinguishing formulas", found},
                                   {"non-bisimilar pairs indistinguishable up to depth 4", undecided}});
  });
}

/// Each malformed document yields its expected named violation.
inline PropertyResult check_structural_validators(const SuiteOptions&) {
  return detail::timed(10, "structural validators", [&](PropertyResult& r) {
    std::ostringstream missed;
    for (const auto& doc : malformed_corpus()) {
      ++r.cases;
      const auto parsed = frame_document_from_json(Json::parse(doc.json));
      const auto report = validate_frame(parsed.tree, parsed.indist);
      if (!report.has(doc.expected)) {
        ++r.failures;
        missed << " " << doc.name;
      }
    }
    r.detail = std::to_string(r.cases) + " malformed documents";
    if (r.failures) r.detail += "; missed:" + missed.str();
  });
}

/// The whole battery, in criterion order.
inline std::vector<PropertyResult> run_suite(const SuiteOptions& opt,
                                             const std::function<void(const PropertyResult&)>& progress = {}) {
  std::vector<PropertyResult> out;
  auto add = [&](PropertyResult r) {
    if (progress) progress(r);
    out.push_back(std::move(r));
  };
  add(check_semantics_equivalence(opt));
  add(check_abbreviations(opt));
  add(check_future_separation(opt));
  add(check_pmorphism_characterization(opt));
  const auto start = std::chrono::steady_clock::now();
  const auto sweep = morphism_sweep(opt);
  add(preservation_result(sweep, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()));
  add(check_validity_preservation(opt));
  add(check_bisimulation_soundness(opt, sweep));
  add(check_fixpoint_maximality(opt));
  add(check_witness_soundness(opt));
  add(check_structural_validators(opt));
  return out;
}

}  // namespace itl
