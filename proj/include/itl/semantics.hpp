#pragma once

// Model checking. Two independent routes compute the same truth sets:
//  - history: quantifies over histories of the current class and the moments
//    on them (the defining clauses);
//  - relational: quantifies over ≺-successors, ≺-predecessors and
//    ∼-equivalents of the current point.
// F has only the history clause; the relational route reuses it.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "itl/error.hpp"
#include "itl/formula.hpp"
#include "itl/point_set.hpp"
#include "itl/structures.hpp"

namespace itl {

enum class Semantics { history, relational };

inline std::string_view to_string(Semantics s) { return s == Semantics::history ? "hist" : "rel"; }

namespace clauses {

using In = std::span<const Word>;
using Out = std::span<Word>;

inline void negation(std::size_t points, In arg, Out out) {
  for (std::size_t w = 0; w < out.size(); ++w) out[w] = ~arg[w];
  trim_words(out, points);
}

inline void conjunction(In lhs, In rhs, Out out) {
  for (std::size_t w = 0; w < out.size(); ++w) out[w] = lhs[w] & rhs[w];
}

// G: for each h in the class and each s on h with t < s, arg at (s, [h]_s).
inline void hist_always_future(const Frame& frame, In arg, Out out) {
  std::fill(out.begin(), out.end(), Word{0});
  for (PointId p = 0; p < frame.point_count(); ++p) {
    const MomentId t = frame.point_moment(p);
    bool ok = true;
    for (HistoryId h : frame.point_histories(p)) {
      for (MomentId s : frame.history_moments(h)) {
        if (frame.earlier(t, s) && !test_bit(arg, frame.point_on(s, h))) ok = false;
      }
    }
    if (ok) set_bit(out, p);
  }
}

// H: for each h in the class and each s on h with s < t, arg at (s, [h]_s).
inline void hist_always_past(const Frame& frame, In arg, Out out) {
  std::fill(out.begin(), out.end(), Word{0});
  for (PointId p = 0; p < frame.point_count(); ++p) {
    const MomentId t = frame.point_moment(p);
    bool ok = true;
    for (HistoryId h : frame.point_histories(p)) {
      for (MomentId s : frame.history_moments(h)) {
        if (frame.earlier(s, t) && !test_bit(arg, frame.point_on(s, h))) ok = false;
      }
    }
    if (ok) set_bit(out, p);
  }
}

// L: arg at (t, rho) for every class rho at t.
inline void hist_all_classes(const Frame& frame, In arg, Out out) {
  std::fill(out.begin(), out.end(), Word{0});
  for (PointId p = 0; p < frame.point_count(); ++p) {
    const MomentId t = frame.point_moment(p);
    bool ok = true;
    for (ClassId c = 0; c < frame.class_count(t); ++c) {
      if (!test_bit(arg, frame.point_at(t, c))) ok = false;
    }
    if (ok) set_bit(out, p);
  }
}

// F: every h in the class has some s with t < s and arg at (s, [h]_s).
inline void hist_weak_future(const Frame& frame, In arg, Out out) {
  std::fill(out.begin(), out.end(), Word{0});
  for (PointId p = 0; p < frame.point_count(); ++p) {
    const MomentId t = frame.point_moment(p);
    bool ok = true;
    for (HistoryId h : frame.point_histories(p)) {
      bool found = false;
      for (MomentId s : frame.history_moments(h)) {
        if (frame.earlier(t, s) && test_bit(arg, frame.point_on(s, h))) found = true;
      }
      if (!found) ok = false;
    }
    if (ok) set_bit(out, p);
  }
}

inline void rel_always_future(const Frame& frame, In arg, Out out) {
  std::fill(out.begin(), out.end(), Word{0});
  for (PointId p = 0; p < frame.point_count(); ++p) {
    bool ok = true;
    for (PointId q = 0; q < frame.point_count() && ok; ++q) {
      if (precedes(frame, p, q) && !test_bit(arg, q)) ok = false;
    }
    if (ok) set_bit(out, p);
  }
}

inline void rel_always_past(const Frame& frame, In arg, Out out) {
  std::fill(out.begin(), out.end(), Word{0});
  for (PointId p = 0; p < frame.point_count(); ++p) {
    bool ok = true;
    for (PointId q = 0; q < frame.point_count() && ok; ++q) {
      if (precedes(frame, q, p) && !test_bit(arg, q)) ok = false;
    }
    if (ok) set_bit(out, p);
  }
}

inline void rel_all_classes(const Frame& frame, In arg, Out out) {
  std::fill(out.begin(), out.end(), Word{0});
  for (PointId p = 0; p < frame.point_count(); ++p) {
    bool ok = true;
    for (PointId q = 0; q < frame.point_count() && ok; ++q) {
      if (same_moment(frame, p, q) && !test_bit(arg, q)) ok = false;
    }
    if (ok) set_bit(out, p);
  }
}

inline void apply_unary(const Frame& frame, Semantics sem, Op op, In arg, Out out) {
  const bool rel = sem == Semantics::relational;
  switch (op) {
    case Op::Not: negation(frame.point_count(), arg, out); return;
    case Op::G: rel ? rel_always_future(frame, arg, out) : hist_always_future(frame, arg, out); return;
    case Op::H: rel ? rel_always_past(frame, arg, out) : hist_always_past(frame, arg, out); return;
    case Op::L: rel ? rel_all_classes(frame, arg, out) : hist_all_classes(frame, arg, out); return;
    case Op::F: hist_weak_future(frame, arg, out); return;
    case Op::Atom:
    case Op::And: break;
  }
  throw Error("apply_unary called with a non-unary connective");
}

}  // namespace clauses

/// The clauses precomputed as point masks, for evaluating many formulas over
/// one frame: G/H/L hold at p iff arg covers mask[p]; F holds at p iff arg
/// meets every mask in future[p] (one per history of the class).
class ClauseTables {
public:
  ClauseTables(const Frame& frame, Semantics sem) : points_(frame.point_count()), stride_(words_for(points_)) {
    const std::size_t n = points_;
    g_.assign(n * stride_, 0);
    h_.assign(n * stride_, 0);
    l_.assign(n * stride_, 0);
    future_begin_.push_back(0);
    for (PointId p = 0; p < n; ++p) {
      const MomentId t = frame.point_moment(p);
      std::span<Word> g{g_.data() + p * stride_, stride_};
      std::span<Word> h{h_.data() + p * stride_, stride_};
      std::span<Word> l{l_.data() + p * stride_, stride_};
      for (PointId q = 0; q < n; ++q) {
        if (frame.point_moment(q) == t) set_bit(l, q);
      }
      if (sem == Semantics::relational) {
        for (PointId q = 0; q < n; ++q) {
          if (precedes(frame, p, q)) set_bit(g, q);
          if (precedes(frame, q, p)) set_bit(h, q);
        }
      }
      for (HistoryId hist : frame.point_histories(p)) {
        std::vector<Word> later(stride_, 0);
        for (MomentId s : frame.history_moments(hist)) {
          const PointId q = frame.point_on(s, hist);
          if (frame.earlier(t, s)) {
            set_bit(later, q);
            if (sem == Semantics::history) set_bit(g, q);
          }
          if (frame.earlier(s, t) && sem == Semantics::history) set_bit(h, q);
        }
        future_.insert(future_.end(), later.begin(), later.end());
      }
      future_begin_.push_back(future_.size() / std::max<std::size_t>(stride_, 1));
    }
  }

  void apply(Op op, std::span<const Word> arg, std::span<Word> out) const {
    switch (op) {
      case Op::Not: clauses::negation(points_, arg, out); return;
      case Op::G: covers(g_, arg, out); return;
      case Op::H: covers(h_, arg, out); return;
      case Op::L: covers(l_, arg, out); return;
      case Op::F: {
        std::fill(out.begin(), out.end(), Word{0});
        for (PointId p = 0; p < points_; ++p) {
          bool ok = true;
          for (std::size_t k = future_begin_[p]; k < future_begin_[p + 1] && ok; ++k) {
            bool meets = false;
            for (std::size_t w = 0; w < stride_; ++w) meets = meets || (future_[k * stride_ + w] & arg[w]) != 0;
            ok = meets;
          }
          if (ok) set_bit(out, p);
        }
        return;
      }
      case Op::Atom:
      case Op::And: break;
    }
    throw Error("ClauseTables::apply called with a non-unary connective");
  }

private:
  void covers(const std::vector<Word>& masks, std::span<const Word> arg, std::span<Word> out) const {
    std::fill(out.begin(), out.end(), Word{0});
    for (PointId p = 0; p < points_; ++p) {
      bool ok = true;
      for (std::size_t w = 0; w < stride_; ++w) ok = ok && (masks[p * stride_ + w] & ~arg[w]) == 0;
      if (ok) set_bit(out, p);
    }
  }

  std::size_t points_;
  std::size_t stride_;
  std::vector<Word> g_, h_, l_;
  std::vector<Word> future_;  // one mask per (point, history through it)
  std::vector<std::size_t> future_begin_;
};

/// Computes truth sets over all points of a frame, memoised per subformula
/// for the lifetime of the evaluator.
class Evaluator {
public:
  Evaluator(Frame frame, const AtomExtensions& atoms, Language lang, Semantics sem = Semantics::history)
      : frame_(std::move(frame)), atoms_(&atoms), lang_(lang), sem_(sem), empty_(frame_.point_count()) {}

  Evaluator(const Model& model, Language lang, Semantics sem = Semantics::history)
      : Evaluator(model.frame(), model.extensions(), lang, sem) {}

  /// Throws LanguageError if `f` uses F and the language is L.
  const PointSet& extension(const Formula& f) {
    if (!f.in_language(lang_)) throw LanguageError("F not in language L: " + print(f));
    return compute(f);
  }

  bool holds(PointId p, const Formula& f) { return extension(f).test(p); }

  const Frame& frame() const noexcept { return frame_; }

private:
  const PointSet& compute(const Formula& f) {
    if (auto it = memo_.find(f.identity()); it != memo_.end()) return it->second;
    PointSet out(frame_.point_count());
    switch (f.op()) {
      case Op::Atom: {
        auto it = atoms_->find(f.name());
        out = it == atoms_->end() ? empty_ : it->second;
        break;
      }
      case Op::And: {
        const PointSet& lhs = compute(f.lhs());
        const PointSet& rhs = compute(f.rhs());
        clauses::conjunction(lhs.words(), rhs.words(), out.words());
        break;
      }
      default: clauses::apply_unary(frame_, sem_, f.op(), compute(f.lhs()).words(), out.words());
    }
    keep_.push_back(f);
    return memo_.emplace(f.identity(), std::move(out)).first->second;
  }

  Frame frame_;
  const AtomExtensions* atoms_;
  Language lang_;
  Semantics sem_;
  PointSet empty_;
  std::vector<Formula> keep_;
  std::unordered_map<const void*, PointSet> memo_;
};

inline bool eval(const Model& model, const Point& at, const Formula& f, Language lang, Semantics sem) {
  const PointId p = model.frame().point_index(at);
  return Evaluator(model, lang, sem).holds(p, f);
}

/// Truth at a point by the history clauses.
inline bool eval_hist(const Model& model, const Point& at, const Formula& f, Language lang = Language::LF) {
  return eval(model, at, f, lang, Semantics::history);
}

/// Truth at a point through ≺ and ∼ (F still by its history clause).
inline bool eval_rel(const Model& model, const Point& at, const Formula& f, Language lang = Language::LF) {
  return eval(model, at, f, lang, Semantics::relational);
}

/// First point (canonical order) where `f` fails, if any.
inline std::optional<Point> model_counterexample(const Model& model, const Formula& f, Language lang = Language::LF,
                                                 Semantics sem = Semantics::history) {
  Evaluator ev(model, lang, sem);
  const PointSet& ext = ev.extension(f);
  for (PointId p = 0; p < ext.size(); ++p) {
    if (!ext.test(p)) return model.frame().point(p);
  }
  return std::nullopt;
}

inline bool model_valid(const Model& model, const Formula& f, Language lang = Language::LF,
                        Semantics sem = Semantics::history) {
  return !model_counterexample(model, f, lang, sem).has_value();
}

/// First point (canonical order) where `f` holds, if any.
inline std::optional<Point> model_sat(const Model& model, const Formula& f, Language lang = Language::LF,
                                      Semantics sem = Semantics::history) {
  Evaluator ev(model, lang, sem);
  const PointSet& ext = ev.extension(f);
  for (PointId p = 0; p < ext.size(); ++p) {
    if (ext.test(p)) return model.frame().point(p);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Frame validity by exhaustive valuation enumeration

constexpr std::size_t default_enumeration_bound = 20;

/// A valuation and a point: a countermodel for validity or a witness for
/// satisfiability.
struct PointedValuation {
  Valuation valuation;
  Point point;
};

namespace detail {

inline std::uint64_t valuation_count(const Frame& frame, std::size_t atom_count, std::size_t bound) {
  const std::size_t bits = frame.point_count() * atom_count;
  if (bits > bound || bits >= 63) {
    throw BoundError("valuation enumeration needs 2^" + std::to_string(bits) + " valuations (" +
                     std::to_string(frame.point_count()) + " points x " + std::to_string(atom_count) +
                     " atoms), above the bound of " + std::to_string(bound) + " bits");
  }
  return std::uint64_t{1} << bits;
}

// Valuation number `code`: bit a*n + p says whether atom a holds at point p.
inline AtomExtensions decode_valuation(const Frame& frame, const std::vector<std::string>& atoms,
                                       std::uint64_t code) {
  const std::size_t n = frame.point_count();
  AtomExtensions out;
  for (std::size_t a = 0; a < atoms.size(); ++a) {
    PointSet ext(n);
    for (PointId p = 0; p < n; ++p) {
      if ((code >> (a * n + p)) & 1U) ext.set(p);
    }
    out.emplace(atoms[a], std::move(ext));
  }
  return out;
}

inline Valuation to_valuation(const Frame& frame, const AtomExtensions& ext) {
  Valuation out;
  for (const auto& [atom, set] : ext) {
    auto& pts = out[atom];
    for (PointId p = 0; p < set.size(); ++p) {
      if (set.test(p)) pts.insert(frame.point(p));
    }
  }
  return out;
}

// Searches valuations of atoms(f) for a point whose truth value is `wanted`.
inline std::optional<PointedValuation> search_valuations(const Frame& frame, const Formula& f, Language lang,
                                                         std::size_t bound, bool wanted) {
  if (!f.in_language(lang)) throw LanguageError("F not in language L: " + print(f));
  const auto atom_set = f.atoms();
  const std::vector<std::string> atoms(atom_set.begin(), atom_set.end());
  const std::uint64_t total = valuation_count(frame, atoms.size(), bound);
  for (std::uint64_t code = 0; code < total; ++code) {
    const AtomExtensions ext = decode_valuation(frame, atoms, code);
    Evaluator ev(frame, ext, lang);
    const PointSet& truth = ev.extension(f);
    for (PointId p = 0; p < truth.size(); ++p) {
      if (truth.test(p) == wanted) return PointedValuation{to_valuation(frame, ext), frame.point(p)};
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// A valuation and point falsifying `f`, or nothing if `f` is valid.
/// Throws BoundError when points x atoms(f) exceeds `bound`.
inline std::optional<PointedValuation> frame_countermodel(const Frame& frame, const Formula& f,
                                                          Language lang = Language::LF,
                                                          std::size_t bound = default_enumeration_bound) {
  return detail::search_valuations(frame, f, lang, bound, false);
}

inline bool frame_valid(const Frame& frame, const Formula& f, Language lang = Language::LF,
                        std::size_t bound = default_enumeration_bound) {
  return !frame_countermodel(frame, f, lang, bound).has_value();
}

inline std::optional<PointedValuation> frame_sat(const Frame& frame, const Formula& f, Language lang = Language::LF,
                                                 std::size_t bound = default_enumeration_bound) {
  return detail::search_valuations(frame, f, lang, bound, true);
}

// ---------------------------------------------------------------------------
// Corpus evaluation

/// Truth sets of every corpus entry over one model, one row per entry.
class CorpusExtensions {
public:
  CorpusExtensions(std::size_t entries, std::size_t points)
      : points_(points), stride_(words_for(points)), data_(entries * stride_, 0) {}

  std::size_t points() const noexcept { return points_; }
  std::span<const Word> row(std::size_t i) const { return {data_.data() + i * stride_, stride_}; }
  std::span<Word> row(std::size_t i) { return {data_.data() + i * stride_, stride_}; }
  bool test(std::size_t i, PointId p) const { return test_bit(row(i), p); }

  bool all(std::size_t i) const {
    auto r = row(i);
    for (std::size_t w = 0; w + 1 < stride_; ++w) {
      if (r[w] != ~Word{0}) return false;
    }
    const std::size_t tail = points_ - (stride_ - 1) * word_bits;
    const Word mask = tail == word_bits ? ~Word{0} : (Word{1} << tail) - 1;
    return stride_ == 0 || (r[stride_ - 1] & mask) == mask;
  }

private:
  std::size_t points_;
  std::size_t stride_;
  std::vector<Word> data_;
};

inline CorpusExtensions evaluate_corpus(const Frame& frame, const AtomExtensions& atoms, const FormulaCorpus& corpus,
                                        Semantics sem = Semantics::history) {
  CorpusExtensions out(corpus.size(), frame.point_count());
  const ClauseTables tables(frame, sem);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& e = corpus.entry(i);
    switch (e.op) {
      case Op::Atom: {
        auto it = atoms.find(corpus.atoms()[e.lhs]);
        if (it != atoms.end()) std::copy(it->second.words().begin(), it->second.words().end(), out.row(i).begin());
        break;
      }
      case Op::And: clauses::conjunction(out.row(e.lhs), out.row(e.rhs), out.row(i)); break;
      default: tables.apply(e.op, out.row(e.lhs), out.row(i));
    }
  }
  return out;
}

inline CorpusExtensions evaluate_corpus(const Model& model, const FormulaCorpus& corpus,
                                        Semantics sem = Semantics::history) {
  return evaluate_corpus(model.frame(), model.extensions(), corpus, sem);
}

/// Frame validity of every corpus entry, enumerating valuations of all corpus
/// atoms. Same result as frame_valid per entry, since extra atoms are inert.
inline std::vector<bool> frame_valid_corpus(const Frame& frame, const FormulaCorpus& corpus,
                                            std::size_t bound = default_enumeration_bound) {
  const std::uint64_t total = detail::valuation_count(frame, corpus.atoms().size(), bound);
  std::vector<bool> valid(corpus.size(), true);
  for (std::uint64_t code = 0; code < total; ++code) {
    const auto table = evaluate_corpus(frame, detail::decode_valuation(frame, corpus.atoms(), code), corpus);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      if (valid[i] && !table.all(i)) valid[i] = false;
    }
  }
  return valid;
}

}  // namespace itl
