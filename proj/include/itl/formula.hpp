#pragma once

// Formulas of the tense-modal language with G, H, L and optionally F.
// Derived operators are desugared by the parser, so an AST only ever holds
// the primitive connectives.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "itl/error.hpp"

namespace itl {

/// L: atoms, ~, &, G, H, L.  LF: additionally F.
enum class Language { L, LF };

inline std::string_view to_string(Language lang) { return lang == Language::L ? "L" : "LF"; }

enum class Op : std::uint8_t { Atom, Not, And, G, H, L, F };

inline bool is_unary(Op op) { return op != Op::Atom && op != Op::And; }

class Formula {
public:
  static Formula atom(std::string name) { return Formula(std::make_shared<const Node>(Op::Atom, std::move(name))); }
  static Formula unary(Op op, Formula operand) {
    return Formula(std::make_shared<const Node>(op, std::move(operand.node_), nullptr));
  }
  static Formula negation(Formula operand) { return unary(Op::Not, std::move(operand)); }
  static Formula conjunction(Formula lhs, Formula rhs) {
    return Formula(std::make_shared<const Node>(Op::And, std::move(lhs.node_), std::move(rhs.node_)));
  }

  Op op() const noexcept { return node_->op; }
  /// Atom name; empty for compound formulas.
  const std::string& name() const noexcept { return node_->name; }
  /// Operand of a unary formula, left conjunct of a conjunction.
  Formula lhs() const { return Formula(node_->lhs); }
  Formula rhs() const { return Formula(node_->rhs); }

  /// Atoms have depth 0; every connective adds one.
  int depth() const noexcept { return node_->depth; }
  bool uses_future() const noexcept { return node_->uses_future; }
  bool in_language(Language lang) const noexcept { return lang == Language::LF || !uses_future(); }

  std::set<std::string> atoms() const {
    std::set<std::string> out;
    collect_atoms(*node_, out);
    return out;
  }

  /// Stable while any copy of this formula is alive; used as a memo key.
  const void* identity() const noexcept { return node_.get(); }

  friend bool operator==(const Formula& a, const Formula& b) { return equal(a.node_.get(), b.node_.get()); }

private:
  struct Node {
    Node(Op o, std::string n) : op(o), name(std::move(n)) {}
    Node(Op o, std::shared_ptr<const Node> l, std::shared_ptr<const Node> r)
        : op(o), lhs(std::move(l)), rhs(std::move(r)) {
      depth = 1 + std::max(lhs->depth, rhs ? rhs->depth : 0);
      uses_future = op == Op::F || lhs->uses_future || (rhs && rhs->uses_future);
    }

    Op op;
    std::string name;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
    int depth = 0;
    bool uses_future = false;
  };

  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  static bool equal(const Node* a, const Node* b) {
    if (a == b) return true;
    if (a->op != b->op || a->depth != b->depth) return false;
    if (a->op == Op::Atom) return a->name == b->name;
    if (!equal(a->lhs.get(), b->lhs.get())) return false;
    return a->op != Op::And || equal(a->rhs.get(), b->rhs.get());
  }

  static void collect_atoms(const Node& n, std::set<std::string>& out) {
    if (n.op == Op::Atom) {
      out.insert(n.name);
      return;
    }
    collect_atoms(*n.lhs, out);
    if (n.rhs) collect_atoms(*n.rhs, out);
  }

  std::shared_ptr<const Node> node_;
};

// ---------------------------------------------------------------------------
// Printing

inline std::string_view op_symbol(Op op) {
  switch (op) {
    case Op::Not: return "~";
    case Op::And: return "&";
    case Op::G: return "G";
    case Op::H: return "H";
    case Op::L: return "L";
    case Op::F: return "F";
    case Op::Atom: break;
  }
  return "";
}

/// Binary connectives are fully parenthesised; no resugaring.
inline std::string print(const Formula& f) {
  switch (f.op()) {
    case Op::Atom: return f.name();
    case Op::Not: return "~" + print(f.lhs());
    case Op::And: return "(" + print(f.lhs()) + " & " + print(f.rhs()) + ")";
    default: return std::string(op_symbol(f.op())) + " " + print(f.lhs());
  }
}

inline std::string_view dual_symbol(Op op) {
  switch (op) {
    case Op::G: return "f";
    case Op::H: return "P";
    case Op::L: return "M";
    case Op::F: return "g";
    default: return "";
  }
}

/// Like print, but folds ~X~ into P, f, M, g and negated conjunctions into
/// | and ->. Parsing the result gives back the same formula.
inline std::string print_sugared(const Formula& f) {
  switch (f.op()) {
    case Op::Atom: return f.name();
    case Op::And: return "(" + print_sugared(f.lhs()) + " & " + print_sugared(f.rhs()) + ")";
    case Op::Not: {
      const Formula inner = f.lhs();
      if (inner.op() == Op::And) {
        const Formula a = inner.lhs();
        const Formula b = inner.rhs();
        if (a.op() == Op::Not && b.op() == Op::Not) {
          return "(" + print_sugared(a.lhs()) + " | " + print_sugared(b.lhs()) + ")";
        }
        if (b.op() == Op::Not) return "(" + print_sugared(a) + " -> " + print_sugared(b.lhs()) + ")";
      }
      if (is_unary(inner.op()) && inner.op() != Op::Not && inner.lhs().op() == Op::Not) {
        return std::string(dual_symbol(inner.op())) + " " + print_sugared(inner.lhs().lhs());
      }
      return "~" + print_sugared(inner);
    }
    default: return std::string(op_symbol(f.op())) + " " + print_sugared(f.lhs());
  }
}

// ---------------------------------------------------------------------------
// Parsing
//
//   impl  := disj ('->' impl)?
//   disj  := conj ('|' conj)*
//   conj  := unary ('&' unary)*
//   unary := ('~' | G | H | L | F | P | M | f | g) unary | atom | '(' impl ')'
//
// Atoms match [a-z][a-zA-Z0-9_]* except the reserved words f and g.

namespace detail {

class Parser {
public:
  Parser(std::string_view text, Language lang) : text_(text), lang_(lang) {}

  Formula parse() {
    Formula f = implication();
    skip_space();
    if (pos_ != text_.size()) throw ParseError("unexpected '" + std::string(1, text_[pos_]) + "'", pos_);
    return f;
  }

private:
  static Formula neg(Formula f) { return Formula::negation(std::move(f)); }

  Formula implication() {
    Formula lhs = disjunction();
    if (accept("->")) {
      Formula rhs = implication();
      return neg(Formula::conjunction(std::move(lhs), neg(std::move(rhs))));
    }
    return lhs;
  }

  Formula disjunction() {
    Formula lhs = conjunction();
    while (accept("|")) {
      Formula rhs = conjunction();
      lhs = neg(Formula::conjunction(neg(std::move(lhs)), neg(std::move(rhs))));
    }
    return lhs;
  }

  Formula conjunction() {
    Formula lhs = unary();
    while (accept("&")) lhs = Formula::conjunction(std::move(lhs), unary());
    return lhs;
  }

  Formula unary() {
    skip_space();
    if (pos_ == text_.size()) throw ParseError("unexpected end of formula", pos_);
    const std::size_t start = pos_;
    if (accept("~")) return neg(unary());
    if (accept("(")) {
      Formula inner = implication();
      if (!accept(")")) throw ParseError("expected ')'", pos_);
      return inner;
    }
    std::string word = identifier();
    if (word.empty()) throw ParseError("unexpected '" + std::string(1, text_[start]) + "'", start);

    if (word == "G") return Formula::unary(Op::G, unary());
    if (word == "H") return Formula::unary(Op::H, unary());
    if (word == "L") return Formula::unary(Op::L, unary());
    if (word == "P") return neg(Formula::unary(Op::H, neg(unary())));
    if (word == "f") return neg(Formula::unary(Op::G, neg(unary())));
    if (word == "M") return neg(Formula::unary(Op::L, neg(unary())));
    if (word == "F" || word == "g") {
      if (lang_ == Language::L) throw LanguageError("F not in language L ('" + word + "')", start);
      if (word == "F") return Formula::unary(Op::F, unary());
      return neg(Formula::unary(Op::F, neg(unary())));
    }
    if (!std::islower(static_cast<unsigned char>(word.front()))) {
      throw ParseError("'" + word + "' is neither an operator nor an atom", start);
    }
    return Formula::atom(std::move(word));
  }

  std::string identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  bool accept(std::string_view token) {
    skip_space();
    if (text_.substr(pos_, token.size()) != token) return false;
    pos_ += token.size();
    return true;
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string_view text_;
  Language lang_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Formula parse(std::string_view text, Language lang = Language::LF) {
  return detail::Parser(text, lang).parse();
}

// ---------------------------------------------------------------------------
// Generation

/// Deterministic in `seed`; depth <= max_depth; F only in LF.
inline Formula random_formula(std::uint64_t seed, int max_depth, const std::vector<std::string>& atoms,
                              Language lang) {
  if (atoms.empty()) throw Error("random_formula needs at least one atom");
  std::mt19937_64 rng(seed);
  const std::vector<Op> choices = lang == Language::LF
                                      ? std::vector<Op>{Op::Atom, Op::Not, Op::And, Op::G, Op::H, Op::L, Op::F}
                                      : std::vector<Op>{Op::Atom, Op::Not, Op::And, Op::G, Op::H, Op::L};
  auto grow = [&](auto& self, int budget) -> Formula {
    Op op = budget <= 0 ? Op::Atom : choices[rng() % choices.size()];
    if (op == Op::Atom) return Formula::atom(atoms[rng() % atoms.size()]);
    if (op == Op::And) {
      Formula lhs = self(self, budget - 1);
      return Formula::conjunction(std::move(lhs), self(self, budget - 1));
    }
    return Formula::unary(op, self(self, budget - 1));
  };
  return grow(grow, max_depth);
}

/// Every formula of depth <= max_depth over the given atoms, ordered by depth,
/// stored as a DAG: compound entries refer to earlier entries by index.
class FormulaCorpus {
public:
  struct Entry {
    Op op;
    std::uint32_t lhs;  // atom index for Op::Atom
    std::uint32_t rhs;
  };

  FormulaCorpus(int max_depth, std::vector<std::string> atoms, Language lang)
      : atoms_(std::move(atoms)), lang_(lang) {
    if (atoms_.empty()) throw Error("formula corpus needs at least one atom");
    for (std::uint32_t a = 0; a < atoms_.size(); ++a) entries_.push_back({Op::Atom, a, 0});
    level_end_.push_back(entries_.size());

    std::vector<Op> unary_ops{Op::Not, Op::G, Op::H, Op::L};
    if (lang == Language::LF) unary_ops.push_back(Op::F);

    for (int d = 1; d <= max_depth; ++d) {
      const auto prev_begin = static_cast<std::uint32_t>(d >= 2 ? level_end_[d - 2] : 0);
      const auto prev_end = static_cast<std::uint32_t>(level_end_[d - 1]);
      for (Op op : unary_ops) {
        for (std::uint32_t i = prev_begin; i < prev_end; ++i) entries_.push_back({op, i, 0});
      }
      for (std::uint32_t a = 0; a < prev_end; ++a) {
        for (std::uint32_t b = 0; b < prev_end; ++b) {
          if (a >= prev_begin || b >= prev_begin) entries_.push_back({Op::And, a, b});
        }
      }
      level_end_.push_back(entries_.size());
    }
  }

  std::size_t size() const noexcept { return entries_.size(); }
  const Entry& entry(std::size_t i) const { return entries_[i]; }
  const std::vector<Entry>& entries() const noexcept { return entries_; }
  const std::vector<std::string>& atoms() const noexcept { return atoms_; }
  Language language() const noexcept { return lang_; }
  int max_depth() const noexcept { return static_cast<int>(level_end_.size()) - 1; }
  /// One past the last entry of depth <= d.
  std::size_t level_end(int d) const { return level_end_[static_cast<std::size_t>(d)]; }

  Formula formula(std::size_t i) const {
    const Entry& e = entries_[i];
    switch (e.op) {
      case Op::Atom: return Formula::atom(atoms_[e.lhs]);
      case Op::And: return Formula::conjunction(formula(e.lhs), formula(e.rhs));
      default: return Formula::unary(e.op, formula(e.lhs));
    }
  }

private:
  std::vector<std::string> atoms_;
  Language lang_;
  std::vector<Entry> entries_;
  std::vector<std::size_t> level_end_;
};

}  // namespace itl
