#include <gtest/gtest.h>

#include "itl/formula.hpp"

using namespace itl;

namespace {

Formula atom(const char* n) { return Formula::atom(n); }
Formula neg(Formula f) { return Formula::negation(std::move(f)); }
Formula un(Op op, Formula f) { return Formula::unary(op, std::move(f)); }
Formula conj(Formula a, Formula b) { return Formula::conjunction(std::move(a), std::move(b)); }

const std::vector<std::string> pq{"p", "q"};

}  // namespace

TEST(Parse, Basics) {
  EXPECT_EQ(parse("G p"), un(Op::G, atom("p")));
  EXPECT_EQ(parse("P p"), neg(un(Op::H, neg(atom("p")))));
  EXPECT_EQ(parse("f p & L q"), conj(neg(un(Op::G, neg(atom("p")))), un(Op::L, atom("q"))));
}

TEST(Parse, DerivedForms) {
  EXPECT_EQ(parse("M p"), neg(un(Op::L, neg(atom("p")))));
  EXPECT_EQ(parse("g p"), neg(un(Op::F, neg(atom("p")))));
  EXPECT_EQ(parse("p | q"), neg(conj(neg(atom("p")), neg(atom("q")))));
  EXPECT_EQ(parse("p -> q"), neg(conj(atom("p"), neg(atom("q")))));
}

TEST(Parse, PrecedenceAndAssociativity) {
  // & binds tighter than |, which binds tighter than ->; -> is right-associative.
  EXPECT_EQ(parse("p & q | r"), parse("(p & q) | r"));
  EXPECT_EQ(parse("p | q & r"), parse("p | (q & r)"));
  EXPECT_EQ(parse("p -> q -> r"), parse("p -> (q -> r)"));
  EXPECT_NE(parse("p -> q -> r"), parse("(p -> q) -> r"));
  EXPECT_EQ(parse("~p & q"), conj(neg(atom("p")), atom("q")));
  EXPECT_EQ(parse("G ~p"), un(Op::G, neg(atom("p"))));
  EXPECT_EQ(parse("  G\t(p)  "), un(Op::G, atom("p")));
}

TEST(Parse, AtomsAndReservedWords) {
  EXPECT_EQ(parse("x_1Y").name(), "x_1Y");
  EXPECT_EQ(parse("fp").name(), "fp");
  EXPECT_EQ(parse("f f_").op(), Op::Not);
  EXPECT_THROW(parse("f"), ParseError);
  EXPECT_THROW(parse("g"), ParseError);
  EXPECT_THROW(parse("Q"), ParseError);
  EXPECT_THROW(parse("1p"), ParseError);
}

TEST(Parse, Errors) {
  EXPECT_THROW(parse(""), ParseError);
  EXPECT_THROW(parse("(p"), ParseError);
  EXPECT_THROW(parse("p &"), ParseError);
  EXPECT_THROW(parse("p q"), ParseError);
  try {
    parse("p & )");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 4u);
  }
}

TEST(Parse, FutureRejectedInL) {
  EXPECT_THROW(parse("F p", Language::L), LanguageError);
  EXPECT_THROW(parse("q & g p", Language::L), LanguageError);
  EXPECT_NO_THROW(parse("G H L p", Language::L));
  try {
    parse("q & F p", Language::L);
    FAIL();
  } catch (const LanguageError& e) {
    EXPECT_EQ(e.position(), 4u);
  }
}

TEST(Print, Conventions) {
  EXPECT_EQ(print(un(Op::G, atom("p"))), "G p");
  EXPECT_EQ(print(conj(atom("p"), atom("q"))), "(p & q)");
  EXPECT_EQ(print(parse("P p")), "~H ~p");
  EXPECT_EQ(print_sugared(parse("P p")), "P p");
  EXPECT_EQ(print_sugared(parse("f (p | ~p)")), "f (p | ~p)");
  EXPECT_EQ(print_sugared(parse("p -> g q")), "(p -> g q)");
}

TEST(Print, RoundTripOnRandomFormulas) {
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    const Language lang = seed % 2 ? Language::LF : Language::L;
    const Formula f = random_formula(seed, 5, pq, lang);
    EXPECT_EQ(parse(print(f), lang), f) << print(f);
    EXPECT_EQ(parse(print_sugared(f), lang), f) << print_sugared(f);
  }
}

TEST(Random, DeterminismDepthAndMode) {
  EXPECT_EQ(random_formula(0, 0, pq, Language::LF).op(), Op::Atom);
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const Formula a = random_formula(seed, 4, pq, Language::L);
    EXPECT_EQ(a, random_formula(seed, 4, pq, Language::L));
    EXPECT_LE(a.depth(), 4);
    EXPECT_FALSE(a.uses_future());
    for (const auto& atom_name : a.atoms()) EXPECT_TRUE(atom_name == "p" || atom_name == "q");
  }
  EXPECT_THROW(random_formula(0, 2, {}, Language::L), Error);
}

TEST(Random, NeverProducesReservedAtoms) {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const auto atoms = parse(print_sugared(random_formula(seed, 4, pq, Language::LF))).atoms();
    EXPECT_FALSE(atoms.contains("f"));
    EXPECT_FALSE(atoms.contains("g"));
  }
}

// Counts formulas by depth directly: atoms, then 4 or 5 unary operators and
// all conjunctions with at least one operand at the previous depth.
TEST(Corpus, SizesMatchRecurrence) {
  for (Language lang : {Language::L, Language::LF}) {
    const std::size_t unary = lang == Language::L ? 4 : 5;
    std::vector<std::size_t> upto{2};
    std::vector<std::size_t> exact{2};
    for (int d = 1; d <= 3; ++d) {
      const std::size_t prev = upto.back();
      const std::size_t older = prev - exact.back();
      const std::size_t n = unary * exact.back() + prev * prev - older * older;
      exact.push_back(n);
      upto.push_back(prev + n);
    }
    const FormulaCorpus corpus(3, pq, lang);
    EXPECT_EQ(corpus.size(), upto.back());
    for (int d = 0; d <= 3; ++d) EXPECT_EQ(corpus.level_end(d), upto[static_cast<std::size_t>(d)]);
  }
  EXPECT_EQ(FormulaCorpus(3, pq, Language::L).size(), 65534u);
  EXPECT_EQ(FormulaCorpus(3, pq, Language::LF).size(), 115936u);
}

TEST(Corpus, EntriesHaveTheirLevelDepthAndAreDistinct) {
  const FormulaCorpus corpus(2, pq, Language::LF);
  std::set<std::string> seen;
  for (int d = 0; d <= 2; ++d) {
    for (std::size_t i = d == 0 ? 0 : corpus.level_end(d - 1); i < corpus.level_end(d); ++i) {
      const Formula f = corpus.formula(i);
      EXPECT_EQ(f.depth(), d);
      EXPECT_TRUE(seen.insert(print(f)).second);
    }
  }
}
