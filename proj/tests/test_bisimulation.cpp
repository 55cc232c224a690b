#include <gtest/gtest.h>

#include <random>

#include "itl/bisimulation.hpp"
#include "itl/document.hpp"
#include "itl/generate.hpp"
#include "itl/semantics.hpp"
#include "itl/suite.hpp"
#include "oracles.hpp"

using namespace itl;

namespace {

std::string sample(const std::string& name) { return std::string(ITL_SAMPLES_DIR) + "/" + name; }

std::vector<Model> small_models(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::vector<Model> out;
  for (const auto& nf : frame_catalogue()) {
    if (nf.frame.point_count() <= 5) out.push_back(Model::build(nf.frame, random_valuation(rng, nf.frame, {"p"})));
  }
  for (int i = 0; i < count; ++i) {
    GenOptions opt;
    opt.seed = rng();
    opt.moments = 1 + rng() % 4;
    opt.branching = 1 + rng() % 2;
    opt.policy = i % 2 ? IndistPolicy::coarsened : IndistPolicy::undividedness;
    opt.atoms = 1;
    Model m = gen_random_model(opt);
    if (m.frame().point_count() <= 5) out.push_back(std::move(m));
  }
  return out;
}

oracle::OPairs to_opairs(const Model& a, const Model& b, const RelationMatrix& rel) {
  oracle::OPairs out;
  for (const auto& [s, t] : rel.pairs()) out.insert({oracle::to_opoint(a.frame(), s), oracle::to_opoint(b.frame(), t)});
  return out;
}

RelationMatrix identity(const Model& m) {
  RelationMatrix rel(m.frame().point_count(), m.frame().point_count());
  for (PointId p = 0; p < m.frame().point_count(); ++p) rel.insert(p, p);
  return rel;
}

Model chain_r_a() {
  const Tree tree{{"r", "a"}, {{"r", "a"}}};
  return Model::build(Frame::build(tree, undividedness_indist(tree)), {});
}

}  // namespace

TEST(Bisimulation, IdentityIsABisimulation) {
  for (const Model& m : small_models(1, 10)) {
    const auto rel = identity(m);
    EXPECT_TRUE(is_bisimulation(m, m, rel, Language::LF));
    EXPECT_TRUE(check_bisimulation(m, m, rel, {0, 0}, Language::LF).ok());
  }
}

TEST(Bisimulation, CollapseGraphPassesIncludingFuture) {
  const Model twig = load_model(sample("twig.model.json"));
  const Model chain = load_model(sample("chain.model.json"));
  const auto rel = load_relation(sample("collapse.relation.json"));
  const auto report = check_bisimulation(twig, chain, rel, {Point{"r", "a1"}, Point{"s", "t"}}, Language::LF);
  EXPECT_TRUE(report.ok());
  EXPECT_TRUE(bisimilar(twig, Point{"r", "a1"}, chain, Point{"s", "t"}, Language::LF));
}

TEST(Bisimulation, LeafAgainstInnerPointFailsGForward) {
  const Model m = chain_r_a();
  RelationMatrix rel(2, 2);
  const PointId root = m.frame().point_index(Point{"r", "a"});
  const PointId leaf = m.frame().point_index(Point{"a", "a"});
  rel.insert(root, leaf);
  const auto report = check_bisimulation(m, m, rel, {root, leaf}, Language::L);
  EXPECT_TRUE(report.failed(Condition::G_f));
  EXPECT_FALSE(report.failed(Condition::B));
  for (const auto& f : report.failures) EXPECT_TRUE(replay_failure(m, m, rel, f, Language::L)) << describe(f.witness);
  const auto missing = check_bisimulation(m, m, RelationMatrix(2, 2), {root, root}, Language::L);
  EXPECT_TRUE(missing.failed(Condition::B));
}

TEST(Bisimulation, ConditionsMatchTheDefinitions) {
  std::mt19937_64 rng(7);
  const auto models = small_models(3, 20);
  std::size_t positives = 0;
  for (const auto& a : models) {
    for (const auto& b : models) {
      const auto oa = oracle::model_of(a);
      const auto ob = oracle::model_of(b);
      for (int k = 0; k < 3; ++k) {
        RelationMatrix rel(a.frame().point_count(), b.frame().point_count());
        for (PointId s = 0; s < rel.rows(); ++s) {
          for (PointId t = 0; t < rel.cols(); ++t) {
            if (rng() % 3 == 0) rel.insert(s, t);
          }
        }
        if (k == 0) rel = greatest_bisimulation_matrix(a, b, Language::LF);
        const auto pairs = to_opairs(a, b, rel);
        for (Language lang : {Language::L, Language::LF}) {
          const bool expected = oracle::is_bisimulation(oa, ob, pairs, lang == Language::LF);
          ASSERT_EQ(is_bisimulation(a, b, rel, lang), expected);
          positives += expected && rel.size() > 0;
          if (rel.size() == 0) continue;
          const auto anchor = rel.pairs().front();
          const auto report = check_bisimulation(a, b, rel, anchor, lang);
          ASSERT_EQ(report.ok(), expected);
          for (const auto& f : report.failures) ASSERT_TRUE(replay_failure(a, b, rel, f, lang));
        }
      }
    }
  }
  EXPECT_GT(positives, 0u);
}

TEST(Greatest, SinglePointsGiveTheFullProduct) {
  const Tree one{{"x"}, {}};
  const Model m = Model::build(Frame::build(one, undividedness_indist(one)), {});
  const auto rel = greatest_bisimulation_matrix(m, m, Language::LF);
  EXPECT_EQ(rel.size(), 1u);
  EXPECT_TRUE(rel.contains(0, 0));
}

TEST(Greatest, ChainOfTwoIsRigid) {
  const Model m = chain_r_a();
  const auto rel = greatest_bisimulation(m, m, Language::LF);
  const PointRelation expected{{{Point{"a", "a"}, Point{"a", "a"}}, {Point{"r", "a"}, Point{"r", "a"}}}};
  EXPECT_EQ(rel, expected);
}

TEST(Greatest, MatchesTheOracleFixpoint) {
  const auto models = small_models(13, 16);
  for (const auto& a : models) {
    for (const auto& b : models) {
      const auto oa = oracle::model_of(a);
      const auto ob = oracle::model_of(b);
      for (Language lang : {Language::L, Language::LF}) {
        const auto rel = greatest_bisimulation_matrix(a, b, lang);
        ASSERT_EQ(to_opairs(a, b, rel), oracle::greatest(oa, ob, lang == Language::LF));
      }
    }
  }
}

TEST(Greatest, IsAFixpointContainingEveryUnionOfBisimulations) {
  const auto models = small_models(19, 10);
  for (const auto& a : models) {
    for (const auto& b : models) {
      const auto z = greatest_bisimulation_matrix(a, b, Language::LF);
      EXPECT_TRUE(is_bisimulation(a, b, z, Language::LF));
      // Adding any missing pair breaks the property.
      for (PointId s = 0; s < z.rows(); ++s) {
        for (PointId t = 0; t < z.cols(); ++t) {
          if (z.contains(s, t)) continue;
          auto bigger = z;
          bigger.insert(s, t);
          EXPECT_FALSE(is_bisimulation(a, b, bigger, Language::LF));
        }
      }
    }
  }
}

TEST(Greatest, UnionOfTwoBisimulationsIsOne) {
  const Model twig = load_model(sample("twig.model.json"));
  const Model chain = load_model(sample("chain.model.json"));
  const auto collapse = to_matrix(twig, chain, load_relation(sample("collapse.relation.json")));
  const auto z = greatest_bisimulation_matrix(twig, chain, Language::LF);
  for (const auto& [s, t] : collapse.pairs()) EXPECT_TRUE(z.contains(s, t));
  const auto self = greatest_bisimulation_matrix(twig, twig, Language::LF);
  auto merged = identity(twig);
  for (const auto& [s, t] : self.pairs()) merged.insert(s, t);
  EXPECT_TRUE(is_bisimulation(twig, twig, merged, Language::LF));
}

TEST(Bisimilar, ImpliesAgreementOnFormulas) {
  const auto models = small_models(23, 10);
  for (const auto& a : models) {
    for (const auto& b : models) {
      const auto z = greatest_bisimulation_matrix(a, b, Language::LF);
      Evaluator ea(a, Language::LF, Semantics::history);
      Evaluator eb(b, Language::LF, Semantics::history);
      for (std::uint64_t s = 0; s < 15; ++s) {
        const Formula f = random_formula(s * 31 + 5, 3, {"p"}, Language::LF);
        for (const auto& [x, y] : z.pairs()) ASSERT_EQ(ea.holds(x, f), eb.holds(y, f)) << print(f);
      }
    }
  }
}

TEST(Distinguish, RootAgainstLeaf) {
  const Model m = chain_r_a();
  const auto f = find_distinguishing_formula(m, Point{"r", "a"}, m, Point{"a", "a"}, Language::L, 4);
  ASSERT_TRUE(f.has_value());
  EXPECT_LE(f->depth(), 2);
  EXPECT_NE(eval_hist(m, Point{"r", "a"}, *f), eval_hist(m, Point{"a", "a"}, *f));
}

TEST(Distinguish, DifferingAtomIsTheAnswer) {
  const Model f1 = f1_model();
  const auto f = find_distinguishing_formula(f1, Point{"a", "a"}, f1, Point{"b", "b"}, Language::LF);
  ASSERT_TRUE(f.has_value());
  EXPECT_EQ(print(*f), "p");
}

TEST(Distinguish, NothingForBisimilarPoints) {
  const Model twig = load_model(sample("twig.model.json"));
  EXPECT_FALSE(find_distinguishing_formula(twig, Point{"a1", "a1"}, twig, Point{"a2", "a2"}, Language::LF, 3));
}

TEST(Distinguish, WitnessesSeparateNonBisimilarPairs) {
  const auto models = small_models(29, 8);
  std::size_t found = 0;
  for (const auto& a : models) {
    for (const auto& b : models) {
      const auto z = greatest_bisimulation_matrix(a, b, Language::LF);
      for (PointId s = 0; s < z.rows(); ++s) {
        for (PointId t = 0; t < z.cols(); ++t) {
          const Point p = a.frame().point(s);
          const Point q = b.frame().point(t);
          const auto f = find_distinguishing_formula(a, p, b, q, Language::LF, 3);
          if (z.contains(s, t)) {
            ASSERT_FALSE(f.has_value());
            continue;
          }
          if (!f) continue;
          ++found;
          ASSERT_NE(eval_hist(a, p, *f), eval_hist(b, q, *f)) << print(*f);
          ASSERT_NE(eval_rel(a, p, *f), eval_rel(b, q, *f)) << print(*f);
        }
      }
    }
  }
  EXPECT_GT(found, 0u);
}
