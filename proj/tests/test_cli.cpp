#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "itl/cli.hpp"

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "itl");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = itl::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string sample(const std::string& name) { return std::string(ITL_SAMPLES_DIR) + "/" + name; }

class EnvGuard {
public:
  explicit EnvGuard(const char* value) {
    if (value) {
      setenv("ITL_MAX_ENUM", value, 1);
    } else {
      unsetenv("ITL_MAX_ENUM");
    }
  }
  ~EnvGuard() { unsetenv("ITL_MAX_ENUM"); }
};

}  // namespace

TEST(Cli, Validate) {
  auto ok = run({"validate", sample("fork.frame.json")});
  EXPECT_EQ(ok.code, 0);
  EXPECT_EQ(ok.out, "ok\n");
  auto bad = run({"validate", sample("cycle.frame.json")});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("cycle"), std::string::npos);
  auto json = run({"--json", "validate", sample("cycle.frame.json")});
  EXPECT_EQ(json.code, 1);
  const auto j = itl::Json::parse(json.out);
  EXPECT_FALSE(j.at("ok").get<bool>());
  EXPECT_FALSE(j.at("violations").empty());
  EXPECT_EQ(run({"validate", sample("missing.json")}).code, 2);
}

TEST(Cli, HistoriesAndPoints) {
  auto h = run({"histories", sample("fork.frame.json")});
  EXPECT_EQ(h.code, 0);
  EXPECT_EQ(h.out, "a: r a\nb: r b\n");
  EXPECT_EQ(run({"histories", sample("fork.frame.json"), "--through", "a"}).out, "a: r a\n");
  auto p = run({"points", sample("fork.frame.json")});
  EXPECT_EQ(p.out, "a/a {a}\nb/b {b}\nr/a {a,b}\n");
  auto pj = itl::Json::parse(run({"--json", "points", sample("fork_split.frame.json")}).out);
  EXPECT_EQ(pj.size(), 4u);
}

TEST(Cli, Eval) {
  auto strong = run({"eval", sample("f1.model.json"), "--at", "r/a", "--formula", "F p", "--semantics", "both"});
  EXPECT_EQ(strong.code, 1);
  EXPECT_EQ(strong.out, "hist: false\nrel: false\n");
  auto weak = run({"eval", sample("f1.model.json"), "--at", "r/b", "--formula", "f p", "--semantics", "hist"});
  EXPECT_EQ(weak.code, 0);
  EXPECT_EQ(weak.out, "hist: true\n");
  EXPECT_EQ(run({"eval", sample("f1.model.json"), "--at", "r/a", "--formula", "F p", "--mode", "L"}).code, 2);
  EXPECT_EQ(run({"eval", sample("f1.model.json"), "--at", "r/a", "--formula", "p &"}).code, 2);
  EXPECT_EQ(run({"eval", sample("f1.model.json"), "--at", "q/a", "--formula", "p"}).code, 2);
  auto j = itl::Json::parse(run({"--json", "eval", sample("f1.model.json"), "--at", "r/a", "--formula", "f p"}).out);
  EXPECT_TRUE(j.at("hist").get<bool>());
}

TEST(Cli, CheckOnModelsAndFrames) {
  EXPECT_EQ(run({"check", sample("f1.model.json"), "--formula", "p", "--sat"}).out, "satisfiable at a/a\n");
  auto nv = run({"check", sample("f1.model.json"), "--formula", "p", "--valid"});
  EXPECT_EQ(nv.code, 1);
  EXPECT_EQ(nv.out, "not valid: fails at b/b\n");
  EXPECT_EQ(run({"check", sample("fork_split.frame.json"), "--formula", "p -> L p", "--valid"}).code, 1);
  EXPECT_EQ(run({"check", sample("fork.frame.json"), "--formula", "L p -> p", "--valid"}).out, "valid\n");
  EXPECT_EQ(run({"check", sample("fork.frame.json"), "--formula", "p", "--sat", "--valid"}).code, 2);
}

TEST(Cli, EnumerationBoundPrecedence) {
  const std::vector<std::string> args{"check", sample("fork.frame.json"), "--formula", "p & q", "--sat"};
  {
    EnvGuard env("5");
    EXPECT_EQ(run(args).code, 2);
    auto with_flag = args;
    with_flag.insert(with_flag.end(), {"--max-enum", "6"});
    EXPECT_EQ(run(with_flag).code, 0);
  }
  {
    EnvGuard env(nullptr);
    EXPECT_EQ(run(args).code, 0);
    auto low = args;
    low.insert(low.end(), {"--max-enum", "5"});
    EXPECT_EQ(run(low).code, 2);
  }
  {
    EnvGuard env("lots");
    EXPECT_EQ(run(args).code, 2);
  }
}

TEST(Cli, PMorph) {
  auto collapse = run({"pmorph", sample("twig.frame.json"), sample("chain.frame.json"), sample("collapse.map.json")});
  EXPECT_EQ(collapse.code, 0);
  EXPECT_EQ(collapse.out, "G-f: pass\nG-b: pass\nH-b: pass\nL-f: pass\nL-b: pass\nF-f: pass\nF-b: pass\n");
  auto split = run({"pmorph", sample("fork_split.frame.json"), sample("fork.frame.json"), sample("split_merge.map.json")});
  EXPECT_EQ(split.code, 1);
  EXPECT_NE(split.out.find("G-b: FAIL"), std::string::npos);
  auto lmode = run({"pmorph", sample("twig.frame.json"), sample("chain.frame.json"), sample("collapse.map.json"),
                    "--mode", "L"});
  EXPECT_EQ(lmode.out.find("F-f"), std::string::npos);
  auto model = run({"pmorph", sample("twig.frame.json"), sample("chain.frame.json"), sample("collapse.map.json"),
                    "--model", sample("twig.model.json"), sample("chain.model.json")});
  EXPECT_EQ(model.code, 0);
  EXPECT_NE(model.out.find("PV: pass"), std::string::npos);
  EXPECT_EQ(run({"pmorph", sample("twig.frame.json"), sample("chain.frame.json"), sample("collapse.map.json"),
                 "--model", sample("f1.model.json"), sample("chain.model.json")})
                .code,
            2);
  auto j = itl::Json::parse(
      run({"--json", "pmorph", sample("fork_split.frame.json"), sample("fork.frame.json"), sample("split_merge.map.json")})
          .out);
  EXPECT_FALSE(j.at("ok").get<bool>());
}

TEST(Cli, PMorphSearch) {
  auto found = run({"pmorph-search", sample("twig.frame.json"), sample("chain.frame.json")});
  EXPECT_EQ(found.code, 0);
  EXPECT_NE(found.out.find("a1/a1->t/t a2/a2->t/t r/a1->s/t\n1 p-morphism\n"), std::string::npos);
  auto none = run({"pmorph-search", sample("chain.frame.json"), sample("twig.frame.json"), "--surjective"});
  EXPECT_EQ(none.code, 1);
  EXPECT_EQ(none.out, "0 p-morphisms\n");
  EXPECT_EQ(run({"pmorph-search", sample("twig.frame.json"), sample("chain.frame.json"), "--bound", "2"}).code, 2);
  auto limited = run({"pmorph-search", sample("fork.frame.json"), sample("fork.frame.json"), "--limit", "1"});
  EXPECT_NE(limited.out.find("1 p-morphism\n"), std::string::npos);
}

TEST(Cli, Bisimulation) {
  const auto twig = sample("twig.model.json");
  const auto chain = sample("chain.model.json");
  auto ok = run({"bisim-check", twig, chain, sample("collapse.relation.json"), "--anchors", "r/a1", "s/t"});
  EXPECT_EQ(ok.code, 0);
  EXPECT_EQ(ok.out, "pass\n");
  auto anchor = run({"bisim-check", twig, chain, sample("collapse.relation.json"), "--anchors", "a1/a1", "s/t"});
  EXPECT_EQ(anchor.code, 1);
  EXPECT_NE(anchor.out.find("B fails"), std::string::npos);
  auto max = run({"bisim-max", twig, chain});
  EXPECT_EQ(max.code, 0);
  const auto rel = itl::relation_from_json(itl::Json::parse(max.out));
  EXPECT_EQ(rel.pairs.size(), 3u);
}

TEST(Cli, Distinguish) {
  const auto f1 = sample("f1.model.json");
  auto atom = run({"distinguish", f1, f1, "--anchors", "a/a", "b/b"});
  EXPECT_EQ(atom.code, 0);
  EXPECT_EQ(atom.out, "p\n");
  auto none = run({"distinguish", sample("twig.model.json"), sample("twig.model.json"), "--anchors", "a1/a1", "a2/a2",
                   "--max-depth", "2"});
  EXPECT_EQ(none.code, 1);
  EXPECT_EQ(none.out, "indistinguishable up to depth 2\n");
  auto root = run({"distinguish", f1, f1, "--anchors", "r/a", "a/a"});
  EXPECT_EQ(root.code, 0);
}

TEST(Cli, Gen) {
  auto a = run({"gen", "--seed", "7", "--moments", "6", "--policy", "coarsened", "--atoms", "2"});
  auto b = run({"gen", "--seed", "7", "--moments", "6", "--policy", "coarsened", "--atoms", "2"});
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  const auto j = itl::Json::parse(a.out);
  EXPECT_EQ(j.at("moments").size(), 6u);
  EXPECT_TRUE(j.contains("valuation"));
  EXPECT_FALSE(itl::Json::parse(run({"gen", "--frame"}).out).contains("valuation"));
  EXPECT_EQ(run({"gen", "--policy", "fine"}).code, 2);
  EXPECT_EQ(run({"gen", "--moments", "0"}).code, 2);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"eval", sample("f1.model.json")}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}
