#pragma once

// The `itl` command-line front end. run() never calls exit(); it returns
//   0  the check holds / the command succeeded
//   1  the check fails (false, invalid, not a p-morphism, ...)
//   2  bad input or usage

#include <cstdlib>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "itl/bisimulation.hpp"
#include "itl/document.hpp"
#include "itl/error.hpp"
#include "itl/formula.hpp"
#include "itl/generate.hpp"
#include "itl/morphisms.hpp"
#include "itl/semantics.hpp"
#include "itl/structures.hpp"
#include "itl/suite.hpp"

namespace itl::cli {

namespace detail {

inline Language parse_language(const std::string& text) {
  if (text == "L") return Language::L;
  if (text == "LF") return Language::LF;
  throw Error("unknown mode '" + text + "' (expected L or LF)");
}

inline std::string join_points(const Frame& fr, std::span<const HistoryId> hs) {
  std::string out;
  for (std::size_t i = 0; i < hs.size(); ++i) out += (i ? "," : "") + fr.leaf_name(hs[i]);
  return out;
}

inline std::string set_text(const std::set<Point>& pts) {
  std::string out = "{";
  bool first = true;
  for (const auto& p : pts) {
    out += (first ? "" : ",") + to_string(p);
    first = false;
  }
  return out + "}";
}

inline std::string valuation_text(const Valuation& val) {
  std::string out;
  for (const auto& [atom, pts] : val) out += (out.empty() ? "" : " ") + atom + "=" + set_text(pts);
  return out.empty() ? "(empty valuation)" : out;
}

inline Json witness_json(const Witness& w) {
  Json j = Json::object();
  auto list = [](const std::vector<Point>& pts) {
    Json a = Json::array();
    for (const auto& p : pts) a.push_back(to_string(p));
    return a;
  };
  if (!w.source.empty()) j["source"] = list(w.source);
  if (!w.target.empty()) j["target"] = list(w.target);
  if (!w.history.empty()) j["history"] = w.history;
  if (!w.atom.empty()) j["atom"] = w.atom;
  return j;
}

inline std::size_t enumeration_bound(const std::optional<std::size_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("ITL_MAX_ENUM")) {
    try {
      return static_cast<std::size_t>(std::stoul(env));
    } catch (const std::exception&) {
      throw Error(std::string("ITL_MAX_ENUM must be a number, got '") + env + "'");
    }
  }
  return default_enumeration_bound;
}

/// Models from --model must sit on the positional frames.
inline void require_same_points(const Frame& a, const Frame& b, const std::string& what) {
  if (points(a) != points(b)) throw DocumentError(what + " model is not over the given frame");
}

struct Context {
  std::ostream& out;
  bool json = false;
};

// ---------------------------------------------------------------------------
// Commands

inline int cmd_validate(Context& ctx, const std::string& path) {
  const auto doc = frame_document_from_json(read_json_file(path));
  const auto report = validate_frame(doc.tree, doc.indist);
  std::optional<std::string> valuation_error;
  if (report.ok() && doc.valuation) {
    try {
      Model::build(Frame::build(doc.tree, doc.indist), *doc.valuation);
    } catch (const InvalidPoint& e) {
      valuation_error = e.what();
    }
  }
  const bool ok = report.ok() && !valuation_error;
  if (ctx.json) {
    Json j{{"ok", ok}, {"violations", Json::array()}};
    for (const auto& v : report.violations) {
      j["violations"].push_back({{"kind", to_string(v.kind)}, {"witness", v.witness}, {"message", v.message}});
    }
    if (valuation_error) j["violations"].push_back({{"kind", "valuation"}, {"witness", Json::array()}, {"message", *valuation_error}});
    ctx.out << j.dump(2) << "\n";
  } else if (ok) {
    ctx.out << "ok\n";
  } else {
    for (const auto& v : report.violations) ctx.out << to_string(v.kind) << ": " << v.message << "\n";
    if (valuation_error) ctx.out << "valuation: " << *valuation_error << "\n";
  }
  return ok ? 0 : 1;
}

inline int cmd_histories(Context& ctx, const std::string& path, const std::string& through) {
  const Frame frame = load_frame(path);
  const auto list = through.empty() ? histories(frame) : histories_through(frame, through);
  if (ctx.json) {
    Json j = Json::array();
    for (const auto& h : list) j.push_back({{"leaf", h.leaf}, {"moments", h.moments}});
    ctx.out << j.dump(2) << "\n";
    return 0;
  }
  for (const auto& h : list) {
    ctx.out << h.leaf << ":";
    for (const auto& m : h.moments) ctx.out << " " << m;
    ctx.out << "\n";
  }
  return 0;
}

inline int cmd_points(Context& ctx, const std::string& path) {
  const Frame frame = load_frame(path);
  Json j = Json::array();
  for (PointId p = 0; p < frame.point_count(); ++p) {
    const Point pt = frame.point(p);
    if (ctx.json) {
      std::vector<std::string> leaves;
      for (HistoryId h : frame.point_histories(p)) leaves.push_back(frame.leaf_name(h));
      j.push_back({{"moment", pt.moment}, {"rep", pt.rep}, {"class", leaves}});
    } else {
      ctx.out << to_string(pt) << " {" << join_points(frame, frame.point_histories(p)) << "}\n";
    }
  }
  if (ctx.json) ctx.out << j.dump(2) << "\n";
  return 0;
}

inline int cmd_eval(Context& ctx, const std::string& path, const std::string& at, const std::string& text,
                    const std::string& mode, const std::string& semantics) {
  const Language lang = parse_language(mode);
  const Formula f = parse(text, lang);
  const Model model = load_model(path);
  const Point point = model.frame().canonical(parse_point(at));
  std::vector<Semantics> sems;
  if (semantics == "hist" || semantics == "both") sems.push_back(Semantics::history);
  if (semantics == "rel" || semantics == "both") sems.push_back(Semantics::relational);
  bool all = true;
  Json j{{"formula", print_sugared(f)}, {"at", to_string(point)}};
  for (Semantics sem : sems) {
    const bool value = eval(model, point, f, lang, sem);
    all = all && value;
    if (ctx.json) {
      j[std::string(to_string(sem))] = value;
    } else {
      ctx.out << to_string(sem) << ": " << (value ? "true" : "false") << "\n";
    }
  }
  if (ctx.json) ctx.out << j.dump(2) << "\n";
  return all ? 0 : 1;
}

inline int cmd_check(Context& ctx, const std::string& path, const std::string& text, bool sat, bool valid,
                     const std::string& mode, const std::optional<std::size_t>& max_enum) {
  if (sat == valid) throw Error("give exactly one of --sat and --valid");
  const Language lang = parse_language(mode);
  const Formula f = parse(text, lang);
  auto doc = frame_document_from_json(read_json_file(path));
  Frame frame = Frame::build(std::move(doc.tree), std::move(doc.indist));
  Json j{{"formula", print_sugared(f)}, {"question", sat ? "sat" : "valid"}};

  bool holds = false;
  if (doc.valuation) {
    const Model model = Model::build(frame, *doc.valuation);
    j["scope"] = "model";
    const auto witness = sat ? model_sat(model, f, lang) : model_counterexample(model, f, lang);
    holds = sat ? witness.has_value() : !witness.has_value();
    if (witness) j["point"] = to_string(*witness);
    if (!ctx.json) {
      if (sat) {
        ctx.out << (witness ? "satisfiable at " + to_string(*witness) : std::string("unsatisfiable")) << "\n";
      } else {
        ctx.out << (witness ? "not valid: fails at " + to_string(*witness) : std::string("valid")) << "\n";
      }
    }
  } else {
    const std::size_t bound = enumeration_bound(max_enum);
    j["scope"] = "frame";
    const auto witness = sat ? frame_sat(frame, f, lang, bound) : frame_countermodel(frame, f, lang, bound);
    holds = sat ? witness.has_value() : !witness.has_value();
    if (witness) {
      j["point"] = to_string(witness->point);
      j["valuation"] = to_json(witness->valuation);
    }
    if (!ctx.json) {
      if (witness) {
        ctx.out << (sat ? "satisfiable at " : "not valid: fails at ") << to_string(witness->point) << " under "
                << valuation_text(witness->valuation) << "\n";
      } else {
        ctx.out << (sat ? "unsatisfiable" : "valid") << "\n";
      }
    }
  }
  j["holds"] = holds;
  if (ctx.json) ctx.out << j.dump(2) << "\n";
  return holds ? 0 : 1;
}

inline void print_report(Context& ctx, const MorphismReport& report) {
  if (ctx.json) {
    Json j{{"ok", report.ok()}, {"conditions", Json::array()}};
    for (const auto& r : report.results) {
      Json c{{"condition", to_string(r.condition)}, {"passed", r.passed()}, {"violations", Json::array()}};
      for (const auto& w : r.violations) c["violations"].push_back(witness_json(w));
      j["conditions"].push_back(std::move(c));
    }
    ctx.out << j.dump(2) << "\n";
    return;
  }
  for (const auto& r : report.results) {
    ctx.out << to_string(r.condition) << ": ";
    if (r.passed()) {
      ctx.out << "pass\n";
    } else {
      ctx.out << "FAIL " << describe(r.violations.front());
      if (r.violations.size() > 1) ctx.out << " (" << r.violations.size() << " violations)";
      ctx.out << "\n";
    }
  }
}

inline int cmd_pmorph(Context& ctx, const std::string& src_path, const std::string& dst_path,
                      const std::string& map_path, const std::string& mode, const std::vector<std::string>& models) {
  const Language lang = parse_language(mode);
  const Frame src = load_frame(src_path);
  const Frame dst = load_frame(dst_path);
  const PointMap map = load_point_map(map_path);
  MorphismReport report;
  if (models.empty()) {
    report = check_frame_pmorphism(src, dst, map, lang);
  } else {
    const Model a = load_model(models.at(0));
    const Model b = load_model(models.at(1));
    require_same_points(src, a.frame(), "source");
    require_same_points(dst, b.frame(), "target");
    report = check_model_pmorphism(a, b, map, lang);
  }
  print_report(ctx, report);
  return report.ok() ? 0 : 1;
}

inline std::string map_text(const PointMap& map) {
  std::string out;
  for (const auto& [a, b] : map.pairs) out += (out.empty() ? "" : " ") + to_string(a) + "->" + to_string(b);
  return out;
}

inline int cmd_pmorph_search(Context& ctx, const std::string& src_path, const std::string& dst_path,
                             const std::string& mode, const SearchOptions& options) {
  const Language lang = parse_language(mode);
  const auto maps = search_pmorphisms(load_frame(src_path), load_frame(dst_path), lang, options);
  if (ctx.json) {
    Json j = Json::array();
    for (const auto& m : maps) j.push_back(to_json(m));
    ctx.out << j.dump(2) << "\n";
  } else {
    for (const auto& m : maps) ctx.out << map_text(m) << "\n";
    ctx.out << maps.size() << (maps.size() == 1 ? " p-morphism" : " p-morphisms") << "\n";
  }
  return maps.empty() ? 1 : 0;
}

inline std::pair<Point, Point> anchors(const std::vector<std::string>& args) {
  if (args.size() != 2) throw Error("--anchors takes a source point and a target point");
  return {parse_point(args[0]), parse_point(args[1])};
}

inline int cmd_bisim_check(Context& ctx, const std::string& src_path, const std::string& dst_path,
                           const std::string& rel_path, const std::vector<std::string>& anchor_args,
                           const std::string& mode) {
  const Language lang = parse_language(mode);
  const Model src = load_model(src_path);
  const Model dst = load_model(dst_path);
  const PointRelation rel = load_relation(rel_path);
  const auto [p, q] = anchors(anchor_args);
  const auto report = check_bisimulation(src, dst, rel, {p, q}, lang);
  if (ctx.json) {
    Json j{{"ok", report.ok()}, {"failures", Json::array()}};
    for (const auto& f : report.failures) {
      j["failures"].push_back({{"condition", to_string(f.condition)},
                               {"pair", {to_string(f.source), to_string(f.target)}},
                               {"witness", witness_json(f.witness)}});
    }
    ctx.out << j.dump(2) << "\n";
  } else if (report.ok()) {
    ctx.out << "pass\n";
  } else {
    for (const auto& f : report.failures) {
      ctx.out << to_string(f.condition) << " fails at (" << to_string(f.source) << ", " << to_string(f.target) << ")";
      if (f.condition != Condition::B) ctx.out << ": " << describe(f.witness);
      ctx.out << "\n";
    }
  }
  return report.ok() ? 0 : 1;
}

inline int cmd_bisim_max(Context& ctx, const std::string& src_path, const std::string& dst_path,
                         const std::string& mode) {
  const auto rel = greatest_bisimulation(load_model(src_path), load_model(dst_path), parse_language(mode));
  ctx.out << to_json(rel).dump(ctx.json ? 2 : -1) << "\n";
  return 0;
}

inline int cmd_distinguish(Context& ctx, const std::string& src_path, const std::string& dst_path,
                           const std::vector<std::string>& anchor_args, int max_depth, const std::string& mode) {
  const Language lang = parse_language(mode);
  const Model src = load_model(src_path);
  const Model dst = load_model(dst_path);
  const auto [p, q] = anchors(anchor_args);
  const auto f = find_distinguishing_formula(src, p, dst, q, lang, max_depth);
  if (ctx.json) {
    Json j{{"found", f.has_value()}, {"max_depth", max_depth}};
    if (f) {
      j["formula"] = print_sugared(*f);
      j["source"] = eval(src, p, *f, lang, Semantics::history);
      j["target"] = eval(dst, q, *f, lang, Semantics::history);
    }
    ctx.out << j.dump(2) << "\n";
  } else if (f) {
    ctx.out << print_sugared(*f) << "\n";
  } else {
    ctx.out << "indistinguishable up to depth " << max_depth << "\n";
  }
  return f ? 0 : 1;
}

inline int cmd_gen(Context& ctx, const GenOptions& opt, const std::string& policy, bool frame_only) {
  GenOptions o = opt;
  if (policy == "undividedness") {
    o.policy = IndistPolicy::undividedness;
  } else if (policy == "coarsened") {
    o.policy = IndistPolicy::coarsened;
  } else {
    throw Error("unknown policy '" + policy + "' (expected undividedness or coarsened)");
  }
  const Json j = frame_only ? to_json(gen_random_frame(o)) : to_json(gen_random_model(o));
  ctx.out << j.dump(2) << "\n";
  return 0;
}

inline int cmd_suite(Context& ctx, std::uint64_t seed) {
  std::size_t passed = 0;
  std::size_t total = 0;
  Json j = Json::array();
  run_suite({seed}, [&](const PropertyResult& r) {
    ++total;
    passed += r.passed();
    if (ctx.json) {
      j.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed()}, {"cases", r.cases},
                   {"failures", r.failures}, {"detail", r.detail}});
    } else {
      ctx.out << (r.passed() ? "[PASS] " : "[FAIL] ") << r.id << ". " << r.name << ": " << r.cases << " cases, "
              << r.failures << " failures (" << r.detail << ")\n";
      ctx.out.flush();
    }
  });
  if (ctx.json) {
    ctx.out << Json{{"seed", seed}, {"properties", j}, {"passed", passed}, {"total", total}}.dump(2) << "\n";
  } else {
    ctx.out << passed << "/" << total << " properties passed (seed " << seed << ")\n";
  }
  return passed == total ? 0 : 1;
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Branching-time logic with indistinguishability: frames, models, p-morphisms, bisimulations"};
  app.name("itl");
  app.require_subcommand(1);
  bool json = false;
  app.add_flag("--json", json, "Machine-readable output");

  std::string mode = "LF";
  auto add_mode = [&mode](CLI::App* sub) {
    sub->add_option("--mode", mode, "Language: L or LF")->check(CLI::IsMember({"L", "LF"}));
  };

  std::string doc_path, src_path, dst_path, third_path;

  auto* validate = app.add_subcommand("validate", "Check a frame or model document");
  validate->add_option("document", doc_path)->required();

  std::string through;
  auto* hist_cmd = app.add_subcommand("histories", "List the histories of a frame");
  hist_cmd->add_option("frame", doc_path)->required();
  hist_cmd->add_option("--through", through, "Only histories through this moment");

  auto* points_cmd = app.add_subcommand("points", "List the points of a frame");
  points_cmd->add_option("frame", doc_path)->required();

  std::string at, formula, semantics = "hist";
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a formula at a point of a model");
  eval_cmd->add_option("model", doc_path)->required();
  eval_cmd->add_option("--at", at, "Point as moment/rep")->required();
  eval_cmd->add_option("--formula", formula)->required();
  eval_cmd->add_option("--semantics", semantics)->check(CLI::IsMember({"hist", "rel", "both"}));
  add_mode(eval_cmd);

  bool sat = false, valid = false;
  std::optional<std::size_t> max_enum;
  auto* check_cmd = app.add_subcommand("check", "Satisfiability or validity on a model or a frame");
  check_cmd->add_option("document", doc_path)->required();
  check_cmd->add_option("--formula", formula)->required();
  check_cmd->add_flag("--sat", sat);
  check_cmd->add_flag("--valid", valid);
  check_cmd->add_option("--max-enum", max_enum, "Bound on points x atoms when enumerating valuations");
  add_mode(check_cmd);

  std::vector<std::string> models;
  auto* pmorph = app.add_subcommand("pmorph", "Check the p-morphism conditions for a map");
  pmorph->add_option("src", src_path)->required();
  pmorph->add_option("dst", dst_path)->required();
  pmorph->add_option("map", third_path)->required();
  pmorph->add_option("--model", models, "Source and target models, adds PV")->expected(2);
  add_mode(pmorph);

  SearchOptions search;
  std::optional<std::size_t> limit;
  auto* search_cmd = app.add_subcommand("pmorph-search", "Enumerate the p-morphisms between two frames");
  search_cmd->add_option("src", src_path)->required();
  search_cmd->add_option("dst", dst_path)->required();
  search_cmd->add_flag("--surjective", search.surjective);
  search_cmd->add_option("--limit", limit);
  search_cmd->add_option("--bound", search.bound, "Largest frame size searched");
  add_mode(search_cmd);

  std::vector<std::string> anchor_args;
  auto* bcheck = app.add_subcommand("bisim-check", "Check a relation between two models");
  bcheck->add_option("src", src_path)->required();
  bcheck->add_option("dst", dst_path)->required();
  bcheck->add_option("relation", third_path)->required();
  bcheck->add_option("--anchors", anchor_args)->expected(2)->required();
  add_mode(bcheck);

  auto* bmax = app.add_subcommand("bisim-max", "Print the greatest bisimulation between two models");
  bmax->add_option("src", src_path)->required();
  bmax->add_option("dst", dst_path)->required();
  add_mode(bmax);

  int max_depth = default_distinguishing_depth;
  auto* dist = app.add_subcommand("distinguish", "Search for a formula separating two points");
  dist->add_option("src", src_path)->required();
  dist->add_option("dst", dst_path)->required();
  dist->add_option("--anchors", anchor_args)->expected(2)->required();
  dist->add_option("--max-depth", max_depth)->check(CLI::Range(0, 8));
  add_mode(dist);

  GenOptions gen;
  std::string policy = "undividedness";
  bool frame_only = false;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a random model from a seed");
  gen_cmd->add_option("--seed", gen.seed);
  gen_cmd->add_option("--moments", gen.moments)->check(CLI::Range(1, 64));
  gen_cmd->add_option("--branching", gen.branching)->check(CLI::Range(1, 16));
  gen_cmd->add_option("--policy", policy)->check(CLI::IsMember({"undividedness", "coarsened"}));
  gen_cmd->add_option("--atoms", gen.atoms)->check(CLI::Range(0, 26));
  gen_cmd->add_flag("--frame", frame_only, "Emit a frame without a valuation");

  std::uint64_t seed = 42;
  auto* suite_cmd = app.add_subcommand("suite", "Run the property suite");
  suite_cmd->add_option("--seed", seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "itl: " << e.what() << "\n";
    return 2;
  }

  detail::Context ctx{out, json};
  try {
    if (*validate) return detail::cmd_validate(ctx, doc_path);
    if (*hist_cmd) return detail::cmd_histories(ctx, doc_path, through);
    if (*points_cmd) return detail::cmd_points(ctx, doc_path);
    if (*eval_cmd) return detail::cmd_eval(ctx, doc_path, at, formula, mode, semantics);
    if (*check_cmd) return detail::cmd_check(ctx, doc_path, formula, sat, valid, mode, max_enum);
    if (*pmorph) return detail::cmd_pmorph(ctx, src_path, dst_path, third_path, mode, models);
    if (*search_cmd) {
      search.limit = limit;
      return detail::cmd_pmorph_search(ctx, src_path, dst_path, mode, search);
    }
    if (*bcheck) return detail::cmd_bisim_check(ctx, src_path, dst_path, third_path, anchor_args, mode);
    if (*bmax) return detail::cmd_bisim_max(ctx, src_path, dst_path, mode);
    if (*dist) return detail::cmd_distinguish(ctx, src_path, dst_path, anchor_args, max_depth, mode);
    if (*gen_cmd) return detail::cmd_gen(ctx, gen, policy, frame_only);
    if (*suite_cmd) return detail::cmd_suite(ctx, seed);
  } catch (const std::exception& e) {
    err << "itl: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace itl::cli
