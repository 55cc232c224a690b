#pragma once

// JSON documents:
//   frame     {"moments": [..], "edges": [[parent, child], ..],
//              "indist": {moment: [[leaf, ..], ..], ..}}
//   model     frame + "valuation": {atom: [[moment, rep], ..], ..}
//   map       [[[moment, rep], [moment, rep]], ..]
//   relation  same shape as a map

#include <fstream>
#include <sstream>
#include <string>
#include <utility>

#include <json.hpp>

#include "itl/bisimulation.hpp"
#include "itl/error.hpp"
#include "itl/morphisms.hpp"
#include "itl/structures.hpp"

namespace itl {

using Json = nlohmann::json;

/// The unvalidated content of a frame or model document.
struct FrameDocument {
  Tree tree;
  IndistFunction indist;
  std::optional<Valuation> valuation;  // present for model documents
};

namespace detail {

inline const Json& member(const Json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw DocumentError(std::string("missing \"") + key + "\"");
  return *it;
}

inline std::string text(const Json& j, const std::string& where) {
  if (!j.is_string()) throw DocumentError(where + ": expected a string");
  return j.get<std::string>();
}

inline const Json& array(const Json& j, const std::string& where) {
  if (!j.is_array()) throw DocumentError(where + ": expected an array");
  return j;
}

inline std::pair<std::string, std::string> string_pair(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw DocumentError(where + ": expected a 2-array");
  return {text(j[0], where), text(j[1], where)};
}

inline Point point_from(const Json& j, const std::string& where) {
  auto [moment, rep] = string_pair(j, where);
  return Point{std::move(moment), std::move(rep)};
}

inline Json point_to(const Point& p) { return Json::array({p.moment, p.rep}); }

inline std::vector<std::pair<Point, Point>> point_pairs(const Json& j, const std::string& what) {
  std::vector<std::pair<Point, Point>> out;
  for (const auto& item : array(j, what)) {
    if (!item.is_array() || item.size() != 2) throw DocumentError(what + ": each entry must be a pair of points");
    out.emplace_back(point_from(item[0], what), point_from(item[1], what));
  }
  return out;
}

}  // namespace detail

inline FrameDocument frame_document_from_json(const Json& j) {
  if (!j.is_object()) throw DocumentError("frame document must be a JSON object");
  FrameDocument doc;
  for (const auto& m : detail::array(detail::member(j, "moments"), "moments")) {
    doc.tree.moments.push_back(detail::text(m, "moments"));
  }
  for (const auto& e : detail::array(detail::member(j, "edges"), "edges")) {
    doc.tree.edges.push_back(detail::string_pair(e, "edges"));
  }
  const Json& indist = detail::member(j, "indist");
  if (!indist.is_object()) throw DocumentError("indist: expected an object");
  for (const auto& [moment, blocks] : indist.items()) {
    auto& out = doc.indist.classes_at[moment];
    for (const auto& block : detail::array(blocks, "indist." + moment)) {
      std::vector<std::string> leaves;
      for (const auto& leaf : detail::array(block, "indist." + moment)) leaves.push_back(detail::text(leaf, "indist"));
      out.push_back(std::move(leaves));
    }
  }
  if (auto it = j.find("valuation"); it != j.end()) {
    if (!it->is_object()) throw DocumentError("valuation: expected an object");
    Valuation val;
    for (const auto& [atom, pts] : it->items()) {
      auto& set = val[atom];
      for (const auto& p : detail::array(pts, "valuation." + atom)) set.insert(detail::point_from(p, "valuation." + atom));
    }
    doc.valuation = std::move(val);
  }
  return doc;
}

inline Json to_json(const Tree& tree, const IndistFunction& indist) {
  Json j;
  j["moments"] = tree.moments;
  j["edges"] = Json::array();
  for (const auto& [parent, child] : tree.edges) j["edges"].push_back(Json::array({parent, child}));
  j["indist"] = Json::object();
  for (const auto& [moment, blocks] : indist.classes_at) j["indist"][moment] = blocks;
  return j;
}

inline Json to_json(const Valuation& val) {
  Json j = Json::object();
  for (const auto& [atom, pts] : val) {
    j[atom] = Json::array();
    for (const auto& p : pts) j[atom].push_back(detail::point_to(p));
  }
  return j;
}

inline Json to_json(const FrameDocument& doc) {
  Json j = to_json(doc.tree, doc.indist);
  if (doc.valuation) j["valuation"] = to_json(*doc.valuation);
  return j;
}

inline Json to_json(const Frame& frame) { return to_json(frame.tree(), frame.indist()); }

inline Json to_json(const Model& model) {
  Json j = to_json(model.frame());
  j["valuation"] = to_json(model.valuation());
  return j;
}

inline Json to_json(const PointMap& map) {
  Json j = Json::array();
  for (const auto& [a, b] : map.pairs) j.push_back(Json::array({detail::point_to(a), detail::point_to(b)}));
  return j;
}

inline Json to_json(const PointRelation& rel) {
  Json j = Json::array();
  for (const auto& [a, b] : rel.pairs) j.push_back(Json::array({detail::point_to(a), detail::point_to(b)}));
  return j;
}

inline PointMap point_map_from_json(const Json& j) { return PointMap{detail::point_pairs(j, "map")}; }

inline PointRelation relation_from_json(const Json& j) {
  PointRelation rel;
  for (auto& pair : detail::point_pairs(j, "relation")) rel.pairs.insert(std::move(pair));
  return rel;
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DocumentError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw DocumentError("'" + path + "' is not valid JSON: " + e.what());
  }
}

/// Reads and validates a frame; a model document is accepted and its
/// valuation ignored. Throws ValidationError for structural violations.
inline Frame load_frame(const std::string& path) {
  auto doc = frame_document_from_json(read_json_file(path));
  return Frame::build(std::move(doc.tree), std::move(doc.indist));
}

inline Model load_model(const std::string& path) {
  auto doc = frame_document_from_json(read_json_file(path));
  if (!doc.valuation) throw DocumentError("'" + path + "' has no \"valuation\"; a model document is required");
  return Model::build(Frame::build(std::move(doc.tree), std::move(doc.indist)), *doc.valuation);
}

inline PointMap load_point_map(const std::string& path) { return point_map_from_json(read_json_file(path)); }

inline PointRelation load_relation(const std::string& path) { return relation_from_json(read_json_file(path)); }

}  // namespace itl
