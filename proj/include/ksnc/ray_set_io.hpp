#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ksnc/corpus.hpp"
#include "ksnc/ray_set.hpp"

namespace ksnc {

// Ray-set JSON, two shapes (1-based indices):
//   { "dim": n, "tolerance": eps?, "rays": [ { "name": str?, "v": [x | [re, im], ...] }, ... ] }
//   { "dim": n, "graph": { "vertices": mu, "edges": [[i, j], ...] } }

inline RaySet ray_set_from_json(const nlohmann::json& j, std::string source,
                                std::optional<double> tolerance_override = {}) {
  if (!j.is_object()) throw InputError(source + ": top-level value must be an object");
  if (!j.contains("dim") || !j["dim"].is_number_integer())
    throw InputError(source + ": missing integer field 'dim'");
  const int dim = j["dim"].get<int>();

  double tolerance = kDefaultOrthoTolerance;
  if (j.contains("tolerance")) {
    if (!j["tolerance"].is_number()) throw InputError(source + ": 'tolerance' must be a number");
    tolerance = j["tolerance"].get<double>();
  }
  if (tolerance_override) tolerance = *tolerance_override;

  if (j.contains("graph")) {
    const auto& g = j["graph"];
    if (!g.is_object() || !g.contains("vertices") || !g["vertices"].is_number_integer())
      throw InputError(source + ": 'graph' needs an integer 'vertices' field");
    std::vector<std::pair<int, int>> edges;
    if (g.contains("edges")) {
      for (const auto& e : g["edges"]) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
            !e[1].is_number_integer())
          throw InputError(source + ": each edge must be a pair of integers");
        edges.emplace_back(e[0].get<int>(), e[1].get<int>());
      }
    }
    return make_adjacency_ray_set(dim, g["vertices"].get<int>(), std::move(edges),
                                  std::move(source));
  }

  if (!j.contains("rays") || !j["rays"].is_array())
    throw InputError(source + ": need either a 'rays' array or a 'graph' object");
  std::vector<Ray> rays;
  for (const auto& rj : j["rays"]) {
    if (!rj.is_object() || !rj.contains("v") || !rj["v"].is_array())
      throw InputError(source + ": each ray must be an object with a 'v' array");
    Ray r;
    if (rj.contains("name")) r.name = rj["name"].get<std::string>();
    for (const auto& c : rj["v"]) {
      if (c.is_number()) {
        r.components.emplace_back(c.get<double>(), 0.0);
      } else if (c.is_array() && c.size() == 2 && c[0].is_number() && c[1].is_number()) {
        r.components.emplace_back(c[0].get<double>(), c[1].get<double>());
      } else {
        throw InputError(source + ": ray components must be numbers or [re, im] pairs");
      }
    }
    rays.push_back(std::move(r));
  }
  return make_ray_set(dim, std::move(rays), tolerance, std::move(source));
}

inline nlohmann::ordered_json ray_set_to_json(const RaySet& rs) {
  nlohmann::ordered_json j;
  j["dim"] = rs.dim;
  j["tolerance"] = rs.tolerance;
  if (rs.adjacency) {
    nlohmann::ordered_json g;
    g["vertices"] = rs.adjacency->vertex_count;
    auto edges = nlohmann::ordered_json::array();
    for (const auto& [a, b] : rs.adjacency->edges) edges.push_back({a, b});
    g["edges"] = std::move(edges);
    j["graph"] = std::move(g);
    return j;
  }
  auto rays = nlohmann::ordered_json::array();
  for (const auto& r : rs.rays) {
    nlohmann::ordered_json rj;
    if (!r.name.empty()) rj["name"] = r.name;
    auto v = nlohmann::ordered_json::array();
    bool complex_ray = false;
    for (const auto& c : r.components)
      if (c.imag() != 0.0) complex_ray = true;
    for (const auto& c : r.components) {
      if (complex_ray)
        v.push_back({c.real(), c.imag()});
      else
        v.push_back(c.real());
    }
    rj["v"] = std::move(v);
    rays.push_back(std::move(rj));
  }
  j["rays"] = std::move(rays);
  return j;
}

/// Loads a ray set from a corpus key ("kcbs-5", "yu-oh-13", "cabello-18") or
/// a JSON file path.
inline RaySet load_ray_set(const std::string& path_or_key,
                           std::optional<double> tolerance_override = {}) {
  if (is_corpus_key(path_or_key)) {
    RaySet rs = corpus_ray_set(path_or_key);
    if (tolerance_override) rs.tolerance = *tolerance_override;
    return rs;
  }
  std::ifstream in(path_or_key);
  if (!in) throw InputError("cannot open ray-set file '" + path_or_key + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path_or_key + ": malformed JSON: " + e.what());
  }
  return ray_set_from_json(j, path_or_key, tolerance_override);
}

}  // namespace ksnc
