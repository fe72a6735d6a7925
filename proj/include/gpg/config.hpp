#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "gpg/errors.hpp"
#include "gpg/morse.hpp"
#include "gpg/word.hpp"

namespace gpg {

inline constexpr const char* kToolkitVersion = "0.1.0";

// Recorded experiments must stay replayable, so configs are strict: a
// versioned schema and no unknown fields anywhere.
struct ToolkitConfig {
  std::vector<std::string> vertices;
  std::vector<std::pair<std::string, std::string>> edges;
  std::vector<VertexGroup> groups;

  size_t node_limit = 2000000;
  uint64_t quadruple_budget = 100000000;
  uint64_t seed = 12345;
  StabilityOptions thresholds;
  std::string out_dir = "out";
  std::string format = "both";  // csv | json | both

  std::string source_text;  // raw file bytes, hashed into the manifest

  GraphProduct product() const {
    return GraphProduct(SimplicialGraph(vertices, edges), groups);
  }
};

namespace detail {

inline void reject_unknown(const nlohmann::json& obj,
                           const std::vector<std::string>& allowed,
                           const std::string& where) {
  for (const auto& [key, val] : obj.items()) {
    (void)val;
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      fail(Errc::InvalidConfig, "unknown field '" + key + "' in " + where);
  }
}

inline VertexGroup parse_group_spec(const nlohmann::json& spec,
                                    const std::string& vertex) {
  const std::string where = "vertex_groups." + vertex;
  if (!spec.is_object())
    fail(Errc::InvalidConfig, where + " must be an object");
  reject_unknown(spec, {"kind", "n", "rank", "table", "generators"}, where);
  std::string kind = spec.value("kind", "");
  if (kind == "Z") return VertexGroup::integers();
  if (kind.rfind("Z/", 0) == 0)
    return VertexGroup::cyclic(std::stoll(kind.substr(2)));
  if (kind == "cyclic") {
    if (!spec.contains("n")) fail(Errc::InvalidConfig, where + " needs n");
    return VertexGroup::cyclic(spec.at("n").get<int64_t>());
  }
  if (kind == "free")
    return VertexGroup::free_group(spec.value("rank", 2));
  if (kind == "table") {
    if (!spec.contains("table"))
      fail(Errc::InvalidConfig, where + " needs a multiplication table");
    return VertexGroup::table(
        spec.at("table").get<std::vector<std::vector<uint32_t>>>(),
        spec.value("generators", std::vector<uint32_t>{}));
  }
  fail(Errc::InvalidConfig, "unknown group kind '" + kind + "' at " + where);
}

}  // namespace detail

inline ToolkitConfig config_from_json(const nlohmann::json& j,
                                      std::string source_text = "") {
  if (!j.is_object()) fail(Errc::InvalidConfig, "config must be an object");
  detail::reject_unknown(
      j, {"schema", "graph", "vertex_groups", "budgets", "thresholds", "output"},
      "config");
  if (j.value("schema", 0) != 1)
    fail(Errc::InvalidConfig, "config schema must be 1");

  ToolkitConfig cfg;
  cfg.source_text = std::move(source_text);
  try {
    const nlohmann::json& graph = j.at("graph");
    detail::reject_unknown(graph, {"vertices", "edges"}, "graph");
    cfg.vertices = graph.at("vertices").get<std::vector<std::string>>();
    for (const auto& e :
         graph.value("edges", std::vector<std::vector<std::string>>{})) {
      if (e.size() != 2)
        fail(Errc::InvalidConfig, "edges are two-vertex arrays");
      cfg.edges.emplace_back(e[0], e[1]);
    }

    const nlohmann::json& vgs = j.at("vertex_groups");
    if (vgs.size() != cfg.vertices.size())
      fail(Errc::InvalidConfig,
           "every vertex needs exactly one group spec; got " +
               std::to_string(vgs.size()) + " specs for " +
               std::to_string(cfg.vertices.size()) + " vertices");
    for (const std::string& v : cfg.vertices) {
      if (!vgs.contains(v))
        fail(Errc::InvalidConfig, "missing group spec for vertex '" + v + "'");
      cfg.groups.push_back(detail::parse_group_spec(vgs.at(v), v));
    }

    if (j.contains("budgets")) {
      const nlohmann::json& b = j.at("budgets");
      detail::reject_unknown(b, {"node_limit", "quadruple_budget", "seed"},
                             "budgets");
      cfg.node_limit = b.value("node_limit", cfg.node_limit);
      cfg.quadruple_budget = b.value("quadruple_budget", cfg.quadruple_budget);
      cfg.seed = b.value("seed", cfg.seed);
      if (cfg.node_limit == 0 || cfg.quadruple_budget == 0)
        fail(Errc::InvalidConfig, "budgets must be positive");
    }
    if (j.contains("thresholds")) {
      const nlohmann::json& t = j.at("thresholds");
      detail::reject_unknown(t, {"n_max", "cap", "slope_min", "r_step"},
                             "thresholds");
      cfg.thresholds.n_max = t.value("n_max", cfg.thresholds.n_max);
      cfg.thresholds.cap = t.value("cap", cfg.thresholds.cap);
      cfg.thresholds.slope_min = t.value("slope_min", cfg.thresholds.slope_min);
      cfg.thresholds.r_step = t.value("r_step", cfg.thresholds.r_step);
      if (cfg.thresholds.n_max < 1 || cfg.thresholds.cap < 1 ||
          cfg.thresholds.r_step < 1)
        fail(Errc::InvalidConfig, "thresholds must be positive");
    }
    if (j.contains("output")) {
      const nlohmann::json& o = j.at("output");
      detail::reject_unknown(o, {"dir", "format"}, "output");
      cfg.out_dir = o.value("dir", cfg.out_dir);
      cfg.format = o.value("format", cfg.format);
      if (cfg.format != "csv" && cfg.format != "json" && cfg.format != "both")
        fail(Errc::InvalidConfig, "output format is csv, json, or both");
    }
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::InvalidConfig, std::string("config: ") + e.what());
  }
  return cfg;
}

inline ToolkitConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::IoError, "cannot read config " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::InvalidConfig, path + ": " + e.what());
  }
  return config_from_json(j, std::move(text));
}

}  // namespace gpg
