#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "gpg/errors.hpp"
#include "gpg/hhs.hpp"
#include "gpg/relations.hpp"

namespace gpg {

// Instance files carry named points and nodes; indices are an in-memory
// detail.  Omitted relation pairs default to transverse, matching the
// completeness axiom.  Keys of nested objects serialize sorted, so emitted
// files are byte-stable.

inline nlohmann::json hhs_to_json(const HhsInstance& inst) {
  nlohmann::json j;
  j["space"]["points"] = inst.points;
  j["space"]["dist"] = inst.xdist;
  j["domains"] = inst.domains;
  nlohmann::json rels = nlohmann::json::array();
  for (size_t u = 0; u < inst.ndomains(); ++u)
    for (size_t v = u + 1; v < inst.ndomains(); ++v) {
      DomainRelation r = inst.rel[u][v];
      if (r == DomainRelation::Transverse) continue;
      if (r == DomainRelation::NestedIn)
        rels.push_back({inst.domains[u], inst.domains[v], "nested"});
      else if (r == DomainRelation::NestedOver)
        rels.push_back({inst.domains[v], inst.domains[u], "nested"});
      else
        rels.push_back({inst.domains[u], inst.domains[v], "orthogonal"});
    }
  j["relations"] = std::move(rels);
  for (size_t u = 0; u < inst.ndomains(); ++u) {
    nlohmann::json cs;
    cs["nodes"] = inst.cspace[u].nodes;
    cs["edges"] = inst.cspace[u].edges;
    j["cspaces"][inst.domains[u]] = std::move(cs);
    nlohmann::json pj;
    for (size_t x = 0; x < inst.npoints(); ++x) {
      std::vector<std::string> names;
      for (int32_t n : inst.proj[u][x]) names.push_back(inst.cspace[u].nodes[n]);
      pj[inst.points[x]] = std::move(names);
    }
    j["projections"][inst.domains[u]] = std::move(pj);
    j["flags"][inst.domains[u]] = {{"f_unbounded", inst.flags[u].f_unbounded},
                                   {"e_unbounded", inst.flags[u].e_unbounded}};
  }
  for (const auto& [key, nodes] : inst.rho) {
    std::vector<std::string> names;
    for (int32_t n : nodes) names.push_back(inst.cspace[key.second].nodes[n]);
    j["rhos"][inst.domains[key.first] + "|" + inst.domains[key.second]] = names;
  }
  j["E"] = inst.E;
  j["M"] = inst.M;
  return j;
}

inline HhsInstance hhs_from_json(const nlohmann::json& j) {
  HhsInstance inst;
  try {
    inst.points = j.at("space").at("points").get<std::vector<std::string>>();
    inst.xdist =
        j.at("space").at("dist").get<std::vector<std::vector<int64_t>>>();
    inst.domains = j.at("domains").get<std::vector<std::string>>();
    const size_t nd = inst.domains.size();
    if (nd == 0) fail(Errc::InvalidConfig, "no domains");

    inst.rel.assign(nd, std::vector<DomainRelation>(nd, DomainRelation::Transverse));
    for (size_t u = 0; u < nd; ++u) inst.rel[u][u] = DomainRelation::Equal;
    for (const auto& row : j.value("relations", nlohmann::json::array())) {
      if (!row.is_array() || row.size() != 3)
        fail(Errc::InvalidConfig, "relation rows are [from, to, kind]");
      int a = inst.domain_index(row[0].get<std::string>());
      int b = inst.domain_index(row[1].get<std::string>());
      std::string kind = row[2].get<std::string>();
      if (a == b) fail(Errc::InvalidConfig, "relation on a single domain");
      if (inst.rel[a][b] != DomainRelation::Transverse)
        fail(Errc::InvalidConfig, "duplicate relation for " +
                                      inst.domains[a] + "," + inst.domains[b]);
      if (kind == "nested") {
        inst.rel[a][b] = DomainRelation::NestedIn;
        inst.rel[b][a] = DomainRelation::NestedOver;
      } else if (kind == "orthogonal") {
        inst.rel[a][b] = inst.rel[b][a] = DomainRelation::Orthogonal;
      } else if (kind == "transverse") {
        inst.rel[a][b] = inst.rel[b][a] = DomainRelation::Transverse;
      } else {
        fail(Errc::InvalidConfig, "unknown relation kind " + kind);
      }
    }

    inst.cspace.resize(nd);
    inst.proj.assign(nd, std::vector<std::vector<int32_t>>(inst.points.size()));
    for (size_t u = 0; u < nd; ++u) {
      const nlohmann::json& cs = j.at("cspaces").at(inst.domains[u]);
      inst.cspace[u].nodes = cs.at("nodes").get<std::vector<std::string>>();
      inst.cspace[u].edges =
          cs.value("edges", std::vector<std::pair<int32_t, int32_t>>{});
      auto node_id = [&](const std::string& name) -> int32_t {
        const auto& nodes = inst.cspace[u].nodes;
        for (size_t i = 0; i < nodes.size(); ++i)
          if (nodes[i] == name) return static_cast<int32_t>(i);
        fail(Errc::InvalidConfig,
             "unknown node " + name + " in C" + inst.domains[u]);
      };
      const nlohmann::json& pj = j.at("projections").at(inst.domains[u]);
      for (size_t x = 0; x < inst.points.size(); ++x)
        for (const auto& name : pj.at(inst.points[x]))
          inst.proj[u][x].push_back(node_id(name.get<std::string>()));
    }

    const nlohmann::json rhos = j.value("rhos", nlohmann::json::object());
    for (const auto& [key, val] : rhos.items()) {
      size_t bar = key.find('|');
      if (bar == std::string::npos)
        fail(Errc::InvalidConfig, "rho keys look like FROM|TO");
      int v = inst.domain_index(key.substr(0, bar));
      int w = inst.domain_index(key.substr(bar + 1));
      std::vector<int32_t> nodes;
      for (const auto& name : val) {
        const auto& cw = inst.cspace[w].nodes;
        auto it = std::find(cw.begin(), cw.end(), name.get<std::string>());
        if (it == cw.end())
          fail(Errc::InvalidConfig, "unknown node in rho " + key);
        nodes.push_back(static_cast<int32_t>(it - cw.begin()));
      }
      inst.rho[{v, w}] = std::move(nodes);
    }

    inst.flags.assign(nd, HhsFlags{});
    const nlohmann::json flagobj = j.value("flags", nlohmann::json::object());
    for (const auto& [name, val] : flagobj.items()) {
      int u = inst.domain_index(name);
      inst.flags[u].f_unbounded = val.value("f_unbounded", false);
      inst.flags[u].e_unbounded = val.value("e_unbounded", false);
    }
    inst.E = j.value("E", int64_t{1});
    inst.M = j.value("M", int64_t{1});
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::InvalidConfig, std::string("instance file: ") + e.what());
  }
  inst.finalize();
  return inst;
}

inline nlohmann::json axiom_report_to_json(const AxiomReport& rep) {
  nlohmann::json j;
  j["claimed_E"] = rep.claimed;
  j["minimal_E"] = rep.minimal_E;
  j["all_pass"] = rep.all_pass;
  j["any_structural"] = rep.any_structural;
  nlohmann::json axioms = nlohmann::json::array();
  for (const AxiomEntry& e : rep.axioms)
    axioms.push_back({{"id", e.id},
                      {"name", e.name},
                      {"pass", e.pass},
                      {"structural", e.structural},
                      {"minimal", e.minimal},
                      {"at_budget", e.at_budget},
                      {"witness", e.witness}});
  j["axioms"] = std::move(axioms);
  j["theta"] = rep.theta;
  return j;
}

inline nlohmann::json maximized_to_json(const HhsInstance& inst,
                                        const MaximizedInstance& mx) {
  nlohmann::json j;
  std::vector<std::string> t;
  for (int u : mx.T) t.push_back(inst.domains[u]);
  j["T"] = std::move(t);
  for (size_t u = 0; u < mx.tags.size(); ++u)
    j["classification"][inst.domains[u]] = mx.tags[u];
  std::vector<std::string> sm, smp;
  for (int u : mx.SM) sm.push_back(inst.domains[u]);
  for (int u : mx.SMplus) smp.push_back(inst.domains[u]);
  j["SM"] = std::move(sm);
  j["SMplus"] = std::move(smp);
  j["topspace"]["points"] = inst.points;
  j["topspace"]["dist"] = mx.topdist;
  j["diameter"] = mx.diameter;
  return j;
}

}  // namespace gpg
