#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "gpg/errors.hpp"

namespace gpg {

using VertexId = uint32_t;
using VertexSet = uint32_t;  // bitmask over vertex indices, caps |V| at 32

inline int popcount(VertexSet s) { return std::popcount(s); }

inline VertexSet bit(VertexId v) { return VertexSet{1} << v; }

// Finite simplicial graph.  Vertices are named; the working order is the
// lexicographic order of the names and is fixed at construction.  All
// word-engine and lattice code identifies vertices by their index in that
// order, so serialized artifacts are stable across runs.
class SimplicialGraph {
 public:
  SimplicialGraph() = default;

  SimplicialGraph(std::vector<std::string> vertices,
                  const std::vector<std::pair<std::string, std::string>>& edges) {
    std::sort(vertices.begin(), vertices.end());
    for (size_t i = 0; i + 1 < vertices.size(); ++i)
      if (vertices[i] == vertices[i + 1])
        fail(Errc::InvalidConfig, "duplicate vertex '" + vertices[i] + "'");
    if (vertices.size() > 32)
      fail(Errc::InvalidConfig, "vertex count exceeds 32");
    names_ = std::move(vertices);
    adj_.assign(names_.size(), 0);
    for (const auto& [a, b] : edges) {
      VertexId i = index_of(a), j = index_of(b);
      if (i == j) fail(Errc::InvalidConfig, "self-loop at '" + a + "'");
      adj_[i] |= bit(j);
      adj_[j] |= bit(i);
    }
  }

  size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(VertexId v) const { return names_[v]; }

  bool has_vertex(const std::string& name) const {
    return std::binary_search(names_.begin(), names_.end(), name);
  }

  VertexId index_of(const std::string& name) const {
    auto it = std::lower_bound(names_.begin(), names_.end(), name);
    if (it == names_.end() || *it != name)
      fail(Errc::InvalidConfig, "unknown vertex '" + name + "'");
    return static_cast<VertexId>(it - names_.begin());
  }

  bool adjacent(VertexId a, VertexId b) const { return adj_[a] & bit(b); }

  // Neighbours of a single vertex, as a mask.
  VertexSet neighbors(VertexId v) const { return adj_[v]; }

  VertexSet all() const {
    return size() == 32 ? ~VertexSet{0} : (VertexSet{1} << size()) - 1;
  }

  // lk(S): vertices outside S adjacent to every vertex of S.
  // By convention lk(emptyset) is the whole vertex set.
  VertexSet link(VertexSet s) const {
    VertexSet r = all();
    for (VertexId v = 0; v < size(); ++v)
      if (s & bit(v)) r &= adj_[v];
    return r & ~s;
  }

  // st(S) = S together with lk(S); st(emptyset) is the whole vertex set.
  VertexSet star(VertexSet s) const { return s | link(s); }

  bool has_isolated_vertices() const {
    for (VertexId v = 0; v < size(); ++v)
      if (adj_[v] == 0) return true;
    return false;
  }

  std::vector<std::string> names_of(VertexSet s) const {
    std::vector<std::string> out;
    for (VertexId v = 0; v < size(); ++v)
      if (s & bit(v)) out.push_back(names_[v]);
    return out;
  }

  VertexSet set_of(const std::vector<std::string>& names) const {
    VertexSet s = 0;
    for (const auto& n : names) s |= bit(index_of(n));
    return s;
  }

  std::string describe(VertexSet s) const {
    std::string out = "{";
    bool first = true;
    for (VertexId v = 0; v < size(); ++v)
      if (s & bit(v)) {
        if (!first) out += ",";
        out += names_[v];
        first = false;
      }
    return out + "}";
  }

  bool operator==(const SimplicialGraph& o) const {
    return names_ == o.names_ && adj_ == o.adj_;
  }

 private:
  std::vector<std::string> names_;  // sorted
  std::vector<VertexSet> adj_;
};

// All nonempty induced subgraphs (as vertex masks), in mask order.  The
// default cap keeps the 2^n enumeration at desk scale.
inline std::vector<VertexSet> enumerate_subgraphs(const SimplicialGraph& g,
                                                  size_t limit = 16) {
  if (g.size() > limit)
    fail(Errc::LimitExceeded, "subgraph enumeration over " +
                                  std::to_string(g.size()) +
                                  " vertices exceeds limit " +
                                  std::to_string(limit));
  std::vector<VertexSet> out;
  VertexSet full = g.all();
  for (VertexSet s = 1; s <= full; ++s) out.push_back(s);
  return out;
}

// Nonempty subgraphs with nonempty link: the index family used for coning.
inline std::vector<VertexSet> coning_family(const SimplicialGraph& g,
                                            size_t limit = 16) {
  std::vector<VertexSet> out;
  for (VertexSet s : enumerate_subgraphs(g, limit))
    if (g.link(s) != 0) out.push_back(s);
  return out;
}

}  // namespace gpg
