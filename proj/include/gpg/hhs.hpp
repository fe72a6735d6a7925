#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "gpg/delta.hpp"
#include "gpg/errors.hpp"
#include "gpg/relations.hpp"

namespace gpg {

// Finite relative hierarchy instances: twelve-axiom checking with exact
// minimal constants, product regions and gates, distance-formula fitting,
// and the maximization procedure that cones slices into the top-level space.

// Hyperbolic side of a domain.  adj/dist/diam are filled by finalize(); the
// graph must be connected so the shortest-path metric is total.
struct CSpace {
  std::vector<std::string> nodes;
  std::vector<std::pair<int32_t, int32_t>> edges;

  std::vector<std::vector<int32_t>> adj;
  std::vector<std::vector<int64_t>> dist;
  int64_t diam = 0;
};

// Boundedness is declared, not inferred: a finite instance is a truncation,
// and slice diameters are stand-ins for the real dichotomy.
struct HhsFlags {
  bool f_unbounded = false;
  bool e_unbounded = false;
};

struct HhsInstance {
  std::vector<std::string> points;
  std::vector<std::vector<int64_t>> xdist;

  std::vector<std::string> domains;
  std::vector<std::vector<DomainRelation>> rel;  // rel[u][v] = relation of u to v
  std::vector<CSpace> cspace;
  // proj[u][x] = node ids of pi_u(x) in cspace[u], sorted
  std::vector<std::vector<std::vector<int32_t>>> proj;
  // rho[(v,w)] = nodes of rho^v_w in cspace[w]; keys require v properly
  // nested in w or v transverse to w.  Required entries may be absent: the
  // axiom checks report that as a structural failure, not a parse error.
  std::map<std::pair<int, int>, std::vector<int32_t>> rho;
  std::vector<HhsFlags> flags;
  int64_t E = 1;  // claimed hierarchy constant
  int64_t M = 1;  // maximization threshold

  size_t npoints() const { return points.size(); }
  size_t ndomains() const { return domains.size(); }

  bool nested(int u, int v) const {
    return u == v || rel[u][v] == DomainRelation::NestedIn;
  }
  bool snested(int u, int v) const {
    return rel[u][v] == DomainRelation::NestedIn;
  }
  bool orth(int u, int v) const {
    return rel[u][v] == DomainRelation::Orthogonal;
  }
  bool trans(int u, int v) const {
    return rel[u][v] == DomainRelation::Transverse;
  }

  const std::vector<int32_t>* find_rho(int v, int w) const {
    auto it = rho.find({v, w});
    return it == rho.end() ? nullptr : &it->second;
  }

  int domain_index(const std::string& name) const {
    for (size_t i = 0; i < domains.size(); ++i)
      if (domains[i] == name) return static_cast<int>(i);
    fail(Errc::InvalidConfig, "unknown domain " + name);
  }
  int point_index(const std::string& name) const {
    for (size_t i = 0; i < points.size(); ++i)
      if (points[i] == name) return static_cast<int>(i);
    fail(Errc::InvalidConfig, "unknown point " + name);
  }

  // Unique nesting-maximal domain.
  int top() const {
    int found = -1;
    for (int u = 0; u < static_cast<int>(ndomains()); ++u) {
      bool maximal = true;
      for (int v = 0; v < static_cast<int>(ndomains()); ++v)
        if (snested(u, v)) maximal = false;
      if (maximal) {
        if (found >= 0)
          fail(Errc::PreconditionFailed, "no unique maximal domain");
        found = u;
      }
    }
    if (found < 0) fail(Errc::PreconditionFailed, "no maximal domain");
    return found;
  }

  // diam(a) and diam(a ∪ b) in cspace[u]; set-to-set distances use the
  // union diameter convention throughout.
  int64_t dset(int u, const std::vector<int32_t>& a,
               const std::vector<int32_t>& b) const {
    const auto& d = cspace[u].dist;
    int64_t best = 0;
    for (int32_t i : a) {
      for (int32_t j : a) best = std::max(best, d[i][j]);
      for (int32_t j : b) best = std::max(best, d[i][j]);
    }
    for (int32_t i : b)
      for (int32_t j : b) best = std::max(best, d[i][j]);
    return best;
  }
  int64_t sdiam(int u, const std::vector<int32_t>& a) const {
    return dset(u, a, a);
  }
  int64_t dpair(int u, uint32_t x, uint32_t y) const {
    return dset(u, proj[u][x], proj[u][y]);
  }

  int64_t xdiam() const {
    int64_t best = 0;
    for (const auto& row : xdist)
      for (int64_t v : row) best = std::max(best, v);
    return best;
  }

  void finalize() {
    const size_t np = points.size(), nd = domains.size();
    if (np == 0 || np > 10000) fail(Errc::LimitExceeded, "point count out of range");
    if (nd == 0 || nd > 32) fail(Errc::LimitExceeded, "domain count out of range");
    if (E < 1) fail(Errc::InvalidConfig, "claimed constant must be at least 1");
    if (M < 0) fail(Errc::InvalidConfig, "maximization threshold must be nonnegative");
    for (size_t i = 0; i < np; ++i)
      for (size_t j = i + 1; j < np; ++j)
        if (points[i] == points[j])
          fail(Errc::InvalidConfig, "duplicate point " + points[i]);
    for (size_t i = 0; i < nd; ++i)
      for (size_t j = i + 1; j < nd; ++j)
        if (domains[i] == domains[j])
          fail(Errc::InvalidConfig, "duplicate domain " + domains[i]);

    if (xdist.size() != np) fail(Errc::InvalidConfig, "distance table shape");
    for (size_t i = 0; i < np; ++i) {
      if (xdist[i].size() != np) fail(Errc::InvalidConfig, "distance table shape");
      if (xdist[i][i] != 0) fail(Errc::InvalidConfig, "nonzero diagonal");
      for (size_t j = 0; j < np; ++j) {
        if (xdist[i][j] < 0 || xdist[i][j] != xdist[j][i])
          fail(Errc::InvalidConfig, "distance table not a metric");
        if (i != j && xdist[i][j] == 0)
          fail(Errc::InvalidConfig, "distinct points at distance zero");
      }
    }

    if (rel.size() != nd) fail(Errc::InvalidConfig, "relation table shape");
    for (size_t u = 0; u < nd; ++u) {
      if (rel[u].size() != nd) fail(Errc::InvalidConfig, "relation table shape");
      if (rel[u][u] != DomainRelation::Equal)
        fail(Errc::InvalidConfig, "diagonal relation must be equal");
    }
    for (size_t u = 0; u < nd; ++u)
      for (size_t v = u + 1; v < nd; ++v) {
        DomainRelation a = rel[u][v], b = rel[v][u];
        bool ok = (a == DomainRelation::NestedIn && b == DomainRelation::NestedOver) ||
                  (a == DomainRelation::NestedOver && b == DomainRelation::NestedIn) ||
                  (a == DomainRelation::Orthogonal && b == DomainRelation::Orthogonal) ||
                  (a == DomainRelation::Transverse && b == DomainRelation::Transverse);
        if (!ok)
          fail(Errc::InvalidConfig, "inconsistent relation between " + domains[u] +
                                        " and " + domains[v]);
      }

    if (cspace.size() != nd) fail(Errc::InvalidConfig, "coordinate space count");
    for (size_t u = 0; u < nd; ++u) {
      CSpace& cs = cspace[u];
      const size_t n = cs.nodes.size();
      if (n == 0 || n > 1000)
        fail(Errc::LimitExceeded, "coordinate space size out of range");
      for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
          if (cs.nodes[i] == cs.nodes[j])
            fail(Errc::InvalidConfig, "duplicate node in C" + domains[u]);
      cs.adj.assign(n, {});
      for (auto [a, b] : cs.edges) {
        if (a < 0 || b < 0 || a >= static_cast<int32_t>(n) ||
            b >= static_cast<int32_t>(n) || a == b)
          fail(Errc::InvalidConfig, "bad edge in C" + domains[u]);
        cs.adj[a].push_back(b);
        cs.adj[b].push_back(a);
      }
      for (auto& row : cs.adj) {
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
      }
      cs.dist.assign(n, std::vector<int64_t>(n, -1));
      cs.diam = 0;
      for (size_t s = 0; s < n; ++s) {
        auto& row = cs.dist[s];
        row[s] = 0;
        std::deque<int32_t> q{static_cast<int32_t>(s)};
        while (!q.empty()) {
          int32_t cur = q.front();
          q.pop_front();
          for (int32_t nb : cs.adj[cur])
            if (row[nb] < 0) {
              row[nb] = row[cur] + 1;
              q.push_back(nb);
            }
        }
        for (int64_t v : row) {
          if (v < 0) fail(Errc::InvalidConfig, "C" + domains[u] + " disconnected");
          cs.diam = std::max(cs.diam, v);
        }
      }
    }

    if (proj.size() != nd) fail(Errc::InvalidConfig, "projection table shape");
    for (size_t u = 0; u < nd; ++u) {
      if (proj[u].size() != np) fail(Errc::InvalidConfig, "projection table shape");
      for (auto& img : proj[u]) {
        std::sort(img.begin(), img.end());
        img.erase(std::unique(img.begin(), img.end()), img.end());
        if (img.empty()) fail(Errc::InvalidConfig, "empty projection image");
        for (int32_t nid : img)
          if (nid < 0 || nid >= static_cast<int32_t>(cspace[u].nodes.size()))
            fail(Errc::InvalidConfig, "projection node out of range");
      }
    }

    for (auto& [key, nodes] : rho) {
      auto [v, w] = key;
      if (v < 0 || w < 0 || v >= static_cast<int>(nd) || w >= static_cast<int>(nd))
        fail(Errc::InvalidConfig, "relative projection with unknown domain");
      if (!(snested(v, w) || trans(v, w)))
        fail(Errc::InvalidConfig,
             "relative projection " + domains[v] + "->" + domains[w] +
                 " where none is defined");
      std::sort(nodes.begin(), nodes.end());
      nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
      if (nodes.empty()) fail(Errc::InvalidConfig, "empty relative projection");
      for (int32_t nid : nodes)
        if (nid < 0 || nid >= static_cast<int32_t>(cspace[w].nodes.size()))
          fail(Errc::InvalidConfig, "relative projection node out of range");
    }

    if (flags.size() != nd) fail(Errc::InvalidConfig, "flag table shape");
  }
};

// --- axiom checking ----------------------------------------------------------

struct AxiomEntry {
  int id = 0;
  std::string name;
  bool pass = false;
  bool structural = false;  // failure independent of any constant
  int64_t minimal = 0;      // least integer constant satisfying the axiom
  bool at_budget = false;
  std::string witness;
};

struct AxiomReport {
  std::vector<AxiomEntry> axioms;
  std::vector<int64_t> theta;  // uniqueness table, index r
  int64_t claimed = 0;
  int64_t minimal_E = 0;  // max of per-axiom minimals (structural fails excluded)
  bool any_structural = false;
  bool all_pass = false;
};

struct HhsCheckOptions {
  // Geodesic-image checks verify the worst geodesic per endpoint pair (an
  // exact minimax sweep) whenever the pair's geodesic count fits the budget,
  // else fall back to one canonical geodesic; full_enumeration forces the
  // exact sweep everywhere.
  bool bgi_full_enumeration = false;
  uint64_t bgi_path_budget = 100000;
  uint64_t delta_budget = 100000000;      // quadruples per coordinate space
  int cover_size_cap = 6;                 // witness family search cap
  uint64_t cover_combo_budget = 100000;   // candidate families per pair
  uint64_t realization_budget = 1000000;  // tuples over orthogonal cliques
  uint64_t pair_budget = 20000000;        // domain-pair distance table entries
  int64_t slice_tolerance = 0;            // slice equivalence tolerance
};

namespace hhs_detail {

inline int64_t ceil_div(int64_t a, int64_t b) { return (a + b - 1) / b; }

}  // namespace hhs_detail

inline AxiomReport check_axioms(const HhsInstance& inst,
                                const HhsCheckOptions& opts = {}) {
  const int nd = static_cast<int>(inst.ndomains());
  const uint32_t np = static_cast<uint32_t>(inst.npoints());
  AxiomReport rep;
  rep.claimed = inst.E;

  if (static_cast<uint64_t>(nd) * np * np > opts.pair_budget)
    fail(Errc::BudgetExceeded, "projected distance tables over budget");

  // d_U(x,y) = diam(pi_U(x) ∪ pi_U(y)) for every domain and point pair
  std::vector<std::vector<std::vector<int32_t>>> dU(nd);
  int64_t max_du = 0;
  for (int u = 0; u < nd; ++u) {
    dU[u].assign(np, std::vector<int32_t>(np, 0));
    for (uint32_t x = 0; x < np; ++x)
      for (uint32_t y = x; y < np; ++y) {
        int32_t v = static_cast<int32_t>(inst.dpair(u, x, y));
        dU[u][x][y] = dU[u][y][x] = v;
        max_du = std::max<int64_t>(max_du, v);
      }
  }

  auto dom = [&](int u) { return inst.domains[u]; };
  auto pt = [&](uint32_t x) { return inst.points[x]; };
  auto push = [&](int id, const std::string& name) -> AxiomEntry& {
    AxiomEntry e;
    e.id = id;
    e.name = name;
    rep.axioms.push_back(std::move(e));
    return rep.axioms.back();
  };

  {  // (1) projections: image diameter, coarse Lipschitz, covering
    AxiomEntry& e = push(1, "projections");
    int64_t need = 0;
    std::string why;
    for (int u = 0; u < nd; ++u) {
      for (uint32_t x = 0; x < np; ++x) {
        int64_t d = inst.sdiam(u, inst.proj[u][x]);
        if (d > need) { need = d; why = "diam pi_" + dom(u) + "(" + pt(x) + ")"; }
      }
      for (uint32_t x = 0; x < np; ++x)
        for (uint32_t y = x + 1; y < np; ++y) {
          int64_t lip = hhs_detail::ceil_div(dU[u][x][y], inst.xdist[x][y] + 1);
          if (lip > need) {
            need = lip;
            why = "pair (" + pt(x) + "," + pt(y) + ") in " + dom(u);
          }
        }
      const CSpace& cs = inst.cspace[u];
      for (size_t n = 0; n < cs.nodes.size(); ++n) {
        int64_t closest = cs.diam;
        for (uint32_t x = 0; x < np; ++x)
          for (int32_t p : inst.proj[u][x])
            closest = std::min(closest, cs.dist[n][p]);
        if (closest > need) {
          need = closest;
          why = "node " + cs.nodes[n] + " of C" + dom(u) + " uncovered";
        }
      }
    }
    e.minimal = need;
    if (need > inst.E) e.witness = why;
  }

  {  // (2) nesting: partial order, unique maximum, relative projections
    AxiomEntry& e = push(2, "nesting");
    for (int a = 0; a < nd && !e.structural; ++a)
      for (int b = 0; b < nd && !e.structural; ++b)
        for (int c = 0; c < nd && !e.structural; ++c)
          if (inst.snested(a, b) && inst.snested(b, c) && !inst.snested(a, c)) {
            e.structural = true;
            e.witness = "nesting not transitive at (" + dom(a) + "," + dom(b) +
                        "," + dom(c) + ")";
          }
    if (!e.structural) {
      int maxima = 0;
      std::string names;
      for (int u = 0; u < nd; ++u) {
        bool maximal = true;
        for (int v = 0; v < nd; ++v)
          if (inst.snested(u, v)) maximal = false;
        if (maximal) { ++maxima; names += (names.empty() ? "" : ",") + dom(u); }
      }
      if (maxima != 1) {
        e.structural = true;
        e.witness = "maximal domains: " + names;
      }
    }
    for (int v = 0; v < nd; ++v)
      for (int w = 0; w < nd; ++w)
        if (inst.snested(v, w)) {
          const auto* r = inst.find_rho(v, w);
          if (!r) {
            if (!e.structural) {
              e.structural = true;
              e.witness = "missing rho " + dom(v) + "->" + dom(w);
            }
            continue;
          }
          e.minimal = std::max(e.minimal, inst.sdiam(w, *r));
        }
    if (!e.structural && e.minimal > inst.E) e.witness = "relative projection diameter";
  }

  {  // (3) orthogonality: inheritance under nesting
    AxiomEntry& e = push(3, "orthogonality");
    for (int v = 0; v < nd && !e.structural; ++v)
      for (int w = 0; w < nd && !e.structural; ++w)
        for (int u = 0; u < nd && !e.structural; ++u)
          if (inst.nested(v, w) && inst.orth(w, u) && !inst.orth(v, u)) {
            e.structural = true;
            e.witness = dom(v) + " nested in " + dom(w) + " orthogonal to " +
                        dom(u) + " without " + dom(v) + " orthogonal to " + dom(u);
          }
  }

  {  // (4) transversality: relative projections both ways
    AxiomEntry& e = push(4, "transversality");
    for (int v = 0; v < nd; ++v)
      for (int w = v + 1; w < nd; ++w)
        if (inst.trans(v, w)) {
          for (auto [a, b] : {std::pair{v, w}, std::pair{w, v}}) {
            const auto* r = inst.find_rho(a, b);
            if (!r) {
              if (!e.structural) {
                e.structural = true;
                e.witness = "missing rho " + dom(a) + "->" + dom(b);
              }
              continue;
            }
            e.minimal = std::max(e.minimal, inst.sdiam(b, *r));
          }
        }
    if (!e.structural && e.minimal > inst.E) e.witness = "relative projection diameter";
  }

  {  // (5) hyperbolicity of non-minimal coordinate spaces; the four-point
    // constant is half the worst pairing defect, rounded up
    AxiomEntry& e = push(5, "hyperbolicity");
    for (int w = 0; w < nd; ++w) {
      bool minimal_dom = true;
      for (int v = 0; v < nd; ++v)
        if (inst.snested(v, w)) minimal_dom = false;
      if (minimal_dom) continue;
      const CSpace& cs = inst.cspace[w];
      if (cs.nodes.size() >= 4 &&
          detail::count4(cs.nodes.size()) > opts.delta_budget)
        fail(Errc::BudgetExceeded, "four-point scan of C" + dom(w));
      DeltaReport dr = delta_scan(cs.dist);
      int64_t need = hhs_detail::ceil_div(dr.delta_num, 2);
      if (need > e.minimal) {
        e.minimal = need;
        if (need > inst.E)
          e.witness = "C" + dom(w) + " four-point defect " + std::to_string(dr.delta_num);
      }
    }
  }

  {  // (6) finite complexity: longest pairwise-comparable set
    AxiomEntry& e = push(6, "finite complexity");
    std::vector<int64_t> memo(nd, -1);
    auto chain = [&](auto&& self, int u) -> int64_t {
      if (memo[u] >= 0) return memo[u];
      int64_t best = 1;
      for (int v = 0; v < nd; ++v)
        if (inst.snested(v, u)) best = std::max(best, 1 + self(self, v));
      return memo[u] = best;
    };
    for (int u = 0; u < nd; ++u) e.minimal = std::max(e.minimal, chain(chain, u));
    if (e.minimal > inst.E) e.witness = "nesting chain of length " +
                                        std::to_string(e.minimal);
  }

  {  // (7) containers
    AxiomEntry& e = push(7, "containers");
    for (int w = 0; w < nd && !e.structural; ++w)
      for (int u = 0; u < nd && !e.structural; ++u) {
        if (!inst.nested(u, w)) continue;
        std::vector<int> orths;
        for (int v = 0; v < nd; ++v)
          if (inst.nested(v, w) && inst.orth(v, u)) orths.push_back(v);
        if (orths.empty()) continue;
        bool found = false;
        for (int q = 0; q < nd && !found; ++q) {
          if (!inst.snested(q, w)) continue;
          bool holds = true;
          for (int v : orths)
            if (!inst.nested(v, q)) holds = false;
          if (holds) found = true;
        }
        if (!found) {
          e.structural = true;
          e.witness = "no container for " + dom(u) + " in " + dom(w);
        }
      }
  }

  {  // (8) uniqueness: theta(r) = max d_X over pairs with every projected
    // distance < r, reported as a table; the minimal constant is the least
    // e with theta(r) <= e*r + e on the whole table
    AxiomEntry& e = push(8, "uniqueness");
    const int64_t rmax = max_du + 1;
    std::vector<int64_t> best(rmax + 1, 0);
    std::vector<std::pair<uint32_t, uint32_t>> arg(rmax + 1, {0, 0});
    for (uint32_t x = 0; x < np; ++x)
      for (uint32_t y = x + 1; y < np; ++y) {
        int64_t m = 0;
        for (int u = 0; u < nd; ++u) m = std::max<int64_t>(m, dU[u][x][y]);
        if (inst.xdist[x][y] > best[m]) {
          best[m] = inst.xdist[x][y];
          arg[m] = {x, y};
        }
      }
    rep.theta.assign(rmax + 1, 0);
    std::vector<std::pair<uint32_t, uint32_t>> theta_arg(rmax + 1, {0, 0});
    for (int64_t r = 1; r <= rmax; ++r) {
      rep.theta[r] = std::max(rep.theta[r - 1], best[r - 1]);
      theta_arg[r] = rep.theta[r] == best[r - 1] ? arg[r - 1] : theta_arg[r - 1];
    }
    int64_t needed = 0;
    int64_t bad_r = -1;
    for (int64_t r = 0; r <= rmax; ++r) {
      int64_t at_r = r == 0 ? rep.theta[r] : hhs_detail::ceil_div(rep.theta[r], r + 1);
      if (at_r > needed) { needed = at_r; bad_r = r; }
    }
    e.minimal = needed;
    if (e.minimal > inst.E && bad_r >= 0) {
      auto [x, y] = theta_arg[bad_r];
      e.witness = "theta(" + std::to_string(bad_r) + ")=" +
                  std::to_string(rep.theta[bad_r]) + " at pair (" + pt(x) + "," +
                  pt(y) + ")";
    }
  }

  {  // (9) bounded geodesic image
    AxiomEntry& e = push(9, "bounded geodesic image");
    for (int v = 0; v < nd; ++v)
      for (int w = 0; w < nd; ++w) {
        if (!inst.snested(v, w)) continue;
        const auto* r = inst.find_rho(v, w);
        if (!r) continue;  // reported structurally by the nesting axiom
        const CSpace& cs = inst.cspace[w];
        const size_t n = cs.nodes.size();
        std::vector<int64_t> rho_dist(n, cs.diam);
        for (size_t i = 0; i < n; ++i)
          for (int32_t p : *r) rho_dist[i] = std::min(rho_dist[i], cs.dist[i][p]);

        // per source: order nodes by distance, then sweep predecessors.
        // worst[b] = max over geodesics of the min rho-distance on them;
        // canon[b] tracks the single least-index-predecessor geodesic.
        std::vector<std::vector<int64_t>> meets(n, std::vector<int64_t>(n, 0));
        for (size_t a = 0; a < n; ++a) {
          std::vector<int32_t> order(n);
          std::iota(order.begin(), order.end(), 0);
          std::sort(order.begin(), order.end(), [&](int32_t p, int32_t q) {
            return cs.dist[a][p] != cs.dist[a][q] ? cs.dist[a][p] < cs.dist[a][q]
                                                  : p < q;
          });
          std::vector<int64_t> worst(n, 0), canon(n, 0);
          std::vector<uint64_t> cnt(n, 0);
          for (int32_t b : order) {
            if (static_cast<size_t>(b) == a) {
              worst[b] = canon[b] = rho_dist[b];
              cnt[b] = 1;
              meets[a][b] = rho_dist[b];
              continue;
            }
            int64_t wbest = 0;
            int32_t parent = -1;
            uint64_t c = 0;
            for (int32_t p : cs.adj[b])
              if (cs.dist[a][p] + 1 == cs.dist[a][b]) {
                wbest = std::max(wbest, worst[p]);
                if (parent < 0) parent = p;
                c = std::min<uint64_t>(c + cnt[p], opts.bgi_path_budget + 1);
              }
            worst[b] = std::min(rho_dist[b], wbest);
            canon[b] = std::min(rho_dist[b], canon[parent]);
            cnt[b] = c;
            bool exact = opts.bgi_full_enumeration || c <= opts.bgi_path_budget;
            if (!exact && worst[b] > canon[b]) e.at_budget = true;
            meets[a][b] = exact ? worst[b] : canon[b];
          }
        }

        for (uint32_t x = 0; x < np; ++x)
          for (uint32_t y = x; y < np; ++y) {
            int64_t far = 0;
            for (int32_t a : inst.proj[w][x])
              for (int32_t b : inst.proj[w][y]) far = std::max(far, meets[a][b]);
            if (far == 0) continue;
            // violated exactly for e' <= min(d_V(x,y), far-1)
            int64_t need = std::min<int64_t>(dU[v][x][y], far - 1) + 1;
            if (need > e.minimal) {
              e.minimal = need;
              if (need > inst.E)
                e.witness = "pair (" + pt(x) + "," + pt(y) + ") for " + dom(v) +
                            " inside " + dom(w);
            }
          }
      }
  }

  {  // (10) large links: scan the constant, searching witness families when
    // the required set alone is too large
    AxiomEntry& e = push(10, "large links");
    auto covered = [&](const std::vector<int>& req, const std::vector<int>& fam) {
      for (int u : req) {
        bool ok = false;
        for (int t : fam)
          if (inst.nested(u, t)) ok = true;
        if (!ok) return false;
      }
      return true;
    };
    int64_t cap = max_du + 1;
    for (int64_t ee = 0; ee <= cap; ++ee) {
      bool fails = false;
      bool budget_only = true;
      std::string why;
      for (int w = 0; w < nd && !(fails && !budget_only); ++w) {
        std::vector<int> members;
        for (int u = 0; u < nd; ++u)
          if (u != w && inst.snested(u, w)) members.push_back(u);
        if (members.empty()) continue;
        for (uint32_t x = 0; x < np && !(fails && !budget_only); ++x)
          for (uint32_t y = x; y < np; ++y) {
            std::vector<int> req;
            for (int u : members)
              if (dU[u][x][y] > ee) req.push_back(u);
            if (req.empty()) continue;
            int64_t target = ee * dU[w][x][y] + ee;
            if (static_cast<int64_t>(req.size()) <= target) continue;
            // need a strictly smaller family of nest-covers
            std::vector<int> cand;
            for (int t : members) {
              bool useful = false;
              for (int u : req)
                if (inst.nested(u, t)) useful = true;
              if (useful) cand.push_back(t);
            }
            int kmax = static_cast<int>(
                std::min<int64_t>(target, opts.cover_size_cap));
            bool found = false;
            uint64_t combos = 0;
            std::vector<int> fam;
            auto search = [&](auto&& self, size_t from, int k) -> void {
              if (found || combos > opts.cover_combo_budget) return;
              if (k == 0) {
                ++combos;
                if (covered(req, fam)) found = true;
                return;
              }
              for (size_t i = from; i + k <= cand.size() + 0u && !found; ++i) {
                fam.push_back(cand[i]);
                self(self, i + 1, k - 1);
                fam.pop_back();
              }
            };
            for (int k = 1; k <= kmax && !found; ++k) search(search, 0, k);
            if (found) continue;
            bool proven = target <= opts.cover_size_cap &&
                          combos <= opts.cover_combo_budget;
            fails = true;
            if (proven) budget_only = false;
            why = "pair (" + pt(x) + "," + pt(y) + ") in " + dom(w) + " needs " +
                  std::to_string(req.size()) + " domains, bound " +
                  std::to_string(target) + (proven ? "" : " (at budget)");
            if (!proven) e.at_budget = true;
            break;
          }
      }
      if (!fails) { e.minimal = ee; break; }
      if (ee == inst.E) e.witness = why;
      if (ee == cap) e.minimal = cap + 1;
    }
  }

  {  // (11) consistency: transverse minimum and nested relative projections;
    // the second clause is evaluated where the relative projection exists
    AxiomEntry& e = push(11, "consistency");
    for (int v = 0; v < nd; ++v)
      for (int w = v + 1; w < nd; ++w) {
        if (!inst.trans(v, w)) continue;
        const auto* rvw = inst.find_rho(v, w);
        const auto* rwv = inst.find_rho(w, v);
        if (!rvw || !rwv) continue;  // reported structurally by transversality
        for (uint32_t x = 0; x < np; ++x) {
          int64_t t = std::min(inst.dset(w, inst.proj[w][x], *rvw),
                               inst.dset(v, inst.proj[v][x], *rwv));
          if (t > e.minimal) {
            e.minimal = t;
            if (t > inst.E)
              e.witness = "point " + pt(x) + " between " + dom(v) + " and " + dom(w);
          }
        }
      }
    for (int u = 0; u < nd; ++u)
      for (int v = 0; v < nd; ++v) {
        if (!inst.nested(u, v)) continue;
        for (int w = 0; w < nd; ++w) {
          if (!(inst.snested(v, w) || inst.trans(v, w))) continue;
          const auto* ruw = inst.find_rho(u, w);
          const auto* rvw = inst.find_rho(v, w);
          if (!ruw || !rvw) continue;
          int64_t t = inst.dset(w, *ruw, *rvw);
          if (t > e.minimal) {
            e.minimal = t;
            if (t > inst.E)
              e.witness = "rho " + dom(u) + "->" + dom(w) + " vs " + dom(v) +
                          "->" + dom(w);
          }
        }
      }
  }

  {  // (12) partial realization over pairwise orthogonal families
    AxiomEntry& e = push(12, "partial realization");
    // deviation from the relative projections is independent of the tuple
    std::vector<std::vector<int64_t>> base(nd, std::vector<int64_t>(np, 0));
    for (int v = 0; v < nd; ++v)
      for (int w = 0; w < nd; ++w) {
        if (!(inst.snested(v, w) || inst.trans(v, w))) continue;
        const auto* r = inst.find_rho(v, w);
        if (!r) continue;
        for (uint32_t x = 0; x < np; ++x)
          base[v][x] = std::max(base[v][x], inst.dset(w, inst.proj[w][x], *r));
      }
    uint64_t tuples = 0;
    std::vector<int> clique;
    auto process = [&]() {
      uint64_t total = 1;
      for (int v : clique) total *= inst.cspace[v].nodes.size();
      tuples += total;
      if (tuples > opts.realization_budget)
        fail(Errc::BudgetExceeded, "partial realization tuples over budget");
      std::vector<int32_t> pick(clique.size(), 0);
      while (true) {
        int64_t bestx = -1;
        for (uint32_t x = 0; x < np; ++x) {
          int64_t worst = 0;
          for (size_t i = 0; i < clique.size(); ++i) {
            int v = clique[i];
            worst = std::max(worst, base[v][x]);
            std::vector<int32_t> single{pick[i]};
            worst = std::max(worst, inst.dset(v, inst.proj[v][x], single));
          }
          if (bestx < 0 || worst < bestx) bestx = worst;
        }
        if (bestx > e.minimal) {
          e.minimal = bestx;
          if (bestx > inst.E) {
            std::string tup;
            for (size_t i = 0; i < clique.size(); ++i)
              tup += (i ? "," : "") + dom(clique[i]) + ":" +
                     inst.cspace[clique[i]].nodes[pick[i]];
            e.witness = "tuple (" + tup + ") unrealized";
          }
        }
        size_t i = 0;
        for (; i < pick.size(); ++i) {
          if (++pick[i] < static_cast<int32_t>(inst.cspace[clique[i]].nodes.size()))
            break;
          pick[i] = 0;
        }
        if (i == pick.size()) break;
      }
    };
    auto cliques = [&](auto&& self, int from) -> void {
      if (!clique.empty()) process();
      for (int v = from; v < nd; ++v) {
        bool ok = true;
        for (int u : clique)
          if (!inst.orth(u, v)) ok = false;
        if (!ok) continue;
        clique.push_back(v);
        self(self, v + 1);
        clique.pop_back();
      }
    };
    cliques(cliques, 0);
  }

  for (AxiomEntry& e : rep.axioms) {
    e.pass = !e.structural && e.minimal <= inst.E;
    rep.any_structural = rep.any_structural || e.structural;
    if (!e.structural) rep.minimal_E = std::max(rep.minimal_E, e.minimal);
  }
  rep.all_pass = std::all_of(rep.axioms.begin(), rep.axioms.end(),
                             [](const AxiomEntry& e) { return e.pass; });
  return rep;
}

// --- containers, regions, gates -----------------------------------------------

struct CleanReport {
  bool ok = true;
  std::string witness;
};

// Clean containers: some container of U in W can be chosen orthogonal to U.
inline CleanReport clean_containers(const HhsInstance& inst) {
  const int nd = static_cast<int>(inst.ndomains());
  for (int w = 0; w < nd; ++w)
    for (int u = 0; u < nd; ++u) {
      if (!inst.nested(u, w)) continue;
      std::vector<int> orths;
      for (int v = 0; v < nd; ++v)
        if (inst.nested(v, w) && inst.orth(v, u)) orths.push_back(v);
      if (orths.empty()) continue;
      bool found = false;
      for (int q = 0; q < nd && !found; ++q) {
        if (!inst.snested(q, w) || !inst.orth(q, u)) continue;
        bool holds = true;
        for (int v : orths)
          if (!inst.nested(v, q)) holds = false;
        if (holds) found = true;
      }
      if (!found)
        return {false, "no clean container for " + inst.domains[u] + " in " +
                           inst.domains[w]};
    }
  return {};
}

// Points whose projections sit C-close to every relative projection of U.
inline std::vector<uint32_t> product_region(const HhsInstance& inst, int u,
                                            int64_t C) {
  if (C < inst.E) fail(Errc::PreconditionFailed, "tolerance below claimed constant");
  const int nd = static_cast<int>(inst.ndomains());
  const uint32_t np = static_cast<uint32_t>(inst.npoints());
  std::vector<uint32_t> out;
  for (uint32_t x = 0; x < np; ++x) {
    bool ok = true;
    for (int v = 0; v < nd && ok; ++v) {
      if (!(inst.trans(v, u) || inst.snested(u, v))) continue;
      const auto* r = inst.find_rho(u, v);
      if (!r)
        fail(Errc::InvalidConfig,
             "missing rho " + inst.domains[u] + "->" + inst.domains[v]);
      if (inst.dset(v, inst.proj[v][x], *r) > C) ok = false;
    }
    if (ok) out.push_back(x);
  }
  return out;
}

namespace hhs_detail {

// Union-find slices of a region: points whose projections to every domain
// in the given side agree within tol.
inline std::vector<std::vector<uint32_t>> slices(const HhsInstance& inst,
                                                 const std::vector<int>& side,
                                                 const std::vector<uint32_t>& region,
                                                 int64_t tol) {
  const size_t n = region.size();
  std::vector<size_t> root(n);
  std::iota(root.begin(), root.end(), 0);
  auto find = [&](size_t i) {
    while (root[i] != i) i = root[i] = root[root[i]];
    return i;
  };
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      bool same = true;
      for (int v : side)
        if (inst.dset(v, inst.proj[v][region[i]], inst.proj[v][region[j]]) > tol) {
          same = false;
          break;
        }
      if (same) root[find(i)] = find(j);
    }
  std::map<size_t, std::vector<uint32_t>> classes;
  for (size_t i = 0; i < n; ++i) classes[find(i)].push_back(region[i]);
  std::vector<std::vector<uint32_t>> out;
  for (auto& [k, pts] : classes) {
    std::sort(pts.begin(), pts.end());
    out.push_back(std::move(pts));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace hhs_detail

// F-slices fix the orthogonal coordinates; E-slices fix the nested ones.
inline std::vector<std::vector<uint32_t>> f_slices(
    const HhsInstance& inst, int u, const std::vector<uint32_t>& region,
    int64_t tol = 0) {
  std::vector<int> side;
  for (int v = 0; v < static_cast<int>(inst.ndomains()); ++v)
    if (inst.orth(v, u)) side.push_back(v);
  return hhs_detail::slices(inst, side, region, tol);
}

inline std::vector<std::vector<uint32_t>> e_slices(
    const HhsInstance& inst, int u, const std::vector<uint32_t>& region,
    int64_t tol = 0) {
  std::vector<int> side;
  for (int v = 0; v < static_cast<int>(inst.ndomains()); ++v)
    if (inst.nested(v, u)) side.push_back(v);
  return hhs_detail::slices(inst, side, region, tol);
}

// Deviation of y from the gate conditions at x: distance to rho^U_V on
// domains transverse to or strictly above U, distance to pi_V(x) elsewhere.
inline int64_t gate_objective(const HhsInstance& inst, int u, uint32_t x,
                              uint32_t y) {
  int64_t worst = 0;
  for (int v = 0; v < static_cast<int>(inst.ndomains()); ++v) {
    if (inst.trans(v, u) || inst.snested(u, v)) {
      const auto* r = inst.find_rho(u, v);
      if (!r)
        fail(Errc::InvalidConfig,
             "missing rho " + inst.domains[u] + "->" + inst.domains[v]);
      worst = std::max(worst, inst.dset(v, inst.proj[v][y], *r));
    } else {
      worst = std::max(worst, inst.dset(v, inst.proj[v][y], inst.proj[v][x]));
    }
  }
  return worst;
}

// Gate of x into the product region of U: the region point of least
// deviation, ties broken by point order.
inline uint32_t gate(const HhsInstance& inst, int u, uint32_t x, int64_t C = -1) {
  std::vector<uint32_t> region = product_region(inst, u, C < 0 ? inst.E : C);
  if (region.empty()) fail(Errc::EmptyRegion, "empty product region");
  uint32_t best = region[0];
  int64_t best_obj = -1;
  for (uint32_t y : region) {
    int64_t obj = gate_objective(inst, u, x, y);
    if (best_obj < 0 || obj < best_obj) {
      best_obj = obj;
      best = y;
    }
  }
  return best;
}

// --- distance formula ---------------------------------------------------------

struct FitResult {
  int64_t K = 1;
  int64_t C = 0;
};

// Least constants with (1/K)*Sigma_s - C <= d_X <= K*Sigma_s + C over all
// pairs, where Sigma_s drops projected distances below the threshold.
// C is minimized first, then K.
inline FitResult distance_formula_fit(const HhsInstance& inst, int64_t s) {
  if (s < 1) fail(Errc::InvalidConfig, "threshold must be at least 1");
  const int nd = static_cast<int>(inst.ndomains());
  const uint32_t np = static_cast<uint32_t>(inst.npoints());
  std::vector<std::pair<int64_t, int64_t>> pairs;  // (d_X, Sigma)
  for (uint32_t x = 0; x < np; ++x)
    for (uint32_t y = x + 1; y < np; ++y) {
      int64_t sum = 0;
      for (int u = 0; u < nd; ++u) {
        int64_t d = inst.dpair(u, x, y);
        if (d >= s) sum += d;
      }
      pairs.push_back({inst.xdist[x][y], sum});
    }
  FitResult best;
  bool have = false;
  for (int64_t k = 1; k <= 64; ++k) {
    int64_t c = 0;
    for (auto [dx, sum] : pairs) {
      c = std::max(c, dx - k * sum);
      c = std::max(c, hhs_detail::ceil_div(sum - k * dx, k));
    }
    if (!have || c < best.C) {
      best = {k, c};
      have = true;
    }
  }
  return best;
}

// --- maximization -------------------------------------------------------------

struct SmReport {
  std::vector<int> sm;  // sorted domain ids
  bool closed = true;
  std::string witness;
};

// Domains nested below some V that both exceeds the threshold and has an
// orthogonal partner exceeding it.  Closure under nesting is re-verified;
// a violation would be an implementation bug, so it is reported, not thrown.
inline SmReport compute_SM(const HhsInstance& inst, int64_t m) {
  const int nd = static_cast<int>(inst.ndomains());
  SmReport rep;
  std::vector<bool> in(nd, false);
  for (int u = 0; u < nd; ++u) {
    for (int v = 0; v < nd && !in[u]; ++v) {
      if (!inst.nested(u, v) || inst.cspace[v].diam <= m) continue;
      for (int w = 0; w < nd; ++w)
        if (inst.orth(w, v) && inst.cspace[w].diam > m) {
          in[u] = true;
          break;
        }
    }
    if (in[u]) rep.sm.push_back(u);
  }
  for (int u : rep.sm)
    for (int v = 0; v < nd; ++v)
      if (inst.nested(v, u) && !in[v]) {
        rep.closed = false;
        rep.witness = inst.domains[v] + " below " + inst.domains[u] +
                      " escapes the set";
      }
  return rep;
}

struct MaximizedInstance {
  std::vector<int> T;                 // sorted domain ids
  std::vector<std::string> tags;      // per domain: top/unb/min/dropped
  std::vector<int> SM, SMplus;        // sorted domain ids
  std::vector<std::vector<int64_t>> topdist;
  int64_t diameter = 0;
};

// Maximization: keep the top domain, the doubly-unbounded domains, and the
// minimal domains with unbounded factor; cone every F-slice of every domain
// in SMplus inside the top-level space.
inline MaximizedInstance maximize(const HhsInstance& inst, int64_t m = -1,
                                  const HhsCheckOptions& opts = {}) {
  if (m < 0) m = inst.M;
  AxiomReport axioms = check_axioms(inst, opts);
  if (!axioms.all_pass) {
    for (const AxiomEntry& e : axioms.axioms)
      if (!e.pass)
        fail(Errc::PreconditionFailed, "axiom '" + e.name + "' fails: " +
                                           (e.witness.empty() ? "constant" : e.witness));
  }
  CleanReport clean = clean_containers(inst);
  if (!clean.ok) fail(Errc::PreconditionFailed, clean.witness);

  const int nd = static_cast<int>(inst.ndomains());
  const uint32_t np = static_cast<uint32_t>(inst.npoints());
  if (np > 600) fail(Errc::BudgetExceeded, "topspace point count over budget");
  MaximizedInstance out;

  SmReport sm = compute_SM(inst, m);
  out.SM = sm.sm;
  std::vector<bool> plus(nd, false);
  for (int u : sm.sm) plus[u] = true;
  for (int u = 0; u < nd; ++u) {
    bool minimal_dom = true;
    for (int v = 0; v < nd; ++v)
      if (inst.snested(v, u)) minimal_dom = false;
    if (minimal_dom && inst.flags[u].f_unbounded) plus[u] = true;
  }
  for (int u = 0; u < nd; ++u)
    if (plus[u]) out.SMplus.push_back(u);

  const int s = inst.top();
  out.tags.assign(nd, "dropped");
  out.tags[s] = "top";
  out.T.push_back(s);
  for (int u = 0; u < nd; ++u) {
    if (u == s) continue;
    bool minimal_dom = true;
    for (int v = 0; v < nd; ++v)
      if (inst.snested(v, u)) minimal_dom = false;
    if (inst.flags[u].f_unbounded && inst.flags[u].e_unbounded) {
      out.tags[u] = "unb";
      out.T.push_back(u);
    } else if (minimal_dom && inst.flags[u].f_unbounded &&
               !inst.flags[u].e_unbounded) {
      out.tags[u] = "min";
      out.T.push_back(u);
    }
  }
  std::sort(out.T.begin(), out.T.end());

  // cone: original distances plus unit edges inside every F-slice
  std::vector<std::vector<int64_t>> w = inst.xdist;
  for (int u : out.SMplus) {
    std::vector<uint32_t> region = product_region(inst, u, inst.E);
    for (const auto& slice : f_slices(inst, u, region, opts.slice_tolerance))
      for (size_t i = 0; i < slice.size(); ++i)
        for (size_t j = i + 1; j < slice.size(); ++j) {
          w[slice[i]][slice[j]] = std::min<int64_t>(w[slice[i]][slice[j]], 1);
          w[slice[j]][slice[i]] = w[slice[i]][slice[j]];
        }
  }
  for (uint32_t k = 0; k < np; ++k)
    for (uint32_t i = 0; i < np; ++i)
      for (uint32_t j = 0; j < np; ++j)
        w[i][j] = std::min(w[i][j], w[i][k] + w[k][j]);
  out.topdist = std::move(w);
  for (const auto& row : out.topdist)
    for (int64_t v : row) out.diameter = std::max(out.diameter, v);
  return out;
}

// --- fixtures -----------------------------------------------------------------

// The 9x9 grid with the taxicab metric: one domain per coordinate line plus
// a trivial top.  The claimed constant 2 is exactly the minimum: the chain
// {H,S} already forces 2 in finite complexity, and the corner pairs force 2
// in large links because the top projection is a single point.
inline HhsInstance grid_instance(int64_t claimed = 2, int64_t m = 1) {
  HhsInstance inst;
  for (int x = -4; x <= 4; ++x)
    for (int y = -4; y <= 4; ++y)
      inst.points.push_back(std::to_string(x) + "," + std::to_string(y));
  const uint32_t np = static_cast<uint32_t>(inst.points.size());
  auto coord = [](uint32_t id) {
    return std::pair<int, int>{static_cast<int>(id) / 9 - 4,
                               static_cast<int>(id) % 9 - 4};
  };
  inst.xdist.assign(np, std::vector<int64_t>(np, 0));
  for (uint32_t i = 0; i < np; ++i)
    for (uint32_t j = 0; j < np; ++j) {
      auto [xi, yi] = coord(i);
      auto [xj, yj] = coord(j);
      inst.xdist[i][j] = std::abs(xi - xj) + std::abs(yi - yj);
    }

  inst.domains = {"H", "S", "V"};
  const int H = 0, S = 1, V = 2;
  inst.rel.assign(3, std::vector<DomainRelation>(3, DomainRelation::Equal));
  inst.rel[H][S] = DomainRelation::NestedIn;
  inst.rel[S][H] = DomainRelation::NestedOver;
  inst.rel[V][S] = DomainRelation::NestedIn;
  inst.rel[S][V] = DomainRelation::NestedOver;
  inst.rel[H][V] = inst.rel[V][H] = DomainRelation::Orthogonal;

  inst.cspace.resize(3);
  for (int d : {H, V}) {
    for (int c = -4; c <= 4; ++c) inst.cspace[d].nodes.push_back(std::to_string(c));
    for (int32_t i = 0; i + 1 < 9; ++i) inst.cspace[d].edges.push_back({i, i + 1});
  }
  inst.cspace[S].nodes = {"*"};

  inst.proj.assign(3, std::vector<std::vector<int32_t>>(np));
  for (uint32_t i = 0; i < np; ++i) {
    auto [x, y] = coord(i);
    inst.proj[H][i] = {x + 4};
    inst.proj[V][i] = {y + 4};
    inst.proj[S][i] = {0};
  }
  inst.rho[{H, S}] = {0};
  inst.rho[{V, S}] = {0};
  inst.flags.assign(3, HhsFlags{});
  inst.flags[H] = {true, true};
  inst.flags[V] = {true, true};
  inst.E = claimed;
  inst.M = m;
  inst.finalize();
  return inst;
}

// One domain over a five-point path; the space is its own top-level space.
inline HhsInstance single_domain_instance() {
  HhsInstance inst;
  for (int i = 0; i < 5; ++i) inst.points.push_back("n" + std::to_string(i));
  inst.xdist.assign(5, std::vector<int64_t>(5, 0));
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) inst.xdist[i][j] = std::abs(i - j);
  inst.domains = {"S"};
  inst.rel.assign(1, {DomainRelation::Equal});
  inst.cspace.resize(1);
  inst.cspace[0].nodes = inst.points;
  for (int32_t i = 0; i + 1 < 5; ++i) inst.cspace[0].edges.push_back({i, i + 1});
  inst.proj.assign(1, std::vector<std::vector<int32_t>>(5));
  for (int32_t i = 0; i < 5; ++i) inst.proj[0][i] = {i};
  inst.flags.assign(1, HhsFlags{});
  inst.E = 1;
  inst.M = 1;
  inst.finalize();
  return inst;
}

}  // namespace gpg
