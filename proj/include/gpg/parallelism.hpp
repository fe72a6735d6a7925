#pragma once

#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "gpg/errors.hpp"
#include "gpg/graph.hpp"
#include "gpg/relations.hpp"
#include "gpg/word.hpp"

namespace gpg {

// Parallelism class [g Lambda] of the coset g G_Lambda: two cosets are
// parallel iff they differ by an element of G_st(Lambda).  The stored
// representative is canonical (see GraphProduct::canonicalize_rep), so
// classes compare by value.
struct ParallelismClass {
  NormalForm rep;
  VertexSet lambda = 0;

  bool operator==(const ParallelismClass& o) const {
    return lambda == o.lambda && rep == o.rep;
  }
};

// Canonical representative of g G_st(Lambda): strip the maximal right
// divisor supported in st(Lambda).  The result is the unique shortest
// element of the coset (any further right factor in G_st(Lambda) would have
// been strippable), hence also its ShortLex least element.
inline NormalForm canonicalize_rep(const GraphProduct& gp, const NormalForm& g,
                                   VertexSet lambda) {
  gp.check_ambient(g);
  VertexSet st = gp.graph().star(lambda);
  auto mask = gp.right_divisor_mask(g, st);
  std::vector<Syllable> kept;
  for (size_t i = 0; i < g.syl.size(); ++i)
    if (!mask[i]) kept.push_back(g.syl[i]);
  return gp.normalize(std::move(kept));
}

inline ParallelismClass make_class(const GraphProduct& gp, const NormalForm& g,
                                   VertexSet lambda) {
  if (lambda == 0)
    fail(Errc::InvalidConfig, "parallelism classes need a nonempty subgraph");
  return ParallelismClass{canonicalize_rep(gp, g, lambda), lambda};
}

inline bool parallel(const GraphProduct& gp, const NormalForm& g,
                     const NormalForm& h, VertexSet lambda) {
  NormalForm d = gp.multiply(gp.invert(g), h);
  return gp.in_parabolic(d, gp.graph().star(lambda));
}

// Membership x in G_A * G_B for parabolic subgroups: strip the maximal left
// divisor supported in A and test whether the remainder lies in G_B.  Any
// witness factorization can be rearranged so the A-part is a cancellation
// free prefix of x, so the greedy strip is complete.
inline bool in_parabolic_product(const GraphProduct& gp, const NormalForm& x,
                                 VertexSet a, VertexSet b) {
  auto mask = gp.left_divisor_mask(x, a);
  VertexSet rest = 0;
  for (size_t i = 0; i < x.syl.size(); ++i)
    if (!mask[i]) rest |= bit(x.syl[i].v);
  return (rest & ~b) == 0;
}

// The common-refinement element k with [k Lambda] = [g Lambda] and
// [k Omega] = [h Omega], when one exists.
inline std::optional<NormalForm> common_refinement(const GraphProduct& gp,
                                                   const NormalForm& g,
                                                   VertexSet lambda,
                                                   const NormalForm& h,
                                                   VertexSet omega) {
  VertexSet stl = gp.graph().star(lambda);
  VertexSet sto = gp.graph().star(omega);
  NormalForm x = gp.multiply(gp.invert(g), h);
  auto mask = gp.left_divisor_mask(x, stl);
  auto [p, rest] = gp.split(x, mask);
  if (!gp.in_parabolic(rest, sto)) return std::nullopt;
  return gp.multiply(g, p);
}

// Relation of two parallelism classes, following the classification for
// graph products: with A = [g Lambda], B = [h Omega],
//   A <= B  iff Lambda subset Omega and some k refines both,
//   A perp B iff Lambda subset lk(Omega) and some k refines both,
// and distinct classes are transverse otherwise.
inline DomainRelation relation(const GraphProduct& gp,
                               const ParallelismClass& a,
                               const ParallelismClass& b) {
  if (a == b) return DomainRelation::Equal;
  auto refines = [&] {
    return common_refinement(gp, a.rep, a.lambda, b.rep, b.lambda).has_value();
  };
  if ((a.lambda & ~b.lambda) == 0 && refines()) return DomainRelation::NestedIn;
  if ((b.lambda & ~a.lambda) == 0 &&
      common_refinement(gp, b.rep, b.lambda, a.rep, a.lambda).has_value())
    return DomainRelation::NestedOver;
  if ((a.lambda & ~gp.graph().link(b.lambda)) == 0 && refines())
    return DomainRelation::Orthogonal;
  return DomainRelation::Transverse;
}

// Container of U = [h Omega] inside W = [g Lambda]: the class
// [a (lk(Omega) cap Lambda)] where a refines both inputs.  It is orthogonal
// to U and contains every V nested in W and orthogonal to U.
inline ParallelismClass container(const GraphProduct& gp,
                                  const ParallelismClass& w,
                                  const ParallelismClass& u) {
  if (relation(gp, u, w) != DomainRelation::NestedIn &&
      !(u == w))
    fail(Errc::PreconditionFailed, "container needs U nested in W");
  VertexSet q = gp.graph().link(u.lambda) & w.lambda;
  if (q == 0)
    fail(Errc::NoOrthogonal,
         "no orthogonal complement: lk(Omega) misses Lambda");
  auto k = common_refinement(gp, w.rep, w.lambda, u.rep, u.lambda);
  if (!k)
    fail(Errc::PreconditionFailed, "container needs U nested in W");
  return make_class(gp, *k, q);
}

struct CleanContainerTriple {
  ParallelismClass w, u, q;
  std::vector<ParallelismClass> witnesses;  // orthogonal candidates covered
  bool clean = false;
};

struct CleanContainerReport {
  std::vector<CleanContainerTriple> triples;
  size_t checked = 0;
  bool all_clean = true;
};

// Every element of word length at most `radius`, in BFS discovery order
// with each layer sorted ShortLex.  Utility for oracles and witness
// enumeration; the full ball machinery lives in metric_ball.hpp.
inline std::vector<NormalForm> enumerate_ball(const GraphProduct& gp,
                                              int radius,
                                              size_t node_limit = 2000000) {
  std::unordered_set<NormalForm, NormalFormHash, NormalFormEq> seen(
      64, NormalFormHash{&gp}, NormalFormEq{});
  std::vector<NormalForm> all{gp.identity()};
  seen.insert(gp.identity());
  size_t layer_begin = 0;
  std::vector<Syllable> gens = gp.generators();
  for (int r = 0; r < radius; ++r) {
    size_t layer_end = all.size();
    std::vector<NormalForm> next;
    for (size_t i = layer_begin; i < layer_end; ++i)
      for (const Syllable& s : gens) {
        NormalForm y = gp.multiply(all[i], NormalForm{&gp, {s}});
        if (gp.word_length(y) != r + 1) continue;
        if (seen.insert(y).second) next.push_back(y);
      }
    std::sort(next.begin(), next.end(),
              [&](const NormalForm& a, const NormalForm& b) {
                return gp.compare(a, b) < 0;
              });
    for (auto& x : next) all.push_back(std::move(x));
    if (all.size() > node_limit)
      fail(Errc::NodeLimitExceeded, "ball enumeration exceeded node limit");
    layer_begin = layer_end;
  }
  return all;
}

// Exhaustive clean-container verification at identity representatives.
// For each nested pair of standard domains the container is computed and
// every orthogonal candidate V (subgraph classes with representatives from
// a ball of the given radius) is checked to nest in it.
inline CleanContainerReport verify_clean_containers(const GraphProduct& gp,
                                                    int depth = 1) {
  CleanContainerReport report;
  const SimplicialGraph& g = gp.graph();
  std::vector<NormalForm> reps = enumerate_ball(gp, depth);
  for (VertexSet lw : enumerate_subgraphs(g)) {
    for (VertexSet om = lw;; om = (om - 1) & lw) {
      if (om == 0) break;
      ++report.checked;
      VertexSet qmask = g.link(om) & lw;
      if (qmask == 0) continue;  // no orthogonal candidates inside W
      ParallelismClass w = make_class(gp, gp.identity(), lw);
      ParallelismClass u = make_class(gp, gp.identity(), om);
      CleanContainerTriple t;
      t.w = w;
      t.u = u;
      t.q = container(gp, w, u);
      t.clean = relation(gp, t.q, u) == DomainRelation::Orthogonal;
      for (VertexSet pi = lw;; pi = (pi - 1) & lw) {
        if (pi == 0) break;
        for (const NormalForm& p : reps) {
          ParallelismClass v = make_class(gp, p, pi);
          if (!(v.rep == p)) continue;  // one visit per class
          DomainRelation vw = relation(gp, v, w);
          if (vw != DomainRelation::NestedIn && vw != DomainRelation::Equal)
            continue;
          if (relation(gp, v, u) != DomainRelation::Orthogonal) continue;
          DomainRelation vq = relation(gp, v, t.q);
          if (vq != DomainRelation::NestedIn && vq != DomainRelation::Equal)
            t.clean = false;
          t.witnesses.push_back(v);
        }
      }
      report.all_clean = report.all_clean && t.clean;
      report.triples.push_back(std::move(t));
    }
  }
  return report;
}

}  // namespace gpg
