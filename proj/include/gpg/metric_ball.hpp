#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <random>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "gpg/delta.hpp"
#include "gpg/errors.hpp"
#include "gpg/parallelism.hpp"
#include "gpg/word.hpp"

namespace gpg {

enum class MetricKind { Standard, ConedVertexStars, ConedFamily };

inline const char* metric_kind_name(MetricKind k) {
  switch (k) {
    case MetricKind::Standard: return "standard";
    case MetricKind::ConedVertexStars: return "cone-stars";
    case MetricKind::ConedFamily: return "cone-family";
  }
  return "?";
}

// Materialized metric ball.  Point 0 is the center; point order is BFS
// layer order with ShortLex within each layer, so exports are reproducible.
// Coned balls carry, per cone member st(Lambda), the partition of points
// into left G_st(Lambda)-cosets: a coset is a clique in the coned graph,
// which is what makes cone BFS linear instead of quadratic.
class MetricBall {
 public:
  MetricBall(const GraphProduct& gp, NormalForm center, int radius,
             MetricKind kind, std::vector<VertexSet> family = {},
             size_t node_limit = 2000000, bool strict = true,
             unsigned threads = 1)
      : gp_(&gp),
        center_(std::move(center)),
        radius_(radius),
        kind_(kind),
        threads_(threads == 0 ? 1 : threads),
        index_(64, NormalFormHash{&gp}, NormalFormEq{}) {
    gp.check_ambient(center_);
    if (kind == MetricKind::ConedVertexStars) {
      for (VertexId v = 0; v < gp.graph().size(); ++v) {
        members_.push_back(bit(v));
        star_masks_.push_back(gp.graph().star(bit(v)));
      }
    } else if (kind == MetricKind::ConedFamily) {
      if (family.empty())
        fail(Errc::InvalidFamily, "coned family must be nonempty");
      for (VertexSet m : family) {
        if (m == 0) fail(Errc::InvalidFamily, "empty subgraph in cone family");
        if (strict && gp.graph().link(m) == 0)
          fail(Errc::InvalidFamily,
               "cone family member " + gp.graph().describe(m) +
                   " has empty link");
        members_.push_back(m);
        star_masks_.push_back(gp.graph().star(m));
      }
    }
    build(node_limit);
  }

  const GraphProduct& ambient() const { return *gp_; }
  MetricKind kind() const { return kind_; }
  int radius() const { return radius_; }
  size_t size() const { return points_.size(); }
  const NormalForm& point(size_t i) const { return points_[i]; }
  const NormalForm& center() const { return center_; }
  const std::vector<NormalForm>& points() const { return points_; }

  // distance from the center in the ball's own metric
  int32_t dist(size_t i) const { return dist_[i]; }

  bool contains(const NormalForm& x) const { return index_.count(x) != 0; }

  uint32_t index_of(const NormalForm& x) const {
    auto it = index_.find(x);
    if (it == index_.end())
      fail(Errc::OutOfBall, "point outside the materialized ball");
    return it->second;
  }

  // Pairwise distance.  Standard balls use the exact length formula; coned
  // balls run a BFS restricted to the ball's point set.
  int64_t pair_dist(uint32_t i, uint32_t j) const {
    if (kind_ == MetricKind::Standard)
      return gp_->word_length(
          gp_->multiply(gp_->invert(points_[i]), points_[j]));
    return bfs_from(i)[j];
  }

  // Restricted BFS in the coned (or standard) ball graph from one source.
  // Unreachable points report -1 (possible in restricted coned graphs).
  const std::vector<int32_t>& bfs_from(uint32_t src) const {
    auto it = bfs_cache_.find(src);
    if (it != bfs_cache_.end()) return it->second;
    std::vector<int32_t> d(points_.size(), -1);
    std::vector<std::vector<bool>> bucket_done(members_.size());
    for (size_t m = 0; m < members_.size(); ++m)
      bucket_done[m].assign(buckets_[m].size(), false);
    std::deque<uint32_t> q{src};
    d[src] = 0;
    while (!q.empty()) {
      uint32_t x = q.front();
      q.pop_front();
      for (uint32_t y : std_adj_[x])
        if (d[y] < 0) {
          d[y] = d[x] + 1;
          q.push_back(y);
        }
      for (size_t m = 0; m < members_.size(); ++m) {
        uint32_t b = bucket_of_[m][x];
        if (bucket_done[m][b]) continue;
        bucket_done[m][b] = true;
        for (uint32_t y : buckets_[m][b])
          if (d[y] < 0) {
            d[y] = d[x] + 1;
            q.push_back(y);
          }
      }
    }
    return bfs_cache_.emplace(src, std::move(d)).first->second;
  }

  size_t cone_member_count() const { return members_.size(); }

 private:
  void build(size_t node_limit) {
    points_.push_back(center_);
    index_.emplace(center_, 0);
    dist_.push_back(0);
    std::vector<Syllable> gens = gp_->generators();
    NormalForm cinv = gp_->invert(center_);
    size_t layer_begin = 0;
    for (int r = 0; r < radius_; ++r) {
      size_t layer_end = points_.size();
      // candidate generation is pure, so chunks may run on worker threads;
      // chunk-order merge keeps the result identical for any thread count
      auto expand = [&](size_t lo, size_t hi, std::vector<NormalForm>& out) {
        for (size_t i = lo; i < hi; ++i)
          for (const Syllable& s : gens) {
            NormalForm y = gp_->multiply(points_[i], NormalForm{gp_, {s}});
            // keep only genuine sphere points; shorter ones are known
            if (gp_->word_length(gp_->multiply(cinv, y)) != r + 1) continue;
            out.push_back(std::move(y));
          }
      };
      std::vector<NormalForm> cand;
      size_t width = layer_end - layer_begin;
      if (threads_ > 1 && width >= 64) {
        size_t nt = std::min<size_t>(threads_, (width + 63) / 64);
        std::vector<std::vector<NormalForm>> parts(nt);
        std::vector<std::thread> pool;
        for (size_t c = 0; c < nt; ++c)
          pool.emplace_back(expand, layer_begin + width * c / nt,
                            layer_begin + width * (c + 1) / nt,
                            std::ref(parts[c]));
        for (auto& t : pool) t.join();
        for (auto& p : parts)
          for (auto& y : p) cand.push_back(std::move(y));
      } else {
        expand(layer_begin, layer_end, cand);
      }
      std::vector<NormalForm> next;
      std::unordered_set<NormalForm, NormalFormHash, NormalFormEq> fresh(
          64, NormalFormHash{gp_}, NormalFormEq{});
      for (NormalForm& y : cand) {
        if (index_.count(y) || fresh.count(y)) continue;
        fresh.insert(y);
        next.push_back(std::move(y));
      }
      std::sort(next.begin(), next.end(),
                [&](const NormalForm& a, const NormalForm& b) {
                  return gp_->compare(a, b) < 0;
                });
      for (auto& y : next) {
        index_.emplace(y, static_cast<uint32_t>(points_.size()));
        points_.push_back(std::move(y));
        dist_.push_back(r + 1);
      }
      if (points_.size() > node_limit)
        fail(Errc::NodeLimitExceeded,
             "ball construction exceeded the node limit of " +
                 std::to_string(node_limit));
      layer_begin = layer_end;
    }
    // standard adjacency, used by restricted BFS
    std_adj_.resize(points_.size());
    for (size_t i = 0; i < points_.size(); ++i)
      for (const Syllable& s : gens) {
        NormalForm y = gp_->multiply(points_[i], NormalForm{gp_, {s}});
        auto it = index_.find(y);
        if (it != index_.end()) std_adj_[i].push_back(it->second);
      }
    if (kind_ != MetricKind::Standard) {
      build_cone_buckets();
      recompute_cone_dist();
    }
  }

  void build_cone_buckets() {
    bucket_of_.resize(members_.size());
    buckets_.resize(members_.size());
    for (size_t m = 0; m < members_.size(); ++m) {
      std::unordered_map<NormalForm, uint32_t, NormalFormHash, NormalFormEq>
          key(64, NormalFormHash{gp_}, NormalFormEq{});
      bucket_of_[m].resize(points_.size());
      for (size_t i = 0; i < points_.size(); ++i) {
        NormalForm rep = canonicalize_rep(*gp_, points_[i], members_[m]);
        auto [it, fresh] =
            key.emplace(rep, static_cast<uint32_t>(buckets_[m].size()));
        if (fresh) buckets_[m].emplace_back();
        bucket_of_[m][i] = it->second;
        buckets_[m][it->second].push_back(static_cast<uint32_t>(i));
      }
    }
  }

  void recompute_cone_dist() {
    const std::vector<int32_t>& d = bfs_from(0);
    for (size_t i = 0; i < points_.size(); ++i) dist_[i] = d[i];
  }

  const GraphProduct* gp_;
  NormalForm center_;
  int radius_;
  MetricKind kind_;
  unsigned threads_ = 1;
  std::vector<VertexSet> members_;     // cone members as subgraphs Lambda
  std::vector<VertexSet> star_masks_;  // st(Lambda) per member
  std::vector<NormalForm> points_;
  std::unordered_map<NormalForm, uint32_t, NormalFormHash, NormalFormEq> index_;
  std::vector<int32_t> dist_;
  std::vector<std::vector<uint32_t>> std_adj_;
  std::vector<std::vector<uint32_t>> bucket_of_;  // member -> point -> bucket
  std::vector<std::vector<std::vector<uint32_t>>> buckets_;
  mutable std::unordered_map<uint32_t, std::vector<int32_t>> bfs_cache_;
};

// --- coned distances without materializing the ball ------------------------

namespace detail {

// Minimal number of blocks partitioning the trace of g into consecutive
// factors, each supported in one star of `stars`.  A shortest path to g in
// the coned graph can always be rearranged to be cancellation free, so this
// equals the coned distance from the identity; since the prefixes of a
// cancellation-free factorization never exceed |g|, the value also equals
// the BFS distance restricted to any standard ball of radius >= |g|.
inline int64_t star_block_count(const GraphProduct& gp, const NormalForm& g,
                                const std::vector<VertexSet>& stars) {
  size_t k = g.syl.size();
  if (k == 0) return 0;
  if (k > 64)
    fail(Errc::BudgetExceeded, "cone distance capped at 64 syllables");
  std::vector<uint64_t> pred(k, 0);
  for (size_t i = 0; i < k; ++i)
    for (size_t j = 0; j < i; ++j)
      if (!gp.commute(g.syl[j].v, g.syl[i].v)) pred[i] |= uint64_t{1} << j;
  const uint64_t full = k == 64 ? ~uint64_t{0} : (uint64_t{1} << k) - 1;
  auto closure = [&](uint64_t ideal, VertexSet star) {
    uint64_t cur = ideal;
    bool grew = true;
    while (grew) {
      grew = false;
      for (size_t i = 0; i < k; ++i) {
        uint64_t b = uint64_t{1} << i;
        if (cur & b) continue;
        if (!(star & bit(g.syl[i].v))) continue;
        if ((pred[i] & ~cur) == 0) {
          cur |= b;
          grew = true;
        }
      }
    }
    return cur;
  };
  std::unordered_set<uint64_t> seen{0};
  std::vector<uint64_t> frontier{0};
  for (int64_t depth = 1; !frontier.empty(); ++depth) {
    std::vector<uint64_t> next;
    for (uint64_t ideal : frontier)
      for (VertexSet star : stars) {
        uint64_t j = closure(ideal, star);
        if (j == ideal || !seen.insert(j).second) continue;
        if (j == full) return depth;
        next.push_back(j);
      }
    frontier = std::move(next);
  }
  fail(Errc::PreconditionFailed, "unreachable: block search exhausted");
}

inline std::vector<VertexSet> cone_stars(const GraphProduct& gp,
                                         const std::vector<VertexSet>* family,
                                         bool strict) {
  std::vector<VertexSet> stars;
  if (family == nullptr) {
    for (VertexId v = 0; v < gp.graph().size(); ++v)
      stars.push_back(gp.graph().star(bit(v)));
  } else {
    if (family->empty())
      fail(Errc::InvalidFamily, "coned family must be nonempty");
    for (VertexSet m : *family) {
      if (m == 0) fail(Errc::InvalidFamily, "empty subgraph in cone family");
      if (strict && gp.graph().link(m) == 0)
        fail(Errc::InvalidFamily, "cone family member " +
                                      gp.graph().describe(m) +
                                      " has empty link");
      stars.push_back(gp.graph().star(m));
    }
  }
  return stars;
}

}  // namespace detail

// Distance from the identity to g in the coned Cayley graph, restricted to
// the standard ball of radius R.  `family == nullptr` cones all vertex
// stars; otherwise the given subgraphs are coned along st(Lambda).  The
// value is monotone non-increasing in R and never below the true coned
// distance; for R >= |g| it is exact (see star_block_count).
inline int64_t cone_distance_restricted(
    const GraphProduct& gp, const NormalForm& g, int64_t R,
    const std::vector<VertexSet>* family = nullptr, bool strict = true) {
  gp.check_ambient(g);
  if (gp.word_length(g) > R)
    fail(Errc::OutOfBall, "element of length " +
                              std::to_string(gp.word_length(g)) +
                              " outside the radius-" + std::to_string(R) +
                              " ball");
  return detail::star_block_count(gp, g,
                                  detail::cone_stars(gp, family, strict));
}

// Greedy upper bound: repeatedly strip the longest accessible prefix
// supported in a single vertex star.  Ties prefer stars centered inside the
// factor's support, then the ShortLex-least star vertex.
inline std::vector<std::pair<NormalForm, VertexId>> greedy_star_factorization(
    const GraphProduct& gp, const NormalForm& g) {
  gp.check_ambient(g);
  std::vector<std::pair<NormalForm, VertexId>> out;
  NormalForm rest = g;
  while (!rest.is_identity()) {
    int64_t best_len = -1;
    VertexId best_v = 0;
    std::vector<bool> best_mask;
    for (VertexId v = 0; v < gp.graph().size(); ++v) {
      auto mask = gp.left_divisor_mask(rest, gp.graph().star(bit(v)));
      int64_t len = 0;
      VertexSet supp = 0;
      for (size_t i = 0; i < mask.size(); ++i)
        if (mask[i]) {
          len += gp.group(rest.syl[i].v).length(rest.syl[i].e);
          supp |= bit(rest.syl[i].v);
        }
      if (len == 0) continue;
      bool in_supp = (supp & bit(v)) != 0;
      bool better = len > best_len;
      if (len == best_len && best_mask.size()) {
        VertexSet bsupp = 0;
        for (size_t i = 0; i < best_mask.size(); ++i)
          if (best_mask[i]) bsupp |= bit(rest.syl[i].v);
        bool best_in_supp = (bsupp & bit(best_v)) != 0;
        better = in_supp && !best_in_supp;
      }
      if (better) {
        best_len = len;
        best_v = v;
        best_mask = mask;
      }
    }
    if (best_len < 0)
      fail(Errc::PreconditionFailed, "no star factor accessible");
    auto [factor, remainder] = gp.split(rest, best_mask);
    out.emplace_back(factor, best_v);
    rest = remainder;
  }
  return out;
}

// --- hyperbolicity defect ---------------------------------------------------

// Gromov four-point defect over the ball: for each quadruple the largest of
// the three pairing sums exceeds the median by at most 2*delta.  Exhaustive
// when C(n,4) fits the budget.  Beyond it: standard balls sample quadruples
// uniformly (distances come from the length formula); coned balls sample a
// point subset and exhaust it, so that one BFS per subset point suffices.
inline DeltaReport four_point_delta(const MetricBall& ball,
                                    uint64_t budget = 1000000,
                                    uint64_t seed = 12345) {
  const size_t n = ball.size();
  DeltaReport rep;
  rep.seed = seed;
  if (n < 4) return rep;

  if (detail::count4(n) <= budget) {
    // full pair matrix, then every quadruple
    std::vector<std::vector<int64_t>> d(n);
    for (uint32_t i = 0; i < n; ++i) {
      d[i].resize(n);
      for (uint32_t j = 0; j < n; ++j) d[i][j] = ball.pair_dist(i, j);
    }
    DeltaReport scan = delta_scan(d);
    scan.seed = seed;
    return scan;
  }

  rep.exhaustive = false;
  std::mt19937_64 rng(seed);
  if (ball.kind() == MetricKind::Standard) {
    std::uniform_int_distribution<uint32_t> pick(0, static_cast<uint32_t>(n) - 1);
    auto dist = [&](uint32_t i, uint32_t j) { return ball.pair_dist(i, j); };
    for (uint64_t t = 0; t < budget; ++t) {
      uint32_t x = pick(rng), y = pick(rng), z = pick(rng), w = pick(rng);
      if (x == y || x == z || x == w || y == z || y == w || z == w) continue;
      ++rep.quadruples;
      int64_t v = pairing_defect(dist(x, y), dist(z, w), dist(x, z),
                                 dist(y, w), dist(x, w), dist(y, z));
      if (v > rep.delta_num) {
        rep.delta_num = v;
        rep.witness = {x, y, z, w};
      }
    }
    return rep;
  }

  // coned: exhaust a sampled point subset
  size_t s = 4;
  while (s + 1 <= n && detail::count4(s + 1) <= budget) ++s;
  std::vector<uint32_t> ids(n);
  for (uint32_t i = 0; i < n; ++i) ids[i] = i;
  std::shuffle(ids.begin(), ids.end(), rng);
  ids.resize(s);
  std::sort(ids.begin(), ids.end());
  std::vector<std::vector<int64_t>> d(s, std::vector<int64_t>(s));
  for (size_t i = 0; i < s; ++i) {
    const std::vector<int32_t>& row = ball.bfs_from(ids[i]);
    for (size_t j = 0; j < s; ++j) d[i][j] = row[ids[j]];
  }
  DeltaReport scan = delta_scan(d, ids.data());
  scan.exhaustive = false;
  scan.seed = seed;
  return scan;
}

// Geodesic from x to y in the standard metric: spell the normal form of
// x^-1 y one generator step at a time.  Lengths add over syllables, so every
// prefix is geodesic.
inline std::vector<NormalForm> standard_geodesic(const GraphProduct& gp,
                                                 const NormalForm& x,
                                                 const NormalForm& y) {
  gp.check_ambient(x);
  gp.check_ambient(y);
  NormalForm diff = gp.multiply(gp.invert(x), y);
  std::vector<NormalForm> path{x};
  NormalForm cur = x;
  for (const Syllable& s : diff.syl)
    for (const GroupElem& step : gp.group(s.v).generator_path(s.e)) {
      cur = gp.multiply(cur, NormalForm{&gp, {Syllable{s.v, step}}});
      path.push_back(cur);
    }
  return path;
}

}  // namespace gpg
