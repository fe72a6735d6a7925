#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "gpg/errors.hpp"
#include "gpg/metric_ball.hpp"
#include "gpg/word.hpp"

namespace gpg {

// Two-pass quasi-geodesic fit: minimize lambda subject to eps = 0, then
// minimize eps at that lambda.  Pass one is infeasible exactly when the path
// revisits a point, in which case lambda = 1 and eps carries everything.
struct QgCaps {
  double lambda_max = 4.0;
  int64_t eps_max = 8;
};

struct QgFit {
  bool ok = true;
  double lambda = 1.0;
  int64_t eps = 0;
  std::string reason;
};

// dist(i, j) for i < j < npts.
template <typename Dist>
QgFit fit_quasi_geodesic(size_t npts, Dist&& dist, QgCaps caps = {}) {
  QgFit fit;
  if (npts <= 1) return fit;
  bool revisits = false;
  for (size_t i = 0; i + 1 < npts && !revisits; ++i)
    for (size_t j = i + 1; j < npts; ++j)
      if (dist(i, j) == 0) {
        revisits = true;
        break;
      }
  if (revisits) {
    for (size_t i = 0; i + 1 < npts; ++i)
      for (size_t j = i + 1; j < npts; ++j) {
        int64_t d = dist(i, j), gap = static_cast<int64_t>(j - i);
        fit.eps = std::max({fit.eps, d - gap, gap - d});
      }
  } else {
    for (size_t i = 0; i + 1 < npts; ++i)
      for (size_t j = i + 1; j < npts; ++j) {
        double d = static_cast<double>(dist(i, j));
        double gap = static_cast<double>(j - i);
        fit.lambda = std::max({fit.lambda, d / gap, gap / d});
      }
  }
  if (fit.lambda > caps.lambda_max)
    fit.reason = "lambda " + std::to_string(fit.lambda) + " exceeds cap " +
                 std::to_string(caps.lambda_max);
  else if (fit.eps > caps.eps_max)
    fit.reason = "eps " + std::to_string(fit.eps) + " exceeds cap " +
                 std::to_string(caps.eps_max);
  fit.ok = fit.reason.empty();
  return fit;
}

// ---------------------------------------------------------------------------
// Distortion curves.

struct DistortionRow {
  int64_t n = 0;
  int64_t standard_dist = 0;
  std::vector<int64_t> cone;  // -1 where the power falls outside the radius
};

struct DistortionCurve {
  std::string label;
  std::vector<int64_t> R_schedule;
  std::vector<DistortionRow> rows;
};

inline DistortionCurve distortion_curve(const GraphProduct& gp,
                                        const NormalForm& g, int64_t n_max,
                                        std::vector<int64_t> R_schedule) {
  gp.check_ambient(g);
  if (n_max < 1) fail(Errc::InvalidConfig, "n_max must be positive");
  if (R_schedule.empty()) fail(Errc::InvalidConfig, "empty R schedule");
  for (size_t i = 0; i + 1 < R_schedule.size(); ++i)
    if (R_schedule[i] >= R_schedule[i + 1])
      fail(Errc::InvalidConfig, "R schedule must be strictly increasing");
  if (gp.word_length(gp.power(g, n_max)) > R_schedule.back())
    fail(Errc::PreconditionFailed,
         "largest power leaves the largest restriction radius");

  DistortionCurve curve;
  curve.label = gp.print_word(g);
  curve.R_schedule = std::move(R_schedule);
  NormalForm acc = g;
  for (int64_t n = 1; n <= n_max; ++n) {
    DistortionRow row;
    row.n = n;
    row.standard_dist = gp.word_length(acc);
    for (int64_t R : curve.R_schedule)
      row.cone.push_back(row.standard_dist <= R
                             ? cone_distance_restricted(gp, acc, R)
                             : -1);
    curve.rows.push_back(std::move(row));
    if (n < n_max) acc = gp.multiply(acc, g);
  }
  return curve;
}

// ---------------------------------------------------------------------------
// Stability verdicts.

enum class Stability { Stable, Unstable, Inconclusive };

inline const char* stability_name(Stability s) {
  switch (s) {
    case Stability::Stable: return "stable";
    case Stability::Unstable: return "unstable";
    case Stability::Inconclusive: return "inconclusive";
  }
  return "?";
}

// Thresholds are desk-scale policy, not theory; they ride along in the
// verdict so emitted reports are self-describing.
struct StabilityOptions {
  int64_t n_max = 4;
  int64_t cap = 2;          // unstable: stabilized cone distances stay <= cap
  double slope_min = 0.25;  // stable: cone distance >= slope_min * n
  int64_t r_step = 4;       // stabilization window: R in {|g^n|, |g^n|+r_step}
};

struct StabilityRow {
  int64_t n = 0;
  int64_t standard_dist = 0;
  int64_t cone_lo = 0;  // at R = |g^n|
  int64_t cone_hi = 0;  // at R = |g^n| + r_step
  bool stabilized = false;
};

struct StabilityVerdict {
  Stability verdict = Stability::Inconclusive;
  std::string reason;
  double slope = 0.0;  // min over rows of cone_hi / n
  bool all_stabilized = false;
  std::vector<StabilityRow> rows;
  StabilityOptions opts;
};

// Scope guard shared by the element and subgroup probes: the dichotomy needs
// every vertex group infinite and no isolated vertices.
inline std::string stability_scope_gap(const GraphProduct& gp) {
  for (VertexId v = 0; v < gp.graph().size(); ++v) {
    if (gp.graph().link(bit(v)) == 0)
      return "OutOfScope: isolated vertex '" + gp.graph().name(v) + "'";
    if (!gp.group(v).is_infinite())
      return "OutOfScope: finite vertex group at '" + gp.graph().name(v) + "'";
  }
  return "";
}

inline StabilityVerdict stability_verdict(const GraphProduct& gp,
                                          const NormalForm& g,
                                          StabilityOptions opts = {}) {
  gp.check_ambient(g);
  if (opts.n_max < 1) fail(Errc::InvalidConfig, "n_max must be positive");
  StabilityVerdict out;
  out.opts = opts;
  out.reason = stability_scope_gap(gp);
  if (!out.reason.empty()) return out;
  if (g.is_identity()) {
    out.reason = "identity element";
    return out;
  }

  out.all_stabilized = true;
  out.slope = -1.0;
  NormalForm acc = g;
  for (int64_t n = 1; n <= opts.n_max; ++n) {
    StabilityRow row;
    row.n = n;
    row.standard_dist = gp.word_length(acc);
    row.cone_lo = cone_distance_restricted(gp, acc, row.standard_dist);
    row.cone_hi =
        cone_distance_restricted(gp, acc, row.standard_dist + opts.r_step);
    row.stabilized = row.cone_lo == row.cone_hi;
    out.all_stabilized = out.all_stabilized && row.stabilized;
    double s = static_cast<double>(row.cone_hi) / static_cast<double>(n);
    out.slope = out.slope < 0 ? s : std::min(out.slope, s);
    out.rows.push_back(row);
    if (n < opts.n_max) acc = gp.multiply(acc, g);
  }

  bool bounded = out.all_stabilized;
  for (const StabilityRow& r : out.rows)
    bounded = bounded && r.cone_hi <= opts.cap;
  int64_t max_standard = out.rows.back().standard_dist;
  if (bounded && max_standard > 10 * opts.cap) {
    out.verdict = Stability::Unstable;
    out.reason = "stabilized cone distances stay <= " +
                 std::to_string(opts.cap) + " while standard distance reaches " +
                 std::to_string(max_standard);
    return out;
  }
  if (out.all_stabilized && out.slope >= opts.slope_min) {
    out.verdict = Stability::Stable;
    out.reason =
        "stabilized cone distances grow with slope >= " + std::to_string(out.slope);
    return out;
  }
  if (!out.all_stabilized)
    out.reason = "cone distances did not stabilize over the R window";
  else if (bounded)
    out.reason = "cone distances bounded but standard distance only reached " +
                 std::to_string(max_standard);
  else
    out.reason = "fitted slope " + std::to_string(out.slope) +
                 " below threshold " + std::to_string(opts.slope_min);
  return out;
}

// Subgroup probing reduces to sampled elements of the radius-3 ball in the
// given generators, each treated as a cyclic direction.  One non-embedded
// direction already kills stability; all-stable samples are only evidence.
struct SubgroupProbeRow {
  std::string word;
  Stability verdict = Stability::Inconclusive;
  double slope = 0.0;
};

struct SubgroupStabilityReport {
  Stability verdict = Stability::Inconclusive;
  std::string reason;
  std::vector<SubgroupProbeRow> rows;
  size_t ball_size = 0;  // distinct nontrivial elements at radius <= 3
  uint64_t seed = 0;
};

inline SubgroupStabilityReport subgroup_stability(
    const GraphProduct& gp, const std::vector<NormalForm>& gens,
    StabilityOptions opts = {}, size_t sample_cap = 24, uint64_t seed = 12345) {
  if (gens.empty()) fail(Errc::InvalidConfig, "no subgroup generators");
  for (const NormalForm& g : gens) gp.check_ambient(g);
  SubgroupStabilityReport rep;
  rep.seed = seed;
  rep.reason = stability_scope_gap(gp);
  if (!rep.reason.empty()) return rep;

  std::vector<NormalForm> steps;
  for (const NormalForm& g : gens) {
    steps.push_back(g);
    steps.push_back(gp.invert(g));
  }
  std::unordered_set<NormalForm, NormalFormHash, NormalFormEq> seen(
      64, NormalFormHash{&gp}, NormalFormEq{});
  std::vector<NormalForm> layer{gp.normalize({})}, ball;
  seen.insert(layer.front());
  for (int depth = 0; depth < 3; ++depth) {
    std::vector<NormalForm> next;
    for (const NormalForm& x : layer)
      for (const NormalForm& s : steps) {
        NormalForm y = gp.multiply(x, s);
        if (seen.insert(y).second) {
          next.push_back(y);
          ball.push_back(y);
        }
      }
    layer = std::move(next);
  }
  rep.ball_size = ball.size();
  if (ball.empty()) {
    rep.reason = "subgroup ball is trivial";
    return rep;
  }
  if (ball.size() > sample_cap) {
    std::mt19937_64 rng(seed);
    std::shuffle(ball.begin(), ball.end(), rng);
    ball.resize(sample_cap);
  }
  std::sort(ball.begin(), ball.end(),
            [&](const NormalForm& a, const NormalForm& b) {
              return gp.print_word(a) < gp.print_word(b);
            });

  bool all_stable = true;
  for (const NormalForm& g : ball) {
    StabilityVerdict v = stability_verdict(gp, g, opts);
    rep.rows.push_back({gp.print_word(g), v.verdict, v.slope});
    if (v.verdict == Stability::Unstable && rep.verdict != Stability::Unstable) {
      rep.verdict = Stability::Unstable;
      rep.reason = "direction " + rep.rows.back().word + ": " + v.reason;
    }
    all_stable = all_stable && v.verdict == Stability::Stable;
  }
  if (rep.verdict != Stability::Unstable) {
    if (all_stable) {
      rep.verdict = Stability::Stable;
      rep.reason = "all " + std::to_string(rep.rows.size()) +
                   " sampled directions stable";
    } else {
      rep.reason = "mixed or inconclusive directions";
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Morse gauge estimation.

struct GaugeCell {
  double k = 1.0;
  int64_t c = 0;
  int64_t hausdorff = -1;  // -1 when no sample passed the filter
  uint64_t accepted = 0;
  bool no_samples = false;
};

struct MorseGaugeTable {
  std::vector<GaugeCell> cells;
  uint64_t tried = 0;
  uint64_t seed = 0;
};

namespace detail {

// Descend from src toward the BFS root along strictly decreasing levels.
// pick(level_choices) selects among the candidate predecessors.
template <typename Pick>
std::vector<uint32_t> bfs_descent(const MetricBall& ball,
                                  const std::vector<int32_t>& level,
                                  uint32_t src, Pick&& pick) {
  std::vector<uint32_t> path{src};
  uint32_t cur = src;
  std::vector<uint32_t> choices;
  while (level[cur] > 0) {
    choices.clear();
    // Neighbors are exactly the points at pair distance 1.
    for (uint32_t q = 0; q < ball.size(); ++q)
      if (level[q] == level[cur] - 1 && ball.pair_dist(cur, q) == 1)
        choices.push_back(q);
    if (choices.empty())
      fail(Errc::PreconditionFailed, "descent stranded off the ball root");
    cur = pick(choices);
    path.push_back(cur);
  }
  return path;
}

inline int64_t hausdorff_between(const MetricBall& ball,
                                 const std::vector<uint32_t>& a,
                                 const std::vector<uint32_t>& b) {
  int64_t h = 0;
  for (uint32_t p : a) {
    int64_t best = -1;
    for (uint32_t q : b) {
      int64_t d = ball.pair_dist(p, q);
      if (best < 0 || d < best) best = d;
    }
    h = std::max(h, best);
  }
  for (uint32_t q : b) {
    int64_t best = -1;
    for (uint32_t p : a) {
      int64_t d = ball.pair_dist(q, p);
      if (best < 0 || d < best) best = d;
    }
    h = std::max(h, best);
  }
  return h;
}

inline bool quasi_geodesic_path(const MetricBall& ball,
                                const std::vector<uint32_t>& path, double k,
                                int64_t c) {
  for (size_t i = 0; i + 1 < path.size(); ++i)
    for (size_t j = i + 1; j < path.size(); ++j) {
      double d = static_cast<double>(ball.pair_dist(path[i], path[j]));
      double gap = static_cast<double>(j - i);
      if (gap > k * d + k * static_cast<double>(c)) return false;
      if (d > k * gap + static_cast<double>(c)) return false;
    }
  return true;
}

}  // namespace detail

// One candidate pool serves every cell, so looser cells accept supersets and
// the table is non-decreasing in k and c by construction.
inline MorseGaugeTable morse_gauge_table(
    const MetricBall& ball, const std::vector<NormalForm>& geodesic,
    const std::vector<std::pair<double, int64_t>>& kc_grid,
    uint64_t budget = 200, uint64_t seed = 12345) {
  if (ball.kind() != MetricKind::Standard)
    fail(Errc::InvalidConfig, "gauge sampling runs in a standard ball");
  if (geodesic.size() < 2) fail(Errc::InvalidConfig, "geodesic too short");
  if (kc_grid.empty()) fail(Errc::InvalidConfig, "empty (k, c) grid");
  double kmax = 1.0;
  int64_t cmax = 0;
  for (auto [k, c] : kc_grid) {
    if (k < 1.0 || c < 0) fail(Errc::InvalidConfig, "gauge cells need k >= 1, c >= 0");
    kmax = std::max(kmax, k);
    cmax = std::max(cmax, c);
  }

  std::vector<uint32_t> geo;
  for (const NormalForm& p : geodesic) geo.push_back(ball.index_of(p));
  for (size_t i = 0; i + 1 < geo.size(); ++i)
    if (ball.pair_dist(geo[i], geo[i + 1]) != 1)
      fail(Errc::InvalidConfig, "geodesic steps must be unit steps");
  uint32_t x = geo.front(), y = geo.back();
  int64_t D = ball.pair_dist(x, y);
  if (D != static_cast<int64_t>(geo.size()) - 1)
    fail(Errc::InvalidConfig, "input path is not geodesic");

  const std::vector<int32_t>& from_x = ball.bfs_from(x);
  const std::vector<int32_t>& from_y = ball.bfs_from(y);

  // Forced witnesses: the input itself plus two adversarial geodesics that
  // greedily flee the input at every level (ties to the least index), which
  // realizes the staircase on the far side of a flat rectangle.
  auto flee = [&](const std::vector<uint32_t>& ch) {
    uint32_t best = ch.front();
    int64_t far = -1;
    for (uint32_t q : ch) {
      int64_t near = -1;
      for (uint32_t p : geo) {
        int64_t d = ball.pair_dist(q, p);
        if (near < 0 || d < near) near = d;
      }
      if (near > far) {
        far = near;
        best = q;
      }
    }
    return best;
  };
  std::vector<std::vector<uint32_t>> pool{geo};
  {
    auto alt = detail::bfs_descent(ball, from_x, y, flee);
    std::reverse(alt.begin(), alt.end());
    pool.push_back(std::move(alt));
    pool.push_back(detail::bfs_descent(ball, from_y, x, flee));
  }

  std::mt19937_64 rng(seed);
  double allowance = kmax * (static_cast<double>(D + cmax));
  std::vector<uint32_t> eligible;
  for (uint32_t z = 0; z < ball.size(); ++z)
    if (from_x[z] >= 0 && from_y[z] >= 0 &&
        static_cast<double>(from_x[z] + from_y[z]) <= allowance)
      eligible.push_back(z);
  auto roll = [&rng](const std::vector<uint32_t>& ch) {
    return ch[rng() % ch.size()];
  };
  for (uint64_t t = 0; t < budget && !eligible.empty(); ++t) {
    uint32_t z = eligible[rng() % eligible.size()];
    auto leg1 = detail::bfs_descent(ball, from_x, z, roll);  // z down to x
    std::reverse(leg1.begin(), leg1.end());
    auto leg2 = detail::bfs_descent(ball, from_y, z, roll);  // z down to y
    for (size_t i = 1; i < leg2.size(); ++i) leg1.push_back(leg2[i]);
    pool.push_back(std::move(leg1));
  }

  MorseGaugeTable table;
  table.seed = seed;
  table.tried = pool.size();
  for (auto [k, c] : kc_grid) {
    GaugeCell cell;
    cell.k = k;
    cell.c = c;
    for (const std::vector<uint32_t>& cand : pool) {
      if (!detail::quasi_geodesic_path(ball, cand, k, c)) continue;
      ++cell.accepted;
      cell.hausdorff =
          std::max(cell.hausdorff, detail::hausdorff_between(ball, cand, geo));
    }
    cell.no_samples = cell.accepted == 0;
    if (cell.no_samples) cell.hausdorff = -1;
    table.cells.push_back(cell);
  }
  return table;
}

// ---------------------------------------------------------------------------
// Detectability probe: fit the same vertex sequence in both metrics.

struct DetectabilityReport {
  QgFit standard_fit;
  QgFit cone_fit;
  int64_t R = 0;
};

inline DetectabilityReport detectability_probe(const GraphProduct& gp,
                                               const std::vector<NormalForm>& path,
                                               QgCaps caps = {}, int64_t R = -1) {
  if (path.empty()) fail(Errc::InvalidConfig, "empty path");
  for (const NormalForm& p : path) gp.check_ambient(p);
  const size_t m = path.size();
  std::vector<std::vector<int64_t>> sd(m, std::vector<int64_t>(m, 0));
  int64_t diam = 0;
  for (size_t i = 0; i < m; ++i)
    for (size_t j = i + 1; j < m; ++j) {
      sd[i][j] = gp.word_length(gp.multiply(gp.invert(path[i]), path[j]));
      diam = std::max(diam, sd[i][j]);
    }
  DetectabilityReport rep;
  rep.R = R < 0 ? diam : R;
  if (rep.R < diam)
    fail(Errc::PreconditionFailed, "path leaves the restriction radius");
  rep.standard_fit =
      fit_quasi_geodesic(m, [&](size_t i, size_t j) { return sd[i][j]; }, caps);
  std::vector<std::vector<int64_t>> cd(m, std::vector<int64_t>(m, 0));
  for (size_t i = 0; i < m; ++i)
    for (size_t j = i + 1; j < m; ++j)
      cd[i][j] = sd[i][j] == 0
                     ? 0
                     : cone_distance_restricted(
                           gp, gp.multiply(gp.invert(path[i]), path[j]), rep.R);
  rep.cone_fit =
      fit_quasi_geodesic(m, [&](size_t i, size_t j) { return cd[i][j]; }, caps);
  return rep;
}

// ---------------------------------------------------------------------------
// Local-to-global probe.

struct MltgOptions {
  int64_t L = 2;
  double local_lambda = 1.0;
  int64_t local_eps = 0;
  QgCaps report_caps{};
  int64_t cone_R = -1;  // negative: smallest radius containing all pair gaps
};

struct MltgReport {
  QgFit standard_fit;
  QgFit cone_fit;
  size_t points = 0;
  size_t windows_checked = 0;
  int64_t R = 0;
};

inline MltgReport local_to_global_probe(
    const GraphProduct& gp, const std::vector<std::vector<NormalForm>>& pieces,
    MltgOptions opts = {}) {
  if (pieces.empty()) fail(Errc::InvalidConfig, "no pieces");
  if (opts.L < 1) fail(Errc::InvalidConfig, "window length must be positive");
  NormalFormEq eq;
  std::vector<NormalForm> path;
  for (size_t p = 0; p < pieces.size(); ++p) {
    if (pieces[p].empty()) fail(Errc::InvalidConfig, "empty piece");
    size_t start = 0;
    if (p > 0) {
      if (!eq(path.back(), pieces[p].front()))
        fail(Errc::InvalidConfig,
             "piece " + std::to_string(p) + " does not start where piece " +
                 std::to_string(p - 1) + " ends");
      start = 1;
    }
    for (size_t i = start; i < pieces[p].size(); ++i) path.push_back(pieces[p][i]);
  }
  for (const NormalForm& q : path) gp.check_ambient(q);

  const size_t m = path.size();
  std::vector<std::vector<int64_t>> sd(m, std::vector<int64_t>(m, 0));
  int64_t diam = 0;
  for (size_t i = 0; i < m; ++i)
    for (size_t j = i + 1; j < m; ++j) {
      sd[i][j] = gp.word_length(gp.multiply(gp.invert(path[i]), path[j]));
      diam = std::max(diam, sd[i][j]);
    }

  MltgReport rep;
  rep.points = m;
  for (size_t i = 0; i + 1 < m; ++i)
    for (size_t j = i + 1; j < m && j - i <= static_cast<size_t>(opts.L); ++j) {
      double d = static_cast<double>(sd[i][j]);
      double gap = static_cast<double>(j - i);
      double le = static_cast<double>(opts.local_eps);
      if (gap > opts.local_lambda * d + opts.local_lambda * le ||
          d > opts.local_lambda * gap + le)
        fail(Errc::WindowViolation,
             "window [" + std::to_string(i) + "," + std::to_string(j) +
                 "] breaks the local (" + std::to_string(opts.local_lambda) +
                 "," + std::to_string(opts.local_eps) + ") inequality");
      ++rep.windows_checked;
    }

  rep.R = opts.cone_R < 0 ? diam : opts.cone_R;
  if (rep.R < diam)
    fail(Errc::PreconditionFailed, "path leaves the restriction radius");
  rep.standard_fit = fit_quasi_geodesic(
      m, [&](size_t i, size_t j) { return sd[i][j]; }, opts.report_caps);
  rep.cone_fit = fit_quasi_geodesic(
      m,
      [&](size_t i, size_t j) {
        return sd[i][j] == 0
                   ? int64_t{0}
                   : cone_distance_restricted(
                         gp, gp.multiply(gp.invert(path[i]), path[j]), rep.R);
      },
      opts.report_caps);
  return rep;
}

}  // namespace gpg
