#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "gpg/config.hpp"
#include "gpg/errors.hpp"
#include "gpg/hhs.hpp"
#include "gpg/hhs_json.hpp"
#include "gpg/metric_ball.hpp"
#include "gpg/morse.hpp"
#include "gpg/parallelism.hpp"
#include "gpg/word.hpp"

namespace gpg {

inline uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(uint64_t v) {
  static const char digits[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[i] = digits[v & 0xf];
    v >>= 4;
  }
  return s;
}

// One CLI invocation: artifact sink plus the bookkeeping the manifest needs.
// Artifacts are byte-deterministic: sorted JSON keys, LF endings, no clocks.
struct RunSession {
  std::string command;
  std::filesystem::path out{"out"};
  std::string config_hash = hex64(fnv1a64(""));
  uint64_t seed = 12345;
  unsigned threads = 1;
  std::string format = "both";
  std::vector<std::string> artifacts;

  bool want_csv() const { return format != "json"; }
  bool want_json() const { return format != "csv"; }

  void write_text(const std::string& name, const std::string& body) {
    std::filesystem::create_directories(out);
    std::ofstream f(out / name, std::ios::binary);
    if (!f) fail(Errc::IoError, "cannot write " + (out / name).string());
    f << body;
    artifacts.push_back(name);
  }

  void write_json(const std::string& name, const nlohmann::json& j) {
    write_text(name, j.dump(2) + "\n");
  }

  void manifest(const std::string& status,
                const nlohmann::json& error = nullptr) {
    std::vector<std::string> sorted = artifacts;
    std::sort(sorted.begin(), sorted.end());
    nlohmann::json m{{"schema", 1},
                     {"version", kToolkitVersion},
                     {"command", command},
                     {"config_hash", config_hash},
                     {"seed", seed},
                     {"threads", threads},
                     {"status", status},
                     {"artifacts", sorted}};
    if (!error.is_null()) m["error"] = error;
    std::filesystem::create_directories(out);
    std::ofstream f(out / "manifest.json", std::ios::binary);
    if (f) f << m.dump(2) << "\n";
  }
};

namespace cli_detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

inline VertexSet parse_lambda(const GraphProduct& gp, const std::string& csv) {
  VertexSet mask = 0;
  for (const std::string& name : split(csv, ','))
    mask |= bit(gp.graph().index_of(name));
  if (mask == 0) fail(Errc::InvalidConfig, "empty vertex set '" + csv + "'");
  return mask;
}

inline std::vector<NormalForm> parse_path(const GraphProduct& gp,
                                          const std::string& s) {
  std::vector<NormalForm> path;
  for (const std::string& w : split(s, ';')) path.push_back(gp.parse_word(w));
  if (path.empty()) fail(Errc::InvalidConfig, "empty path '" + s + "'");
  return path;
}

inline nlohmann::json names_of(const GraphProduct& gp, VertexSet mask) {
  nlohmann::json arr = nlohmann::json::array();
  for (VertexId v = 0; v < gp.graph().size(); ++v)
    if (mask & bit(v)) arr.push_back(gp.graph().name(v));
  return arr;
}

inline std::string names_joined(const GraphProduct& gp, VertexSet mask) {
  std::string s;
  for (VertexId v = 0; v < gp.graph().size(); ++v)
    if (mask & bit(v)) {
      if (!s.empty()) s += ' ';
      s += gp.graph().name(v);
    }
  return s;
}

inline MetricKind parse_metric(const std::string& name) {
  if (name == "standard") return MetricKind::Standard;
  if (name == "cone") return MetricKind::ConedVertexStars;
  if (name == "cone-family") return MetricKind::ConedFamily;
  fail(Errc::InvalidConfig,
       "metric is standard, cone, or cone-family; got '" + name + "'");
}

inline std::vector<VertexSet> parse_family(const GraphProduct& gp,
                                           const std::string& s) {
  std::vector<VertexSet> family;
  for (const std::string& part : split(s, ';'))
    family.push_back(parse_lambda(gp, part));
  return family;
}

inline std::vector<int64_t> parse_schedule(const std::string& csv) {
  std::vector<int64_t> out;
  for (const std::string& tok : split(csv, ','))
    out.push_back(std::stoll(tok));
  return out;
}

inline std::vector<std::pair<double, int64_t>> parse_grid(
    const std::string& s) {
  std::vector<std::pair<double, int64_t>> grid;
  for (const std::string& cell : split(s, ';')) {
    std::vector<std::string> kc = split(cell, ',');
    if (kc.size() != 2)
      fail(Errc::InvalidConfig, "grid cells are k,c pairs; got '" + cell + "'");
    grid.emplace_back(std::stod(kc[0]), std::stoll(kc[1]));
  }
  return grid;
}

inline nlohmann::json fit_json(const QgFit& f) {
  return {{"ok", f.ok}, {"lambda", f.lambda}, {"eps", f.eps},
          {"reason", f.reason}};
}

inline nlohmann::json verdict_json(const StabilityVerdict& v) {
  nlohmann::json rows = nlohmann::json::array();
  for (const StabilityRow& r : v.rows)
    rows.push_back({{"n", r.n},
                    {"standard", r.standard_dist},
                    {"cone_lo", r.cone_lo},
                    {"cone_hi", r.cone_hi},
                    {"stabilized", r.stabilized}});
  return {{"verdict", stability_name(v.verdict)},
          {"reason", v.reason},
          {"slope", v.slope},
          {"all_stabilized", v.all_stabilized},
          {"rows", rows},
          {"thresholds",
           {{"n_max", v.opts.n_max},
            {"cap", v.opts.cap},
            {"slope_min", v.opts.slope_min},
            {"r_step", v.opts.r_step}}}};
}

}  // namespace cli_detail

// --- subcommand handlers ------------------------------------------------

inline void run_normalize(RunSession& s, const GraphProduct& gp,
                          const std::string& word) {
  NormalForm nf = gp.parse_word(word);
  std::string printed = gp.print_word(nf);
  std::cout << printed << "\n";
  s.write_json("normalize.json", {{"input", word},
                                  {"normal_form", printed},
                                  {"length", gp.word_length(nf)},
                                  {"syllables", nf.syl.size()}});
}

inline void run_mul(RunSession& s, const GraphProduct& gp,
                    const std::string& lhs, const std::string& rhs) {
  NormalForm p = gp.multiply(gp.parse_word(lhs), gp.parse_word(rhs));
  std::string printed = gp.print_word(p);
  std::cout << printed << "\n";
  s.write_json("mul.json", {{"lhs", lhs},
                            {"rhs", rhs},
                            {"product", printed},
                            {"length", gp.word_length(p)}});
}

inline void run_ball(RunSession& s, const ToolkitConfig& cfg,
                     const GraphProduct& gp, int radius,
                     const std::string& metric, const std::string& family) {
  MetricKind kind = cli_detail::parse_metric(metric);
  std::vector<VertexSet> fam =
      family.empty() ? std::vector<VertexSet>{}
                     : cli_detail::parse_family(gp, family);
  MetricBall ball(gp, gp.identity(), radius, kind, fam, cfg.node_limit, true,
                  s.threads);
  if (s.want_csv()) {
    std::string csv = "point_id,word,dist\n";
    for (size_t i = 0; i < ball.size(); ++i)
      csv += std::to_string(i) + "," + gp.print_word(ball.point(i)) + "," +
             std::to_string(ball.dist(i)) + "\n";
    s.write_text("ball.csv", csv);
  }
  if (s.want_json()) {
    std::vector<int64_t> layers;
    for (size_t i = 0; i < ball.size(); ++i) {
      if (static_cast<size_t>(ball.dist(i)) >= layers.size())
        layers.resize(ball.dist(i) + 1, 0);
      ++layers[ball.dist(i)];
    }
    s.write_json("ball.json", {{"radius", radius},
                               {"metric", metric_kind_name(kind)},
                               {"size", ball.size()},
                               {"layer_sizes", layers}});
  }
  std::cout << "ball: " << ball.size() << " points at radius " << radius
            << " (" << metric_kind_name(kind) << ")\n";
}

inline void run_delta(RunSession& s, const ToolkitConfig& cfg,
                      const GraphProduct& gp, int radius,
                      const std::string& metric, const std::string& family) {
  MetricKind kind = cli_detail::parse_metric(metric);
  std::vector<VertexSet> fam =
      family.empty() ? std::vector<VertexSet>{}
                     : cli_detail::parse_family(gp, family);
  MetricBall ball(gp, gp.identity(), radius, kind, fam, cfg.node_limit, true,
                  s.threads);
  DeltaReport rep = four_point_delta(ball, cfg.quadruple_budget, cfg.seed);
  nlohmann::json witness = nlohmann::json::array();
  for (uint32_t w : rep.witness) witness.push_back(w);
  s.write_json("delta.json", {{"radius", radius},
                              {"metric", metric_kind_name(kind)},
                              {"ball_size", ball.size()},
                              {"delta", rep.delta()},
                              {"delta_num", rep.delta_num},
                              {"exhaustive", rep.exhaustive},
                              {"quadruples", rep.quadruples},
                              {"seed", rep.seed},
                              {"witness", witness}});
  std::cout << "delta: " << rep.delta() << " over " << rep.quadruples
            << (rep.exhaustive ? " quadruples (exhaustive)\n"
                               : " quadruples (sampled)\n");
}

inline void run_classes_list(RunSession& s, const GraphProduct& gp,
                             const std::string& lambda_csv, int radius) {
  VertexSet lam = cli_detail::parse_lambda(gp, lambda_csv);
  std::map<std::string, int64_t> classes;  // printed rep, member count
  for (const NormalForm& g : enumerate_ball(gp, radius))
    ++classes[gp.print_word(canonicalize_rep(gp, g, lam))];
  if (s.want_csv()) {
    std::string csv = "class_id,rep,members\n";
    int64_t id = 0;
    for (const auto& [rep, count] : classes)
      csv += std::to_string(id++) + "," + rep + "," + std::to_string(count) +
             "\n";
    s.write_text("classes.csv", csv);
  }
  if (s.want_json()) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [rep, count] : classes)
      arr.push_back({{"rep", rep}, {"members", count}});
    s.write_json("classes.json", {{"lambda", cli_detail::names_of(gp, lam)},
                                  {"radius", radius},
                                  {"classes", arr}});
  }
  std::cout << "classes: " << classes.size() << " parallelism classes of ["
            << cli_detail::names_joined(gp, lam) << "] at radius " << radius
            << "\n";
}

inline void run_classes_relation(RunSession& s, const GraphProduct& gp,
                                 const std::string& lambda_a,
                                 const std::string& lambda_b,
                                 const std::string& rep_a,
                                 const std::string& rep_b) {
  ParallelismClass a = make_class(gp, gp.parse_word(rep_a),
                                  cli_detail::parse_lambda(gp, lambda_a));
  ParallelismClass b = make_class(gp, gp.parse_word(rep_b),
                                  cli_detail::parse_lambda(gp, lambda_b));
  const char* rel = relation_name(relation(gp, a, b));
  s.write_json("classes.json",
               {{"a",
                 {{"rep", gp.print_word(a.rep)},
                  {"lambda", cli_detail::names_of(gp, a.lambda)}}},
                {"b",
                 {{"rep", gp.print_word(b.rep)},
                  {"lambda", cli_detail::names_of(gp, b.lambda)}}},
                {"relation", rel}});
  std::cout << rel << "\n";
}

inline void run_clean_containers(RunSession& s, const GraphProduct& gp,
                                 int depth) {
  CleanContainerReport rep = verify_clean_containers(gp, depth);
  nlohmann::json bad = nlohmann::json::array();
  for (const CleanContainerTriple& t : rep.triples)
    if (!t.clean)
      bad.push_back({{"w", gp.print_word(t.w.rep)},
                     {"w_lambda", cli_detail::names_of(gp, t.w.lambda)},
                     {"u", gp.print_word(t.u.rep)},
                     {"u_lambda", cli_detail::names_of(gp, t.u.lambda)},
                     {"container", cli_detail::names_of(gp, t.q.lambda)}});
  s.write_json("clean_containers.json", {{"depth", depth},
                                         {"checked", rep.checked},
                                         {"all_clean", rep.all_clean},
                                         {"violations", bad}});
  std::cout << "clean-containers: " << rep.checked << " triples, "
            << bad.size() << " violations\n";
}

inline void run_coning_family(RunSession& s, const GraphProduct& gp) {
  std::vector<VertexSet> fam = coning_family(gp.graph());
  if (s.want_csv()) {
    std::string csv = "member_id,vertices,link\n";
    for (size_t i = 0; i < fam.size(); ++i)
      csv += std::to_string(i) + "," + cli_detail::names_joined(gp, fam[i]) +
             "," + cli_detail::names_joined(gp, gp.graph().link(fam[i])) +
             "\n";
    s.write_text("coning_family.csv", csv);
  }
  if (s.want_json()) {
    nlohmann::json arr = nlohmann::json::array();
    for (VertexSet m : fam)
      arr.push_back({{"vertices", cli_detail::names_of(gp, m)},
                     {"link", cli_detail::names_of(gp, gp.graph().link(m))}});
    s.write_json("coning_family.json", {{"members", arr}});
  }
  std::cout << "coning-family: " << fam.size()
            << " subgraphs with nonempty link\n";
}

inline void run_stability(RunSession& s, const ToolkitConfig& cfg,
                          const GraphProduct& gp, const std::string& element,
                          const std::string& subgroup, int64_t nmax) {
  StabilityOptions opts = cfg.thresholds;
  if (nmax > 0) opts.n_max = nmax;
  if (!subgroup.empty()) {
    std::vector<NormalForm> gens = cli_detail::parse_path(gp, subgroup);
    SubgroupStabilityReport rep =
        subgroup_stability(gp, gens, opts, 24, cfg.seed);
    nlohmann::json rows = nlohmann::json::array();
    for (const SubgroupProbeRow& r : rep.rows)
      rows.push_back({{"word", r.word},
                      {"verdict", stability_name(r.verdict)},
                      {"slope", r.slope}});
    s.write_json("stability.json", {{"subgroup", subgroup},
                                    {"verdict", stability_name(rep.verdict)},
                                    {"reason", rep.reason},
                                    {"ball_size", rep.ball_size},
                                    {"seed", rep.seed},
                                    {"directions", rows}});
    std::cout << "verdict: " << stability_name(rep.verdict) << " ("
              << rep.reason << ")\n";
    return;
  }
  if (element.empty())
    fail(Errc::InvalidConfig, "stability needs an element or --subgroup");
  StabilityVerdict v = stability_verdict(gp, gp.parse_word(element), opts);
  nlohmann::json j = cli_detail::verdict_json(v);
  j["element"] = element;
  s.write_json("stability.json", j);
  std::cout << "verdict: " << stability_name(v.verdict) << " (" << v.reason
            << ")\n";
}

inline void run_distortion(RunSession& s, const GraphProduct& gp,
                           const std::string& element, int64_t nmax,
                           const std::string& radii_csv) {
  std::vector<int64_t> schedule = cli_detail::parse_schedule(radii_csv);
  DistortionCurve curve =
      distortion_curve(gp, gp.parse_word(element), nmax, schedule);
  if (s.want_csv()) {
    std::string csv = "n,standard";
    for (int64_t r : curve.R_schedule) csv += ",cone_R" + std::to_string(r);
    csv += "\n";
    for (const DistortionRow& row : curve.rows) {
      csv += std::to_string(row.n) + "," + std::to_string(row.standard_dist);
      for (int64_t c : row.cone) csv += "," + std::to_string(c);
      csv += "\n";
    }
    s.write_text("distortion.csv", csv);
  }
  if (s.want_json()) {
    nlohmann::json rows = nlohmann::json::array();
    for (const DistortionRow& row : curve.rows)
      rows.push_back({{"n", row.n},
                      {"standard", row.standard_dist},
                      {"cone", row.cone}});
    s.write_json("distortion.json", {{"element", curve.label},
                                     {"R_schedule", curve.R_schedule},
                                     {"rows", rows}});
  }
  std::cout << "distortion: " << curve.rows.size() << " powers of "
            << curve.label << "\n";
}

inline void run_hhs_check(RunSession& s, const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) fail(Errc::IoError, "cannot read instance " + file);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::InvalidConfig, file + ": " + e.what());
  }
  HhsInstance inst = hhs_from_json(j);
  AxiomReport rep = check_axioms(inst);
  nlohmann::json out = axiom_report_to_json(rep);
  out["file"] = std::filesystem::path(file).filename().string();
  s.write_json("hhs_check.json", out);
  int passed = 0;
  for (const auto& a : rep.axioms)
    if (a.pass) ++passed;
  std::cout << "axioms: " << passed << "/" << rep.axioms.size()
            << " pass, minimal E = " << rep.minimal_E << "\n";
}

inline void run_hhs_maximize(RunSession& s, const std::string& file,
                             int64_t m) {
  std::ifstream in(file, std::ios::binary);
  if (!in) fail(Errc::IoError, "cannot read instance " + file);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::InvalidConfig, file + ": " + e.what());
  }
  HhsInstance inst = hhs_from_json(j);
  MaximizedInstance mx = maximize(inst, m);
  nlohmann::json out = maximized_to_json(inst, mx);
  out["file"] = std::filesystem::path(file).filename().string();
  s.write_json("hhs_maximize.json", out);
  std::cout << "T = {";
  bool first = true;
  for (int u : mx.T) {
    if (!first) std::cout << ", ";
    std::cout << inst.domains[u];
    first = false;
  }
  std::cout << "}, topspace diameter " << mx.diameter << "\n";
}

inline void run_hhs_grid(RunSession& s, int64_t claimed, int64_t m) {
  nlohmann::json j = hhs_to_json(grid_instance(claimed, m));
  s.write_json("grid_instance.json", j);
  std::cout << j.dump(2) << "\n";
}

inline void run_probe_detect(RunSession& s, const GraphProduct& gp,
                             const std::string& path_str, double lambda_max,
                             int64_t eps_max, int64_t R) {
  std::vector<NormalForm> path = cli_detail::parse_path(gp, path_str);
  DetectabilityReport rep =
      detectability_probe(gp, path, QgCaps{lambda_max, eps_max}, R);
  nlohmann::json words = nlohmann::json::array();
  for (const NormalForm& p : path) words.push_back(gp.print_word(p));
  s.write_json("detect.json",
               {{"path", words},
                {"R", rep.R},
                {"standard", cli_detail::fit_json(rep.standard_fit)},
                {"cone", cli_detail::fit_json(rep.cone_fit)}});
  std::cout << "standard fit " << (rep.standard_fit.ok ? "ok" : "fails")
            << ", cone fit " << (rep.cone_fit.ok ? "ok" : "fails") << " at R "
            << rep.R << "\n";
}

inline void run_probe_mltg(RunSession& s, const GraphProduct& gp,
                           const std::vector<std::string>& piece_strs,
                           int64_t L, double local_lambda, int64_t local_eps,
                           int64_t R) {
  std::vector<std::vector<NormalForm>> pieces;
  for (const std::string& ps : piece_strs)
    pieces.push_back(cli_detail::parse_path(gp, ps));
  MltgOptions opts;
  opts.L = L;
  opts.local_lambda = local_lambda;
  opts.local_eps = local_eps;
  opts.cone_R = R;
  MltgReport rep = local_to_global_probe(gp, pieces, opts);
  s.write_json("mltg.json",
               {{"pieces", piece_strs.size()},
                {"points", rep.points},
                {"windows_checked", rep.windows_checked},
                {"L", L},
                {"local_lambda", local_lambda},
                {"local_eps", local_eps},
                {"R", rep.R},
                {"standard", cli_detail::fit_json(rep.standard_fit)},
                {"cone", cli_detail::fit_json(rep.cone_fit)}});
  std::cout << "windows ok (" << rep.windows_checked << " checked), global "
            << (rep.standard_fit.ok ? "fit" : "no fit") << ", cone "
            << (rep.cone_fit.ok ? "fit" : "no fit") << "\n";
}

inline void run_probe_gauge(RunSession& s, const ToolkitConfig& cfg,
                            const GraphProduct& gp, const std::string& from,
                            const std::string& to, int radius,
                            const std::string& grid_str, uint64_t budget) {
  MetricBall ball(gp, gp.identity(), radius, MetricKind::Standard, {},
                  cfg.node_limit, true, s.threads);
  std::vector<NormalForm> geo =
      standard_geodesic(gp, gp.parse_word(from), gp.parse_word(to));
  MorseGaugeTable table = morse_gauge_table(
      ball, geo, cli_detail::parse_grid(grid_str), budget, cfg.seed);
  if (s.want_csv()) {
    std::string csv = "k,c,hausdorff\n";
    for (const GaugeCell& cell : table.cells) {
      std::string k = std::to_string(cell.k);
      k.erase(k.find_last_not_of('0') + 1);
      if (!k.empty() && k.back() == '.') k.pop_back();
      csv += k + "," + std::to_string(cell.c) + "," +
             std::to_string(cell.hausdorff) + "\n";
    }
    s.write_text("gauge.csv", csv);
  }
  if (s.want_json()) {
    nlohmann::json cells = nlohmann::json::array();
    for (const GaugeCell& cell : table.cells)
      cells.push_back({{"k", cell.k},
                       {"c", cell.c},
                       {"hausdorff", cell.hausdorff},
                       {"accepted", cell.accepted},
                       {"no_samples", cell.no_samples}});
    s.write_json("gauge.json", {{"from", from},
                                {"to", to},
                                {"radius", radius},
                                {"cells", cells},
                                {"tried", table.tried},
                                {"seed", table.seed}});
  }
  std::cout << "gauge: " << table.cells.size() << " cells, " << table.tried
            << " candidate paths\n";
}

}  // namespace gpg
