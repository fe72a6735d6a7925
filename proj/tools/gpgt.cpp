#include <cstdlib>
#include <exception>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gpg/config.hpp"
#include "gpg/runner.hpp"

namespace {

std::string join_args(int argc, char** argv) {
  std::string s;
  for (int i = 1; i < argc; ++i) {
    if (i > 1) s += ' ';
    s += argv[i];
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graph product geometry toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_flag;
  unsigned threads = 1;
  app.add_option("--config", config_path, "config JSON file")->required();
  app.add_option("--out", out_flag,
                 "output directory (beats GPG_OUTPUT_DIR and the config)");
  app.add_option("--threads", threads, "worker thread cap");

  using gpg::GraphProduct;
  using gpg::RunSession;
  using gpg::ToolkitConfig;
  std::function<void(RunSession&, const ToolkitConfig&, const GraphProduct&)>
      action;

  auto* c_norm = app.add_subcommand("normalize", "normal form of a word");
  std::string norm_word;
  c_norm->add_option("word", norm_word, "input word")->required();
  c_norm->callback([&] {
    action = [&](RunSession& s, const ToolkitConfig&, const GraphProduct& gp) {
      gpg::run_normalize(s, gp, norm_word);
    };
  });

  auto* c_mul = app.add_subcommand("mul", "product of two words");
  std::string mul_lhs, mul_rhs;
  c_mul->add_option("lhs", mul_lhs, "left factor")->required();
  c_mul->add_option("rhs", mul_rhs, "right factor")->required();
  c_mul->callback([&] {
    action = [&](RunSession& s, const ToolkitConfig&, const GraphProduct& gp) {
      gpg::run_mul(s, gp, mul_lhs, mul_rhs);
    };
  });

  auto* c_ball = app.add_subcommand("ball", "materialize a metric ball");
  int ball_radius = 0;
  std::string ball_metric = "standard", ball_family;
  c_ball->add_option("--radius", ball_radius, "ball radius")->required();
  c_ball->add_option("--metric", ball_metric, "standard | cone | cone-family");
  c_ball->add_option("--family", ball_family,
                     "cone family, e.g. \"a,b;c\" (members split by ';')");
  c_ball->callback([&] {
    action = [&](RunSession& s, const ToolkitConfig& cfg,
                 const GraphProduct& gp) {
      gpg::run_ball(s, cfg, gp, ball_radius, ball_metric, ball_family);
    };
  });

  auto* c_delta = app.add_subcommand("delta", "four-point hyperbolicity defect");
  int delta_radius = 0;
  std::string delta_metric = "standard", delta_family;
  c_delta->add_option("--radius", delta_radius, "ball radius")->required();
  c_delta->add_option("--metric", delta_metric, "standard | cone | cone-family");
  c_delta->add_option("--family", delta_family, "cone family for cone-family");
  c_delta->callback([&] {
    action = [&](RunSession& s, const ToolkitConfig& cfg,
                 const GraphProduct& gp) {
      gpg::run_delta(s, cfg, gp, delta_radius, delta_metric, delta_family);
    };
  });

  auto* c_classes = app.add_subcommand("classes", "parallelism classes");
  bool classes_list = false;
  std::string classes_lambda;
  int classes_radius = 2;
  std::vector<std::string> classes_relation;
  std::string rep_a = "e", rep_b = "e";
  c_classes->add_flag("--list", classes_list, "list classes over a ball");
  c_classes->add_option("--lambda", classes_lambda,
                        "subgraph as comma-separated vertices (for --list)");
  c_classes->add_option("--radius", classes_radius, "ball radius for --list");
  c_classes
      ->add_option("--relation", classes_relation,
                   "two subgraphs to compare, e.g. --relation a,b c")
      ->expected(2);
  c_classes->add_option("--rep-a", rep_a, "representative of the first class");
  c_classes->add_option("--rep-b", rep_b, "representative of the second class");
  c_classes->callback([&] {
    action = [&](RunSession& s, const ToolkitConfig&, const GraphProduct& gp) {
      if (!classes_relation.empty()) {
        gpg::run_classes_relation(s, gp, classes_relation[0],
                                  classes_relation[1], rep_a, rep_b);
      } else if (classes_list) {
        if (classes_lambda.empty())
          gpg::fail(gpg::Errc::InvalidConfig, "classes --list needs --lambda");
        gpg::run_classes_list(s, gp, classes_lambda, classes_radius);
      } else {
        gpg::fail(gpg::Errc::InvalidConfig,
                  "classes needs --list or --relation");
      }
    };
  });

  auto* c_clean = app.add_subcommand("clean-containers",
                                     "verify container orthogonality");
  int clean_depth = 1;
  c_clean->add_option("--depth", clean_depth, "representative ball radius");
  c_clean->callback([&] {
    action = [&](RunSession& s, const ToolkitConfig&, const GraphProduct& gp) {
      gpg::run_clean_containers(s, gp, clean_depth);
    };
  });

  auto* c_cone = app.add_subcommand("coning-family",
                                    "subgraphs with nonempty link");
  c_cone->callback([&] {
    action = [&](RunSession& s, const ToolkitConfig&, const GraphProduct& gp) {
      gpg::run_coning_family(s, gp);
    };
  });

  auto* c_stab = app.add_subcommand("stability", "stability verdict");
  std::string stab_element, stab_subgroup;
  int64_t stab_nmax = 0;
  c_stab->add_option("element", stab_element, "cyclic direction");
  c_stab->add_option("--nmax", stab_nmax, "powers to probe");
  c_stab->add_option("--subgroup", stab_subgroup,
                     "generators split by ';' (probes the generated subgroup)");
  c_stab->callback([&] {
    action = [&](RunSession& s, const ToolkitConfig& cfg,
                 const GraphProduct& gp) {
      gpg::run_stability(s, cfg, gp, stab_element, stab_subgroup, stab_nmax);
    };
  });

  auto* c_dist = app.add_subcommand("distortion", "distortion curve");
  std::string dist_element, dist_radii;
  int64_t dist_nmax = 4;
  c_dist->add_option("element", dist_element, "cyclic direction")->required();
  c_dist->add_option("--nmax", dist_nmax, "powers to tabulate");
  c_dist->add_option("--radii", dist_radii, "restriction radii R1,R2,...")
      ->required();
  c_dist->callback([&] {
    action = [&](RunSession& s, const ToolkitConfig&, const GraphProduct& gp) {
      gpg::run_distortion(s, gp, dist_element, dist_nmax, dist_radii);
    };
  });

  auto* c_hhs = app.add_subcommand("hhs", "relative HHS instances");
  c_hhs->require_subcommand(1);
  auto* c_check = c_hhs->add_subcommand("check", "run the twelve axioms");
  std::string hhs_file;
  c_check->add_option("file", hhs_file, "instance JSON")->required();
  c_check->callback([&] {
    action = [&](RunSession& s, const ToolkitConfig&, const GraphProduct&) {
      gpg::run_hhs_check(s, hhs_file);
    };
  });
  auto* c_max = c_hhs->add_subcommand("maximize", "maximize an instance");
  std::string hhs_max_file;
  int64_t hhs_m = -1;
  c_max->add_option("file", hhs_max_file, "instance JSON")->required();
  c_max->add_option("--M", hhs_m, "maximization constant (default: instance M)");
  c_max->callback([&] {
    action = [&](RunSession& s, const ToolkitConfig&, const GraphProduct&) {
      gpg::run_hhs_maximize(s, hhs_max_file, hhs_m);
    };
  });
  auto* c_grid = c_hhs->add_subcommand("grid", "emit the grid fixture");
  int64_t grid_e = 2, grid_m = 1;
  c_grid->add_option("--E", grid_e, "claimed axiom constant");
  c_grid->add_option("--M", grid_m, "maximization constant");
  c_grid->callback([&] {
    action = [&](RunSession& s, const ToolkitConfig&, const GraphProduct&) {
      gpg::run_hhs_grid(s, grid_e, grid_m);
    };
  });

  auto* c_probe = app.add_subcommand("probe", "quasi-geodesic probes");
  c_probe->require_subcommand(1);
  auto* c_detect = c_probe->add_subcommand("detect",
                                           "standard vs cone fit of a path");
  std::string detect_path;
  double detect_lmax = 4.0;
  int64_t detect_emax = 8, detect_R = -1;
  c_detect->add_option("--path", detect_path, "points split by ';'")
      ->required();
  c_detect->add_option("--lambda-max", detect_lmax, "fit cap on lambda");
  c_detect->add_option("--eps-max", detect_emax, "fit cap on eps");
  c_detect->add_option("--R", detect_R, "restriction radius (default: fit)");
  c_detect->callback([&] {
    action = [&](RunSession& s, const ToolkitConfig&, const GraphProduct& gp) {
      gpg::run_probe_detect(s, gp, detect_path, detect_lmax, detect_emax,
                            detect_R);
    };
  });
  auto* c_mltg = c_probe->add_subcommand("mltg", "local-to-global probe");
  std::vector<std::string> mltg_pieces;
  int64_t mltg_L = 2, mltg_eps = 0, mltg_R = -1;
  double mltg_lambda = 1.0;
  c_mltg->add_option("--piece", mltg_pieces,
                     "overlapping pieces, points split by ';' (repeatable)")
      ->required();
  c_mltg->add_option("--L", mltg_L, "window length");
  c_mltg->add_option("--local-lambda", mltg_lambda, "window lambda");
  c_mltg->add_option("--local-eps", mltg_eps, "window eps");
  c_mltg->add_option("--R", mltg_R, "cone restriction radius");
  c_mltg->callback([&] {
    action = [&](RunSession& s, const ToolkitConfig&, const GraphProduct& gp) {
      gpg::run_probe_mltg(s, gp, mltg_pieces, mltg_L, mltg_lambda, mltg_eps,
                          mltg_R);
    };
  });
  auto* c_gauge = c_probe->add_subcommand("gauge", "Morse gauge table");
  std::string gauge_from = "e", gauge_to, gauge_grid = "1,0;2,0;2,2";
  int gauge_radius = 0;
  uint64_t gauge_budget = 200;
  c_gauge->add_option("--from", gauge_from, "geodesic start");
  c_gauge->add_option("--to", gauge_to, "geodesic end")->required();
  c_gauge->add_option("--radius", gauge_radius, "ambient ball radius")
      ->required();
  c_gauge->add_option("--grid", gauge_grid, "cells k,c split by ';'");
  c_gauge->add_option("--budget", gauge_budget, "sampled detours per table");
  c_gauge->callback([&] {
    action = [&](RunSession& s, const ToolkitConfig& cfg,
                 const GraphProduct& gp) {
      gpg::run_probe_gauge(s, cfg, gp, gauge_from, gauge_to, gauge_radius,
                           gauge_grid, gauge_budget);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  RunSession session;
  session.command = join_args(argc, argv);
  session.threads = threads == 0 ? 1 : threads;
  const char* env_out = std::getenv("GPG_OUTPUT_DIR");
  if (!out_flag.empty())
    session.out = out_flag;
  else if (env_out && *env_out)
    session.out = env_out;

  try {
    ToolkitConfig cfg = gpg::load_config(config_path);
    session.config_hash = gpg::hex64(gpg::fnv1a64(cfg.source_text));
    session.seed = cfg.seed;
    session.format = cfg.format;
    if (out_flag.empty() && !(env_out && *env_out)) session.out = cfg.out_dir;
    GraphProduct gp = cfg.product();
    action(session, cfg, gp);
    session.manifest("ok");
    return 0;
  } catch (const gpg::Error& e) {
    nlohmann::json err{{"code", e.code_name()}, {"message", e.what()}};
    std::cout << nlohmann::json{{"error", err}}.dump() << "\n";
    try {
      session.write_json("error.json", err);
      session.manifest("error", err);
    } catch (...) {
    }
    return 1;
  } catch (const std::exception& e) {
    nlohmann::json err{{"code", "Unknown"}, {"message", e.what()}};
    std::cout << nlohmann::json{{"error", err}}.dump() << "\n";
    try {
      session.write_json("error.json", err);
      session.manifest("error", err);
    } catch (...) {
    }
    return 2;
  }
}
