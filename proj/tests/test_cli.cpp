#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "gpg/config.hpp"
#include "gpg/runner.hpp"

using namespace gpg;
namespace fs = std::filesystem;

namespace {

template <class F>
Errc code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::InvalidConfig;
}

nlohmann::json base_config() {
  return nlohmann::json::parse(R"({
    "schema": 1,
    "graph": {"vertices": ["a", "b"], "edges": [["a", "b"]]},
    "vertex_groups": {"a": {"kind": "Z"}, "b": {"kind": "Z"}}
  })");
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct CliResult {
  int rc = -1;
  std::string out;
};

CliResult raw_cli(const std::string& cmd) {
  FILE* p = popen((cmd + " 2>&1").c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[512];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  int status = pclose(p);
  return {WEXITSTATUS(status), out};
}

CliResult run_cli(const std::string& args) {
  return raw_cli(std::string(GPG_GPGT_BIN) + " " + args);
}

fs::path fresh_dir(const std::string& tag) {
  fs::path d = fs::temp_directory_path() / ("gpg_cli_" + tag);
  fs::remove_all(d);
  return d;
}

const std::string kP3 = std::string(GPG_FIXTURE_DIR) + "/p3.json";
const std::string kZ2 = std::string(GPG_FIXTURE_DIR) + "/z2.json";
const std::string kGrid = std::string(GPG_FIXTURE_DIR) + "/grid.json";

}  // namespace

TEST_CASE("config parsing accepts the documented shape") {
  ToolkitConfig cfg = config_from_json(base_config(), "raw");
  CHECK(cfg.vertices == std::vector<std::string>{"a", "b"});
  CHECK(cfg.edges.size() == 1);
  CHECK(cfg.node_limit == 2000000);
  CHECK(cfg.seed == 12345);
  CHECK(cfg.thresholds.n_max == 4);
  CHECK(cfg.out_dir == "out");
  CHECK(cfg.format == "both");
  CHECK(cfg.source_text == "raw");

  GraphProduct gp = cfg.product();
  CHECK(gp.vertex_count() == 2);
  CHECK(gp.print_word(gp.parse_word("b a")) == "a b");

  nlohmann::json j = base_config();
  j["budgets"] = {{"node_limit", 50}, {"quadruple_budget", 9}, {"seed", 7}};
  j["thresholds"] = {{"n_max", 6}, {"cap", 3}, {"slope_min", 0.5},
                     {"r_step", 2}};
  j["output"] = {{"dir", "artifacts"}, {"format", "csv"}};
  cfg = config_from_json(j);
  CHECK(cfg.node_limit == 50);
  CHECK(cfg.quadruple_budget == 9);
  CHECK(cfg.seed == 7);
  CHECK(cfg.thresholds.n_max == 6);
  CHECK(cfg.thresholds.cap == 3);
  CHECK(cfg.thresholds.slope_min == 0.5);
  CHECK(cfg.thresholds.r_step == 2);
  CHECK(cfg.out_dir == "artifacts");
  CHECK(cfg.format == "csv");
}

TEST_CASE("config parsing covers every group kind") {
  nlohmann::json j = base_config();
  j["graph"]["vertices"] = {"a", "b", "c", "d"};
  j["graph"]["edges"] = nlohmann::json::array();
  j["vertex_groups"] = {
      {"a", {{"kind", "Z"}}},
      {"b", {{"kind", "Z/5"}}},
      {"c", {{"kind", "free"}, {"rank", 2}}},
      {"d", {{"kind", "table"}, {"table", {{0, 1}, {1, 0}}}}}};
  GraphProduct gp = config_from_json(j).product();
  CHECK(gp.group(0).kind() == GroupKind::Integer);
  CHECK(gp.group(1).kind() == GroupKind::Cyclic);
  CHECK(gp.group(1).order() == 5);
  CHECK(gp.group(2).kind() == GroupKind::Free);
  CHECK(gp.group(3).kind() == GroupKind::Table);
  CHECK(gp.group(3).order() == 2);
  CHECK(gp.print_word(gp.parse_word("b^3 b^3")) == "b");

  nlohmann::json cyc = base_config();
  cyc["vertex_groups"]["a"] = {{"kind", "cyclic"}, {"n", 4}};
  CHECK(config_from_json(cyc).product().group(0).order() == 4);
}

TEST_CASE("config parsing rejects unknown fields at every level") {
  auto rejects = [](nlohmann::json j) {
    CHECK(code_of([&] { config_from_json(j); }) == Errc::InvalidConfig);
  };

  nlohmann::json j = base_config();
  j["extra"] = 1;
  rejects(j);

  j = base_config();
  j["graph"]["directed"] = true;
  rejects(j);

  j = base_config();
  j["vertex_groups"]["a"]["order"] = 7;
  rejects(j);

  j = base_config();
  j["budgets"] = {{"node_limit", 10}, {"retries", 3}};
  rejects(j);

  j = base_config();
  j["thresholds"] = {{"n_max", 4}, {"patience", 2}};
  rejects(j);

  j = base_config();
  j["output"] = {{"dir", "x"}, {"compress", true}};
  rejects(j);

  j = base_config();
  j["schema"] = 2;
  rejects(j);

  j = base_config();
  j.erase("vertex_groups");
  rejects(j);

  j = base_config();
  j["vertex_groups"].erase("b");
  rejects(j);

  j = base_config();
  j["vertex_groups"]["a"]["kind"] = "quaternion";
  rejects(j);

  j = base_config();
  j["budgets"] = {{"node_limit", 0}};
  rejects(j);

  j = base_config();
  j["output"] = {{"format", "xml"}};
  rejects(j);

  j = base_config();
  j["graph"]["edges"] = {{"a", "b", "c"}};
  rejects(j);
}

TEST_CASE("fnv hash matches the published offset basis") {
  CHECK(hex64(fnv1a64("")) == "cbf29ce484222325");
  CHECK(fnv1a64("a") == (14695981039346656037ull ^ 'a') * 1099511628211ull);
  CHECK(fnv1a64("ab") != fnv1a64("ba"));
}

TEST_CASE("cli normalizes words and reports parse errors") {
  fs::path out = fresh_dir("norm");
  CliResult ok =
      run_cli("--config " + kP3 + " --out " + out.string() + " normalize 'b a'");
  CHECK(ok.rc == 0);
  CHECK(ok.out == "a b\n");
  nlohmann::json art = nlohmann::json::parse(slurp(out / "normalize.json"));
  CHECK(art["normal_form"] == "a b");
  CHECK(art["length"] == 2);
  nlohmann::json man = nlohmann::json::parse(slurp(out / "manifest.json"));
  CHECK(man["status"] == "ok");
  CHECK(man["artifacts"] == nlohmann::json::array({"normalize.json"}));
  CHECK(man["config_hash"] == hex64(fnv1a64(slurp(kP3))));

  fs::path bad = fresh_dir("norm_bad");
  CliResult err =
      run_cli("--config " + kP3 + " --out " + bad.string() + " normalize q^2");
  CHECK(err.rc == 1);
  CHECK(err.out.find("InvalidSyllable") != std::string::npos);
  nlohmann::json ej = nlohmann::json::parse(slurp(bad / "error.json"));
  CHECK(ej["code"] == "InvalidSyllable");
  nlohmann::json bman = nlohmann::json::parse(slurp(bad / "manifest.json"));
  CHECK(bman["status"] == "error");
  CHECK(bman["error"]["code"] == "InvalidSyllable");
}

TEST_CASE("cli subcommands write their artifacts") {
  fs::path out = fresh_dir("sub");
  std::string base = "--config " + kZ2 + " --out " + out.string() + " ";

  CHECK(run_cli(base + "mul 'a b' 'b^-1'").out == "a\n");

  CHECK(run_cli(base + "ball --radius 2 --metric cone").rc == 0);
  std::string csv = slurp(out / "ball.csv");
  CHECK(csv.rfind("point_id,word,dist\n0,e,0\n", 0) == 0);
  nlohmann::json bj = nlohmann::json::parse(slurp(out / "ball.json"));
  CHECK(bj["size"] == 13);
  CHECK(bj["metric"] == "cone-stars");

  CHECK(run_cli(base + "delta --radius 2").rc == 0);
  nlohmann::json dj = nlohmann::json::parse(slurp(out / "delta.json"));
  CHECK(dj["delta"] == 2.0);  // corner quadruple (+-1, +-1)
  CHECK(dj["exhaustive"] == true);

  CHECK(run_cli(base + "classes --list --lambda a --radius 1").rc == 0);
  nlohmann::json cj = nlohmann::json::parse(slurp(out / "classes.json"));
  CHECK(cj["classes"].size() == 1);  // st(a) is the whole plane

  CliResult rel = run_cli(base + "classes --relation a b");
  CHECK(rel.out == "orthogonal\n");

  CHECK(run_cli(base + "clean-containers").rc == 0);
  nlohmann::json cc = nlohmann::json::parse(slurp(out / "clean_containers.json"));
  CHECK(cc["all_clean"] == true);

  CHECK(run_cli(base + "coning-family").rc == 0);
  nlohmann::json cf = nlohmann::json::parse(slurp(out / "coning_family.json"));
  CHECK(cf["members"].size() == 2);  // {a} and {b}; lk({a,b}) is empty

  CHECK(run_cli(base + "stability 'a b' --nmax 12").rc == 0);
  nlohmann::json sj = nlohmann::json::parse(slurp(out / "stability.json"));
  CHECK(sj["verdict"] == "unstable");
  CHECK(sj["rows"].size() == 12);

  CHECK(run_cli(base + "distortion 'a b' --nmax 2 --radii 2,4").rc == 0);
  CHECK(slurp(out / "distortion.csv") ==
        "n,standard,cone_R2,cone_R4\n1,2,1,1\n2,4,-1,1\n");

  CHECK(run_cli(base + "probe detect --path 'e;a;a b'").rc == 0);
  nlohmann::json pj = nlohmann::json::parse(slurp(out / "detect.json"));
  CHECK(pj["standard"]["ok"] == true);

  CHECK(run_cli(base + "probe mltg --piece 'e;a' --piece 'a;a b'").rc == 0);
  nlohmann::json mj = nlohmann::json::parse(slurp(out / "mltg.json"));
  CHECK(mj["points"] == 3);
  CHECK(mj["standard"]["ok"] == true);

  CHECK(run_cli(base + "probe gauge --to 'a^2 b^2' --radius 5 "
                       "--grid '1,0;2,0'").rc == 0);
  CHECK(slurp(out / "gauge.csv").rfind("k,c,hausdorff\n", 0) == 0);

  nlohmann::json man = nlohmann::json::parse(slurp(out / "manifest.json"));
  CHECK(man["status"] == "ok");
}

TEST_CASE("cli hhs subcommands round-trip the grid fixture") {
  fs::path out = fresh_dir("hhs");
  std::string base = "--config " + kP3 + " --out " + out.string() + " ";

  CliResult grid = run_cli(base + "hhs grid");
  CHECK(grid.rc == 0);
  nlohmann::json emitted = nlohmann::json::parse(slurp(out / "grid_instance.json"));
  CHECK(emitted == nlohmann::json::parse(slurp(kGrid)));

  CliResult chk = run_cli(base + "hhs check " + kGrid);
  CHECK(chk.rc == 0);
  CHECK(chk.out.find("12/12 pass") != std::string::npos);
  nlohmann::json cj = nlohmann::json::parse(slurp(out / "hhs_check.json"));
  CHECK(cj["all_pass"] == true);
  CHECK(cj["minimal_E"] == 2);

  CliResult mx = run_cli(base + "hhs maximize " + kGrid + " --M 1");
  CHECK(mx.rc == 0);
  CHECK(mx.out.find("T = {H, S, V}") != std::string::npos);
  nlohmann::json mj = nlohmann::json::parse(slurp(out / "hhs_maximize.json"));
  CHECK(mj["diameter"] <= 2);
}

TEST_CASE("cli resolves the output directory by precedence") {
  fs::path flag_dir = fresh_dir("flag");
  fs::path env_dir = fresh_dir("env");
  std::string prefix = "env GPG_OUTPUT_DIR=" + env_dir.string() + " ";

  CliResult flag_run =
      raw_cli(prefix + GPG_GPGT_BIN + " --config " + kP3 + " --out " +
              flag_dir.string() + " normalize a");
  CHECK(flag_run.rc == 0);
  CHECK(fs::exists(flag_dir / "normalize.json"));  // flag beats env
  CHECK(!fs::exists(env_dir / "normalize.json"));

  CliResult env_run =
      raw_cli(prefix + GPG_GPGT_BIN + " --config " + kP3 + " normalize a");
  CHECK(env_run.rc == 0);
  CHECK(fs::exists(env_dir / "manifest.json"));
}

TEST_CASE("identical invocations produce byte-identical artifacts") {
  fs::path out = fresh_dir("det");
  std::string cmd = "--config " + kZ2 + " --out " + out.string() +
                    " delta --radius 3 --metric cone";
  CHECK(run_cli(cmd).rc == 0);
  std::string first_delta = slurp(out / "delta.json");
  std::string first_manifest = slurp(out / "manifest.json");
  CHECK(run_cli(cmd).rc == 0);
  CHECK(slurp(out / "delta.json") == first_delta);
  CHECK(slurp(out / "manifest.json") == first_manifest);
}
