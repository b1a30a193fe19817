#include "mongeampere/app/app.hpp"
#include "mongeampere/types.hpp"

#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>
#include <unistd.h>

namespace fs = std::filesystem;
using namespace ma::app;

namespace {

fs::path scratch(const std::string& leaf) {
  fs::path p = fs::temp_directory_path() / ("ma_test_app_" + std::to_string(::getpid())) / leaf;
  fs::remove_all(p);
  fs::create_directories(p.parent_path());
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path write_config(const std::string& leaf, const std::string& text) {
  fs::path p = scratch(leaf);
  std::ofstream(p) << text;
  return p;
}

bool has_line(const RunResult& r, const std::string& needle) {
  return std::any_of(r.lines.begin(), r.lines.end(),
                     [&](const std::string& l) { return l.find(needle) != std::string::npos; });
}

RunConfig cfg(const std::string& command, const std::string& config, const fs::path& out) {
  RunConfig c;
  c.command = command;
  c.config = config;
  c.out_dir = out.string();
  return c;
}

/// Content of every CSV in a directory keyed by file name.
std::map<std::string, std::string> csvs(const fs::path& dir) {
  std::map<std::string, std::string> m;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".csv") m[e.path().filename().string()] = slurp(e.path());
  return m;
}

}  // namespace

TEST_CASE("verify-barriers default run") {
  auto out = scratch("vb");
  auto r = run(cfg("verify-barriers", "", out));
  CHECK(r.exit_code == kPass);
  CHECK(csvs(out).size() >= 10);
  CHECK(fs::exists(out / "summary.json"));
  auto s = nlohmann::json::parse(slurp(out / "summary.json"));
  CHECK(s["schema"] == "mongeampere.summary/1");
  CHECK(s["exit_code"] == 0);
  for (const auto& l : r.lines) CHECK(l.rfind("PASS ", 0) == 0);
}

TEST_CASE("verify-barriers exit codes") {
  auto bad_eps = write_config("eps.json", R"({"schema": "mongeampere.barriers/1", "eps": [0.6]})");
  auto r = run(cfg("verify-barriers", bad_eps.string(), scratch("eps")));
  CHECK(r.exit_code == kConfigError);
  CHECK(has_line(r, "outside (0, 1/2]"));

  auto wrong = write_config("wrong.json", R"({"schema": "mongeampere.barriers/1", "dims": [3],
    "checks": ["lemma35_upper"], "bounds": {"lemma35_upper": {"3": 0.2}}})");
  r = run(cfg("verify-barriers", wrong.string(), scratch("wrong")));
  CHECK(r.exit_code == kAssertionFailure);
  CHECK(has_line(r, "FAIL lemma35_upper"));

  auto none = write_config("none.json", R"({"schema": "mongeampere.barriers/1", "checks": []})");
  r = run(cfg("verify-barriers", none.string(), scratch("none")));
  CHECK(r.exit_code == kPass);
  CHECK(has_line(r, "no assertions enabled"));

  auto unknown = write_config("unknown.json", R"({"schema": "mongeampere.barriers/1", "epsilon": [0.1]})");
  CHECK(run(cfg("verify-barriers", unknown.string(), scratch("unknown"))).exit_code == kConfigError);
  CHECK(run(cfg("verify-barriers", "/nonexistent/x.json", scratch("missing"))).exit_code == kConfigError);
  auto nojson = write_config("nojson.json", "{");
  CHECK(run(cfg("verify-barriers", nojson.string(), scratch("nojson"))).exit_code == kConfigError);

  RunConfig c = cfg("verify-barriers", "", scratch("workers"));
  c.workers = 0;
  CHECK(run(c).exit_code == kConfigError);
  c.workers = 1;
  c.tol_scale = -1.0;
  CHECK(run(c).exit_code == kConfigError);
  CHECK(run(cfg("frobnicate", "", scratch("cmd"))).exit_code == kConfigError);
}

TEST_CASE("artifacts are reproducible for a fixed seed") {
  auto a = scratch("seed_a"), b = scratch("seed_b"), c = scratch("seed_c");
  run(cfg("verify-barriers", "", a));
  run(cfg("verify-barriers", "", b));
  auto other = cfg("verify-barriers", "", c);
  other.seed = 7;
  run(other);
  auto ca = csvs(a), cb = csvs(b), cc = csvs(c);
  REQUIRE(ca.size() == cb.size());
  for (const auto& [name, text] : ca) {
    CAPTURE(name);
    CHECK(std::hash<std::string>{}(text) == std::hash<std::string>{}(cb[name]));
  }
  CHECK(ca["fd_hessian.csv"] != cc["fd_hessian.csv"]);
  CHECK(ca["amp_profile_n2.csv"] == cc["amp_profile_n2.csv"]);
}

TEST_CASE("presets") {
  const auto names = preset_names();
  CHECK(names.size() >= 5);
  for (const auto& n : names) {
    CAPTURE(n);
    auto j = nlohmann::json::parse(preset(n));
    CHECK(j.contains("schema"));
  }
  CHECK_THROWS_AS(preset("no-such-preset"), ma::ConfigError);

  const std::string readme = slurp(fs::path(MA_SOURCE_DIR) / "README.md");
  REQUIRE_FALSE(readme.empty());
  std::regex ref("preset:([a-z0-9-]+)");
  int seen = 0;
  for (auto it = std::sregex_iterator(readme.begin(), readme.end(), ref); it != std::sregex_iterator(); ++it) {
    CAPTURE((*it)[1].str());
    CHECK(std::find(names.begin(), names.end(), (*it)[1].str()) != names.end());
    ++seen;
  }
  CHECK(seen > 0);
}

TEST_CASE("run-experiment") {
  auto out = scratch("smoke");
  auto r = run(cfg("run-experiment", "preset:smoke", out));
  CHECK(r.exit_code == kPass);
  CHECK(has_line(r, "no assertions enabled"));
  CHECK(fs::exists(out / "levels.csv"));

  out = scratch("amp");
  r = run(cfg("run-experiment", "preset:amp-square-2d", out));
  CHECK(r.exit_code == kPass);
  CHECK(has_line(r, "PASS amp_tighter"));
  for (const char* f : {"levels.csv", "solution.csv", "amp.csv", "modulus.csv", "summary.json"}) CHECK(fs::exists(out / f));

  auto bad = nlohmann::json::parse(preset("amp-square-2d"));
  bad["checks"]["holder"] = nlohmann::json::object();
  auto p = write_config("noface.json", bad.dump());
  CHECK(run(cfg("run-experiment", p.string(), scratch("noface"))).exit_code == kConfigError);
  bad = nlohmann::json::parse(preset("amp-square-2d"));
  bad["checks"]["bogus"] = nlohmann::json::object();
  p = write_config("bogus.json", bad.dump());
  CHECK(run(cfg("run-experiment", p.string(), scratch("bogus"))).exit_code == kConfigError);

  auto starved = nlohmann::json::parse(preset("amp-square-2d"));
  starved["problem"]["solver"] = {{"tol", 1e-12}, {"max_iters", 1}, {"polish_steps", 0}};
  p = write_config("starved.json", starved.dump());
  CHECK(run(cfg("run-experiment", p.string(), scratch("starved"))).exit_code == kSolverFailure);
}

TEST_CASE("solve and report") {
  const std::string square = (fs::path(MA_SOURCE_DIR) / "configs" / "square.json").string();
  auto root = scratch("runs");
  auto r = run(cfg("solve", square, root / "square"));
  CHECK(r.exit_code == kPass);
  CHECK(fs::exists(root / "square" / "solution.csv"));
  CHECK(fs::exists(root / "square" / "report.json"));

  auto j = nlohmann::json::parse(slurp(square));
  j["solver"] = {{"tol", 1e-12}, {"max_iters", 1}, {"polish_steps", 0}};
  auto p = write_config("starved_problem.json", j.dump());
  r = run(cfg("solve", p.string(), root / "starved"));
  CHECK(r.exit_code == kSolverFailure);
  CHECK(has_line(r, "solver failure"));
  CHECK(run(cfg("solve", "", root / "empty")).exit_code == kConfigError);

  RunConfig rep;
  rep.command = "report";
  rep.config = root.string();
  r = run(rep);
  CHECK(r.exit_code == kSolverFailure);
  const std::string csv = slurp(root / "report.csv");
  CHECK(csv.rfind("run,command,name,check,pass,detail\n", 0) == 0);
  CHECK(csv.find("square,solve,square,converged,1,") != std::string::npos);

  rep.config = (root / "nothing_here").string();
  CHECK(run(rep).exit_code == kConfigError);
}

#ifdef MA_MATOOL
TEST_CASE("matool exit codes") {
  auto sh = [](const std::string& args) {
    const std::string cmd = std::string(MA_MATOOL) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  };
  auto out = scratch("cli");
  CHECK(sh("verify-barriers --out " + (out / "vb").string()) == 0);
  CHECK(sh("run-experiment --config preset:nope --out " + (out / "x").string()) == 3);
  CHECK(sh("solve") == 3);
  CHECK(sh("--no-such-flag") == 3);
  CHECK(sh("run-experiment --list-presets") == 0);
  CHECK(sh("report " + out.string()) == 0);
}
#endif
