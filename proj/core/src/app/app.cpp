#include "mongeampere/app/app.hpp"

#include "common.hpp"
#include "mongeampere/solver/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>

namespace fs = std::filesystem;

namespace ma::app {

namespace detail {

Artifacts::Artifacts(std::string dir) : dir_(std::move(dir)) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir_ + ": " + ec.message());
}

void Artifacts::write(const std::string& name, const std::string& content) {
  const fs::path p = fs::path(dir_) / name;
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Error("cannot write " + p.string());
  f << content;
  names_.push_back(name);
}

void Checks::add(const std::string& name, bool pass, const std::string& detail) {
  entries_.push_back({{"check", name}, {"pass", pass}, {"detail", detail}});
  lines_.push_back(std::string(pass ? "PASS " : "FAIL ") + name + ": " + detail);
  if (!pass) ++failures_;
}

std::string load_config(const std::string& spec, std::string* base_dir) {
  if (spec.rfind("preset:", 0) == 0) {
    if (base_dir) *base_dir = ".";
    return preset(spec.substr(7));
  }
  std::ifstream f(spec, std::ios::binary);
  if (!f) throw ConfigError("cannot open config " + spec);
  std::stringstream ss;
  ss << f.rdbuf();
  if (base_dir) *base_dir = fs::path(spec).parent_path().string();
  if (base_dir && base_dir->empty()) *base_dir = ".";
  return ss.str();
}

json parse_json(const std::string& text, const std::string& where) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(where + ": invalid JSON (" + e.what() + ")");
  }
}

void require_schema(const json& j, const std::string& expected) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  if (!j.contains("schema") || !j.at("schema").is_string())
    throw ConfigError("config: missing schema field (expected \"" + expected + "\")");
  if (j.at("schema").get<std::string>() != expected)
    throw ConfigError("config: schema \"" + j.at("schema").get<std::string>() + "\" is not \"" + expected + "\"");
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json summary(const std::string& command, const std::string& name, int exit_code, const Checks& checks) {
  return {{"schema", "mongeampere.summary/1"},
          {"command", command},
          {"name", name},
          {"exit_code", exit_code},
          {"checks", checks.to_json()}};
}

RunResult finish(RunResult r, const Checks& checks, Artifacts& out, const std::string& command,
                 const std::string& name) {
  for (const auto& l : checks.lines()) r.lines.push_back(l);
  if (r.exit_code == kPass) {
    if (checks.size() == 0)
      r.lines.push_back("warning: no assertions enabled");
    else if (!checks.all_pass())
      r.exit_code = kAssertionFailure;
  }
  out.write("summary.json", summary(command, name, r.exit_code, checks).dump(2) + "\n");
  r.out_dir = out.dir();
  r.artifacts = out.names();
  return r;
}

}  // namespace detail

using namespace detail;

std::string output_directory(const RunConfig& cfg, const std::string& leaf) {
  if (!cfg.out_dir.empty()) return cfg.out_dir;
  const char* root = std::getenv("MA_OUT_ROOT");
  return (fs::path(root && *root ? root : "ma_out") / leaf).string();
}

namespace {

RunResult guarded(const std::function<RunResult()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    return {kConfigError, "", {std::string("error: ") + e.what()}, {}};
  } catch (const ConvergenceError& e) {
    return {kSolverFailure, "", {std::string("solver failure: ") + e.what()}, {}};
  } catch (const InvalidArgument& e) {
    return {kConfigError, "", {std::string("error: ") + e.what()}, {}};
  } catch (const std::exception& e) {
    return {kSolverFailure, "", {std::string("failure: ") + e.what()}, {}};
  }
}

void check_common(const RunConfig& cfg) {
  if (!(cfg.tol_scale > 0.0) || !std::isfinite(cfg.tol_scale)) throw ConfigError("--tol-scale must be positive");
  if (cfg.workers < 1) throw ConfigError("--workers must be at least 1");
}

}  // namespace

RunResult solve_impl(const RunConfig& cfg) {
  check_common(cfg);
  if (cfg.config.empty()) throw ConfigError("solve: --config is required");
  std::string base;
  const std::string text = load_config(cfg.config, &base);
  auto pf = solver::parse_problem(text, base);
  pf.options.tol *= cfg.tol_scale;
  const std::string name = pf.name.empty() ? "problem" : pf.name;
  Artifacts out(output_directory(cfg, "solve-" + name));
  Checks checks;
  RunResult r;
  try {
    auto rep = solver::solve(pf.problem, pf.options);
    std::ostringstream csv;
    solver::write_solution_csv(csv, rep);
    out.write("solution.csv", csv.str());
    out.write("report.json", solver::report_json(rep, name) + "\n");
    checks.add("converged", rep.max_residual <= pf.options.tol,
               "max relative residual " + num(rep.max_residual) + " after " + std::to_string(rep.iterations) +
                   " iterations");
  } catch (const ConvergenceError& e) {
    r.exit_code = kSolverFailure;
    r.lines.push_back(std::string("solver failure: ") + e.what() + " (residual " + num(e.residual()) + ")");
  }
  return finish(std::move(r), checks, out, "solve", name);
}

RunResult report_impl(const RunConfig& cfg) {
  const std::string src = cfg.config.empty() ? output_directory(cfg, "") : cfg.config;
  if (!fs::is_directory(src)) throw ConfigError("report: " + src + " is not a directory");
  std::vector<fs::path> found;
  if (fs::exists(fs::path(src) / "summary.json")) found.push_back(fs::path(src) / "summary.json");
  for (const auto& e : fs::directory_iterator(src))
    if (e.is_directory() && fs::exists(e.path() / "summary.json")) found.push_back(e.path() / "summary.json");
  std::sort(found.begin(), found.end());
  if (found.empty()) throw ConfigError("report: no summary.json under " + src);

  RunResult r;
  std::string csv = "run,command,name,check,pass,detail\n";
  int worst = kPass;
  for (const auto& p : found) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    json s = parse_json(ss.str(), p.string());
    require_schema(s, "mongeampere.summary/1");
    const std::string run = fs::relative(p.parent_path(), src).string();
    const int code = s.value("exit_code", 0);
    worst = std::max(worst, code);
    r.lines.push_back("run " + run + " (" + s.value("command", "") + " " + s.value("name", "") +
                      "): exit " + std::to_string(code));
    for (const auto& c : s.at("checks")) {
      std::string detail = c.value("detail", "");
      for (auto& ch : detail)
        if (ch == ',' || ch == '\n') ch = ';';
      csv += run + "," + s.value("command", "") + "," + s.value("name", "") + "," + c.value("check", "") + "," +
             (c.value("pass", false) ? "1" : "0") + "," + detail + "\n";
      r.lines.push_back(std::string(c.value("pass", false) ? "  PASS " : "  FAIL ") + c.value("check", ""));
    }
  }
  const std::string dest = cfg.out_dir.empty() ? src : cfg.out_dir;
  Artifacts out(dest);
  out.write("report.csv", csv);
  r.exit_code = worst;
  r.out_dir = out.dir();
  r.artifacts = out.names();
  return r;
}

RunResult verify_barriers_impl(const RunConfig& cfg);
RunResult run_experiment_impl(const RunConfig& cfg);

RunResult verify_barriers(const RunConfig& cfg) {
  return guarded([&] {
    check_common(cfg);
    return verify_barriers_impl(cfg);
  });
}

RunResult solve(const RunConfig& cfg) {
  return guarded([&] { return solve_impl(cfg); });
}

RunResult run_experiment(const RunConfig& cfg) {
  return guarded([&] {
    check_common(cfg);
    return run_experiment_impl(cfg);
  });
}

RunResult report(const RunConfig& cfg) {
  return guarded([&] { return report_impl(cfg); });
}

RunResult run(const RunConfig& cfg) {
  if (cfg.command == "verify-barriers") return verify_barriers(cfg);
  if (cfg.command == "solve") return solve(cfg);
  if (cfg.command == "run-experiment") return run_experiment(cfg);
  if (cfg.command == "report") return report(cfg);
  return {kConfigError, "", {"error: unknown command '" + cfg.command + "'"}, {}};
}

}  // namespace ma::app
