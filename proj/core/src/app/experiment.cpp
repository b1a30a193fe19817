#include "common.hpp"
#include "mongeampere/convexfn/modulus.hpp"
#include "mongeampere/regularity/report.hpp"
#include "mongeampere/solver/io.hpp"
#include "mongeampere/solver/solve.hpp"

#include "../solver/json_spec.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <cmath>
#include <mutex>
#include <optional>
#include <thread>

namespace ma::app {

using namespace detail;
using solver::detail::check_keys;
using solver::detail::get_int;
using solver::detail::get_number;
using solver::detail::get_vector;

namespace {

struct Range {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool contains(double v) const { return v >= lo && v <= hi; }
};

Range parse_range(const json& j, const std::string& w) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ConfigError(w + ": [lo, hi] expected");
  Range r{j[0].get<double>(), j[1].get<double>()};
  if (!(r.lo <= r.hi)) throw ConfigError(w + ": lo must not exceed hi");
  return r;
}

struct Experiment {
  std::string name;
  json problem;
  std::string base_dir;
  std::vector<json> levels;
  std::optional<Vec> face_normal;
  json checks = json::object();
};

const std::vector<const char*> kExperimentChecks{"amp", "modulus", "holder", "log_probe", "sobolev", "divergence",
                                                 "converse"};

Experiment parse_experiment(const json& j, const std::string& base_dir) {
  require_schema(j, "mongeampere.experiment/1");
  check_keys(j, {"schema", "name", "problem", "levels", "face", "checks"}, "config");
  Experiment e;
  e.name = j.contains("name") ? j.at("name").get<std::string>() : "experiment";
  e.base_dir = base_dir;
  if (!j.contains("problem") || !j.at("problem").is_object()) throw ConfigError("config: problem object required");
  e.problem = j.at("problem");
  check_keys(e.problem, {"domain", "f", "g", "Lambda", "lambda", "solver"}, "problem");
  if (!j.contains("levels") || !j.at("levels").is_array() || j.at("levels").empty())
    throw ConfigError("config: levels must be a nonempty array of meshes");
  for (const auto& l : j.at("levels")) e.levels.push_back(l);
  if (j.contains("face")) {
    check_keys(j.at("face"), {"normal"}, "face");
    e.face_normal = get_vector(j.at("face").at("normal"), "face.normal");
  }
  if (j.contains("checks")) {
    e.checks = j.at("checks");
    if (!e.checks.is_object()) throw ConfigError("checks: object expected");
    for (const auto& [key, val] : e.checks.items()) {
      bool known = false;
      for (const char* k : kExperimentChecks) known = known || key == k;
      if (!known) throw ConfigError("checks: unknown check '" + key + "'");
      if (!val.is_object()) throw ConfigError("checks." + key + ": object expected");
    }
  }
  const auto& c = e.checks;
  if (c.contains("amp")) check_keys(c.at("amp"), {"tolerance", "tight_depth", "require_tighter"}, "checks.amp");
  if (c.contains("modulus")) check_keys(c.at("modulus"), {"deltas", "tolerance"}, "checks.modulus");
  if (c.contains("holder"))
    check_keys(c.at("holder"), {"skip_layers", "max_depth", "samples_per_octave", "alpha_range"}, "checks.holder");
  if (c.contains("log_probe")) check_keys(c.at("log_probe"), {"c0", "range"}, "checks.log_probe");
  if (c.contains("sobolev")) check_keys(c.at("sobolev"), {"alpha", "p", "beta", "deltas"}, "checks.sobolev");
  if (c.contains("divergence"))
    check_keys(c.at("divergence"), {"p", "factor", "control_p", "control_ratio"}, "checks.divergence");
  if (c.contains("converse")) check_keys(c.at("converse"), {"depths"}, "checks.converse");
  for (const char* k : {"holder", "log_probe", "divergence", "converse"})
    if (c.contains(k) && !e.face_normal) throw ConfigError(std::string("checks.") + k + " needs a face");
  if (c.contains("divergence") && e.levels.size() < 3)
    throw ConfigError("checks.divergence: need at least 3 levels");
  return e;
}

std::vector<double> parse_deltas(const json& j, const std::string& w) {
  check_keys(j, {"lo", "hi", "count"}, w);
  const double lo = get_number(j, "lo", w), hi = get_number(j, "hi", w);
  const int count = get_int(j, "count", w);
  if (!(lo > 0.0 && hi > lo && count >= 2)) throw ConfigError(w + ": 0 < lo < hi and count >= 2 required");
  return convexfn::geometric_deltas(lo, hi, count);
}

std::size_t find_face(const geometry::ConvexPolytope& p, const Vec& normal) {
  if (normal.size() != p.dim()) throw ConfigError("face.normal: wrong dimension");
  const Vec nrm = normal.normalized();
  for (std::size_t k = 0; k < p.halfspaces().size(); ++k)
    if ((p.halfspaces()[k].normal - nrm).norm() < 1e-9) return k;
  throw ConfigError("face.normal: no facet with that outward normal");
}

struct Level {
  solver::MAProblem problem;
  solver::SolveOptions options;
  std::optional<solver::SolveReport> report;
  std::string error;
  double solve_residual = 0.0;
};

std::vector<double> doubles(const json& j, const std::string& w) {
  std::vector<double> v;
  if (j.is_number()) return {j.get<double>()};
  if (!j.is_array()) throw ConfigError(w + ": number or array expected");
  for (const auto& x : j) {
    if (!x.is_number()) throw ConfigError(w + ": numbers expected");
    v.push_back(x.get<double>());
  }
  return v;
}

}  // namespace

RunResult run_experiment_impl(const RunConfig& cfg) {
  if (cfg.config.empty()) throw ConfigError("run-experiment: --config is required");
  std::string base;
  const std::string text = load_config(cfg.config, &base);
  Experiment ex = parse_experiment(parse_json(text, cfg.config), base);

  // build every level first so that configuration errors surface before any solve
  std::vector<Level> levels;
  for (std::size_t k = 0; k < ex.levels.size(); ++k) {
    json body = ex.problem;
    body["mesh"] = ex.levels[k];
    Level l;
    l.problem = solver::detail::parse_problem_body(body, ex.base_dir, &l.options);
    l.options.tol *= cfg.tol_scale;
    levels.push_back(std::move(l));
  }
  const int n = levels.front().problem.dim();
  std::optional<std::size_t> face;
  if (ex.face_normal) face = find_face(levels.front().problem.grid().domain(), *ex.face_normal);

  Artifacts out(output_directory(cfg, "run-experiment-" + ex.name));
  Checks checks;
  RunResult result;

  // independent solves; results are written afterwards by this thread only
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next++) < levels.size();) {
      try {
        levels[k].report = solver::solve(levels[k].problem, levels[k].options);
      } catch (const ConvergenceError& e) {
        levels[k].error = e.what();
        levels[k].solve_residual = e.residual();
      }
    }
  };
  const int nthreads = std::min<int>(cfg.workers, static_cast<int>(levels.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::string lcsv = "level,nodes,simplices,first_layer,iterations,max_residual,min_value\n";
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const auto& l = levels[k];
    if (!l.report) {
      result.exit_code = kSolverFailure;
      result.lines.push_back("solver failure at level " + std::to_string(k) + ": " + l.error + " (residual " +
                             num(l.solve_residual) + ")");
      continue;
    }
    const auto& m = l.problem.grid();
    lcsv += std::to_string(k) + "," + std::to_string(m.size()) + "," + std::to_string(m.simplex_count()) + "," +
            num(m.min_interior_distance()) + "," + std::to_string(l.report->iterations) + "," +
            num(l.report->max_residual) + "," + num(l.report->solution.values().minCoeff()) + "\n";
  }
  out.write("levels.csv", lcsv);
  if (result.exit_code == kSolverFailure) return finish(std::move(result), checks, out, "run-experiment", ex.name);

  const Level& fine = levels.back();
  const auto& mesh = fine.problem.grid();
  const auto& u = fine.report->solution;
  const Vec& values = u.values();
  auto interp = [&](const Vec& x) { return mesh.interpolate(values, x); };
  {
    std::ostringstream s;
    solver::write_solution_csv(s, *fine.report);
    out.write("solution.csv", s.str());
  }
  const auto& c = ex.checks;
  regularity::RegularityReport rep;

  if (c.contains("amp")) {
    const auto& a = c.at("amp");
    regularity::AmpOptions o;
    o.tolerance = get_number(a, "tolerance", o.tolerance, "checks.amp");
    o.tight_depth = get_number(a, "tight_depth", o.tight_depth, "checks.amp");
    const bool need_tight = a.value("require_tighter", false);
    std::string csv = "level,node,distance,abs_value,bound,classical,margin\n";
    for (std::size_t k = 0; k < levels.size(); ++k) {
      const auto& l = levels[k];
      const double Lambda =
          std::isfinite(l.problem.Lambda) ? l.problem.Lambda : solver::sampled_max(l.problem);
      auto L = regularity::unit_ball_map(l.problem.grid().domain());
      auto r = regularity::amp_check(l.report->solution, L, Lambda, o);
      for (Index i = 0; i < l.report->solution.size(); ++i)
        csv += std::to_string(k) + "," + std::to_string(i) + "," + num(r.distance(i)) + "," +
               num(std::abs(l.report->solution.value(i))) + "," + num(r.bound(i)) + "," + num(r.classical(i)) + "," +
               num(r.margin(i)) + "\n";
      checks.add("amp", r.pass,
                 "level " + std::to_string(k) + ": min margin " + num(r.min_margin) + " (C_n " + num(r.constant) +
                     ", prefactor " + num(r.prefactor) + ")");
      if (need_tight)
        checks.add("amp_tighter", r.tighter,
                   "level " + std::to_string(k) + ": new bound below the classical one at " +
                       std::to_string(r.tight_checked) + " nodes with dist <= " + num(o.tight_depth));
      if (k + 1 == levels.size()) rep.amp = r;
    }
    out.write("amp.csv", csv);
  }

  if (c.contains("modulus")) {
    const auto& m = c.at("modulus");
    auto deltas = m.contains("deltas") ? parse_deltas(m.at("deltas"), "checks.modulus.deltas")
                                       : convexfn::geometric_deltas(1e-3, 1.0, 16);
    const double tol = get_number(m, "tolerance", 1e-6, "checks.modulus");
    auto env = solver::boundary_envelope(fine.problem);
    rep.modulus = convexfn::modulus(u, deltas);
    auto wg = convexfn::modulus(env, deltas);
    const double Lambda = std::isfinite(fine.problem.Lambda) ? fine.problem.Lambda : solver::sampled_max(fine.problem);
    auto b = regularity::holder_bound_check(rep.modulus, wg, regularity::unit_ball_map(mesh.domain()), Lambda, tol);
    std::string csv = "delta,omega_u,omega_g,bound\n";
    for (std::size_t k = 0; k < b.delta.size(); ++k)
      csv += num(b.delta[k]) + "," + num(b.lhs[k]) + "," + num(wg.omega[k]) + "," + num(b.rhs[k]) + "\n";
    out.write("modulus.csv", csv);
    rep.holder_bound = b;
    checks.add("modulus_bound", b.pass, "min margin " + num(b.min_margin) + " over " +
                                            std::to_string(b.delta.size()) + " deltas");
  }

  if (c.contains("holder") || c.contains("log_probe")) {
    const json h = c.contains("holder") ? c.at("holder") : json::object();
    regularity::HolderOptions o;
    o.skip_layers = get_int(h, "skip_layers", o.skip_layers, "checks.holder");
    o.max_depth = get_number(h, "max_depth", o.max_depth, "checks.holder");
    o.samples_per_octave = get_int(h, "samples_per_octave", o.samples_per_octave, "checks.holder");
    if (c.contains("log_probe")) o.log_c0 = get_number(c.at("log_probe"), "c0", 1.0, "checks.log_probe");
    auto fit = regularity::holder_fit(mesh, values, *face, o);
    std::string csv = "depth,rise,used\n";
    for (const auto& s : fit.samples)
      csv += num(s.depth) + "," + num(s.rise) + "," + (s.used ? "1" : "0") + "\n";
    out.write("holder.csv", csv);
    rep.holder = fit;
    if (c.contains("holder")) {
      Range r = h.contains("alpha_range") ? parse_range(h.at("alpha_range"), "checks.holder.alpha_range") : Range{};
      checks.add("holder_exponent", r.contains(fit.alpha) && fit.alpha > 0.0 && fit.alpha <= 1.0,
                 "alpha " + num(fit.alpha) + " [" + num(fit.alpha_lo) + ", " + num(fit.alpha_hi) + "] from " +
                     std::to_string(fit.used) + " depths in [" + num(fit.min_depth) + ", " + num(fit.max_depth) +
                     "]");
    }
    if (c.contains("log_probe")) {
      const auto& lp = c.at("log_probe");
      Range r = lp.contains("range") ? parse_range(lp.at("range"), "checks.log_probe.range") : Range{0.0, 1.2};
      std::vector<double> d, w;
      for (const auto& s : fit.samples)
        if (s.used) d.push_back(s.depth), w.push_back(s.rise);
      auto probe = regularity::log_probe(d, w, o.log_c0);
      rep.probe = probe;
      if (!probe.conclusive) {
        checks.note("warning: log probe inconclusive (" + num(probe.decades) + " decades)");
      } else {
        checks.add("log_probe", r.contains(probe.s),
                   "s " + num(probe.s) + " [" + num(probe.s_lo) + ", " + num(probe.s_hi) + "] over " +
                       num(probe.decades) + " decades");
      }
    }
  }

  if (c.contains("sobolev")) {
    const auto& s = c.at("sobolev");
    double alpha = 0.0;
    if (s.contains("alpha") && s.at("alpha").is_string() && s.at("alpha").get<std::string>() == "fitted") {
      if (!rep.holder) throw ConfigError("checks.sobolev: alpha \"fitted\" needs the holder check");
      alpha = std::min(1.0, rep.holder->alpha);
    } else {
      alpha = get_number(s, "alpha", "checks.sobolev");
    }
    auto deltas = s.contains("deltas") ? parse_deltas(s.at("deltas"), "checks.sobolev.deltas")
                                       : convexfn::geometric_deltas(1e-3, 1.0, 16);
    auto curve = convexfn::modulus(u, deltas);
    const double CH = regularity::holder_constant(curve, alpha);
    std::string csv = "p,beta,q,alpha,holder_constant,value,bound,within\n";
    for (double p : doubles(s.at("p"), "checks.sobolev.p"))
      for (double beta : doubles(s.contains("beta") ? s.at("beta") : json(0.0), "checks.sobolev.beta")) {
        const double q = (1.0 - alpha) * p - beta;
        if (q >= 1.0) {
          checks.note("note: sobolev p=" + num(p) + " beta=" + num(beta) + " skipped (q = " + num(q) +
                      " >= 1, see the divergence check)");
          continue;
        }
        auto r = regularity::sobolev_integral(mesh, values, p, beta, alpha, CH);
        rep.sobolev.push_back(r);
        csv += num(p) + "," + num(beta) + "," + num(r.q) + "," + num(alpha) + "," + num(CH) + "," + num(r.value) +
               "," + num(r.bound) + "," + (r.within ? "1" : "0") + "\n";
        checks.add("sobolev_bound", r.within,
                   "p=" + num(p) + " beta=" + num(beta) + ": " + num(r.value) + " <= " + num(r.bound));
      }
    out.write("sobolev.csv", csv);
  }

  if (c.contains("divergence")) {
    const auto& d = c.at("divergence");
    const double p = d.contains("p") ? get_number(d, "p", "checks.divergence")
                                     : (n > 2 ? static_cast<double>(n) / (n - 2) : 2.0);
    const double factor = get_number(d, "factor", 1.2, "checks.divergence");
    std::vector<regularity::LevelNorm> norms, control;
    const bool has_control = d.contains("control_p");
    const double cp = has_control ? get_number(d, "control_p", "checks.divergence") : 0.0;
    for (const auto& l : levels) {
      norms.push_back(regularity::level_norm(l.problem.grid(), l.report->solution.values(), p));
      if (has_control) control.push_back(regularity::level_norm(l.problem.grid(), l.report->solution.values(), cp));
    }
    auto r = regularity::divergence_check(norms, p, factor);
    std::string csv = "level,nodes,first_layer,p,value,max_gradient\n";
    for (std::size_t k = 0; k < norms.size(); ++k) {
      csv += std::to_string(k) + "," + std::to_string(norms[k].nodes) + "," + num(norms[k].first_layer) + "," +
             num(p) + "," + num(norms[k].value) + "," + num(norms[k].max_gradient) + "\n";
      if (has_control)
        csv += std::to_string(k) + "," + std::to_string(control[k].nodes) + "," + num(control[k].first_layer) +
               "," + num(cp) + "," + num(control[k].value) + "," + num(control[k].max_gradient) + "\n";
    }
    out.write("divergence.csv", csv);
    std::string ratios;
    const auto& rs = n == 2 ? r.max_gradient_ratios : r.ratios;
    for (double v : rs) ratios += (ratios.empty() ? "" : ", ") + num(v);
    if (n == 2)
      checks.add("divergence", r.max_gradient_growing, "max |grad u| level ratios " + ratios + " (need >= " +
                                                           num(factor) + ")");
    else
      checks.add("divergence", r.growing,
                 "p=" + num(p) + " level ratios " + ratios + " (need >= " + num(factor) + ")");
    if (has_control) {
      const double limit = get_number(d, "control_ratio", 1.05, "checks.divergence");
      auto cr = regularity::divergence_check(control, cp, factor);
      checks.add("divergence_control", cr.last_ratio <= limit,
                 "p=" + num(cp) + " finest ratio " + num(cr.last_ratio) + " (need <= " + num(limit) + ")");
    }
    rep.divergence = r;
  }

  if (c.contains("converse")) {
    const auto& cv = c.at("converse");
    std::vector<double> depths =
        cv.contains("depths") ? doubles(cv.at("depths"), "checks.converse.depths")
                              : std::vector<double>{1e-3, 3e-3, 1e-2, 3e-2, 0.1, 0.3, 1.0};
    try {
      auto setup = regularity::converse_setup(u, *face, interp);
      auto prof = regularity::converse_profile(setup, interp, n, depths);
      std::string csv = "x1,u0\n";
      for (std::size_t k = 0; k < prof.x1.size(); ++k) csv += num(prof.x1[k]) + "," + num(prof.u0[k]) + "\n";
      out.write("converse.csv", csv);
      rep.converse = prof;
      checks.add("converse", prof.pass,
                 "u_0 <= 0 in K_{2,2}, u_0 = 0 on F; |u_0| >= " + num(prof.constant) +
                     " a_upper(x_1) along the axis, Lipschitz constant of l_g " + num(setup.lipschitz));
    } catch (const InvalidArgument& e) {
      checks.add("converse", false, e.what());
    }
  }

  if (!rep.valid()) checks.add("report_invariants", false, "fitted alpha outside (0, 1] or non-finite margins");
  return finish(std::move(result), checks, out, "run-experiment", ex.name);
}

}  // namespace ma::app
