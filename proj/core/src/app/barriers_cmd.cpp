#include "common.hpp"
#include "mongeampere/barriers/barrier.hpp"

#include "../solver/json_spec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <set>

namespace ma::app {

using namespace detail;
using solver::detail::check_keys;
using solver::detail::get_int;
using solver::detail::get_number;

namespace {

const std::vector<std::string> kBarrierChecks{"fd_hessian", "convexity", "lemma32_lower", "lemma35_upper",
                                              "amp_constant"};

struct BarrierConfig {
  std::string name = "default";
  std::vector<int> dims{2, 3, 4, 5};
  std::vector<double> eps{0.1, 0.25, 0.5};
  int fd_points = 100;
  double fd_step = 1e-2;
  double fd_tolerance = 1e-6;
  barriers::CertGrid grid;
  int table_points = 21;
  std::set<std::string> checks{kBarrierChecks.begin(), kBarrierChecks.end()};
  std::map<int, double> lemma35_bound;
};

BarrierConfig parse_barrier_config(const json& j) {
  require_schema(j, "mongeampere.barriers/1");
  check_keys(j, {"schema", "name", "dims", "eps", "fd", "grid", "checks", "bounds", "table_points"}, "config");
  BarrierConfig c;
  if (j.contains("name")) c.name = j.at("name").get<std::string>();
  if (j.contains("dims")) {
    c.dims.clear();
    for (const auto& d : j.at("dims")) {
      if (!d.is_number_integer()) throw ConfigError("dims: integers expected");
      int n = d.get<int>();
      if (n < 2 || n > 8) throw ConfigError("dims: " + std::to_string(n) + " outside [2, 8]");
      c.dims.push_back(n);
    }
  }
  if (j.contains("eps")) {
    c.eps.clear();
    for (const auto& e : j.at("eps")) {
      if (!e.is_number()) throw ConfigError("eps: numbers expected");
      double v = e.get<double>();
      if (!(v > 0.0 && v <= 0.5)) throw ConfigError("eps = " + num(v) + " outside (0, 1/2]");
      c.eps.push_back(v);
    }
  }
  if (j.contains("fd")) {
    const auto& f = j.at("fd");
    check_keys(f, {"points", "rel_step", "tolerance"}, "fd");
    c.fd_points = get_int(f, "points", c.fd_points, "fd");
    c.fd_step = get_number(f, "rel_step", c.fd_step, "fd");
    c.fd_tolerance = get_number(f, "tolerance", c.fd_tolerance, "fd");
    if (c.fd_points < 1 || !(c.fd_step > 0.0 && c.fd_step < 0.5) || !(c.fd_tolerance > 0.0))
      throw ConfigError("fd: points >= 1, rel_step in (0, 1/2) and tolerance > 0 required");
  }
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    check_keys(g, {"x1_points", "radius_points", "x1_min"}, "grid");
    c.grid.x1_points = get_int(g, "x1_points", c.grid.x1_points, "grid");
    c.grid.radius_points = get_int(g, "radius_points", c.grid.radius_points, "grid");
    c.grid.x1_min = get_number(g, "x1_min", c.grid.x1_min, "grid");
    if (c.grid.x1_points < 2 || c.grid.radius_points < 2 || !(c.grid.x1_min > 0.0 && c.grid.x1_min < 1.0))
      throw ConfigError("grid: at least 2 points per axis and x1_min in (0, 1) required");
  }
  c.table_points = get_int(j, "table_points", c.table_points, "config");
  if (c.table_points < 2) throw ConfigError("table_points must be at least 2");
  if (j.contains("checks")) {
    c.checks.clear();
    for (const auto& k : j.at("checks")) {
      const std::string s = k.get<std::string>();
      if (std::find(kBarrierChecks.begin(), kBarrierChecks.end(), s) == kBarrierChecks.end())
        throw ConfigError("checks: unknown check '" + s + "'");
      c.checks.insert(s);
    }
  }
  if (j.contains("bounds")) {
    const auto& b = j.at("bounds");
    check_keys(b, {"lemma35_upper"}, "bounds");
    if (b.contains("lemma35_upper"))
      for (const auto& [key, val] : b.at("lemma35_upper").items()) {
        int n = 0;
        try {
          n = std::stoi(key);
        } catch (const std::exception&) {
          throw ConfigError("bounds.lemma35_upper: keys are dimensions");
        }
        if (!val.is_number()) throw ConfigError("bounds.lemma35_upper: numbers expected");
        c.lemma35_bound[n] = val.get<double>();
      }
  }
  return c;
}

std::string label(const barriers::BarrierSpec& s) {
  std::string l = std::string(s.variant() == barriers::Variant::WEps ? "weps" : "wbar") + "_n" +
                  std::to_string(s.dim());
  if (s.variant() == barriers::Variant::WEps && s.dim() == 2) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "_eps%g", s.eps());
    l += buf;
  }
  return l;
}

Vec axis_point(int n, double x1, double r) {
  Vec x = Vec::Zero(n);
  x(0) = x1;
  if (n > 1) x(1) = r;
  return x;
}

std::string det_table(const barriers::BarrierSpec& s, double rho, int points, double x1_min) {
  std::string csv = "x1,radius,det\n";
  for (int a = 0; a < points; ++a) {
    const double x1 = x1_min + (1.0 - x1_min) * a / (points - 1);
    for (int b = 0; b < points; ++b) {
      const double r = rho * b / (points - 1);
      csv += num(x1) + "," + num(r) + "," + num(s.det_hessian(axis_point(s.dim(), x1, r))) + "\n";
    }
  }
  return csv;
}

}  // namespace

RunResult verify_barriers_impl(const RunConfig& cfg) {
  BarrierConfig c;
  if (!cfg.config.empty()) c = parse_barrier_config(parse_json(load_config(cfg.config, nullptr), cfg.config));
  Artifacts out(output_directory(cfg, "verify-barriers-" + c.name));
  Checks checks;
  const double sqrt2 = std::numbers::sqrt2;

  auto lower_specs = [&](int n) {
    std::vector<barriers::BarrierSpec> s;
    if (n == 2)
      for (double e : c.eps) s.push_back(barriers::BarrierSpec::w_eps(2, e));
    else
      s.push_back(barriers::BarrierSpec::w_eps(n, 0.5));
    return s;
  };

  if (c.checks.count("fd_hessian")) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::string csv = "n,variant,point,x1,radius,det,rel_error\n";
    for (int n : c.dims) {
      auto specs = lower_specs(n);
      specs.push_back(barriers::BarrierSpec::w_bar(n));
      for (const auto& s : specs) {
        double worst = 0.0;
        for (int k = 0; k < c.fd_points; ++k) {
          Vec x(n);
          x(0) = 0.01 + 0.98 * U(rng);
          Vec y(n - 1);
          do {
            for (int i = 0; i < n - 1; ++i) y(i) = (2.0 * U(rng) - 1.0) * sqrt2;
          } while (y.norm() >= 0.99 * sqrt2);
          x.tail(n - 1) = y;
          const double err = barriers::fd_det_relative_error(s, x, c.fd_step);
          worst = std::max(worst, err);
          csv += std::to_string(n) + "," + label(s) + "," + std::to_string(k) + "," + num(x(0)) + "," +
                 num(y.norm()) + "," + num(s.det_hessian(x)) + "," + num(err) + "\n";
        }
        checks.add("fd_hessian", worst <= c.fd_tolerance,
                   label(s) + " worst relative error " + num(worst) + " (tolerance " + num(c.fd_tolerance) + ")");
      }
    }
    out.write("fd_hessian.csv", csv);
  }

  if (c.checks.count("convexity")) {
    for (int n : c.dims)
      for (const auto& s : lower_specs(n)) {
        const double rho = barriers::lemma_constants(n, n == 2 ? s.eps() : 0.5).rho;
        auto cert = barriers::convexity_cert(s, rho, c.grid);
        std::string csv = "x1,radius";
        for (int k = 1; k <= n; ++k) csv += ",M" + std::to_string(k);
        csv += "\n";
        const std::size_t stride = std::max<std::size_t>(1, cert.table.size() / 2000);
        for (std::size_t k = 0; k < cert.table.size(); k += stride) {
          const auto& m = cert.table[k];
          csv += num(m.x1) + "," + num(m.radius);
          for (double v : m.minors) csv += "," + num(v);
          csv += "\n";
        }
        out.write("minors_" + label(s) + ".csv", csv);
        checks.add("convexity", cert.convex,
                   label(s) + " on K_{1," + num(rho) + "}: min det " + num(cert.min_det) +
                       ", closed-form minor error " + num(cert.closed_form_error));
      }
  }

  if (c.checks.count("lemma32_lower")) {
    for (int n : c.dims)
      for (const auto& s : lower_specs(n)) {
        auto k = barriers::lemma_constants(n, n == 2 ? s.eps() : 0.5);
        auto range = barriers::det_range(s, k.rho, c.grid);
        out.write("det_grid_" + label(s) + ".csv", det_table(s, k.rho, c.table_points, c.grid.x1_min));
        checks.add("lemma32_lower", range.min >= k.lambda - 1e-9,
                   label(s) + " grid min " + num(range.min) + " >= lambda " + num(k.lambda) + " on K_{1," +
                       num(k.rho) + "}");
      }
  }

  if (c.checks.count("lemma35_upper")) {
    for (int n : c.dims) {
      auto s = barriers::BarrierSpec::w_bar(n);
      auto it = c.lemma35_bound.find(n);
      const double bound = it != c.lemma35_bound.end() ? it->second : barriers::upper_det_bound(n);
      auto range = barriers::det_range(s, sqrt2, c.grid);
      out.write("det_grid_" + label(s) + ".csv", det_table(s, sqrt2, c.table_points, c.grid.x1_min));
      checks.add("lemma35_upper", range.max <= bound + 1e-9,
                 label(s) + " grid max " + num(range.max) + " <= bound " + num(bound));
    }
  }

  if (c.checks.count("amp_constant")) {
    barriers::AmpProfileBound amp(2);
    double worst = -std::numeric_limits<double>::infinity();
    std::string csv = "x1,sharp,bound\n";
    for (int k = 1; k <= 200; ++k) {
      const double t = std::pow(10.0, -8.0 * (200 - k) / 199.0);
      const double sharp = barriers::sharp_bound_n2(t);
      worst = std::max(worst, sharp - amp.bound(t));
      csv += num(t) + "," + num(sharp) + "," + num(amp.bound(t)) + "\n";
    }
    out.write("amp_profile_n2.csv", csv);
    const double expected = std::sqrt(8.0) * std::numbers::e;
    checks.add("amp_constant", std::abs(amp.constant() - expected) <= 1e-12 * expected && worst <= 1e-12,
               "C_2 = " + num(amp.constant()) + ", largest excess of the eps-optimized bound " + num(worst));
  }

  return finish(RunResult{}, checks, out, "verify-barriers", c.name);
}

}  // namespace ma::app
