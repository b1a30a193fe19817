#include "mongeampere/app/app.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App cli{"matool: barrier verification, Monge-Ampere solves and regularity experiments"};
  cli.require_subcommand(1);
  ma::app::RunConfig cfg;
  bool list = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out_dir, "output directory (default $MA_OUT_ROOT/<run> or ma_out/<run>)");
    sub->add_option("--workers", cfg.workers, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--tol-scale", cfg.tol_scale, "multiplies solver tolerances")->check(CLI::PositiveNumber);
  };

  auto* vb = cli.add_subcommand("verify-barriers", "check barrier Hessians, convexity and determinant bounds");
  vb->add_option("--config", cfg.config, "JSON config or preset:<name> (default: built-in)");
  add_common(vb);

  auto* sv = cli.add_subcommand("solve", "solve one problem file");
  sv->add_option("--config", cfg.config, "problem JSON or preset:<name>")->required();
  add_common(sv);

  auto* ex = cli.add_subcommand("run-experiment", "solve mesh levels and run regularity checks");
  ex->add_option("--config", cfg.config, "experiment JSON or preset:<name>");
  ex->add_flag("--list-presets", list, "print preset names and exit");
  add_common(ex);

  auto* rp = cli.add_subcommand("report", "aggregate summary.json files into report.csv");
  rp->add_option("--config,dir", cfg.config, "directory holding earlier runs")->required();
  rp->add_option("--out", cfg.out_dir, "where report.csv goes (default: the scanned directory)");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? 0 : ma::app::kConfigError;
  }

  if (list) {
    for (const auto& n : ma::app::preset_names()) std::cout << n << "\n";
    return 0;
  }
  cfg.command = cli.get_subcommands().front()->get_name();
  const auto r = ma::app::run(cfg);
  for (const auto& l : r.lines) (r.exit_code == ma::app::kConfigError ? std::cerr : std::cout) << l << "\n";
  if (!r.out_dir.empty()) std::cout << "artifacts: " << r.out_dir << "\n";
  return r.exit_code;
}
