#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "starfix/io/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Invariant idempotent measures of generalized iterated function systems"};
  app.require_subcommand(1);

  starfix::io::RunOptions opt;
  std::size_t threads = 0;
  std::uint64_t seed = 0;

  auto common = [&](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("--config", opt.config, "run configuration (JSON)");
    if (needs_config) c->required();
    sub->add_option("--out", opt.out, "output directory")->capture_default_str();
    sub->add_option("--threads", threads, "worker cap (default: STARFIX_THREADS or all cores)");
    sub->add_option("--seed", seed, "override the configuration's RNG seed");
  };

  auto* solve = app.add_subcommand("solve", "iterate Psi to the invariant measure");
  common(solve, true);
  solve->add_flag("--force", opt.force, "run even if the contraction check fails");

  auto* check = app.add_subcommand("check", "validation and contraction report");
  common(check, true);

  auto* attractor = app.add_subcommand("attractor", "discrete Hutchinson attractor");
  common(attractor, true);

  auto* oracle = app.add_subcommand("oracle", "exhaustive algebraic checks on finite models");
  common(oracle, false);
  oracle->add_option("--suite", opt.suite, "laws | iso | tensor | projection | all")
      ->check(CLI::IsMember({"laws", "iso", "tensor", "projection", "all"}))
      ->capture_default_str();

  auto* render = app.add_subcommand("render", "render a measure CSV as PGM");
  common(render, true);
  render->add_option("--measure", opt.measure, "measure CSV (point_index,value)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : starfix::io::kExitValidation;
  }

  opt.command = app.get_subcommands().front()->get_name();
  auto* sub = app.get_subcommands().front();
  if (sub->count("--threads") > 0) opt.threads = threads;
  if (sub->count("--seed") > 0) opt.seed = seed;
  return starfix::io::run(opt, std::cout, std::cerr);
}
