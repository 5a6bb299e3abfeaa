#include <iostream>

#include <CLI11.hpp>

#include "ellmap/cli.hpp"

int main(int argc, char** argv) {
  using ellmap::cli::Command;
  CLI::App app{"Inscribed ellipsoids minimizing the M-functional"};
  app.require_subcommand(1);

  Command cmd;
  std::string config, out, candidate;
  auto common = [&](CLI::App* sub, bool many_ellipsoids) {
    sub->add_option("--body", cmd.body_path, "body JSON")->required();
    auto* e = sub->add_option("--ellipsoid", cmd.ellipsoid_paths, "ellipsoid JSON");
    if (!many_ellipsoids) e->required()->expected(1);
    sub->add_option("--config", config, "solver config JSON");
    sub->add_option("--out", out, "output path (default: stdout)");
    return sub;
  };
  common(app.add_subcommand("compute-u", "minimizer of M_E over inscribed ellipsoids"), false);
  common(app.add_subcommand("j-value", "J_K(E)"), false);
  common(app.add_subcommand("check-john", "test u_K(E) == E"), false)
      ->add_flag("--expect-fixed", cmd.expect_fixed, "exit 3 unless E is a fixed point");
  common(app.add_subcommand("iterate", "iterate E <- u_K(E)"), false)
      ->add_option("--steps", cmd.steps, "number of steps")->required()->check(CLI::PositiveNumber);
  common(app.add_subcommand("dual", "maximize M_E over circumscribed ellipsoids"), false);
  common(app.add_subcommand("certify", "verify a candidate minimizer"), false)
      ->add_option("--candidate", candidate, "candidate ellipsoid JSON")->required();
  common(app.add_subcommand("oracle", "planar brute-force minimizer"), false);
  common(app.add_subcommand("render", "SVG of a planar body with ellipsoids"), true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : ellmap::cli::kInvalidInput;
  }
  cmd.subcommand = app.get_subcommands().front()->get_name();
  if (!config.empty()) cmd.config_path = config;
  if (!out.empty()) cmd.out_path = out;
  if (!candidate.empty()) cmd.candidate_path = candidate;
  return ellmap::cli::run(cmd, std::cout, std::cerr);
}
