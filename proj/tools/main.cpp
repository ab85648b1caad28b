#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "app.hpp"

int main(int argc, char** argv) {
  using namespace distdeg::app;
  CLI::App cli{"Distance degrees and nearest points on real algebraic varieties"};
  cli.set_version_flag("--version", kVersion);

  std::string command;
  std::string path;
  Flags flags;
  std::string x_text;
  double tol_residual = 0.0, tol_real = 0.0, tol_dedup = 0.0, paths_tol = 0.0;
  int max_steps = 0;
  bool no_timing = false;

  cli.add_option("command", command, "validate | solve | degree | approx | probe")
      ->required()
      ->check(CLI::IsMember({"validate", "solve", "degree", "approx", "probe"}));
  cli.add_option("problem", path, "problem file (JSON)")->required();
  cli.add_option("--seed", flags.seed, "master seed");
  cli.add_option("--trials", flags.trials, "degree trials")->check(CLI::PositiveNumber);
  cli.add_option("--loops", flags.loops, "initial monodromy loops")->check(CLI::PositiveNumber);
  cli.add_option("--samples", flags.samples, "probe samples")->check(CLI::PositiveNumber);
  cli.add_option("--scale", flags.scale, "probe sample scale")->check(CLI::PositiveNumber);
  auto* o_res = cli.add_option("--tol-residual", tol_residual, "Newton residual tolerance");
  auto* o_real = cli.add_option("--tol-real", tol_real, "imaginary-part tolerance for reality");
  auto* o_dedup = cli.add_option("--tol-dedup", tol_dedup, "relative deduplication tolerance");
  auto* o_paths = cli.add_option("--paths-tol", paths_tol, "tolerated path-failure fraction");
  auto* o_steps = cli.add_option("--max-steps", max_steps, "max continuation steps per path");
  auto* o_x = cli.add_option("--x", x_text, "query point, comma separated");
  cli.add_flag("--no-timing", no_timing, "omit timing from the report");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return cli.exit(e);
  } catch (const CLI::ParseError& e) {
    cli.exit(e);
    return kInvalid;
  }

  if (*o_res) flags.tol_residual = tol_residual;
  if (*o_real) flags.tol_real = tol_real;
  if (*o_dedup) flags.tol_dedup = tol_dedup;
  if (*o_paths) flags.paths_tol = paths_tol;
  if (*o_steps) flags.max_steps = max_steps;
  if (*o_x) {
    std::vector<double> x;
    std::stringstream ss(x_text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        x.push_back(std::stod(item));
      } catch (const std::exception&) {
        std::cerr << "--x: not a number: " << item << "\n";
        return kInvalid;
      }
    }
    flags.x = x;
  }
  flags.timing = !no_timing;
  return run(command, path, flags, std::cout);
}
