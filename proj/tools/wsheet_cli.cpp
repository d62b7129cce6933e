#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "wsheet/config.hpp"
#include "wsheet/errors.hpp"
#include "wsheet/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Lightcone geometry of world sheets in Lorentz-Minkowski space"};
  std::string command, config_path, fixture, out_dir;
  std::vector<std::string> tols, grids;
  app.add_option("command", command, "validate | curvature | front | singular | verify")
      ->required()
      ->check(CLI::IsMember({"validate", "curvature", "front", "singular", "verify"}));
  auto* cfg_opt = app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--fixture", fixture, "built-in world sheet: cyl, flt, sph, cylline, sph5")->excludes(cfg_opt);
  app.add_option("--out", out_dir, "output directory (default: config value or ./out)");
  app.add_option("--tol", tols, "tolerance override KEY=VAL (repeatable)");
  app.add_option("--grid", grids, "grid count override AXIS=N (repeatable)");
  CLI11_PARSE(app, argc, argv);

  try {
    if (config_path.empty() && fixture.empty()) throw wsheet::ConfigError("one of --config or --fixture is required");
    wsheet::RunConfig cfg = config_path.empty() ? wsheet::fixture_config(fixture) : wsheet::load_config(config_path);
    cfg.command = wsheet::parse_command(command);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    for (const auto& t : tols) wsheet::apply_tolerance_override(cfg, t);
    for (const auto& g : grids) wsheet::apply_grid_override(cfg, g);

    const wsheet::RunResult res = wsheet::run(cfg);
    std::cout << res.summary << "\n";
    for (const auto& [name, _] : res.files) std::cout << "  wrote " << cfg.out_dir << "/" << name << "\n";
    return res.exit_code;
  } catch (const wsheet::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
