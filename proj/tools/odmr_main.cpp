#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "odmr/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"ODMR line, map, fit, dipolar and acoustic toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // accept the global flags after the subcommand too

  std::string config_path, out_dir = ".", preset;
  std::uint64_t seed = 0;
  app.add_option("--config", config_path, "path to a key=value config file");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "random seed for reproducible runs");
  app.add_option("--preset", preset, "built-in preset (fig2..fig7)");

  auto* sub_lines = app.add_subcommand("lines", "line-family CSV + manifest");
  auto* sub_map = app.add_subcommand("map", "2D intensity map (CSV + PGM)");
  auto* sub_fit = app.add_subcommand("fit", "parameter fit from peaks or a map");
  auto* sub_dipolar = app.add_subcommand("dipolar", "dipolar-coupling report");
  auto* sub_acoustic = app.add_subcommand("acoustic", "acoustic comb report");

  CLI11_PARSE(app, argc, argv);

  try {
    odmr::RunContext ctx;
    if (!preset.empty()) {
      ctx.config = odmr::RunConfig::parse_string(odmr::preset_config(preset));
    } else if (!config_path.empty()) {
      ctx.config = odmr::RunConfig::parse_file(config_path);
    } else {
      ctx.config = odmr::RunConfig::parse_string("");
    }
    ctx.out_dir = out_dir;
    ctx.seed = seed;

    if (sub_lines->parsed()) return odmr::cmd_lines(ctx);
    if (sub_map->parsed()) return odmr::cmd_map(ctx);
    if (sub_fit->parsed()) return odmr::cmd_fit(ctx);
    if (sub_dipolar->parsed()) return odmr::cmd_dipolar(ctx);
    if (sub_acoustic->parsed()) return odmr::cmd_acoustic(ctx);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
