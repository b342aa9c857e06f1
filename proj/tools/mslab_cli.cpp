// Command-line runner over the shared C API.

#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "mslab.h"

int main(int argc, char** argv) {
  CLI::App app{"mslab: verification ladders and recovery for a partial-data "
               "magnetic Schrodinger laboratory"};
  std::string subcommand, config_path, out_dir, seed, grid_scale;
  app.add_option("subcommand", subcommand,
                 std::string("one of: ") + mslab_subcommands())
      ->required();
  app.add_option("--config", config_path, "configuration file (key = value sections)")
      ->required();
  app.add_option("--out", out_dir, "output directory override");
  app.add_option("--seed", seed, "seed override");
  app.add_option("--grid-scale", grid_scale, "grid scaling factor override");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  mslab_lab* lab = nullptr;
  if (mslab_lab_create(config_path.c_str(), &lab) != MSLAB_OK) {
    std::fprintf(stderr, "error: cannot parse config %s\n", config_path.c_str());
    return 2;
  }
  if (!out_dir.empty()) mslab_lab_set_option(lab, "out_dir", out_dir.c_str());
  if (!seed.empty() && mslab_lab_set_option(lab, "seed", seed.c_str()) != MSLAB_OK) {
    std::fprintf(stderr, "error: bad --seed value\n");
    mslab_lab_destroy(lab);
    return 2;
  }
  if (!grid_scale.empty() &&
      mslab_lab_set_option(lab, "grid_scale", grid_scale.c_str()) != MSLAB_OK) {
    std::fprintf(stderr, "error: bad --grid-scale value\n");
    mslab_lab_destroy(lab);
    return 2;
  }

  int exit_code = 2;
  const mslab_status st = mslab_lab_run(lab, subcommand.c_str(), &exit_code);
  if (st != MSLAB_OK) {
    std::fprintf(stderr, "error: %s\n", mslab_lab_last_error(lab));
    mslab_lab_destroy(lab);
    return st == MSLAB_ERR_RUNTIME ? 1 : 2;
  }
  std::fputs(mslab_lab_last_log(lab), stdout);
  mslab_lab_destroy(lab);
  return exit_code;
}
