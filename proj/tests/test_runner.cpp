#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "mslab/config.hpp"
#include "mslab/grid.hpp"
#include "mslab/runner.hpp"

using namespace mslab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config parser: defaults, overrides, strictness") {
  ExperimentConfig def = parse_config_text(default_config_text());
  CHECK(def.chart_preset == "flat-cylinder");
  CHECK(def.h_ladder.size() == 4);

  ExperimentConfig cfg = parse_config_text(
      "[chart]\npreset = exp-warp\nn1 = 17\n[output]\nseed = 9\ngrid_scale = 0.5\n");
  CHECK(cfg.chart_preset == "exp-warp");
  CHECK(cfg.grid[0] == 17);
  CHECK(cfg.seed == 9);
  CHECK(cfg.scaled_grid()[0] == 9);

  CHECK_THROWS_AS(parse_config_text("[chart]\nbogus = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[ladders]\nh = 0.1,0.2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[chart\npreset = x\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("preset\n"), ConfigError);
}

TEST_CASE("runner rejects unknown subcommands with exit code 2") {
  ExperimentConfig cfg = parse_config_text(default_config_text());
  cfg.out_dir = (fs::temp_directory_path() / "mslab_test_unknown").string();
  RunResult r = run_subcommand("no-such-thing", cfg);
  CHECK(r.exit_code == 2);
  CHECK(r.artifacts.empty());
}

TEST_CASE("euclid-map subcommand runs and writes deterministic artifacts") {
  ExperimentConfig cfg = parse_config_text(default_config_text());
  const fs::path base = fs::temp_directory_path() / "mslab_test_euclid";
  fs::remove_all(base);
  cfg.out_dir = (base / "a").string();
  RunResult r1 = run_subcommand("euclid-map", cfg);
  CHECK(r1.exit_code == 0);
  REQUIRE(!r1.artifacts.empty());
  cfg.out_dir = (base / "b").string();
  RunResult r2 = run_subcommand("euclid-map", cfg);
  REQUIRE(r1.artifacts.size() == r2.artifacts.size());
  for (std::size_t i = 0; i < r1.artifacts.size(); ++i)
    CHECK(slurp(r1.artifacts[i]) == slurp(r2.artifacts[i]));
  fs::remove_all(base);
}

TEST_CASE("mollify-rates subcommand passes on a reduced ladder") {
  ExperimentConfig cfg = parse_config_text(
      "[chart]\npreset = flat-cylinder\nn1 = 129\nnr = 9\nntheta = 7\n"
      "[ladders]\ntau = 0.2,0.1,0.05\n");
  const fs::path base = fs::temp_directory_path() / "mslab_test_mollify";
  fs::remove_all(base);
  cfg.out_dir = base.string();
  RunResult r = run_subcommand("mollify-rates", cfg);
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(base / "mollify-rates" / "verdicts.json"));
  fs::remove_all(base);
}
