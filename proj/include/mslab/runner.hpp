#ifndef MSLAB_RUNNER_HPP
#define MSLAB_RUNNER_HPP

#include "mslab/config.hpp"
#include "mslab/report.hpp"

namespace mslab {

struct RunResult {
  int exit_code = 0;  // 0 = all verdicts pass, 1 = verdict failure, 2 = config error
  std::vector<VerdictRecord> verdicts;
  std::vector<std::string> artifacts;
  std::string log;
};

std::vector<std::string> subcommand_names();

// Runs one subcommand; writes artifacts under cfg.out_dir/<subcommand>/.
RunResult run_subcommand(const std::string& name, const ExperimentConfig& cfg);

}  // namespace mslab

#endif
