#include "mslab.h"

#include <cstdlib>
#include <string>

#include "mslab/config.hpp"
#include "mslab/runner.hpp"

struct mslab_lab {
  mslab::ExperimentConfig config;
  std::string last_error;
  std::string last_log;
};

namespace {

mslab_status guard_args(bool ok) { return ok ? MSLAB_OK : MSLAB_ERR_ARG; }

}  // namespace

extern "C" {

const char* mslab_version(void) { return "mslab 1.0.0"; }

const char* mslab_subcommands(void) {
  static std::string joined = [] {
    std::string s;
    for (const auto& n : mslab::subcommand_names()) {
      if (!s.empty()) s += ',';
      s += n;
    }
    return s;
  }();
  return joined.c_str();
}

mslab_status mslab_lab_create(const char* config_path, mslab_lab** out) {
  if (config_path == nullptr || out == nullptr) return MSLAB_ERR_ARG;
  *out = nullptr;
  try {
    auto lab = new mslab_lab;
    lab->config = mslab::parse_config_file(config_path);
    *out = lab;
    return MSLAB_OK;
  } catch (const std::exception&) {
    return MSLAB_ERR_CONFIG;
  }
}

mslab_status mslab_lab_create_from_string(const char* config_text, mslab_lab** out) {
  if (config_text == nullptr || out == nullptr) return MSLAB_ERR_ARG;
  *out = nullptr;
  try {
    auto lab = new mslab_lab;
    lab->config = mslab::parse_config_text(config_text);
    *out = lab;
    return MSLAB_OK;
  } catch (const std::exception&) {
    return MSLAB_ERR_CONFIG;
  }
}

void mslab_lab_destroy(mslab_lab* lab) { delete lab; }

mslab_status mslab_lab_set_option(mslab_lab* lab, const char* key, const char* value) {
  if (guard_args(lab && key && value) != MSLAB_OK) return MSLAB_ERR_ARG;
  try {
    const std::string k(key), v(value);
    if (k == "out_dir") lab->config.out_dir = v;
    else if (k == "seed") lab->config.seed = std::stoull(v);
    else if (k == "grid_scale") lab->config.grid_scale = std::stod(v);
    else {
      lab->last_error = "unknown option: " + k;
      return MSLAB_ERR_ARG;
    }
    if (!(lab->config.grid_scale > 0.0)) {
      lab->last_error = "grid_scale must be positive";
      return MSLAB_ERR_ARG;
    }
    return MSLAB_OK;
  } catch (const std::exception& e) {
    lab->last_error = e.what();
    return MSLAB_ERR_ARG;
  }
}

mslab_status mslab_lab_run(mslab_lab* lab, const char* subcommand, int* exit_code) {
  if (guard_args(lab && subcommand) != MSLAB_OK) return MSLAB_ERR_ARG;
  lab->last_error.clear();
  lab->last_log.clear();
  try {
    mslab::RunResult r = mslab::run_subcommand(subcommand, lab->config);
    lab->last_log = r.log;
    if (exit_code != nullptr) *exit_code = r.exit_code;
    return MSLAB_OK;
  } catch (const std::exception& e) {
    lab->last_error = e.what();
    return MSLAB_ERR_RUNTIME;
  }
}

const char* mslab_lab_last_log(const mslab_lab* lab) {
  return lab == nullptr ? "" : lab->last_log.c_str();
}

const char* mslab_lab_last_error(const mslab_lab* lab) {
  return lab == nullptr ? "" : lab->last_error.c_str();
}

}  // extern "C"
