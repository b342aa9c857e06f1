#ifndef MSLAB_CONFIG_HPP
#define MSLAB_CONFIG_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace mslab {

// Flat key = value configuration with [section] headers.
struct ExperimentConfig {
  // [chart]
  std::string chart_preset = "flat-cylinder";
  std::array<int, 3> grid{25, 49, 13};

  // [coefficients]
  std::string A_preset = "smooth";
  std::string q_preset = "bump";
  std::string X_preset = "swirl";
  std::string scenario = "gauge";
  std::string gauge_phi = "bump";
  std::string dq_preset = "bump";

  // [ladders]
  std::vector<double> h_ladder{0.4, 0.2, 0.1, 0.05};
  std::vector<double> tau_ladder{0.2, 0.1, 0.05, 0.025};
  std::vector<double> carleman_h{0.05, 0.025};
  int cgo_points_per_h = 4;  // grid spacing <= h / this at each rung

  // [cgo]
  double kappa = 1.0;  // tau = kappa sqrt(h)
  double lambda = 0.0;
  int sign = 1;

  // [carleman]
  double eps = 0.1;
  int samples = 100;

  // [probes]
  int lambda_count = 24;
  double lambda_max = 8.0;
  int b_count = 6;
  std::vector<double> functional_lambdas{-3, -2, -1, 0, 1, 2, 3, 4};
  int functional_b_count = 3;

  // [recover]
  double reg = 1e-6;
  double noise_level = 0.01;
  std::vector<double> reg_sweep{1e-1, 3e-2, 1e-2, 3e-3, 1e-3, 3e-4, 1e-4, 3e-5, 1e-5};
  double resolvable_cut = 1e-3;

  // [tolerances]
  double gauge_rel_tol = 1e-3;
  double ratio_floor = 0.01;
  double bound_factor = 2.0;
  double coord_change_tol = 1e-6;
  double advect_rel_tol = 1e-3;
  double recover_rel_tol = 0.10;

  // [output]
  std::string out_dir = "out";
  std::uint64_t seed = 42;
  double grid_scale = 1.0;

  std::array<int, 3> scaled_grid() const;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);
std::string default_config_text();

}  // namespace mslab

#endif
